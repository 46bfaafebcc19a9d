"""Short loops on candidate spines and stripped skeleta.

A loop lives on the polyhedron, meets the singular set transversally
away from vertices, and its length is the number of edge crossings.  At
a crossing the loop leaves one of the three pages attached along the
edge and enters another; between crossings it runs as a chord inside a
single 2-component.  Chords in a disc carry no homotopy freedom, so a
loop is determined by its cyclic slot sequence, up to rotation and
reversal, plus the free choice of crossing-point order along each edge.

Sidedness bookkeeping uses the three complementary sectors around each
edge: each page borders two of them, adjacent pages share exactly one,
and a push-off's sector is preserved across a crossing when shared,
otherwise flipped to the far sector of the exit page.  A loop is
two-sided when the transported sector returns to itself.

Fake loops, the links of vertices and of edge points, bound discs for
trivial reasons and are excluded from minimality arguments; they are
recognized by matching against an explicitly built catalog.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .complex import vertex_map

__all__ = [
    "CornerRecord",
    "Loop",
    "LoopSpace",
    "PageSlot",
    "build_loop_space",
    "find_loops",
]


@dataclass(frozen=True)
class PageSlot:
    """One traversal of a crossable edge by a face boundary word."""

    face: int
    pos: int
    edge: object
    direction: int  # +1 along the edge's reference orientation
    plus: object  # sector token on the face's plus side here
    minus: object

    @property
    def key(self):
        return (self.face, self.pos)


@dataclass(frozen=True)
class CornerRecord:
    """A face corner at a true vertex, between two word positions.

    germ_a and germ_b identify the edge ends flanking the corner; pos_a
    and pos_b are the word positions of the two flanking traversals
    (None when that side is a boundary arc a loop cannot use).
    """

    vertex: object
    germ_a: object
    germ_b: object
    face: int
    pos_a: object
    pos_b: object


class LoopSpace:
    """The loop-hunting view of a polyhedron.

    ``words`` holds one boundary word per face; entries are PageSlot for
    traversals of crossable (interior) edges and None for boundary arcs.
    ``corners`` lists the face corners sitting at true vertices, used to
    build the vertex-link part of the fake catalog.
    """

    def __init__(self, words, corners):
        self.words = tuple(tuple(w) for w in words)
        self.corners = tuple(corners)
        slots_by_edge = {}
        self.slot_at = {}
        for f, word in enumerate(self.words):
            for k, s in enumerate(word):
                if s is None:
                    continue
                if (s.face, s.pos) != (f, k):
                    raise ValueError("slot does not match its word position")
                slots_by_edge.setdefault(s.edge, []).append(s)
                self.slot_at[(f, k)] = s
        for e, slots in slots_by_edge.items():
            if len(slots) != 3:
                raise ValueError(f"edge {e!r} has {len(slots)} pages, want 3")
        self.slots_by_edge = slots_by_edge

    def slots(self):
        return self.slot_at.values()


@dataclass(frozen=True)
class Loop:
    """A short loop: cyclic slot sequence (in1, out1, in2, out2, ...).

    Crossing i passes between slots (in_i, out_i) of one edge; the arc
    after it runs from out_i to in_{i+1} inside one face.  ``slots``
    stores (face, pos) keys.
    """

    slots: tuple
    two_sided: bool
    fake: bool
    bounds_external_disc: bool

    @property
    def length(self):
        return len(self.slots) // 2

    def key(self):
        return _loop_key(self.slots)


def _loop_key(slots):
    best = None
    for seq in (slots, tuple(reversed(slots))):
        for shift in range(0, len(seq), 2):
            cand = seq[shift:] + seq[:shift]
            if best is None or cand < best:
                best = cand
    return best


# ---------------------------------------------------------------------------
# Candidate enumeration
# ---------------------------------------------------------------------------

def _raw_sequences(space, max_len):
    """Every closed slot sequence with up to max_len crossings.

    No attempt at uniqueness: rotations and reversals are all generated
    and deduplicated by the caller via _loop_key.
    """
    by_edge = space.slots_by_edge
    words = space.words

    def face_slots(face):
        return [s for s in words[face] if s is not None]

    out = []

    def extend(seq, length):
        k = len(seq) // 2
        if k == length:
            # closing arc from the last out-slot to the first in-slot
            if seq[-1].face == seq[0].face:
                out.append(tuple(seq))
            return
        # arc inside the face of the previous out-slot, then a crossing
        for nxt in face_slots(seq[-1].face):
            for o in by_edge[nxt.edge]:
                if o is nxt:
                    continue
                extend(seq + [nxt, o], length)

    for length in range(1, max_len + 1):
        for first_in in space.slot_at.values():
            for first_out in by_edge[first_in.edge]:
                if first_out is first_in:
                    continue
                extend([first_in, first_out], length)
    return out


# ---------------------------------------------------------------------------
# Realizability: disjoint chords under some crossing order along edges
# ---------------------------------------------------------------------------

def _embeddable(space, seq):
    length = len(seq) // 2
    crossings = [(seq[2 * k], seq[2 * k + 1]) for k in range(length)]
    arcs = []  # (face, (slot, instance), (slot, instance))
    for k in range(length):
        a = (seq[2 * k + 1], k)
        b = (seq[(2 * k + 2) % len(seq)], (k + 1) % length)
        arcs.append((a[0].face, a, b))
    by_edge = {}
    for k, (i_s, _o) in enumerate(crossings):
        by_edge.setdefault(i_s.edge, []).append(k)

    def coords(order_of):
        # cyclic coordinate of each arc endpoint on its face boundary
        pos = {}
        for face, a, b in arcs:
            for slot, inst in (a, b):
                rank = order_of[slot.edge].index(inst)
                if slot.direction < 0:
                    rank = len(order_of[slot.edge]) - 1 - rank
                pos[(slot.key, inst)] = (slot.pos, rank)
        return pos

    def chords_cross(c1, c2):
        a1, b1 = sorted(c1)
        inside = sum(1 for x in c2 if a1 < x < b1)
        return inside == 1

    edges = list(by_edge)
    for perm_choice in itertools.product(
        *(itertools.permutations(by_edge[e]) for e in edges)
    ):
        order_of = dict(zip(edges, (list(p) for p in perm_choice)))
        pos = coords(order_of)
        ok = True
        for (f1, a1, b1), (f2, a2, b2) in itertools.combinations(arcs, 2):
            if f1 != f2:
                continue
            c1 = (pos[(a1[0].key, a1[1])], pos[(b1[0].key, b1[1])])
            c2 = (pos[(a2[0].key, a2[1])], pos[(b2[0].key, b2[1])])
            if chords_cross(c1, c2):
                ok = False
                break
        if ok:
            return True
    return False


# ---------------------------------------------------------------------------
# Sidedness
# ---------------------------------------------------------------------------

def _shared_sector(slot_in, slot_out):
    shared = {slot_in.plus, slot_in.minus} & {slot_out.plus, slot_out.minus}
    if len(shared) != 1:
        raise AssertionError("pages at one edge must share exactly one sector")
    (sector,) = shared
    return sector


def _cross_sector(slot_in, slot_out, sector):
    shared = _shared_sector(slot_in, slot_out)
    if sector == shared:
        return shared
    (far,) = {slot_out.plus, slot_out.minus} - {shared}
    return far


def _is_two_sided(seq):
    length = len(seq) // 2
    sector = seq[1].plus  # push-off side at the first out-slot
    for k in range(length):
        out_s = seq[2 * k + 1]
        in_next = seq[(2 * k + 2) % len(seq)]
        # arc transport: same global side of the face
        if sector == out_s.plus:
            sector = in_next.plus
        elif sector == out_s.minus:
            sector = in_next.minus
        else:
            raise AssertionError("sector lost along an arc")
        # crossing transport
        sector = _cross_sector(in_next, seq[(2 * k + 3) % len(seq)], sector)
    return sector == seq[1].plus


def _has_clean_side(seq):
    """Whether assigning the shared sector at every crossing is continuous.

    A push-off stays inside the complement ball at a crossing only on
    the side of the sector adjacent to both pages; pushed to the far
    side it has to cut through the third page.  So a loop bounds an
    external disc exactly when the all-shared side assignment closes up,
    and such a loop is in particular two-sided.
    """
    length = len(seq) // 2
    for k in range(length):
        out_s = seq[2 * k + 1]
        in_next = seq[(2 * k + 2) % len(seq)]
        here = _shared_sector(seq[2 * k], out_s)
        there = _shared_sector(in_next, seq[(2 * k + 3) % len(seq)])
        if (here == out_s.plus) != (there == in_next.plus):
            return False
    return True


# ---------------------------------------------------------------------------
# Fake catalog
# ---------------------------------------------------------------------------

def _fake_keys(space):
    keys = set()
    # links of edge points: one circle per page pair of each edge
    for slots in space.slots_by_edge.values():
        for a, b in itertools.combinations(slots, 2):
            keys.add(_loop_key((a.key, b.key, b.key, a.key)))
    # links of true vertices: 3-cycles of the germ graph at each vertex.
    # Corners are undirected, so each record is offered in both
    # orientations; rid keeps the underlying records distinct.
    by_vertex = {}
    for rid, c in enumerate(space.corners):
        if c.pos_a is None or c.pos_b is None:
            continue
        entry = by_vertex.setdefault(c.vertex, [])
        entry.append((rid, c.germ_a, c.germ_b, c.face, c.pos_a, c.pos_b))
        entry.append((rid, c.germ_b, c.germ_a, c.face, c.pos_b, c.pos_a))
    for oriented in by_vertex.values():
        for c1, c2, c3 in itertools.permutations(oriented, 3):
            if len({c1[0], c2[0], c3[0]}) != 3:
                continue
            # chain c1: g1->g2, c2: g2->g3, c3: g3->g1
            if c1[2] != c2[1] or c2[2] != c3[1] or c3[2] != c1[1]:
                continue
            if len({c1[1], c2[1], c3[1]}) != 3:
                continue
            i1 = space.slot_at[(c3[3], c3[5])]
            o1 = space.slot_at[(c1[3], c1[4])]
            i2 = space.slot_at[(c1[3], c1[5])]
            o2 = space.slot_at[(c2[3], c2[4])]
            i3 = space.slot_at[(c2[3], c2[5])]
            o3 = space.slot_at[(c3[3], c3[4])]
            if i1 is o1 or i2 is o2 or i3 is o3:
                continue
            keys.add(
                _loop_key((i1.key, o1.key, i2.key, o2.key, i3.key, o3.key))
            )
    return keys


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------

def find_loops_in_space(space, max_len):
    """All realizable loops of length <= max_len, tagged and deduplicated."""
    if not 1 <= max_len <= 3:
        raise ValueError("max_len must be between 1 and 3")
    fakes = _fake_keys(space)
    found = {}
    for seq in _raw_sequences(space, max_len):
        key = _loop_key(tuple(s.key for s in seq))
        if key in found:
            continue
        if not _embeddable(space, seq):
            continue
        fake = key in fakes
        found[key] = Loop(
            slots=key,
            two_sided=_is_two_sided(seq),
            fake=fake,
            bounds_external_disc=_has_clean_side(seq) and not fake,
        )
    return sorted(found.values(), key=lambda l: (l.length, l.slots))


def build_loop_space(q):
    """LoopSpace of a closed candidate spine: every edge is crossable."""
    rings = q.edge_rings()
    raw_words = q.face_words()
    words = []
    corners = []
    for f, word in enumerate(raw_words):
        ring = rings[f]
        slots = []
        for k, letter in enumerate(word.letters):
            wedge = ring[k]
            a = 4 * wedge.tet + wedge.exit_face
            t2, j, p = q.glue[a]
            b = 4 * t2 + j
            if a <= b:
                tok_u, tok_v = wedge.u, wedge.v
                direction = 1
            else:
                phi = vertex_map(wedge.exit_face, j, p)
                tok_u, tok_v = phi[wedge.u], phi[wedge.v]
                direction = -1
            slots.append(
                PageSlot(
                    face=f,
                    pos=k,
                    edge=letter.triangle,
                    direction=direction,
                    plus=(letter.triangle, tok_v),
                    minus=(letter.triangle, tok_u),
                )
            )
            corners.append(
                CornerRecord(
                    vertex=wedge.tet,
                    germ_a=4 * wedge.tet + wedge.enter_face,
                    germ_b=4 * wedge.tet + wedge.exit_face,
                    face=f,
                    pos_a=(k - 1) % len(word.letters),
                    pos_b=k,
                )
            )
        words.append(slots)
    return LoopSpace(words, corners)


def find_loops(q, max_len):
    """All loops of length <= max_len on a closed candidate spine."""
    return find_loops_in_space(build_loop_space(q), max_len)
