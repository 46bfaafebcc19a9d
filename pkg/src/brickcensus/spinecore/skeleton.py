"""Boundary strips: carving length-1 loop neighborhoods out of a spine.

Each length-1 loop shows up as a face doubly incident to an edge, its
two strands inducing the same orientation, so its neighborhood is a
Moebius strip with one tongue.  Removing the neighborhood cuts that
edge into a head and a tail stub, splits the doubled face into two
pieces, and notches the third page; the frontier is a triod: two band
arcs (one per piece) and a tongue arc, joining the two cut points.

The result keeps every true vertex and every face corner of the closed
complex, so the skeleton's word structure is a letter-level surgery on
the closed words.  Minimality screening then rules out skeleta with a
repeated face at an edge or triod, an embedded interior face with few
vertices, or a short non-fake loop bounding an external disc.
"""

from __future__ import annotations

from typing import NamedTuple

from .complex import SpineComplex
from .loops import CornerRecord, LoopSpace, PageSlot, build_loop_space
from .loops import find_loops_in_space

__all__ = [
    "Skeleton",
    "StripError",
    "StrippedLoop",
    "Token",
    "is_minimality_candidate",
    "strip_length1",
]


class StripError(ValueError):
    """The length-1 loops admit no disjoint system of strip neighborhoods."""

    def __init__(self, reason):
        super().__init__(reason)
        self.reason = reason


class StrippedLoop(NamedTuple):
    """One carved loop: where it doubled and where its tongue page sat."""

    edge: int
    face: int
    pos_a: int
    pos_b: int
    direction: int
    tongue_face: int
    tongue_pos: int


class Token(NamedTuple):
    """One letter of a skeleton face word.

    ``kind`` is "edge" for interior edges (crossable by loops), "band"
    or "tongue" for triod arcs.  Interior tokens carry the sector pair
    and a germ (an edge-end flag) at each end that lands on a true
    vertex; a None germ means that end is a triod vertex.
    """

    kind: str
    edge: object
    direction: int
    plus: object = None
    minus: object = None
    tail_germ: object = None
    head_germ: object = None


class Skeleton:
    """A spine with its length-1 loop neighborhoods removed.

    Kept implicit over the closed base: the words below are the face
    boundary words of the carved polyhedron, one triod per loop.  With
    no loops the skeleton is the base itself.
    """

    def __init__(self, base, loops, words, super_standard):
        self.base = base
        self.loops = tuple(loops)
        self.words = tuple(tuple(w) for w in words)
        self.super_standard = bool(super_standard)

    def __eq__(self, other):
        if not isinstance(other, Skeleton):
            return NotImplemented
        return (self.base, self.loops, self.words) == (
            other.base, other.loops, other.words)

    def __hash__(self):
        return hash((self.base, self.loops, self.words))

    @property
    def triod_count(self):
        return len(self.loops)

    @property
    def true_vertex_count(self):
        return self.base.t

    @property
    def complexity(self):
        return self.base.t

    @property
    def face_count(self):
        return len(self.words)

    def interior_edge_ids(self):
        return sorted(
            {tok.edge for w in self.words for tok in w if tok.kind == "edge"},
            key=repr,
        )

    def triod_edge_ids(self):
        return sorted(
            {tok.edge for w in self.words for tok in w if tok.kind != "edge"},
            key=repr,
        )

    def faces_at_triod(self, i):
        """The faces holding the two bands and the tongue of triod i."""
        hits = {}
        for f, word in enumerate(self.words):
            for tok in word:
                if tok.kind == "band" and tok.edge[1] == i:
                    hits[tok.edge] = f
                elif tok.kind == "tongue" and tok.edge[1] == i:
                    hits[tok.edge] = f
        assert len(hits) == 3
        return tuple(hits[e] for e in sorted(hits, key=repr))

    def loop_space(self):
        """Loop-hunting view: triod arcs are not crossable."""
        rows = []
        corners = []
        for f, word in enumerate(self.words):
            row = []
            for k, tok in enumerate(word):
                if tok.kind != "edge":
                    row.append(None)
                    continue
                row.append(PageSlot(
                    face=f, pos=k, edge=tok.edge, direction=tok.direction,
                    plus=tok.plus, minus=tok.minus,
                ))
            rows.append(row)
            for k, tok in enumerate(word):
                nxt = word[(k + 1) % len(word)]
                if tok.head_germ is None or nxt.tail_germ is None:
                    continue
                assert tok.head_germ // 4 == nxt.tail_germ // 4
                corners.append(CornerRecord(
                    vertex=tok.head_germ // 4,
                    germ_a=tok.head_germ, germ_b=nxt.tail_germ,
                    face=f, pos_a=k, pos_b=(k + 1) % len(word),
                ))
        return LoopSpace(rows, corners)


def _cut_parts(slot, letter):
    """Stub tokens for the begin and end parts of a cut letter.

    A letter over a stripped edge starts at one true end and stops at
    the cut; with the reference running head stub -> tail stub, the
    part holding the letter's beginning is the head stub exactly when
    the letter runs forward.
    """
    e = slot.edge
    begin = Token(
        "edge", ("head", e) if slot.direction > 0 else ("tail", e),
        slot.direction, slot.plus, slot.minus, letter.from_flag, None,
    )
    end = Token(
        "edge", ("tail", e) if slot.direction > 0 else ("head", e),
        slot.direction, slot.plus, slot.minus, None, letter.to_flag,
    )
    return begin, end


def strip_length1(q: SpineComplex) -> Skeleton:
    """Carve out all length-1 loops of a valid closed complex.

    Raises StripError when the loop pattern cannot give disjoint
    Moebius-with-tongue neighborhoods: a face triply incident to an
    edge, a double incidence with mismatched orientations, or one face
    doubling over two different edges.  Distinctness of the four faces
    flanking two different carved edges is recorded as the
    super_standard flag rather than enforced.
    """
    space = build_loop_space(q)
    words = q.face_words()

    def letter(f, k):
        return words[f].letters[k]

    stripped = {}
    for e, slots in sorted(space.slots_by_edge.items()):
        faces = [s.face for s in slots]
        doubled = {f for f in faces if faces.count(f) >= 2}
        if not doubled:
            continue
        if len(doubled) == 1 and faces.count(next(iter(doubled))) == 3:
            raise StripError("a face is triply incident to an edge")
        (f,) = doubled
        sa, sb = sorted(
            (s for s in slots if s.face == f), key=lambda s: s.pos)
        if sa.direction != sb.direction:
            raise StripError(
                "a face doubles over an edge with opposite orientations")
        (g_slot,) = (s for s in slots if s.face != f)
        stripped[e] = (f, sa, sb, g_slot)

    by_face = {}
    for e, (f, sa, sb, g_slot) in stripped.items():
        if f in by_face:
            raise StripError("one face doubles over two different edges")
        by_face[f] = e

    loops = []
    tongue_splice = {}
    split_plan = {}
    for i, e in enumerate(sorted(stripped)):
        f, sa, sb, g_slot = stripped[e]
        loops.append(StrippedLoop(
            edge=e, face=f, pos_a=sa.pos, pos_b=sb.pos,
            direction=sa.direction,
            tongue_face=g_slot.face, tongue_pos=g_slot.pos,
        ))
        g_begin, g_end = _cut_parts(g_slot, letter(g_slot.face, g_slot.pos))
        tongue = Token("tongue", ("tongue", i), g_slot.direction)
        tongue_splice[(g_slot.face, g_slot.pos)] = [g_begin, tongue, g_end]
        split_plan[f] = (i, e, sa, sb)

    # super-standardness: the doubled faces and tongue pages of any two
    # carved edges are pairwise distinct
    flank = [(f, g.face) for (f, _, _, g) in stripped.values()]
    super_standard = True
    for (f1, g1), (f2, g2) in (
        (a, b) for idx, a in enumerate(flank) for b in flank[idx + 1:]
    ):
        if len({f1, f2, g1, g2}) != 4:
            super_standard = False

    def expand(f, k):
        if (f, k) in tongue_splice:
            return list(tongue_splice[(f, k)])
        s = space.slot_at[(f, k)]
        l = letter(f, k)
        return [Token("edge", s.edge, s.direction, s.plus, s.minus,
                      l.from_flag, l.to_flag)]

    new_words = []
    for f in range(q.t + 1):
        length = len(words[f].letters)
        if f not in split_plan:
            word = []
            for k in range(length):
                word.extend(expand(f, k))
            new_words.append(word)
            continue
        i, e, sa, sb = split_plan[f]
        a_begin, a_end = _cut_parts(sa, letter(f, sa.pos))
        b_begin, b_end = _cut_parts(sb, letter(f, sb.pos))
        band0 = Token("band", ("band", i, 0), sa.direction)
        band1 = Token("band", ("band", i, 1), sa.direction)
        piece1 = [a_end]
        for k in range(sa.pos + 1, sb.pos):
            piece1.extend(expand(f, k))
        piece1 += [b_begin, band0]
        piece2 = [b_end]
        for k in list(range(sb.pos + 1, length)) + list(range(0, sa.pos)):
            piece2.extend(expand(f, k))
        piece2 += [a_begin, band1]
        new_words.append(piece1)
        new_words.append(piece2)

    return Skeleton(q, loops, new_words, super_standard)


def is_minimality_candidate(p: Skeleton):
    """Screen a skeleton; (False, why) when a rejection criterion fires.

    True only means not rejected.  The screens: the three faces at each
    interior edge must be distinct, the three faces at each triod must
    be distinct, no embedded face away from the boundary may have three
    or fewer vertices, and no non-fake loop of length at most 3 may
    bound an external disc (adding the disc and removing a face would
    then yield a smaller skeleton of the same pair).
    """
    pages = {}
    for f, word in enumerate(p.words):
        for tok in word:
            if tok.kind == "edge":
                pages.setdefault(tok.edge, set()).add(f)
    for faces in pages.values():
        if len(faces) != 3:
            return False, "repeated face at an edge"

    for i in range(p.triod_count):
        if len(set(p.faces_at_triod(i))) != 3:
            return False, "repeated face at a boundary triod"

    for word in p.words:
        if any(tok.kind != "edge" or not isinstance(tok.edge, int)
               for tok in word):
            continue  # closure meets the boundary: push-off has no room
        if len(word) > 3:
            continue
        edges = {tok.edge for tok in word}
        corner_tets = {tok.head_germ // 4 for tok in word}
        if len(edges) == len(word) and len(corner_tets) == len(word):
            return False, "embedded face with 3 or fewer vertices"

    for loop in find_loops_in_space(p.loop_space(), 3):
        if loop.bounds_external_disc:
            return False, "a short loop bounds an external disc"

    return True, None
