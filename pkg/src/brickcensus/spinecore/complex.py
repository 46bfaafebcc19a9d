"""One-vertex glued-tetrahedron complexes and their dual spines.

A candidate spine is stored through its dual triangulation: t tetrahedra
whose 4t faces are glued in pairs by affine maps.  A gluing is recorded
per flag (tetrahedron, face) as the partner flag plus one of the six
bijections between the sorted vertex lists of the two faces.  Face i of a
tetrahedron is the face opposite vertex i.

The dual dictionary used throughout: tetrahedra are the spine's true
vertices, triangle classes its singular edges, and triangulation edge
classes its 2-cells, so a closed candidate on t tetrahedra has spine
counts V = t, E = 2t, F = t + 1.
"""

from __future__ import annotations

import itertools
from base64 import b32encode
from typing import NamedTuple

from ..quadgraph import QuadGraph

__all__ = [
    "ALL_VERTEX_MAPS",
    "FACE_VERTS",
    "FaceLetter",
    "FaceWord",
    "PERMS3",
    "SpineComplex",
    "Wedge",
    "glue_sign",
    "perm_index_inverse",
    "vertex_map",
]

#: Vertices of face i, ascending: face i is opposite vertex i.
FACE_VERTS = ((1, 2, 3), (0, 2, 3), (0, 1, 3), (0, 1, 2))

#: The six bijections of 3-element position lists, in lexicographic order.
#: Perm index p sends position k of the source face's sorted vertex list
#: to position PERMS3[p][k] of the target's.
PERMS3 = tuple(sorted(itertools.permutations(range(3))))

#: All 24 vertex relabelings of a tetrahedron, lexicographic.
ALL_VERTEX_MAPS = tuple(sorted(itertools.permutations(range(4))))

_PERM3_INDEX = {p: k for k, p in enumerate(PERMS3)}
_MAP24_INDEX = {p: k for k, p in enumerate(ALL_VERTEX_MAPS)}

#: Edges of a tetrahedron as sorted pairs, lexicographic.
TET_EDGES = tuple(itertools.combinations(range(4), 2))
_EDGE_INDEX = {pair: k for k, pair in enumerate(TET_EDGES)}
_DIR_EDGES = tuple((u, v) for u in range(4) for v in range(4) if u != v)
_DIR_INDEX = {pair: k for k, pair in enumerate(_DIR_EDGES)}


def _parity(perm):
    inv = sum(
        1
        for a in range(len(perm))
        for b in range(a + 1, len(perm))
        if perm[a] > perm[b]
    )
    return 1 if inv % 2 == 0 else -1


_PERM3_SIGN = tuple(_parity(p) for p in PERMS3)
_PERM3_INV = tuple(
    _PERM3_INDEX[tuple(sorted(range(3), key=lambda k, q=q: q[k]))] for q in PERMS3
)


def vertex_map(i, j, p):
    """The vertex bijection of gluing face i to face j with perm index p.

    Returns a fresh dict from FACE_VERTS[i] onto FACE_VERTS[j]; vertex i
    itself is not in the domain.
    """
    src, dst, pos = FACE_VERTS[i], FACE_VERTS[j], PERMS3[p]
    return {src[k]: dst[pos[k]] for k in range(3)}


def perm_index_inverse(i, j, p):
    """Perm index of the inverse bijection, for the partner flag's record.

    In position coordinates the inverse does not depend on the face
    indices; they are kept in the signature to mirror call sites.
    """
    return _PERM3_INV[p]


def glue_sign(i, j, p):
    """Sign of the full simplicial map induced by a gluing.

    The gluing extends to the vertex permutation sending i to j and the
    face vertices along the bijection; its parity equals the parity of
    the position permutation times (-1)**(i + j).  Two coherently
    oriented tetrahedra admit the gluing exactly when this sign is -1
    times the product of their orientations.
    """
    return _PERM3_SIGN[p] * (1 if (i + j) % 2 == 0 else -1)


def _full_map(i, j, p):
    """vertex_map extended by i -> j, as a length-4 tuple of images."""
    phi = vertex_map(i, j, p)
    phi[i] = j
    return tuple(phi[v] for v in range(4))


class Wedge(NamedTuple):
    """One sector of the cyclic walk around a triangulation edge class.

    The walk sits at directed edge (u, v) of a tetrahedron, having come
    in through enter_face and about to cross the gluing at exit_face.
    """

    tet: int
    u: int
    v: int
    enter_face: int
    exit_face: int


class FaceLetter(NamedTuple):
    """One crossing of a spine face's boundary over a singular edge.

    ``triangle`` is the triangle-class id (the spine edge crossed),
    ``side`` the slot 0..2 of the crossed tetrahedron edge among the
    three edges of the class's minimal flag, and ``from_flag``/``to_flag``
    the flag pair in crossing order.
    """

    triangle: int
    side: int
    from_flag: int
    to_flag: int


class FaceWord(NamedTuple):
    """Boundary word of one spine face: its edge-class ring, lettered."""

    face: int
    letters: tuple


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        parent = self.parent
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb

    def class_count(self):
        return sum(1 for x, p in enumerate(self.parent) if self.find(x) == x)


class SpineComplex:
    """An immutable, totally glued complex of tetrahedra.

    ``glue`` holds one triple (tet2, face2, perm) per flag 4*tet + face;
    the table must be a fixed-point-free involution with inverse perms on
    partner flags.  Construction checks only this well-formedness;
    ``validate`` runs the manifold conditions.
    """

    __slots__ = ("t", "glue", "_cache")

    def __init__(self, t, glue):
        if t < 1:
            raise ValueError("need at least one tetrahedron")
        glue = tuple(tuple(entry) for entry in glue)
        if len(glue) != 4 * t:
            raise ValueError(f"expected {4 * t} gluing entries, got {len(glue)}")
        for flag, (t2, j, p) in enumerate(glue):
            if not (0 <= t2 < t and 0 <= j < 4 and 0 <= p < 6):
                raise ValueError(f"entry {glue[flag]} at flag {flag} out of range")
            partner = 4 * t2 + j
            if partner == flag:
                raise ValueError(f"flag {flag} glued to itself")
            i = flag % 4
            if glue[partner] != (flag // 4, i, perm_index_inverse(i, j, p)):
                raise ValueError(
                    f"gluing table not involutive at flags {flag}, {partner}"
                )
        self.t = t
        self.glue = glue
        self._cache = {}

    # -- basics ------------------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, SpineComplex):
            return NotImplemented
        return self.t == other.t and self.glue == other.glue

    def __hash__(self):
        return hash((self.t, self.glue))

    def __repr__(self):
        return f"SpineComplex.from_text({self.to_text()!r})"

    # -- quotient cell structure -------------------------------------------

    def _corners(self):
        uf = self._cache.get("corners")
        if uf is None:
            uf = _UnionFind(4 * self.t)
            for tet in range(self.t):
                for face in range(4):
                    t2, j, p = self.glue[4 * tet + face]
                    phi = vertex_map(face, j, p)
                    for v in FACE_VERTS[face]:
                        uf.union(4 * tet + v, 4 * t2 + phi[v])
            self._cache["corners"] = uf
        return uf

    def _edges(self):
        uf = self._cache.get("edges")
        if uf is None:
            uf = _UnionFind(6 * self.t)
            for tet in range(self.t):
                for face in range(4):
                    t2, j, p = self.glue[4 * tet + face]
                    phi = vertex_map(face, j, p)
                    for u, v in itertools.combinations(FACE_VERTS[face], 2):
                        a = 6 * tet + _EDGE_INDEX[(u, v)]
                        pu, pv = phi[u], phi[v]
                        if pu > pv:
                            pu, pv = pv, pu
                        uf.union(a, 6 * t2 + _EDGE_INDEX[(pu, pv)])
            self._cache["edges"] = uf
        return uf

    def _directed_edges(self):
        uf = self._cache.get("directed")
        if uf is None:
            uf = _UnionFind(12 * self.t)
            for tet in range(self.t):
                for face in range(4):
                    t2, j, p = self.glue[4 * tet + face]
                    phi = vertex_map(face, j, p)
                    for u, v in itertools.permutations(FACE_VERTS[face], 2):
                        uf.union(
                            12 * tet + _DIR_INDEX[(u, v)],
                            12 * t2 + _DIR_INDEX[(phi[u], phi[v])],
                        )
            self._cache["directed"] = uf
        return uf

    def vertex_class_count(self):
        return self._corners().class_count()

    def edge_class_count(self):
        return self._edges().class_count()

    def triangle_class_count(self):
        return 2 * self.t

    # -- validity ------------------------------------------------------------

    def _is_orientable(self):
        # 2-color the tetrahedra so every gluing map reverses orientation:
        # eps_a * eps_b must equal -glue_sign on each gluing.
        parent = list(range(self.t))
        rel = [1] * self.t  # sign of node relative to its parent

        def find_sign(x):
            root = x
            sign = 1
            while parent[root] != root:
                sign *= rel[root]
                root = parent[root]
            return root, sign

        for tet in range(self.t):
            for face in range(4):
                t2, j, p = self.glue[4 * tet + face]
                need = -glue_sign(face, j, p)
                ra, sa = find_sign(tet)
                rb, sb = find_sign(t2)
                if ra == rb:
                    if sa * sb != need:
                        return False
                else:
                    # attach ra under rb with eps_a = need * eps_b
                    parent[ra] = rb
                    rel[ra] = need * sa * sb
        return True

    def _has_reversed_edge(self):
        uf = self._directed_edges()
        for tet in range(self.t):
            for u, v in TET_EDGES:
                a = 12 * tet + _DIR_INDEX[(u, v)]
                b = 12 * tet + _DIR_INDEX[(v, u)]
                if uf.find(a) == uf.find(b):
                    return True
        return False

    def _links_are_spheres(self):
        # The link of a vertex class is one closed surface built from its
        # corner triangles; connectivity is automatic because the corner
        # classes are the components of the triangle adjacency.  Its cell
        # counts are F = corners, E = 3F/2, V = directed edge classes
        # based at the class, so chi == 2 decides the sphere condition.
        corners = self._corners()
        directed = self._directed_edges()
        tri_count = {}
        for c in range(4 * self.t):
            root = corners.find(c)
            tri_count[root] = tri_count.get(root, 0) + 1
        dir_sets = {}
        for tet in range(self.t):
            for u, v in _DIR_EDGES:
                root = corners.find(4 * tet + u)
                dir_sets.setdefault(root, set()).add(
                    directed.find(12 * tet + _DIR_INDEX[(u, v)])
                )
        for root, f_count in tri_count.items():
            if f_count % 2:
                return False
            chi = len(dir_sets[root]) - f_count // 2
            if chi != 2:
                return False
        return True

    def validate(self):
        """Run the closed-spine conditions; returns a diagnostics dict.

        ``ok`` holds exactly when the complex is a connected one-vertex
        triangulation of a closed orientable 3-manifold, i.e. when its
        dual is a standard spine with S(Q) connected and 4-valent.
        """
        tets = _UnionFind(self.t)
        for tet in range(self.t):
            for face in range(4):
                tets.union(tet, self.glue[4 * tet + face][0])
        d = {"closed": True, "connected": tets.class_count() == 1}
        d["one_vertex"] = self.vertex_class_count() == 1
        d["edge_count"] = self.edge_class_count() == self.t + 1
        d["no_reversed_edge"] = not self._has_reversed_edge()
        d["orientable"] = self._is_orientable()
        d["sphere_link"] = self._links_are_spheres()
        d["ok"] = (
            d["connected"]
            and d["one_vertex"]
            and d["edge_count"]
            and d["no_reversed_edge"]
            and d["orientable"]
            and d["sphere_link"]
        )
        return d

    # -- rings and boundary words --------------------------------------------

    def edge_rings(self):
        """Cyclic wedge sequences around each edge class.

        Rings are listed by increasing minimal tet-edge representative
        and each starts at that representative, directed ascending, with
        the smaller flanking face as first exit.  Requires a complex with
        no reversed edge identifications.
        """
        rings = self._cache.get("rings")
        if rings is not None:
            return rings
        uf = self._edges()
        sizes = {}
        for idx in range(6 * self.t):
            sizes[uf.find(idx)] = sizes.get(uf.find(idx), 0) + 1
        rings = []
        seen_roots = set()
        for idx in range(6 * self.t):
            root = uf.find(idx)
            if root in seen_roots:
                continue
            seen_roots.add(root)
            tet, (u, v) = idx // 6, TET_EDGES[idx % 6]
            flanks = [f for f in range(4) if f not in (u, v)]
            wedge = Wedge(tet, u, v, flanks[1], flanks[0])
            ring = []
            while True:
                ring.append(wedge)
                t2, j, p = self.glue[4 * wedge.tet + wedge.exit_face]
                phi = vertex_map(wedge.exit_face, j, p)
                y = next(
                    w
                    for w in range(4)
                    if w not in (wedge.u, wedge.v, wedge.exit_face)
                )
                wedge = Wedge(t2, phi[wedge.u], phi[wedge.v], j, phi[y])
                if wedge == ring[0]:
                    break
                if len(ring) > 6 * self.t:
                    raise AssertionError("edge ring failed to close")
            if len(ring) != sizes[root]:
                raise AssertionError(
                    "ring length disagrees with edge class size; "
                    "complex has a reversed edge identification"
                )
            rings.append(ring)
        self._cache["rings"] = rings
        return rings

    def triangle_ids(self):
        """Map flag -> triangle-class id, ids by increasing minimal flag."""
        ids = self._cache.get("tri_ids")
        if ids is None:
            ids = [-1] * (4 * self.t)
            nxt = 0
            for flag in range(4 * self.t):
                if ids[flag] >= 0:
                    continue
                t2, j, _ = self.glue[flag]
                ids[flag] = ids[4 * t2 + j] = nxt
                nxt += 1
            self._cache["tri_ids"] = ids
        return ids

    def _letter_for(self, wedge):
        tri_ids = self.triangle_ids()
        a = 4 * wedge.tet + wedge.exit_face
        t2, j, p = self.glue[a]
        b = 4 * t2 + j
        if a <= b:
            face, pair = wedge.exit_face, (wedge.u, wedge.v)
        else:
            phi = vertex_map(wedge.exit_face, j, p)
            face, pair = j, (phi[wedge.u], phi[wedge.v])
        pair = tuple(sorted(pair))
        side = list(itertools.combinations(FACE_VERTS[face], 2)).index(pair)
        return FaceLetter(tri_ids[a], side, a, b)

    def face_words(self):
        """Boundary words of the spine's 2-cells, one per edge ring."""
        words = self._cache.get("words")
        if words is None:
            words = [
                FaceWord(k, tuple(self._letter_for(w) for w in ring))
                for k, ring in enumerate(self.edge_rings())
            ]
            self._cache["words"] = words
        return words

    def face_pairing_graph(self):
        """The spine's singular graph: tetrahedra joined along gluings."""
        edges = []
        for flag in range(4 * self.t):
            t2, j, _ = self.glue[flag]
            if flag <= 4 * t2 + j:
                edges.append((flag // 4, t2))
        return QuadGraph(self.t, edges)

    # -- serialization ---------------------------------------------------------

    def to_text(self):
        lines = [f"t={self.t}"]
        for flag in range(4 * self.t):
            t2, j, p = self.glue[flag]
            if flag < 4 * t2 + j:
                lines.append(f"{flag // 4}.{flag % 4} <-> {t2}.{j} perm={p}")
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text):
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines or not lines[0].startswith("t="):
            raise ValueError("missing t= header")
        try:
            t = int(lines[0][2:])
        except ValueError:
            raise ValueError(f"bad t= header: {lines[0]!r}") from None
        if t < 1:
            raise ValueError("need at least one tetrahedron")
        entries = [None] * (4 * t)
        for line in lines[1:]:
            try:
                left, right = line.split("<->")
                spec, perm_part = right.split("perm=")
                a_tet, a_face = (int(x) for x in left.strip().split("."))
                b_tet, b_face = (int(x) for x in spec.strip().split("."))
                p = int(perm_part)
            except ValueError:
                raise ValueError(f"bad gluing line: {line!r}") from None
            if not (0 <= a_tet < t and 0 <= b_tet < t):
                raise ValueError(f"tetrahedron out of range: {line!r}")
            if not (0 <= a_face < 4 and 0 <= b_face < 4 and 0 <= p < 6):
                raise ValueError(f"face or perm out of range: {line!r}")
            a, b = 4 * a_tet + a_face, 4 * b_tet + b_face
            if entries[a] is not None or entries[b] is not None:
                raise ValueError(f"flag glued twice: {line!r}")
            entries[a] = (b_tet, b_face, p)
            entries[b] = (a_tet, a_face, perm_index_inverse(a_face, b_face, p))
        missing = [f for f, e in enumerate(entries) if e is None]
        if missing:
            raise ValueError(f"unglued flags: {missing}")
        return cls(t, tuple(entries))

    # -- canonical form ----------------------------------------------------------

    def _encode_from(self, start, lab0):
        lab = {start: ALL_VERTEX_MAPS[lab0]}
        order = [start]
        new_id = {start: 0}
        out = []
        k = 0
        while k < len(order):
            tet = order[k]
            k += 1
            lab_t = lab[tet]
            inv_t = [0] * 4
            for v in range(4):
                inv_t[lab_t[v]] = v
            for nface in range(4):
                i = inv_t[nface]
                t2, j, p = self.glue[4 * tet + i]
                phi = _full_map(i, j, p)
                if t2 not in new_id:
                    # relabel the new tetrahedron so this gluing reads as
                    # the identity in new labels
                    phi_inv = [0] * 4
                    for v in range(4):
                        phi_inv[phi[v]] = v
                    lab[t2] = tuple(lab_t[phi_inv[v]] for v in range(4))
                    new_id[t2] = len(order)
                    order.append(t2)
                lab_2 = lab[t2]
                newmap = tuple(lab_2[phi[inv_t[v]]] for v in range(4))
                out.append(new_id[t2])
                out.append(_MAP24_INDEX[newmap])
        return bytes(out)

    def canonical_code(self):
        """Label-invariant encoding; equal codes mean isomorphic complexes.

        Minimizes a breadth-first destination encoding over every choice
        of start tetrahedron and initial vertex relabeling, normalizing
        each tree gluing to the identity.  Reflections are allowed, so
        mirror pairs share a code.
        """
        code = self._cache.get("ccode")
        if code is None:
            code = min(
                self._encode_from(start, lab0)
                for start in range(self.t)
                for lab0 in range(24)
            )
            self._cache["ccode"] = code
        return code

    def code_b32(self):
        """Printable canonical code."""
        return b32encode(self.canonical_code()).decode("ascii").rstrip("=")
