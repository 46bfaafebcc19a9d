"""Exhaustive spine search over a fixed singular graph.

For a canonically labeled 4-valent graph, the face slots of each
tetrahedron can be assigned to its incident edge ends in stored edge
order without losing isomorphism classes: any other assignment differs
by per-tetrahedron relabelings, and those act on the slots as the full
symmetric group.  What remains is the choice of one face bijection per
graph edge, searched depth-first with pruning.

Pruned along the way, since gluings only ever merge classes:

* orientation signs must stay 2-colorable (a parity union-find on tets),
* corner classes must still be able to reach one,
* triangulation edge classes must still be able to reach t + 1 and may
  never drop below it,
* no tetrahedron edge may meet itself reversed.

Every surviving leaf is validated from scratch and deduplicated by
canonical code, so the pruning is an optimization, not a trust anchor.
"""

from __future__ import annotations

import itertools

from .complex import (
    FACE_VERTS,
    SpineComplex,
    glue_sign,
    perm_index_inverse,
    vertex_map,
)

__all__ = ["spines_for_graph"]

_EDGE_INDEX = {
    pair: k for k, pair in enumerate(itertools.combinations(range(4), 2))
}
_DIR_INDEX = {
    pair: k
    for k, pair in enumerate(
        (u, v) for u in range(4) for v in range(4) if u != v
    )
}


def _find(parent, x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def _find_sign(parent, rel, x):
    sign = 1
    while parent[x] != x:
        sign *= rel[x]
        x = parent[x]
    return x, sign


class _State:
    """Search state: three union-finds plus the sign coloring."""

    __slots__ = ("corner", "edge", "direct", "sparent", "srel",
                 "corner_classes", "edge_classes")

    def __init__(self, t):
        self.corner = list(range(4 * t))
        self.edge = list(range(6 * t))
        self.direct = list(range(12 * t))
        self.sparent = list(range(t))
        self.srel = [1] * t
        self.corner_classes = 4 * t
        self.edge_classes = 6 * t

    def copy(self):
        new = _State.__new__(_State)
        new.corner = list(self.corner)
        new.edge = list(self.edge)
        new.direct = list(self.direct)
        new.sparent = list(self.sparent)
        new.srel = list(self.srel)
        new.corner_classes = self.corner_classes
        new.edge_classes = self.edge_classes
        return new

    def apply(self, a, b, p):
        """Glue flag a to flag b with perm p; False if inconsistent."""
        ta, i = divmod(a, 4)
        tb, j = divmod(b, 4)
        need = -glue_sign(i, j, p)
        ra, sa = _find_sign(self.sparent, self.srel, ta)
        rb, sb = _find_sign(self.sparent, self.srel, tb)
        if ra == rb:
            if sa * sb != need:
                return False
        else:
            self.sparent[ra] = rb
            self.srel[ra] = need * sa * sb

        phi = vertex_map(i, j, p)
        for v in FACE_VERTS[i]:
            x = _find(self.corner, 4 * ta + v)
            y = _find(self.corner, 4 * tb + phi[v])
            if x != y:
                self.corner[x] = y
                self.corner_classes -= 1
        for u, v in itertools.combinations(FACE_VERTS[i], 2):
            pu, pv = phi[u], phi[v]
            if pu > pv:
                pu, pv = pv, pu
            x = _find(self.edge, 6 * ta + _EDGE_INDEX[(u, v)])
            y = _find(self.edge, 6 * tb + _EDGE_INDEX[(pu, pv)])
            if x != y:
                self.edge[x] = y
                self.edge_classes -= 1
        for u, v in itertools.permutations(FACE_VERTS[i], 2):
            x = _find(self.direct, 12 * ta + _DIR_INDEX[(u, v)])
            y = _find(self.direct, 12 * tb + _DIR_INDEX[(phi[u], phi[v])])
            if x != y:
                self.direct[x] = y
        return True

    def has_reversed_edge(self, t):
        for tet in range(t):
            for u, v in itertools.combinations(range(4), 2):
                if _find(self.direct, 12 * tet + _DIR_INDEX[(u, v)]) == _find(
                    self.direct, 12 * tet + _DIR_INDEX[(v, u)]
                ):
                    return True
        return False


def _slot_pairs(graph):
    """Flag pair per graph edge, slots taken in stored edge order."""
    next_slot = [0] * graph.vertex_count
    pairs = []
    for u, v in graph.edges:
        a = 4 * u + next_slot[u]
        next_slot[u] += 1
        b = 4 * v + next_slot[v]
        next_slot[v] += 1
        pairs.append((a, b))
    return pairs


def spines_for_graph(graph):
    """All valid spine complexes carried by the graph, one per iso class.

    Returns SpineComplex instances sorted by canonical code.  The graph
    is the complex's face-pairing graph, so results for non-isomorphic
    graphs never collide.
    """
    t = graph.vertex_count
    pairs = _slot_pairs(graph)
    found = {}

    def descend(k, state, perms):
        if k == len(pairs):
            entries = [None] * (4 * t)
            for (a, b), p in zip(pairs, perms):
                entries[a] = (b // 4, b % 4, p)
                entries[b] = (a // 4, a % 4, perm_index_inverse(a % 4, b % 4, p))
            q = SpineComplex(t, tuple(entries))
            if q.validate()["ok"]:
                found.setdefault(q.canonical_code(), q)
            return
        remaining = len(pairs) - k - 1
        a, b = pairs[k]
        for p in range(6):
            nxt = state.copy()
            if not nxt.apply(a, b, p):
                continue
            if nxt.edge_classes < t + 1:
                continue
            if nxt.edge_classes - (t + 1) > 3 * remaining:
                continue
            if nxt.corner_classes - 1 > 3 * remaining:
                continue
            if nxt.has_reversed_edge(t):
                continue
            descend(k + 1, nxt, perms + (p,))

    descend(0, _State(t), ())
    return [found[code] for code in sorted(found)]
