"""Connected 4-valent multigraphs and their edge-cut filters.

Every closed candidate spine in this project is carried by the 4-valent
graph of its singular set, so the census pipeline starts here: enumerate
connected 4-valent multigraphs up to isomorphism, then discard those whose
small edge cuts rule them out as singular sets of bricks.  Loops and
parallel edges are first-class; much of the small census lives on them.

Graphs are handled internally as symmetric multiplicity matrices (loops on
the diagonal, counting twice toward the degree).  The canonical form is
the lexicographically least adjacency encoding over all vertex orders
compatible with an iteratively refined vertex partition; with at most ten
vertices the leftover backtracking is cheap.
"""

from __future__ import annotations

import warnings
from base64 import b32encode
from itertools import combinations
from pathlib import Path

__all__ = [
    "QuadGraph",
    "enumerate_quartic",
    "has_disconnecting_pair",
    "load_patterns",
    "quad_cut_admissible",
    "shape_code",
]


# ---------------------------------------------------------------------------
# Matrix helpers.
# ---------------------------------------------------------------------------

def _matrix_from_edges(n, edges):
    m = [[0] * n for _ in range(n)]
    for u, v in edges:
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"edge ({u}, {v}) outside vertex range 0..{n - 1}")
        if u == v:
            m[u][u] += 1
        else:
            m[u][v] += 1
            m[v][u] += 1
    return m


def _edges_from_matrix(m):
    n = len(m)
    edges = []
    for u in range(n):
        edges.extend([(u, u)] * m[u][u])
        for v in range(u + 1, n):
            edges.extend([(u, v)] * m[u][v])
    return edges


def _degree(m, v):
    return sum(m[v][u] for u in range(len(m)) if u != v) + 2 * m[v][v]


def _component_labels(n, edges, skip_indices=()):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    skip = set(skip_indices)
    for i, (u, v) in enumerate(edges):
        if i in skip or u == v:
            continue
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
    return [find(v) for v in range(n)]


# ---------------------------------------------------------------------------
# Canonical codes.
# ---------------------------------------------------------------------------

def _refined_cells(m, weights):
    """Ordered partition of the vertices, stable under neighbour counts.

    Cell order derives from per-vertex signatures alone (weight, loops,
    degree, then multiplicity profiles toward earlier cells), so any
    weight-preserving relabeling of the graph yields the same ordered
    partition.  Refinement only ever splits cells.
    """
    n = len(m)
    sig = [(weights[v], m[v][v], _degree(m, v)) for v in range(n)]
    ncells = 0
    while True:
        values = sorted(set(sig))
        if len(values) in (n, ncells):
            break
        ncells = len(values)
        index = {s: i for i, s in enumerate(values)}
        cell_of = [index[sig[v]] for v in range(n)]
        sig = [
            (
                sig[v],
                tuple(
                    sum(m[v][u] for u in range(n) if u != v and cell_of[u] == c)
                    for c in range(ncells)
                ),
            )
            for v in range(n)
        ]
    values = sorted(set(sig))
    return [[v for v in range(n) if sig[v] == s] for s in values]


def _min_adjacency_encoding(m, cells):
    """Lexicographically least column-by-column encoding over cell-respecting orders.

    Placing a vertex at position p emits its multiplicities toward the
    already placed vertices plus its own loop count, so the encoding grows
    monotonically and bad branches can be cut against the best known code.
    """
    best = None
    placed = []
    cols = []
    pool = [list(c) for c in cells]

    def rec(ci, tight):
        nonlocal best
        while ci < len(pool) and not pool[ci]:
            ci += 1
        if ci == len(pool):
            if best is None or cols < best:
                best = cols.copy()
            return
        base = len(cols)
        bucket = pool[ci]
        for v in list(bucket):
            col = [m[u][v] for u in placed]
            col.append(m[v][v])
            child_tight = tight and best is not None
            if child_tight:
                seg = best[base:base + len(col)]
                if col > seg:
                    continue
                if col < seg:
                    child_tight = False
            bucket.remove(v)
            placed.append(v)
            cols.extend(col)
            rec(ci, child_tight)
            del cols[base:]
            placed.pop()
            bucket.append(v)

    rec(0, True)
    return best


def _canonical_matrix_code(m, weights=None):
    n = len(m)
    w = weights if weights is not None else [0] * n
    cells = _refined_cells(m, w)
    body = _min_adjacency_encoding(m, cells)
    head = [n]
    if weights is not None:
        # weights are constant on each cell, so the placement-order weight
        # vector is the same for every order the encoder considers
        head.extend(w[cell[0]] for cell in cells for _ in cell)
    return bytes(head + body)


def shape_code(vertex_count, edges, stubs):
    """Canonical byte code of a multigraph fragment with loose stub ends.

    ``stubs[v]`` counts the half-edges left dangling at v by a cut.  Two
    fragments get equal codes iff some relabeling matches both the edge
    multiset and the stub counts.
    """
    if len(stubs) != vertex_count:
        raise ValueError("stub counts must cover every vertex")
    m = _matrix_from_edges(vertex_count, edges)
    return _canonical_matrix_code(m, weights=list(stubs))


# ---------------------------------------------------------------------------
# The graph type.
# ---------------------------------------------------------------------------

class QuadGraph:
    """A connected multigraph in which every vertex has degree four.

    Edges form an immutable multiset of unordered pairs; a loop (v, v)
    counts twice toward the degree of v.  Instances compare and hash by
    canonical code, so container membership means isomorphism.
    """

    __slots__ = ("vertex_count", "edges", "_code")

    def __init__(self, vertex_count, edges):
        edges = tuple(sorted(tuple(sorted(e)) for e in edges))
        m = _matrix_from_edges(vertex_count, edges)
        bad = [v for v in range(vertex_count) if _degree(m, v) != 4]
        if bad:
            raise ValueError(f"vertices {bad} do not have degree 4")
        if len(set(_component_labels(vertex_count, edges))) != 1:
            raise ValueError("graph is not connected")
        self.vertex_count = vertex_count
        self.edges = edges
        self._code = None

    @property
    def canonical_code(self):
        if self._code is None:
            self._code = _canonical_matrix_code(
                _matrix_from_edges(self.vertex_count, self.edges)
            )
        return self._code

    def code_b32(self):
        """Printable form of the canonical code."""
        return b32encode(self.canonical_code).decode("ascii").rstrip("=")

    def to_line(self):
        return " ".join(f"{u}-{v}" for u, v in self.edges)

    @classmethod
    def from_line(cls, line):
        edges = []
        top = -1
        for tok in line.split():
            a, b = tok.split("-")
            u, v = int(a), int(b)
            top = max(top, u, v)
            edges.append((u, v))
        return cls(top + 1, edges)

    def __eq__(self, other):
        if not isinstance(other, QuadGraph):
            return NotImplemented
        return self.canonical_code == other.canonical_code

    def __hash__(self):
        return hash(self.canonical_code)

    def __repr__(self):
        return f"QuadGraph({self.vertex_count}, {list(self.edges)!r})"


# ---------------------------------------------------------------------------
# Enumeration.
# ---------------------------------------------------------------------------

def _has_dead_component(m):
    """True if some proper connected component is already fully saturated.

    Such a component has no free half-edge left, so no sequence of edge
    additions can ever reconnect it; the partial graph is a dead end.
    Applied to every insertion, this also forces final connectivity.
    """
    n = len(m)
    if n == 1:
        return False
    pairs = [
        (u, v)
        for u in range(n)
        for v in range(u + 1, n)
        if m[u][v]
    ]
    labels = _component_labels(n, pairs)
    groups = {}
    for v, root in enumerate(labels):
        groups.setdefault(root, []).append(v)
    if len(groups) == 1:
        return False
    return any(
        all(_degree(m, v) == 4 for v in comp)
        for comp in groups.values()
    )


def enumerate_quartic(n):
    """All isomorphism classes of connected 4-valent multigraphs on n vertices.

    Breadth-first over edge count: each level keeps one representative
    matrix per canonical code, and every representative grows by one new
    edge at a fixed deficient vertex.  Extending at any single deficient
    vertex preserves completeness, because a 4-regular supergraph always
    has an unused edge end there; taking the deficient vertex of highest
    degree keeps the frontier narrow.  Returns graphs sorted by canonical
    code.
    """
    if n < 1:
        raise ValueError("vertex count must be at least 1")
    level = {b"": [[0] * n for _ in range(n)]}
    for _ in range(2 * n):
        nxt = {}
        for m in level.values():
            degs = [_degree(m, v) for v in range(n)]
            v = max(
                (u for u in range(n) if degs[u] < 4),
                key=lambda u: (degs[u], -u),
            )
            targets = [u for u in range(n) if u != v and degs[u] < 4]
            if degs[v] <= 2:
                targets.append(v)
            for u in targets:
                m2 = [row[:] for row in m]
                if u == v:
                    m2[v][v] += 1
                else:
                    m2[u][v] += 1
                    m2[v][u] += 1
                if _has_dead_component(m2):
                    continue
                code = _canonical_matrix_code(m2)
                if code not in nxt:
                    nxt[code] = m2
        level = nxt
    graphs = [QuadGraph(n, _edges_from_matrix(m)) for m in level.values()]
    graphs.sort(key=lambda g: g.canonical_code)
    return graphs


# ---------------------------------------------------------------------------
# Cut filters.
# ---------------------------------------------------------------------------

def has_disconnecting_pair(g):
    """True iff removing some two distinct edges disconnects the graph."""
    edges = g.edges
    n = g.vertex_count
    for pair in combinations(range(len(edges)), 2):
        if len(set(_component_labels(n, edges, pair))) > 1:
            return True
    return False


def _side_shape(g, labels, side, quad):
    verts = [v for v in range(g.vertex_count) if labels[v] == side]
    index = {v: i for i, v in enumerate(verts)}
    internal = []
    stubs = [0] * len(verts)
    for i, (u, v) in enumerate(g.edges):
        if i in quad:
            for w in (u, v):
                if labels[w] == side:
                    stubs[index[w]] += 1
        elif labels[u] == side:
            internal.append((index[u], index[v]))
    return shape_code(len(verts), internal, stubs)


def quad_cut_admissible(g, patterns):
    """Check every disconnecting edge quadruple against the allowed side shapes.

    The graph must already be free of disconnecting pairs; then every
    disconnecting quadruple splits it into exactly two sides with four
    stub ends each, and the cut is acceptable when at least one side's
    shape is in ``patterns``.  This is a pruning filter for the brick
    hunt, never a correctness requirement.
    """
    if not patterns:
        warnings.warn(
            "empty pattern set: any disconnecting quadruple now rejects its graph",
            stacklevel=2,
        )
    edges = g.edges
    n = g.vertex_count
    non_loop = [i for i, (u, v) in enumerate(edges) if u != v]
    for quad in combinations(non_loop, 4):
        labels = _component_labels(n, edges, quad)
        classes = set(labels)
        if len(classes) == 1:
            continue
        if len(classes) > 2:
            raise ValueError(
                "quadruple cut with more than two sides; graph has a "
                "disconnecting pair and is outside this filter's domain"
            )
        if not any(
            _side_shape(g, labels, side, set(quad)) in patterns
            for side in classes
        ):
            return False
    return True


def load_patterns(path):
    """Read cut-side patterns, one fragment per line.

    Tokens are 'u-v' for an edge (loops as 'v-v') and 'v-*' for a stub at
    v, separated by whitespace; '#' starts a comment.  The vertex count is
    one more than the largest index mentioned.
    """
    patterns = set()
    for raw in Path(path).read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        patterns.add(_parse_shape_line(line))
    return patterns


def _parse_shape_line(line):
    edges = []
    stub_at = []
    top = -1
    for tok in line.split():
        a, b = tok.split("-")
        u = int(a)
        top = max(top, u)
        if b == "*":
            stub_at.append(u)
        else:
            v = int(b)
            top = max(top, v)
            edges.append((u, v))
    stubs = [0] * (top + 1)
    for u in stub_at:
        stubs[u] += 1
    return shape_code(top + 1, edges, stubs)
