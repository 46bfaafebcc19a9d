"""First homology of the closed manifold a spine complex triangulates."""

from sympy import ZZ, Matrix
from sympy.matrices.normalforms import smith_normal_form

from .complex import _DIR_INDEX, _EDGE_INDEX, FACE_VERTS, TET_EDGES


def _boundary_matrix(q):
    # Rows are edge classes, columns triangle classes.  Each undirected
    # class is oriented by the first directed slot that discovers it.
    und = q._edges()
    drc = q._directed_edges()
    rows = {}
    orient = {}
    for tet in range(q.t):
        for k, (u, v) in enumerate(TET_EDGES):
            root = und.find(6 * tet + k)
            if root not in rows:
                rows[root] = len(rows)
                orient[root] = drc.find(12 * tet + _DIR_INDEX[(u, v)])
    ids = q.triangle_ids()
    reps = {}
    for flag, tri in enumerate(ids):
        reps.setdefault(tri, flag)
    mat = [[0] * len(reps) for _ in range(len(rows))]
    for tri, flag in reps.items():
        tet, face = divmod(flag, 4)
        a, b, c = FACE_VERTS[face]
        for x, y, s in ((b, c, 1), (a, c, -1), (a, b, 1)):
            root = und.find(6 * tet + _EDGE_INDEX[(x, y)])
            # The directed class over (x, y) is either the chosen
            # orientation or its reverse; nothing else lies above root.
            fwd = drc.find(12 * tet + _DIR_INDEX[(x, y)])
            mat[rows[root]][tri] += s if fwd == orient[root] else -s
    return Matrix(mat)


def first_homology(q):
    """Integral H1 of ``q`` as ``(rank, torsion)``.

    ``torsion`` lists the invariant factors greater than one, each
    dividing the next.  The computation quotients the edge classes of
    the one-vertex triangulation by the triangle boundaries, which is
    H1 of the manifold whenever ``q.validate()["ok"]`` holds; on
    complexes with reversed edges the answer is meaningless.
    """
    mat = _boundary_matrix(q)
    snf = smith_normal_form(mat, domain=ZZ)
    diag = [abs(int(snf[i, i])) for i in range(min(snf.rows, snf.cols))]
    nonzero = [d for d in diag if d]
    rank = mat.rows - len(nonzero)
    return rank, tuple(d for d in nonzero if d != 1)
