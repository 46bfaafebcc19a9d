"""Local moves connecting different spine complexes of one manifold.

Two families live here.  The bistellar pair ``mp_up``/``mp_down``
trades a triangle class whose two sides lie in distinct tetrahedra for
an order-3 edge class carried by three distinct tetrahedra, changing
the tetrahedron count by one.  ``disc_replacement`` keeps the count:
it removes a spine face and glues in the complementary disc of the
face's push-off curve, which rebuilds the singular set around the old
boundary.  Every public entry point either returns complexes of the
promised size or raises :class:`InapplicableMove`.
"""

from .complex import FACE_VERTS, PERMS3, SpineComplex, perm_index_inverse, vertex_map


class InapplicableMove(Exception):
    """The requested site does not admit the move."""


def _perm_of(i, j, psi):
    # psi is a bijection FACE_VERTS[i] -> FACE_VERTS[j]; recover the
    # stored perm index from its action on sorted positions.
    src, dst = FACE_VERTS[i], FACE_VERTS[j]
    return PERMS3.index(tuple(dst.index(psi[v]) for v in src))


def _write_pair(table, flag_a, flag_b, psi):
    fa, fb = flag_a % 4, flag_b % 4
    p = _perm_of(fa, fb, psi)
    table[flag_a] = (flag_b // 4, fb, p)
    table[flag_b] = (flag_a // 4, fa, perm_index_inverse(fa, fb, p))


def triangle_sites(q):
    """Triangle classes whose two flags lie in distinct tetrahedra."""
    first = {}
    sites = []
    for flag, k in enumerate(q.triangle_ids()):
        if k in first:
            if first[k] != flag // 4:
                sites.append(k)
        else:
            first[k] = flag // 4
    return sorted(sites)


def edge_sites(q):
    """Edge classes of order 3 met by three distinct tetrahedra."""
    return [
        k
        for k, ring in enumerate(q.edge_rings())
        if len(ring) == 3 and len({w.tet for w in ring}) == 3
    ]


def mp_move(q, site):
    """Apply one bistellar move at ``site`` and return the new complex.

    ``site`` is ``("triangle", k)`` for the expansion that replaces
    triangle class ``k`` by a new edge class, or ``("edge", k)`` for
    the inverse contraction at edge class ``k``.  The result is a
    complex of the same manifold with one tetrahedron more or fewer;
    an unusable site raises InapplicableMove.
    """
    kind, k = site
    if kind == "triangle":
        return mp_up(q, k)
    if kind == "edge":
        return mp_down(q, k)
    raise ValueError(f"unknown site kind {kind!r}")


def mp_up(q, triangle):
    """Expand triangle class ``triangle`` into three tetrahedra.

    The two tetrahedra sharing the triangle are erased and the
    resulting bipyramid is split along the axis joining the two apexes,
    giving t + 1 tetrahedra and a new order-3 edge class at the axis.
    The axis is edge (0, 1) of the appended tetrahedron, so
    ``edge_class_at(result, q.t, 0, 1)`` names the site of the inverse
    contraction.
    """
    if not 0 <= triangle < 2 * q.t:
        raise InapplicableMove(f"no triangle class {triangle}")
    flag_a = q.triangle_ids().index(triangle)
    tet_a, fa = divmod(flag_a, 4)
    tet_b, fb, p = q.glue[flag_a]
    if tet_a == tet_b:
        raise InapplicableMove("both sides of the triangle lie in one tetrahedron")
    phi = vertex_map(fa, fb, p)
    s = FACE_VERTS[fa]
    g = tuple(phi[v] for v in s)
    slot = (tet_a, tet_b, q.t)
    new_t = q.t + 1

    # Piece k of the split pairs equator vertices {0,1,2} minus {k};
    # locally 0 is the apex of tet_a, 1 the apex of tet_b, 2 and 3 the
    # remaining equator corners in increasing index order.
    ext = {}
    for k in range(3):
        i, j = (m for m in range(3) if m != k)
        ext[4 * tet_a + s[k]] = (4 * slot[k] + 1, {0: fa, 2: s[i], 3: s[j]})
        ext[4 * tet_b + g[k]] = (4 * slot[k] + 0, {1: fb, 2: g[i], 3: g[j]})

    table = [None] * (4 * new_t)
    for tet in range(q.t):
        if tet in (tet_a, tet_b):
            continue
        for f in range(4):
            t2, j2, p2 = q.glue[4 * tet + f]
            if t2 not in (tet_a, tet_b):
                table[4 * tet + f] = (t2, j2, p2)

    # Interior walls between the pieces all contain the axis pair (0, 1).
    _write_pair(table, 4 * slot[0] + 2, 4 * slot[1] + 2, {0: 0, 1: 1, 3: 3})
    _write_pair(table, 4 * slot[0] + 3, 4 * slot[2] + 2, {0: 0, 1: 1, 2: 3})
    _write_pair(table, 4 * slot[1] + 3, 4 * slot[2] + 3, {0: 0, 1: 1, 2: 2})

    _relocate_externals(q, ext, table, lambda tet: tet)
    assert all(entry is not None for entry in table)
    return SpineComplex(new_t, table)


def mp_down(q, edge):
    """Contract an order-3 edge class back into two tetrahedra.

    Inverse of :func:`mp_up`: the three tetrahedra around the edge are
    erased and the bipyramid they form is split along its equator
    triangle.  Requires the edge ring to visit three distinct
    tetrahedra, otherwise the move is not a retriangulation.
    """
    rings = q.edge_rings()
    if not 0 <= edge < len(rings):
        raise InapplicableMove(f"no edge class {edge}")
    ring = rings[edge]
    if len(ring) != 3:
        raise InapplicableMove("edge class does not have order 3")
    tets = tuple(w.tet for w in ring)
    if len(set(tets)) != 3:
        raise InapplicableMove("the three wedges do not lie in distinct tetrahedra")

    new_t = q.t - 1
    survivors = sorted(set(range(q.t)) - set(tets))
    old2new = {x: i for i, x in enumerate(survivors)}
    slot_a, slot_b = q.t - 3, q.t - 2

    # Piece r of the ring omits equator vertex r; inside tetrahedron r
    # the other two equator vertices are the enter face (index r + 2)
    # and the exit face (index r + 1), while u maps to one apex and v
    # to the other.
    ext = {}
    for r, w in enumerate(ring):
        lab = {(r + 2) % 3: w.enter_face, (r + 1) % 3: w.exit_face}
        ext[4 * w.tet + w.v] = (4 * slot_a + r, {**lab, 3: w.u})
        ext[4 * w.tet + w.u] = (4 * slot_b + r, {**lab, 3: w.v})

    table = [None] * (4 * new_t)
    for x in survivors:
        nx = old2new[x]
        for f in range(4):
            t2, j2, p2 = q.glue[4 * x + f]
            if t2 not in tets:
                table[4 * nx + f] = (old2new[t2], j2, p2)

    _write_pair(table, 4 * slot_a + 3, 4 * slot_b + 3, {0: 0, 1: 1, 2: 2})

    _relocate_externals(q, ext, table, old2new.__getitem__)
    assert all(entry is not None for entry in table)
    return SpineComplex(new_t, table)


def _relocate_externals(q, ext, table, renumber):
    """Carry the outward gluings of a replaced block onto its successor.

    ``ext`` maps each old outward flag to its new flag plus the vertex
    correspondence from new face labels to old tetrahedron labels;
    ``renumber`` translates surviving old tetrahedron indices.  Old
    flags glued to each other stay glued, each direction written by its
    own pass; gluings toward survivors are written both ways here.
    """
    for old_flag, (new_flag, mu) in ext.items():
        t2, j2, p2 = q.glue[old_flag]
        phi_old = vertex_map(old_flag % 4, j2, p2)
        psi = {v: phi_old[w] for v, w in mu.items()}
        partner = 4 * t2 + j2
        if partner in ext:
            nf2, mu2 = ext[partner]
            inv2 = {w: v for v, w in mu2.items()}
            psi = {v: inv2[w] for v, w in psi.items()}
            table[new_flag] = (nf2 // 4, nf2 % 4, _perm_of(new_flag % 4, nf2 % 4, psi))
        else:
            pp = _perm_of(new_flag % 4, j2, psi)
            nt2 = renumber(t2)
            table[new_flag] = (nt2, j2, pp)
            table[4 * nt2 + j2] = (
                new_flag // 4,
                new_flag % 4,
                perm_index_inverse(new_flag % 4, j2, pp),
            )


def edge_class_at(q, tet, u, v):
    """Index of the edge class through tetrahedron edge (u, v) of ``tet``."""
    pair = {u, v}
    for k, ring in enumerate(q.edge_rings()):
        for w in ring:
            if w.tet == tet and {w.u, w.v} == pair:
                return k
    raise ValueError(f"no edge class at tetrahedron {tet} edge {sorted(pair)}")


def disc_replacement(q, max_face_len=4):
    """Replace short spine faces by the complementary discs of their
    push-offs, returning every valid outcome of the same size.

    For a face of boundary length ``l`` at most ``max_face_len`` the
    push-off of its boundary onto either side crosses one singular edge
    per corner.  Cutting the face out flattens its corner vertices into
    triple lines while the new disc's collar turns each crossing into a
    fresh true vertex, so the tetrahedron count is preserved exactly
    when the boundary meets ``l`` distinct vertices; faces revisiting a
    vertex are skipped because they can only grow the complex.  Results
    failing the closed-spine conditions are dropped.  The list is
    deduplicated and sorted by canonical code.
    """
    out = {}
    for ring in q.edge_rings():
        if len(ring) > max_face_len:
            continue
        for swap in (False, True):
            built = _replace_face(q, ring, swap)
            if built is not None and built.validate()["ok"]:
                out[built.canonical_code()] = built
    return [out[c] for c in sorted(out)]


def _replace_face(q, ring, swap):
    """One push-off side of one face; None when the size would change.

    Corner r of the face sits at a wedge (u, v) of tetrahedron tau_r.
    The push-off side selects a cut germ c and a weld germ d among
    {u, v} (swap picks which).  Removing the face flattens tau_r into a
    triple line joining its c and d germs, the push-off crosses the
    edge at germ c just outside tau_r, and the disc's collar joins
    consecutive crossings.  The crossing tetrahedron's faces are 0
    toward the flattened vertex, 1 away from it along the cut edge, and
    2/3 along the collar toward the previous/next crossing.
    """
    ln = len(ring)
    tets = [w.tet for w in ring]
    if len(set(tets)) != ln:
        return None
    corner = []
    cut = {}
    weld = {}
    for r, w in enumerate(ring):
        c, d = (w.v, w.u) if swap else (w.u, w.v)
        corner.append((w.tet, c, d, w.enter_face, w.exit_face))
        cut[4 * w.tet + c] = r
        weld[w.tet] = r
    base = q.t - ln
    old2new = {x: i for i, x in enumerate(sorted(set(range(q.t)) - set(tets)))}

    def arrive(flag, psi):
        # We stand at the `flag` end of a singular edge segment carrying
        # a map into that face's vertex labels.
        if flag in cut:
            # The crossing sits between us and the flattened vertex.
            r = cut[flag]
            _, _, d, n, x = corner[r]
            fin = {d: 0, n: 2, x: 3}
            return 4 * (base + r) + 1, {v: fin[w] for v, w in psi.items()}
        tet, germ = divmod(flag, 4)
        if tet not in weld:
            return 4 * old2new[tet] + germ, psi
        r = weld[tet]
        _, c, d, n, x = corner[r]
        if germ != d:
            raise AssertionError("walk entered a dissolving seam")
        # Pass straight through the flattened vertex and stop at the
        # crossing that cuts the far pole's edge.
        step = {c: d, n: n, x: x}
        fin = {d: 1, n: 2, x: 3}
        return 4 * (base + r) + 0, {v: fin[step[w]] for v, w in psi.items()}

    def cross(flag, psi):
        t2, j2, p2 = q.glue[flag]
        phi = vertex_map(flag % 4, j2, p2)
        return arrive(4 * t2 + j2, {v: phi[w] for v, w in psi.items()})

    table = [None] * (4 * q.t)
    for x, nx in old2new.items():
        for f in range(4):
            dest, psi = cross(4 * x + f, {v: v for v in FACE_VERTS[f]})
            table[4 * nx + f] = (dest // 4, dest % 4, _perm_of(f, dest % 4, psi))
    for r in range(ln):
        tc, c, d, n, x = corner[r]
        # Port 0: through the flattened vertex, out the weld pole.
        psi = {1: c, 2: n, 3: x}
        dest, psi = cross(4 * tc + d, psi)
        table[4 * (base + r)] = (dest // 4, dest % 4, _perm_of(0, dest % 4, psi))
        # Port 1: outward along the rest of the cut edge.
        psi = {0: d, 2: n, 3: x}
        dest, psi = cross(4 * tc + c, psi)
        table[4 * (base + r) + 1] = (dest // 4, dest % 4, _perm_of(1, dest % 4, psi))
        # Collar of the new disc: next crossing, matched along the seam.
        _write_pair(
            table,
            4 * (base + r) + 3,
            4 * (base + (r + 1) % ln) + 2,
            {0: 0, 1: 1, 2: 3},
        )
    assert all(entry is not None for entry in table)
    return SpineComplex(q.t, table)
