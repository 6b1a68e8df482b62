"""Exact polyhedral primitives: cones, feasibility, polytope volume.

Cones are handled in two representations. Generator form is a list of
integer vectors; constraint form is a pair (equalities, inequalities) of
primitive integer functionals, with equalities cutting out the linear span
and inequalities the facets within it. Conversions in both directions go
through brute-force subset enumeration, which is exact and fast at the
dimensions that appear here (at most four or five).
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations
from math import gcd, lcm

from . import linalg


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


def _to_primitive_int(v):
    """Scale a rational vector to a primitive integer vector."""
    den = lcm(*(Fraction(x).denominator for x in v)) if v else 1
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g == 0:
        raise ValueError("zero vector")
    return tuple(x // g for x in ints)


def span_dim(vectors) -> int:
    vecs = [v for v in vectors if any(v)]
    return linalg.rank(vecs) if vecs else 0


def cone_constraints(generators, ambient_dim: int):
    """Constraint form of the cone spanned by integer generators.

    Returns:
        (equalities, inequalities): sorted tuples of primitive integer
        functionals. Equalities vanish on the cone; inequalities are
        nonnegative on it and supporting within its span.
    """
    gens = [tuple(g) for g in generators if any(g)]
    eqs = []
    for w in linalg.nullspace(gens if gens else [[0] * ambient_dim]):
        eqs.append(_to_primitive_int(w))
    if not gens:
        eqs = [tuple(1 if j == i else 0 for j in range(ambient_dim))
               for i in range(ambient_dim)]
        return tuple(sorted(eqs)), ()
    d = linalg.rank(gens)
    basis = _independent_subset(gens, d)
    ineqs = set()
    for subset in combinations(range(len(gens)), d - 1):
        sub = [gens[i] for i in subset]
        # seek the normal inside the span itself: w = sum t_i b_i with
        # w.s = 0 for the chosen generators, unique up to scale
        gram = [[_dot(b, s) for b in basis] for s in sub]
        ns = linalg.nullspace(gram if gram else [[0] * d])
        if len(ns) != 1:
            continue
        t = ns[0]
        w = tuple(sum(t[i] * Fraction(basis[i][j]) for i in range(d))
                  for j in range(ambient_dim))
        pos = any(_dot(w, g) > 0 for g in gens)
        neg = any(_dot(w, g) < 0 for g in gens)
        if pos and neg:
            continue
        if neg:
            w = tuple(-x for x in w)
        ineqs.add(_to_primitive_int(w))
    return tuple(sorted(eqs)), tuple(sorted(ineqs))


def _independent_subset(vectors, target_rank):
    out = []
    for v in vectors:
        if linalg.rank(out + [v]) > len(out):
            out.append(v)
            if len(out) == target_rank:
                break
    return out


def cone_contains(constraints, point) -> bool:
    eqs, ineqs = constraints
    return (all(_dot(e, point) == 0 for e in eqs)
            and all(_dot(a, point) >= 0 for a in ineqs))


def rays_from_constraints(constraints, ambient_dim: int):
    """Extreme rays of the pointed cone {x : Ex = 0, Ax >= 0}.

    Raises ValueError when the cone contains a line.
    """
    eqs, ineqs = constraints
    basis = linalg.nullspace(eqs) if eqs else [
        tuple(Fraction(int(i == j)) for j in range(ambient_dim))
        for i in range(ambient_dim)]
    d = len(basis)
    if d == 0:
        return ()
    reduced = [[_dot(a, b) for b in basis] for a in ineqs]
    if linalg.rank(reduced) < d:
        raise ValueError("cone contains a line")
    rays = set()
    for subset in combinations(range(len(reduced)), d - 1):
        sub = [reduced[i] for i in subset]
        ns = linalg.nullspace(sub if sub else [[Fraction(0)] * d])
        if len(ns) != 1:
            continue
        y = ns[0]
        x = tuple(sum(y[i] * basis[i][j] for i in range(d))
                  for j in range(ambient_dim))
        if all(_dot(a, x) >= 0 for a in ineqs):
            rays.add(_to_primitive_int(x))
        elif all(_dot(a, x) <= 0 for a in ineqs):
            rays.add(_to_primitive_int([-t for t in x]))
    return tuple(sorted(rays))


def intersect_cones(c1, c2, ambient_dim: int):
    """Extreme rays of the intersection of two cones in constraint form."""
    eqs = tuple(sorted(set(c1[0]) | set(c2[0])))
    ineqs = tuple(sorted(set(c1[1]) | set(c2[1])))
    return rays_from_constraints((eqs, ineqs), ambient_dim)


# ---------------------------------------------------------------------------
# affine feasibility

def fm_feasible(equalities, inequalities, nvars: int) -> bool:
    """Exact feasibility of {x : Ex = e, Ax >= b} by variable elimination.

    Rows are (coefficients, rhs) pairs with rational entries.
    """
    eqs = [([Fraction(c) for c in a], Fraction(b)) for a, b in equalities]
    ineqs = [([Fraction(c) for c in a], Fraction(b)) for a, b in inequalities]
    live = list(range(nvars))
    while eqs:
        a, b = eqs.pop()
        j = next((k for k in live if a[k] != 0), None)
        if j is None:
            if b != 0:
                return False
            continue
        piv = a[j]
        for rows in (eqs, ineqs):
            for idx, (c, d0) in enumerate(rows):
                if c[j] == 0:
                    continue
                f = c[j] / piv
                newc = [c[k] - f * a[k] for k in range(nvars)]
                newc[j] = Fraction(0)
                rows[idx] = (newc, d0 - f * b)
        live.remove(j)
    for j in live:
        lowers = [r for r in ineqs if r[0][j] > 0]
        uppers = [r for r in ineqs if r[0][j] < 0]
        rest = [r for r in ineqs if r[0][j] == 0]
        for (ap, bp) in lowers:
            for (aq, bq) in uppers:
                coef = [-aq[j] * ap[k] + ap[j] * aq[k] for k in range(nvars)]
                rest.append((coef, -aq[j] * bp + ap[j] * bq))
        ineqs = rest
    return all(b <= 0 for _, b in ineqs)


# ---------------------------------------------------------------------------
# polytopes

def polytope_vertices(inequalities, dim: int):
    """Vertices and recession rays of {x : a.x >= b for (a, b) given}.

    The recession cone must be pointed. Returns (vertices, rays) with
    vertices as Fraction tuples and rays as primitive integer tuples.
    """
    hom = [tuple(a) + (-Fraction(b),) for a, b in inequalities]
    hom.append((0,) * dim + (1,))
    gens = rays_from_constraints(((), tuple(hom)), dim + 1)
    verts = []
    rays = []
    for g in gens:
        if g[-1] == 0:
            rays.append(g[:-1])
        else:
            verts.append(tuple(Fraction(x, g[-1]) for x in g[:-1]))
    return sorted(verts), sorted(rays)


def _affine_coords(points):
    """Coordinates of points within their affine hull; returns (coords, rank)."""
    p0 = points[0]
    diffs = [tuple(Fraction(a) - Fraction(b) for a, b in zip(p, p0))
             for p in points[1:]]
    basis = _independent_subset([d for d in diffs if any(d)], len(p0))
    k = len(basis)
    coords = []
    for p in points:
        diff = [Fraction(a) - Fraction(b) for a, b in zip(p, p0)]
        if k == 0:
            coords.append(())
            continue
        sol = linalg.solve([list(col) for col in zip(*basis)], diff)
        coords.append(tuple(sol))
    return coords, k


def _triangulate(points):
    """Simplices (as point lists) triangulating the convex hull."""
    pts = sorted(set(tuple(Fraction(x) for x in p) for p in points))
    coords, k = _affine_coords(pts)
    if k == 0:
        return [[pts[0]]]
    if k == 1:
        order = sorted(range(len(pts)), key=lambda i: coords[i])
        return [[pts[order[0]], pts[order[-1]]]]
    apex = pts[0]
    apex_c = coords[0]
    simplices = []
    seen = set()
    for subset in combinations(range(len(pts)), k):
        sub = [coords[i] for i in subset]
        base = sub[0]
        rel = [[x - y for x, y in zip(s, base)] for s in sub[1:]]
        ns = linalg.nullspace(rel if rel else [[Fraction(0)] * k])
        if len(ns) != 1:
            continue
        a = ns[0]
        b = _dot(a, base)
        vals = [_dot(a, c) - b for c in coords]
        if any(v > 0 for v in vals) and any(v < 0 for v in vals):
            continue
        if any(v < 0 for v in vals):
            a = tuple(-x for x in a)
            b = -b
        key = _to_primitive_int(tuple(a) + (b,))
        if key in seen:
            continue
        seen.add(key)
        if _dot(a, apex_c) == b:
            continue
        facet_pts = [pts[i] for i, v in enumerate(vals) if v == 0]
        for s in _triangulate(facet_pts):
            simplices.append([apex] + s)
    return simplices


def polytope_volume(points) -> Fraction:
    """Exact euclidean volume of the convex hull of full-dimensional points.

    Returns 0 when the hull is lower-dimensional.
    """
    if not points:
        return Fraction(0)
    d = len(points[0])
    _, k = _affine_coords([tuple(Fraction(x) for x in p) for p in points])
    if k < d:
        return Fraction(0)
    fact = 1
    for i in range(1, d + 1):
        fact *= i
    total = Fraction(0)
    for simplex in _triangulate(points):
        base = simplex[0]
        mat = [[p[i] - base[i] for i in range(d)] for p in simplex[1:]]
        total += abs(linalg.det(mat))
    return total / fact
