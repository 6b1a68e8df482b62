"""Balanced weights on fan cones and the intersection calculus on them.

A weight assigns a rational number to every cone of one codimension. The
calculus here stays in the degree encoding: the weight of a cone is the
degree of the class multiplied with that cone's orbit closure. Products
use the displacement rule, degrees use exact localization, and piecewise
polynomial witnesses move classes back and forth.
"""
from __future__ import annotations

from fractions import Fraction
from itertools import combinations_with_replacement

from . import linalg, polyhedra
from .fans import Fan, resolve_smooth
from .piecewise import (PiecewisePolynomial, _min_norm_functional,
                        courant_function, pp_pullback)


class MinkowskiWeight:
    """Rational weight on all cones of one codimension of a fan."""

    __slots__ = ("fan", "codim", "values")

    def __init__(self, fan: Fan, codim: int, values=None):
        if not 0 <= codim <= fan.rank:
            raise ValueError("codimension out of range")
        self.fan = fan
        self.codim = codim
        cones = fan.cones_of_dim(fan.rank - codim)
        vals = dict(values or {})
        unknown = set(vals) - set(cones)
        if unknown:
            raise ValueError(f"values given on non-cones: {sorted(unknown)}")
        self.values = {c: Fraction(vals.get(c, 0)) for c in cones}

    def support_cones(self):
        return tuple(c for c, v in self.values.items() if v != 0)

    def __add__(self, other):
        self._compatible(other)
        return MinkowskiWeight(self.fan, self.codim, {
            c: self.values[c] + other.values[c] for c in self.values})

    def __sub__(self, other):
        self._compatible(other)
        return MinkowskiWeight(self.fan, self.codim, {
            c: self.values[c] - other.values[c] for c in self.values})

    def scale(self, t):
        t = Fraction(t)
        return MinkowskiWeight(self.fan, self.codim,
                               {c: t * v for c, v in self.values.items()})

    def __neg__(self):
        return self.scale(-1)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values.values())

    def _compatible(self, other):
        if self.fan != other.fan or self.codim != other.codim:
            raise ValueError("weights live on different fans or codimensions")

    def __eq__(self, other):
        return (isinstance(other, MinkowskiWeight) and self.fan == other.fan
                and self.codim == other.codim and self.values == other.values)

    def __repr__(self):
        vals = {c: str(v) for c, v in self.values.items() if v != 0}
        return f"MinkowskiWeight(codim={self.codim}, {vals})"


def fundamental_weight(fan: Fan) -> MinkowskiWeight:
    return MinkowskiWeight(fan, 0, {c: 1 for c in fan.cones_of_dim(fan.rank)})


def _quotient_normals(fan: Fan, tau):
    """Projection killing a cone's span plus, per cone covering it in one
    dimension more, the primitive image of the extra rays."""
    rays = fan.cone_rays(tau)
    if rays:
        cols = [[r[i] for r in rays] for i in range(fan.rank)]
        proj, _, _ = linalg.saturation_data(cols)
    else:
        proj = linalg.identity_matrix(fan.rank)
    covers = []
    d = fan.cone_dim(tau)
    for sigma in fan.cones_of_dim(d + 1):
        if not set(tau) <= set(sigma):
            continue
        extra = [i for i in sigma if i not in tau]
        images = set()
        for i in extra:
            v = linalg.mat_vec(proj, fan.rays[i])
            if any(v):
                images.add(linalg.primitive_vector(v))
        if len(images) != 1:
            raise ValueError(f"cone {sigma} is not simplicial over {tau}")
        covers.append((sigma, next(iter(images))))
    return proj, covers


def is_balanced(w: MinkowskiWeight) -> bool:
    fan = w.fan
    if w.codim == fan.rank:
        return True
    for tau in fan.cones_of_dim(fan.rank - w.codim - 1):
        _, covers = _quotient_normals(fan, tau)
        total = None
        for sigma, normal in covers:
            contrib = [w.values[sigma] * x for x in normal]
            total = contrib if total is None else [
                a + b for a, b in zip(total, contrib)]
        if total is not None and any(total):
            return False
    return True


# ---------------------------------------------------------------------------
# localization

def _primes():
    yield from (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113)


def localization_degree(f: PiecewisePolynomial) -> Fraction:
    """Degree of the top homogeneous part of a function on a complete
    simplicial fan, by summing localized contributions at a test point.

    The underlying rational function of the test point is constant, so
    the first two evaluation points with nonvanishing denominators must
    agree; this is asserted.
    """
    fan = f.fan
    n = fan.rank
    if n == 0:
        return f.pieces[()].evaluate(())
    if not fan.is_smooth():
        fine = resolve_smooth(fan)
        return localization_degree(
            pp_pullback(fine, linalg.identity_matrix(n), f))
    top = f.homogeneous_component(n)
    duals = {}
    for m in fan.max_cones:
        if fan.cone_dim(m) != n:
            raise ValueError("fan is not complete")
        rays = fan.cone_rays(m)
        mat = [[r[i] for r in rays] for i in range(n)]
        duals[m] = linalg.invert_unimodular(mat)
    results = []
    for t in _primes():
        point = tuple(t ** i for i in range(n))
        total = Fraction(0)
        valid = True
        for m in fan.max_cones:
            denom = Fraction(1)
            for row in duals[m]:
                val = sum(a * b for a, b in zip(row, point))
                if val == 0:
                    valid = False
                    break
                denom *= val
            if not valid:
                break
            total += top.pieces[m].evaluate(point) / denom
        if not valid:
            continue
        results.append(total)
        if len(results) == 2:
            if results[0] != results[1]:
                raise ArithmeticError("localization gave inconsistent values")
            return results[0]
    raise ArithmeticError("no valid localization points found")


def courant_monomial(fan: Fan, ray_indices) -> PiecewisePolynomial:
    out = PiecewisePolynomial.constant(fan, 1)
    for i in ray_indices:
        out = out * courant_function(fan, i)
    return out


def mw_of_pp(f: PiecewisePolynomial, codim: int) -> MinkowskiWeight:
    """Weight of a degree-k function: at each codimension-k cone, the
    degree of the function multiplied by that cone's ray functions."""
    fan = f.fan
    values = {}
    for tau in fan.cones_of_dim(fan.rank - codim):
        values[tau] = localization_degree(f * courant_monomial(fan, tau))
    return MinkowskiWeight(fan, codim, values)


# ---------------------------------------------------------------------------
# product by displacement

def _generic_vector(fan: Fan):
    """Test vector outside every proper subspace spanned by a cone pair."""
    n = fan.rank
    spans = []
    for a, b in combinations_with_replacement(fan.cones, 2):
        vecs = fan.cone_rays(a) + fan.cone_rays(b)
        if linalg.rank(vecs) < n:
            spans.append(vecs)
    for t in _primes():
        v = tuple(t ** i for i in range(n))
        if all(linalg.rank(vecs + [v]) > linalg.rank(vecs) for vecs in spans):
            return v
    raise ArithmeticError("no generic displacement found")


def _displaced_meets(fan: Fan, sigma1, sigma2, v) -> bool:
    eqs = []
    ineqs = []
    e1, i1 = fan.cone_hrep(sigma1)
    e2, i2 = fan.cone_hrep(sigma2)
    for e in e1:
        eqs.append((e, 0))
    for a in i1:
        ineqs.append((a, 0))
    for e in e2:
        eqs.append((e, sum(x * y for x, y in zip(e, v))))
    for a in i2:
        ineqs.append((a, sum(x * y for x, y in zip(a, v))))
    return polyhedra.fm_feasible(eqs, ineqs, fan.rank)


def _span_sum_index(fan: Fan, sigma1, sigma2):
    """Index of the sum of the two cone lattices in the ambient lattice,
    or None when the spans do not fill the space."""
    merged = [[] for _ in range(fan.rank)]
    for s in (sigma1, sigma2):
        rays = fan.cone_rays(s)
        if not rays:
            continue
        cols = [[r[i] for r in rays] for i in range(fan.rank)]
        _, _, sat = linalg.saturation_data(cols)
        for i in range(fan.rank):
            merged[i].extend(sat[i])
    if not merged or not merged[0] or linalg.rank(merged) < fan.rank:
        return None
    return linalg.lattice_index(merged)


def mw_product(a: MinkowskiWeight, b: MinkowskiWeight) -> MinkowskiWeight:
    """Cup product of two weights by generic displacement."""
    if a.fan != b.fan:
        raise ValueError("weights live on different fans")
    fan = a.fan
    codim = a.codim + b.codim
    if codim > fan.rank:
        raise ValueError("product codimension exceeds the fan rank")
    v = _generic_vector(fan)
    dim_a = fan.rank - a.codim
    dim_b = fan.rank - b.codim
    values = {}
    for tau in fan.cones_of_dim(fan.rank - codim):
        total = Fraction(0)
        for s1 in fan.cones_of_dim(dim_a):
            if not set(tau) <= set(s1) or a.values[s1] == 0:
                continue
            for s2 in fan.cones_of_dim(dim_b):
                if not set(tau) <= set(s2) or b.values[s2] == 0:
                    continue
                idx = _span_sum_index(fan, s1, s2)
                if idx is None:
                    continue
                if not _displaced_meets(fan, s1, s2, v):
                    continue
                total += idx * a.values[s1] * b.values[s2]
        values[tau] = total
    return MinkowskiWeight(fan, codim, values)


# ---------------------------------------------------------------------------
# pushforward along a subdivision

def pushforward_witness(source_fan: Fan, witness: PiecewisePolynomial,
                        codim: int, target_fan: Fan) -> MinkowskiWeight:
    """Weight on the coarse fan of a class given by a witness function on
    a refinement of it."""
    ident = linalg.identity_matrix(target_fan.rank)
    values = {}
    for tau in target_fan.cones_of_dim(target_fan.rank - codim):
        mono = courant_monomial(target_fan, tau)
        pulled = pp_pullback(source_fan, ident, mono)
        values[tau] = localization_degree(witness * pulled)
    return MinkowskiWeight(target_fan, codim, values)


# ---------------------------------------------------------------------------
# corner locus

def _linear_extension_on(fan: Fan, phi: PiecewisePolynomial, tau):
    """Least-norm linear functional agreeing with phi on a cone."""
    rays = fan.cone_rays(tau)
    if not rays:
        return [Fraction(0)] * fan.rank
    piece = phi.piece_on(tau)
    values = [piece.evaluate(r) for r in rays]
    return _min_norm_functional(rays, values, fan.rank)


def pl_cap(phi: PiecewisePolynomial, w: MinkowskiWeight) -> MinkowskiWeight:
    """Corner locus of a conewise linear function against a weight.

    At each cone of one higher codimension the multiplicity is the bend
    of phi weighted by w: the sum of the piece values on lattice normals
    minus the linear extension along the cone applied to their sum.
    """
    fan = w.fan
    if phi.fan != fan:
        raise ValueError("function and weight live on different fans")
    if phi.max_degree() > 1 or any((0,) * fan.rank in p.terms
                                   for p in phi.pieces.values()):
        raise ValueError("corner locus needs conewise linear homogeneous "
                         "pieces")
    values = {}
    for tau in fan.cones_of_dim(fan.rank - w.codim - 1):
        _, covers = _quotient_normals(fan, tau)
        _, sect, _ = _tau_split(fan, tau)
        ext = _linear_extension_on(fan, phi, tau)
        bend = Fraction(0)
        drift = [Fraction(0)] * fan.rank
        for sigma, image in covers:
            z = w.values[sigma]
            if z == 0:
                continue
            lift = linalg.mat_vec(sect, image)
            bend += z * phi.pieces[_max_over(fan, sigma)].evaluate(lift)
            drift = [d + z * x for d, x in zip(drift, lift)]
        bend -= sum(e * x for e, x in zip(ext, drift))
        values[tau] = bend
    return MinkowskiWeight(fan, w.codim + 1, values)


def _tau_split(fan: Fan, tau):
    rays = fan.cone_rays(tau)
    if rays:
        cols = [[r[i] for r in rays] for i in range(fan.rank)]
        return linalg.saturation_data(cols)
    ident = linalg.identity_matrix(fan.rank)
    return ident, ident, []


def _max_over(fan: Fan, cone):
    for m in fan.max_cones:
        if set(cone) <= set(m):
            return m
    raise ValueError("cone is not below any top cone")


# ---------------------------------------------------------------------------
# witnesses for weights

def mw_to_pp(w: MinkowskiWeight) -> PiecewisePolynomial:
    """A piecewise polynomial witness of a balanced weight: a function of
    matching degree whose weight equals the input."""
    fan = w.fan
    k = w.codim
    monomials = sorted({tuple(sorted(c)) for m in fan.max_cones
                        for c in combinations_with_replacement(m, k)})
    columns = []
    for mono in monomials:
        mw = mw_of_pp(courant_monomial(fan, mono), k)
        columns.append([mw.values[tau]
                       for tau in fan.cones_of_dim(fan.rank - k)])
    rhs = [w.values[tau] for tau in fan.cones_of_dim(fan.rank - k)]
    if not columns:
        raise ValueError("no candidate witnesses")
    mat = [[columns[j][i] for j in range(len(columns))]
           for i in range(len(rhs))]
    sol = linalg.solve(mat, rhs)
    if sol is None:
        raise ValueError("weight admits no witness; is it balanced?")
    out = PiecewisePolynomial.zero(fan)
    for c, mono in zip(sol, monomials):
        if c != 0:
            out = out + courant_monomial(fan, mono).scale(c)
    return out


def balanced_weight_rank(fan: Fan, codim: int) -> int:
    """Dimension of the space of balanced weights of one codimension."""
    cones = fan.cones_of_dim(fan.rank - codim)
    index = {c: i for i, c in enumerate(cones)}
    rows = []
    if codim < fan.rank:
        for tau in fan.cones_of_dim(fan.rank - codim - 1):
            _, covers = _quotient_normals(fan, tau)
            if not covers:
                continue
            q = len(covers[0][1])
            for coord in range(q):
                row = [Fraction(0)] * len(cones)
                for sigma, normal in covers:
                    row[index[sigma]] += normal[coord]
                rows.append(row)
    if not rows:
        return len(cones)
    return len(cones) - linalg.rank(rows)
