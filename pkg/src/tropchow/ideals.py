"""Monomial ideals on toric fans: staircases, blowups, Segre classes.

An ideal is a finite set of exponent vectors over the fan's rays, each
one standing for an effective divisor sum. The induced order function is
the minimum of the corresponding divisor functions; making it conewise
linear is exactly the normalized blowup, and Segre classes come out of
the exceptional function by pushing its powers back down.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct

from . import linalg, polyhedra
from .fans import Fan, fan_from_max_cones, resolve_smooth
from .piecewise import (PiecewisePolynomial, courant_function, min_refinement,
                        pp_pullback)
from .weights import (MinkowskiWeight, courant_monomial, localization_degree,
                      mw_of_pp, pushforward_witness)


@dataclass(frozen=True)
class MonomialIdeal:
    """Minimal generator exponents indexed against the fan's ray order."""
    fan: Fan
    generators: tuple

    def __post_init__(self):
        if not self.fan.is_smooth():
            raise ValueError("monomial ideals need a smooth fan")
        gens = {tuple(int(x) for x in g) for g in self.generators}
        if not gens:
            raise ValueError("ideal needs at least one generator")
        for g in gens:
            if len(g) != len(self.fan.rays):
                raise ValueError("generator arity must match the ray count")
            if any(x < 0 for x in g):
                raise ValueError("exponents must be nonnegative")
        minimal = {g for g in gens
                   if not any(h != g and all(a <= b for a, b in zip(h, g))
                              for h in gens)}
        object.__setattr__(self, "generators", tuple(sorted(minimal)))

    def divisor_function(self, g) -> PiecewisePolynomial:
        out = PiecewisePolynomial.zero(self.fan)
        for i, a in enumerate(g):
            if a:
                out = out + courant_function(self.fan, i).scale(a)
        return out

    def support_cones(self):
        """Cones whose orbit closures lie in the vanishing locus."""
        out = []
        for c in self.fan.cones:
            if all(any(g[i] > 0 for i in c) for g in self.generators):
                out.append(c)
        return tuple(out)


@dataclass(frozen=True)
class NewtonRegion:
    """Staircase data of exponent points: the hull of their translated
    orthants and the region left under it."""
    ambient: int
    generators: tuple
    facets: tuple              # rows (a, b) meaning a.x >= b on the hull
    bounded: bool
    volume: Fraction | None    # of the region under the staircase
    lattice_points: tuple | None   # integer points strictly under the hull


def newton_region(points) -> NewtonRegion:
    pts = {tuple(int(x) for x in p) for p in points}
    if not pts:
        raise ValueError("need at least one point")
    n = len(next(iter(pts)))
    if any(len(p) != n or min(p) < 0 for p in pts):
        raise ValueError("points must be nonnegative and of equal length")
    minimal = tuple(sorted(
        p for p in pts
        if not any(q != p and all(a <= b for a, b in zip(q, p)) for q in pts)))
    hom = [p + (1,) for p in minimal]
    hom += [tuple(int(j == i) for j in range(n)) + (0,) for i in range(n)]
    _, cone_ineqs = polyhedra.cone_constraints(hom, n + 1)
    facets = tuple(sorted((row[:-1], -row[-1]) for row in cone_ineqs
                          if any(row[:-1])))
    bounded = all(any(all(x == 0 for j, x in enumerate(p) if j != i)
                      for p in minimal) for i in range(n))
    volume = None
    lattice = None
    if bounded:
        big = max(x for p in minimal for x in p)
        box = []
        for i in range(n):
            e = tuple(int(j == i) for j in range(n))
            box.append((e, 0))
            box.append((tuple(-x for x in e), -big))
        verts, rays = polyhedra.polytope_vertices(list(facets) + box, n)
        assert not rays
        hull_vol = polyhedra.polytope_volume(verts) if verts else Fraction(0)
        volume = Fraction(big) ** n - hull_vol
        lattice = tuple(sorted(
            q for q in iproduct(range(big + 1), repeat=n)
            if not all(sum(a * x for a, x in zip(row, q)) >= b
                       for row, b in facets)))
    return NewtonRegion(n, minimal, facets, bounded, volume, lattice)


def order_function(ideal: MonomialIdeal):
    """Minimum of the generator divisor functions, on the coarsest
    refinement where it is conewise linear (the normalized blowup fan)."""
    functions = [ideal.divisor_function(g) for g in ideal.generators]
    return min_refinement(ideal.fan, functions)


def exceptional_class(ideal: MonomialIdeal) -> PiecewisePolynomial:
    """The exceptional divisor function on the normalized blowup fan,
    expanded over that fan's ray functions."""
    blow_fan, ordf = order_function(ideal)
    for m in blow_fan.max_cones:
        if len(m) != blow_fan.cone_dim(m):
            raise ValueError(
                "normalized blowup fan is not simplicial; refine the ideal's "
                "fan by stellar subdivisions and retry")
    out = PiecewisePolynomial.zero(blow_fan)
    for i, r in enumerate(blow_fan.rays):
        v = ordf.evaluate(r)
        if v:
            out = out + courant_function(blow_fan, i).scale(v)
    return out


@dataclass
class SegreData:
    """Graded Segre weights on the ambient fan with, per codimension, a
    cycle representative supported on the vanishing locus."""
    fan: Fan
    pieces: dict = field(default_factory=dict)
    certificates: dict = field(default_factory=dict)


def _expand_on(fan: Fan, ordf_src: PiecewisePolynomial) -> PiecewisePolynomial:
    pulled = pp_pullback(fan, linalg.identity_matrix(fan.rank), ordf_src)
    out = PiecewisePolynomial.zero(fan)
    for i, r in enumerate(fan.rays):
        v = pulled.evaluate(r)
        if v:
            out = out + courant_function(fan, i).scale(v)
    if out != pulled:
        raise AssertionError("order function failed to expand over rays")
    return out


def segre_class(ideal: MonomialIdeal) -> SegreData:
    """Graded Segre class of the subscheme cut out by a monomial ideal,
    through the normalized blowup: alternating pushforwards of powers of
    the exceptional function."""
    ambient = ideal.fan
    if not ambient.is_complete():
        raise ValueError("ambient fan must be complete")
    blow_fan, ordf = order_function(ideal)
    blow_fan = resolve_smooth(blow_fan)
    exc = _expand_on(blow_fan, ordf)
    data = SegreData(ambient)
    power = PiecewisePolynomial.constant(blow_fan, 1)
    sign = 1
    for k in range(1, ambient.rank + 1):
        power = power * exc
        piece = pushforward_witness(blow_fan, power, k, ambient).scale(sign)
        sign = -sign
        data.pieces[k] = piece
        data.certificates[k] = _support_certificate(ideal, piece, k)
    return data


def _support_certificate(ideal: MonomialIdeal, piece: MinkowskiWeight, k: int):
    """Coefficients on vanishing-locus cones whose cycle class matches the
    given weight; raises when no such representative exists."""
    ambient = ideal.fan
    support = [c for c in ideal.support_cones() if ambient.cone_dim(c) == k]
    if not support:
        if piece.is_zero():
            return {}
        raise AssertionError("nonzero weight with empty support candidates")
    taus = ambient.cones_of_dim(ambient.rank - k)
    cols = []
    for c in support:
        w = mw_of_pp(courant_monomial(ambient, c), k)
        cols.append([w.values[t] for t in taus])
    mat = [[cols[j][i] for j in range(len(cols))] for i in range(len(taus))]
    rhs = [piece.values[t] for t in taus]
    sol = linalg.solve(mat, rhs)
    if sol is None:
        raise AssertionError("weight is not supported on the vanishing locus")
    return {c: v for c, v in zip(support, sol) if v != 0}


def pullback_ideal(ideal: MonomialIdeal, fine_fan: Fan) -> MonomialIdeal:
    """Transport an ideal to a refinement of its fan: each generator's
    divisor function is reread off the finer rays."""
    gens = []
    for g in ideal.generators:
        f = ideal.divisor_function(g)
        vals = []
        for r in fine_fan.rays:
            v = f.evaluate(r)
            if v.denominator != 1 or v < 0:
                raise ValueError("ideal does not transport integrally")
            vals.append(int(v))
        gens.append(tuple(vals))
    return MonomialIdeal(fine_fan, tuple(gens))
