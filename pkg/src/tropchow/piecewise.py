"""Continuous piecewise polynomial functions on a fan.

A function is stored as one polynomial per top cone, in ambient
coordinates. Continuity along shared faces is checked by evaluating on
the integer grid {sum c_i u_i : c_i >= 0, sum c_i <= degree} spanned by
the face rays; that grid determines a polynomial of bounded degree on the
cone, so agreement there is agreement everywhere on the face.
"""
from __future__ import annotations

from fractions import Fraction

from . import linalg, polyhedra
from .fans import Fan, StarFan, fan_from_max_cones
from .polynomials import Polynomial


def _grid_points(rays, rank, degree):
    pts = []
    def rec(i, budget, acc):
        if i == len(rays):
            pts.append(tuple(acc))
            return
        for c in range(budget + 1):
            nxt = [a + c * b for a, b in zip(acc, rays[i])]
            rec(i + 1, budget - c, nxt)
    rec(0, max(degree, 0), [0] * rank)
    return pts


class PiecewisePolynomial:
    """One polynomial per top cone of a fixed fan."""

    __slots__ = ("fan", "pieces")

    def __init__(self, fan: Fan, pieces):
        if set(pieces) != set(fan.max_cones):
            raise ValueError("pieces must cover exactly the top cones")
        self.fan = fan
        self.pieces = {c: pieces[c] for c in fan.max_cones}

    @classmethod
    def zero(cls, fan: Fan) -> "PiecewisePolynomial":
        return cls(fan, {c: Polynomial.zero(fan.rank) for c in fan.max_cones})

    @classmethod
    def constant(cls, fan: Fan, value) -> "PiecewisePolynomial":
        return cls(fan, {c: Polynomial.constant(fan.rank, value)
                         for c in fan.max_cones})

    @classmethod
    def from_polynomial(cls, fan: Fan, p: Polynomial) -> "PiecewisePolynomial":
        if p.nvars != fan.rank:
            raise ValueError("variable count must match the fan rank")
        return cls(fan, {c: p for c in fan.max_cones})

    def _binary(self, other, op):
        if self.fan != other.fan:
            raise ValueError("functions live on different fans")
        return PiecewisePolynomial(
            self.fan, {c: op(self.pieces[c], other.pieces[c])
                       for c in self.fan.max_cones})

    def __add__(self, other):
        return self._binary(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._binary(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._binary(other, lambda a, b: a * b)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c):
        return PiecewisePolynomial(
            self.fan, {k: p.scale(c) for k, p in self.pieces.items()})

    def truncate(self, max_degree: int):
        return PiecewisePolynomial(
            self.fan, {k: p.truncate(max_degree) for k, p in self.pieces.items()})

    def homogeneous_component(self, k: int):
        return PiecewisePolynomial(
            self.fan, {c: p.homogeneous_component(k)
                       for c, p in self.pieces.items()})

    def max_degree(self) -> int:
        return max((p.degree() for p in self.pieces.values()), default=-1)

    def evaluate(self, point) -> Fraction:
        for c in self.fan.max_cones:
            if self.fan.cone_contains(c, point):
                return self.pieces[c].evaluate(point)
        raise ValueError(f"point {point} is outside the fan support")

    def piece_on(self, cone) -> Polynomial:
        """Piece of some top cone containing the given fan cone."""
        for m in self.fan.max_cones:
            if set(cone) <= set(m):
                return self.pieces[m]
        raise ValueError("cone is not a face of any top cone")

    def is_zero(self) -> bool:
        for c in self.fan.max_cones:
            p = self.pieces[c]
            d = p.degree()
            if d < 0:
                continue
            rays = self.fan.cone_rays(c)
            for pt in _grid_points(rays, self.fan.rank, d):
                if p.evaluate(pt) != 0:
                    return False
        return True

    def __eq__(self, other):
        if not isinstance(other, PiecewisePolynomial):
            return NotImplemented
        if self.fan != other.fan:
            return False
        return (self - other).is_zero()

    def __hash__(self):
        raise TypeError("piecewise polynomials are not hashable")

    def is_continuous(self) -> bool:
        maxes = self.fan.max_cones
        degree = self.max_degree()
        for i in range(len(maxes)):
            for j in range(i + 1, len(maxes)):
                shared = polyhedra.intersect_cones(
                    self.fan.cone_hrep(maxes[i]), self.fan.cone_hrep(maxes[j]),
                    self.fan.rank)
                p, q = self.pieces[maxes[i]], self.pieces[maxes[j]]
                for pt in _grid_points(list(shared), self.fan.rank, degree):
                    if p.evaluate(pt) != q.evaluate(pt):
                        return False
        return True


def courant_function(fan: Fan, ray_index: int) -> PiecewisePolynomial:
    """Conewise linear function taking 1 at one ray and 0 at the others.

    Requires a simplicial fan. On top cones of less than full dimension
    the linear piece is pinned down by least squares, which keeps the
    choice canonical; values on the fan support do not depend on it.
    """
    pieces = {}
    for m in fan.max_cones:
        rays = fan.cone_rays(m)
        if len(rays) != fan.cone_dim(m):
            raise ValueError("fan is not simplicial")
        if ray_index not in m:
            pieces[m] = Polynomial.zero(fan.rank)
            continue
        values = [Fraction(int(i == ray_index)) for i in m]
        pieces[m] = Polynomial.linear(_min_norm_functional(rays, values, fan.rank))
    return PiecewisePolynomial(fan, pieces)


def _min_norm_functional(rays, values, rank):
    """Least-norm linear functional with given values on independent rays."""
    gram = [[sum(a * b for a, b in zip(r, s)) for s in rays] for r in rays]
    w = linalg.solve(gram, values)
    if w is None:
        raise ValueError("rays are dependent")
    return [sum(w[i] * Fraction(rays[i][j]) for i in range(len(rays)))
            for j in range(rank)]


def pp_pullback(source_fan: Fan, matrix, target_pp: PiecewisePolynomial
                ) -> PiecewisePolynomial:
    """Compose a piecewise polynomial with a linear map that maps every
    source cone into some target cone."""
    target = target_pp.fan
    pieces = {}
    for m in source_fan.max_cones:
        images = [linalg.mat_vec(matrix, r) for r in source_fan.cone_rays(m)]
        home = None
        for c in target.max_cones:
            if all(target.cone_contains(c, v) for v in images):
                home = c
                break
        if home is None:
            raise ValueError(f"image of cone {m} lies in no target cone")
        piece = target_pp.pieces[home].compose_linear(matrix)
        if piece.nvars != source_fan.rank:
            # an empty matrix cannot carry its column count
            piece = Polynomial.constant(
                source_fan.rank, piece.terms.get((), Fraction(0)))
        pieces[m] = piece
    return PiecewisePolynomial(source_fan, pieces)


def restrict_to_star(star: StarFan, pp: PiecewisePolynomial
                     ) -> PiecewisePolynomial:
    """Push a function down to the star fan of a cone via the fixed
    integer section of the quotient map."""
    pieces = {}
    for m in star.fan.max_cones:
        src = star.cone_to_source[m]
        pieces[m] = pp.piece_on(src).compose_linear(star.sect)
    return PiecewisePolynomial(star.fan, pieces)


def _linear_coefficients(p: Polynomial, rank: int):
    """Coefficient vector of a homogeneous linear polynomial."""
    if p.degree() > 1 or (0,) * rank in p.terms:
        raise ValueError("function piece is not homogeneous linear")
    out = [Fraction(0)] * rank
    for e, c in p.terms.items():
        out[e.index(1)] = c
    return out


def pp_min(fan: Fan, functions) -> PiecewisePolynomial:
    """Pointwise minimum of conewise linear functions, required to be
    linear on each top cone of the given fan."""
    pieces = {}
    for m in fan.max_cones:
        rays = fan.cone_rays(m)
        linear = [f.pieces[m] for f in functions]
        for p in linear:
            _linear_coefficients(p, fan.rank)
        winner = None
        for j, lj in enumerate(linear):
            if all((li - lj).evaluate(r) >= 0 for li in linear for r in rays):
                winner = lj
                break
        if winner is None:
            raise ValueError(f"minimum is not linear on cone {m}")
        pieces[m] = winner
    return PiecewisePolynomial(fan, pieces)


def min_refinement(fan: Fan, functions):
    """Refine a fan so the pointwise minimum of conewise linear functions
    becomes conewise linear; returns (refined fan, minimum).

    Cells are cut out per top cone by the inequalities l_j <= l_i; cells
    of full dimension in their cone survive, and everything is closed
    over faces and deduplicated.
    """
    pieces = []
    for m in fan.max_cones:
        eqs, ineqs = fan.cone_hrep(m)
        linear = [f.pieces[m] for f in functions]
        for j, lj in enumerate(linear):
            rows = list(ineqs)
            for i, li in enumerate(linear):
                if i == j:
                    continue
                coeffs = _linear_coefficients(li - lj, fan.rank)
                if all(c == 0 for c in coeffs):
                    continue
                rows.append(polyhedra._to_primitive_int(coeffs))
            cell = polyhedra.rays_from_constraints((eqs, tuple(rows)), fan.rank)
            if polyhedra.span_dim(cell) == fan.cone_dim(m):
                pieces.append(cell)
    refined = fan_from_max_cones(fan.rank, pieces)
    out = pp_min(refined, [pp_pullback(refined, linalg.identity_matrix(fan.rank), f)
                           for f in functions])
    return refined, out


def excess_chern_class(fan: Fan, center_functions, exceptional: PiecewisePolynomial,
                       top_degree: int) -> PiecewisePolynomial:
    """Total Chern class of the excess bundle of a blowup.

    center_functions are the divisor functions of the center's rays pulled
    back to the subdivided fan; exceptional must equal their pointwise
    minimum, which is checked.
    """
    if pp_min(fan, center_functions) != exceptional:
        raise ValueError("exceptional function is not the minimum of the "
                         "center functions")
    total = PiecewisePolynomial.constant(fan, 1)
    for f in center_functions:
        total = total * (PiecewisePolynomial.constant(fan, 1) + f)
        total = total.truncate(top_degree)
    geom = PiecewisePolynomial.constant(fan, 1)
    term = PiecewisePolynomial.constant(fan, 1)
    for _ in range(top_degree):
        term = (term * exceptional.scale(-1)).truncate(top_degree)
        geom = geom + term
    return (total * geom).truncate(top_degree)


def pp_space_dimension(fan: Fan, degree: int) -> int:
    """Dimension of the space of continuous piecewise polynomials that are
    homogeneous of the given degree on a complete simplicial fan."""
    basis = pp_space_basis(fan, degree)
    return len(basis)


def _degree_monomials(rank: int, degree: int):
    monos = []
    def rec(i, left, acc):
        if i == rank - 1:
            monos.append(tuple(acc + [left]))
            return
        for c in range(left + 1):
            rec(i + 1, left - c, acc + [c])
    if rank == 0:
        return [()] if degree == 0 else []
    rec(0, degree, [])
    return monos


def pp_space_basis(fan: Fan, degree: int):
    """Basis of homogeneous degree-d continuous piecewise polynomials,
    as coefficient vectors indexed by (top cone, monomial)."""
    monos = _degree_monomials(fan.rank, degree)
    maxes = fan.max_cones
    cols = [(m, e) for m in maxes for e in monos]
    col_index = {c: i for i, c in enumerate(cols)}
    rows = []
    for i in range(len(maxes)):
        for j in range(i + 1, len(maxes)):
            shared = polyhedra.intersect_cones(
                fan.cone_hrep(maxes[i]), fan.cone_hrep(maxes[j]), fan.rank)
            if not shared:
                continue
            for pt in _grid_points(list(shared), fan.rank, degree):
                row = [Fraction(0)] * len(cols)
                for e in monos:
                    val = Fraction(1)
                    for x, k in zip(pt, e):
                        val *= Fraction(x) ** k
                    row[col_index[(maxes[i], e)]] += val
                    row[col_index[(maxes[j], e)]] -= val
                rows.append(row)
    if not rows:
        rows = [[Fraction(0)] * len(cols)]
    return linalg.nullspace(rows)


def pp_from_vector(fan: Fan, degree: int, vector) -> PiecewisePolynomial:
    """Inverse of the coefficient-vector encoding used by pp_space_basis."""
    monos = _degree_monomials(fan.rank, degree)
    maxes = fan.max_cones
    pieces = {}
    idx = 0
    for m in maxes:
        terms = {}
        for e in monos:
            terms[e] = Fraction(vector[idx])
            idx += 1
        pieces[m] = Polynomial(fan.rank, terms)
    return PiecewisePolynomial(fan, pieces)
