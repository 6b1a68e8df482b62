"""Blowups versus cycle transforms, with the correction term that
reconciles them.

A blowup of a complete smooth fan at a smooth cone, together with a
smooth subdivision carrying a cycle, determines three classes on a
common refinement: the pullback (total transform), the coefficient
refinement (strict transform), and a correction assembled from Segre
classes of the center against the cycle and the Chern classes of the
excess bundle. The three satisfy total = strict + correction, and this
module computes each side independently so the identity is a check, not
a definition.

Cycles are carried as integer-combination coefficients on cones whose
dimension equals the codimension of the cycle; the canonical form of a
class is its degree pairing against complementary orbit closures, and
both encodings travel together.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .fans import (Fan, StarFan, fan_from_max_cones, resolve_smooth, star_fan,
                   stellar_subdivision, subdivision_assignment)
from .ideals import MonomialIdeal, segre_class
from .piecewise import (PiecewisePolynomial, courant_function,
                        excess_chern_class, min_refinement, pp_min,
                        pp_pullback, restrict_to_star)
from .weights import (MinkowskiWeight, courant_monomial, localization_degree,
                      mw_of_pp, mw_to_pp)


class ToricCycle:
    """Invariant cycle: coefficients on cones of one dimension, plus the
    derived witness function and degree-encoded class."""

    __slots__ = ("fan", "codim", "coefficients", "witness", "class_weight")

    def __init__(self, fan: Fan, codim: int, coefficients=None):
        if not 0 <= codim <= fan.rank:
            raise ValueError("codimension out of range")
        self.fan = fan
        self.codim = codim
        carriers = set(fan.cones_of_dim(codim))
        vals = {c: Fraction(v) for c, v in dict(coefficients or {}).items()
                if v != 0}
        if set(vals) - carriers:
            raise ValueError("coefficients must sit on cones of the cycle's "
                             "codimension")
        self.coefficients = vals
        w = PiecewisePolynomial.zero(fan)
        for c, v in sorted(vals.items()):
            w = w + courant_monomial(fan, c).scale(v)
        self.witness = w
        self.class_weight = mw_of_pp(w, codim)

    def __eq__(self, other):
        return (isinstance(other, ToricCycle) and self.fan == other.fan
                and self.codim == other.codim
                and self.coefficients == other.coefficients)

    def __repr__(self):
        vals = {c: str(v) for c, v in sorted(self.coefficients.items())}
        return f"ToricCycle(codim={self.codim}, {vals})"


def fundamental_cycle(fan: Fan) -> ToricCycle:
    return ToricCycle(fan, 0, {(): 1})


def cycle_from_class(fan: Fan, weight: MinkowskiWeight) -> ToricCycle:
    """Invariant-cycle representative of a class on a complete smooth fan."""
    k = weight.codim
    carriers = fan.cones_of_dim(k)
    duals = fan.cones_of_dim(fan.rank - k)
    cols = [mw_of_pp(courant_monomial(fan, c), k).values for c in carriers]
    mat = [[cols[j][t] for j in range(len(carriers))] for t in duals]
    sol = linalg.solve(mat, [weight.values[t] for t in duals])
    if sol is None:
        raise ValueError("class has no invariant cycle representative")
    return ToricCycle(fan, k, dict(zip(carriers, sol)))


class BlowupSetup:
    """Blowup of a complete smooth fan at one of its smooth cones, against
    a complete smooth subdivision carrying the cycles of interest.

    The working fan refines both the stellar subdivision at the center and
    the carrier subdivision, finely enough that the order function of the
    center's ideal is conewise linear, and is kept smooth.
    """

    def __init__(self, base: Fan, center, modification: Fan | None = None):
        if not base.is_complete() or not base.is_smooth():
            raise ValueError("base fan must be complete and smooth")
        center = tuple(sorted(center))
        if center not in base.cones or not center:
            raise ValueError("center must be a nonzero cone of the base fan")
        if modification is None:
            modification = base
        if not modification.is_complete() or not modification.is_smooth():
            raise ValueError("carrier fan must be complete and smooth")
        subdivision_assignment(modification, base)
        self.base = base
        self.center = center
        self.modification = modification
        self.blowup = stellar_subdivision(base, center)
        ident = linalg.identity_matrix(base.rank)
        pulled = [pp_pullback(modification, ident, courant_function(base, i))
                  for i in center]
        refined, _ = min_refinement(modification, pulled)
        refined = resolve_smooth(refined)
        subdivision_assignment(refined, self.blowup)
        subdivision_assignment(refined, modification)
        pp_min(refined, [pp_pullback(refined, ident, f) for f in pulled])
        self.refined = refined
        self._steps = None

    def tower(self):
        """Smooth stellar factorization of the working fan over the
        carrier, listed bottom-up."""
        if self._steps is None:
            self._steps = tuple(
                _StellarStep(b, c, r, g)
                for b, c, r, g in _stellar_tower(self.modification,
                                                 self.refined))
        return self._steps


def _stellar_tower(coarse: Fan, fine: Fan):
    """Factor a smooth refinement into stellar subdivisions at smooth
    cones, each new ray the sum of its center's rays; bottom-up list."""
    steps = []
    g = fine
    while set(g.rays) != set(coarse.rays):
        found = None
        for r in sorted(set(g.rays) - set(coarse.rays)):
            ri = g.rays.index(r)
            around = [m for m in g.max_cones if ri in m]
            crays = sorted({g.rays[i] for m in around for i in m} - {r})
            if tuple(sum(x) for x in zip(*crays)) != r:
                continue
            kept = [g.cone_rays(m) for m in g.max_cones if ri not in m]
            cand = fan_from_max_cones(g.rank, kept + [crays])
            key = tuple(sorted(cand.rays.index(v) for v in crays))
            if key not in set(cand.cones) or not cand.is_smooth():
                continue
            if stellar_subdivision(cand, key, r) == g:
                found = (cand, key, r, g)
                break
        if found is None:
            raise ValueError("refinement does not factor into smooth "
                             "stellar subdivisions")
        steps.append(found)
        g = found[0]
    if g != coarse:
        raise ValueError("stellar factorization missed the carrier fan")
    steps.reverse()
    return steps


class _StellarStep:
    """One smooth stellar subdivision, with the star-fan data needed to
    evaluate its correction term."""

    def __init__(self, base: Fan, center, ray, result: Fan):
        self.base = base
        self.center = center
        self.ray = ray
        self.result = result
        self.exc_star = star_fan(result, (result.rays.index(ray),))
        self.cen_star = star_fan(base, center)
        self.pull_matrix = linalg.mat_mul(self.cen_star.proj,
                                          self.exc_star.sect)
        ident = linalg.identity_matrix(base.rank)
        pulled = [pp_pullback(result, ident, courant_function(base, i))
                  for i in center]
        exc = courant_function(result, result.rays.index(ray))
        chern = excess_chern_class(result, pulled, exc, len(center) - 1)
        restricted = restrict_to_star(self.exc_star, chern)
        self.chern_parts = [restricted.homogeneous_component(j)
                            for j in range(len(center))]
        self._tau_cache = {}

    def restricted_dual(self, tau):
        if tau not in self._tau_cache:
            self._tau_cache[tau] = restrict_to_star(
                self.exc_star, courant_monomial(self.result, tau))
        return self._tau_cache[tau]

    def stratum_slots(self, gamma):
        """Pullbacks to the exceptional star of the graded Segre terms of
        the center against one orbit closure, keyed by grading."""
        base = self.base
        if set(self.center) <= set(gamma):
            src = self.cen_star.source_to_cone[gamma]
            w = courant_monomial(self.cen_star.fan, src)
            return {0: pp_pullback(self.exc_star.fan, self.pull_matrix, w)}
        vstar = star_fan(base, gamma)
        nrays = len(vstar.fan.rays)
        gens = []
        for i in self.center:
            if i in gamma:
                continue
            if tuple(sorted(set(gamma) | {i})) not in set(base.cones):
                return {}
            img = tuple(linalg.mat_vec(vstar.proj, base.rays[i]))
            gens.append(tuple(int(r == img) for r in vstar.fan.rays))
        assert all(sum(g) == 1 for g in gens)
        data = segre_class(MonomialIdeal(vstar.fan, gens))
        out = {}
        for k, cert in data.certificates.items():
            if not cert:
                continue
            w = PiecewisePolynomial.zero(self.cen_star.fan)
            for eta, coeff in sorted(cert.items()):
                src = self.cen_star.source_to_cone[vstar.cone_to_source[eta]]
                w = w + courant_monomial(self.cen_star.fan, src).scale(coeff)
            out[k] = pp_pullback(self.exc_star.fan, self.pull_matrix, w)
        return out


@dataclass(frozen=True)
class StratumContribution:
    """One orbit closure's correction share at one tower step."""
    step: int
    new_ray: tuple
    stratum_rays: tuple
    slots: tuple           # (segre grading, excess chern degree) pairs used
    weight: MinkowskiWeight   # on the working fan


@dataclass
class TransformReport:
    total: ToricCycle
    strict: ToricCycle
    correction: ToricCycle
    decomposition: tuple
    verdict: str


def _check_carrier(cycle: ToricCycle, setup: BlowupSetup):
    if cycle.fan != setup.modification:
        raise ValueError("cycle does not live on the setup's carrier fan")


def _refine_coefficients(cycle: ToricCycle, fine: Fan) -> ToricCycle:
    vals = {}
    for cone in fine.cones_of_dim(cycle.codim):
        src = cycle.fan.minimal_cone_containing(fine.relint_point(cone))
        if src is None:
            continue
        # only cones the subdivision leaves intact keep their orbit
        # closure; a properly subdivided cone sits under the collapsed
        # locus, where the proper transform loses its stratum entirely
        if set(cycle.fan.cone_rays(src)) != set(fine.cone_rays(cone)):
            continue
        v = cycle.coefficients.get(src, 0)
        if v:
            vals[cone] = v
    return ToricCycle(fine, cycle.codim, vals)


def strict_transform(cycle: ToricCycle, setup: BlowupSetup) -> ToricCycle:
    """Coefficient refinement: a cone of the working fan keeps the
    coefficient of the matching carrier cone, and drops to 0 wherever
    the carrier cone was subdivided or absorbed into a bigger one."""
    _check_carrier(cycle, setup)
    return _refine_coefficients(cycle, setup.refined)


def total_transform(cycle: ToricCycle, setup: BlowupSetup) -> ToricCycle:
    """Pullback: the witness function reread on the working fan."""
    _check_carrier(cycle, setup)
    fine = setup.refined
    pulled = pp_pullback(fine, linalg.identity_matrix(fine.rank),
                         cycle.witness)
    if cycle.codim == 0:
        return ToricCycle(fine, 0, {(): pulled.evaluate((0,) * fine.rank)})
    if cycle.codim == 1:
        return ToricCycle(fine, 1, {
            (i,): pulled.evaluate(r) for i, r in enumerate(fine.rays)})
    return cycle_from_class(fine, mw_of_pp(pulled, cycle.codim))


def fulton_correction(cycle: ToricCycle, setup: BlowupSetup):
    """Correction term of the blowup formula, telescoped over the stellar
    factorization of the working fan.

    At each step the carried cycle meets the step's center along strata
    whose Segre terms, decorated with excess Chern classes in
    complementary degree, are paired off on the exceptional star; the
    resulting classes are pulled to the working fan and summed. Returns
    the correction cycle and its per-stratum decomposition.
    """
    _check_carrier(cycle, setup)
    fine = setup.refined
    k = cycle.codim
    ident = linalg.identity_matrix(fine.rank)
    total = MinkowskiWeight(fine, k)
    decomposition = []
    current = cycle
    for t, step in enumerate(setup.tower()):
        assert current.fan == step.base
        degree = len(step.center) - 1
        duals = step.result.cones_of_dim(step.result.rank - k)
        for gamma, coeff in sorted(current.coefficients.items()):
            slots = step.stratum_slots(gamma)
            used = tuple((g, degree - g) for g in sorted(slots)
                         if 0 <= degree - g < len(step.chern_parts))
            vals = {}
            for g, j in used:
                part = step.chern_parts[j] * slots[g]
                for tau in duals:
                    v = localization_degree(part * step.restricted_dual(tau))
                    if v:
                        vals[tau] = vals.get(tau, 0) + coeff * v
            piece = MinkowskiWeight(step.result, k, vals)
            if piece.is_zero():
                continue
            pulled = mw_of_pp(
                pp_pullback(fine, ident, mw_to_pp(piece)), k)
            total = total + pulled
            decomposition.append(StratumContribution(
                t, step.ray, tuple(step.base.cone_rays(gamma)), used, pulled))
        current = _refine_coefficients(current, step.result)
    return cycle_from_class(fine, total), tuple(decomposition)


def verify_fulton_identity(cycle: ToricCycle,
                           setup: BlowupSetup) -> TransformReport:
    """Compute all three transforms independently and compare classes."""
    total = total_transform(cycle, setup)
    strict = strict_transform(cycle, setup)
    correction, decomposition = fulton_correction(cycle, setup)
    agree = (total.class_weight - strict.class_weight
             == correction.class_weight)
    return TransformReport(total, strict, correction, decomposition,
                           "verified" if agree else "failed")
