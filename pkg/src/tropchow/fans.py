"""Rational polyhedral fans with exact combinatorics.

A Fan stores primitive ray vectors in lex order and every cone (including
the zero cone) as a sorted tuple of ray indices. Builders canonicalize
arbitrary generator input, so two fans with the same support and cones
compare equal. Subdivision, quotient (star), refinement, and resolution
all return new canonical fans.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from . import linalg, polyhedra

ConeKey = tuple[int, ...]


class Fan:
    """Immutable fan; build through fan_from_max_cones or module helpers."""

    def __init__(self, rank: int, rays, cones):
        self.rank = rank
        self.rays = tuple(tuple(r) for r in rays)
        self.cones = tuple(tuple(c) for c in cones)
        self._hrep: dict[ConeKey, tuple] = {}
        self._dim: dict[ConeKey, int] = {}
        self._max: tuple[ConeKey, ...] | None = None

    # -- basic queries ------------------------------------------------------

    def cone_rays(self, cone: ConeKey):
        return [self.rays[i] for i in cone]

    def cone_dim(self, cone: ConeKey) -> int:
        if cone not in self._dim:
            self._dim[cone] = polyhedra.span_dim(self.cone_rays(cone))
        return self._dim[cone]

    def cone_hrep(self, cone: ConeKey):
        if cone not in self._hrep:
            self._hrep[cone] = polyhedra.cone_constraints(
                self.cone_rays(cone), self.rank)
        return self._hrep[cone]

    def cone_contains(self, cone: ConeKey, point) -> bool:
        return polyhedra.cone_contains(self.cone_hrep(cone), point)

    @property
    def max_cones(self):
        if self._max is None:
            cs = set(self.cones)
            self._max = tuple(c for c in self.cones
                              if not any(set(c) < set(d) for d in cs))
        return self._max

    def cones_of_dim(self, d: int):
        return tuple(c for c in self.cones if self.cone_dim(c) == d)

    def relint_point(self, cone: ConeKey):
        pt = [0] * self.rank
        for i in cone:
            for j, x in enumerate(self.rays[i]):
                pt[j] += x
        return tuple(pt)

    def facets_of(self, cone: ConeKey):
        """Codimension-one faces of a cone, as sorted ray-index tuples."""
        eqs, ineqs = self.cone_hrep(cone)
        out = set()
        for a in ineqs:
            face = tuple(i for i in cone
                         if sum(x * y for x, y in zip(a, self.rays[i])) == 0)
            out.add(face)
        return tuple(sorted(out))

    def minimal_cone_containing(self, point):
        """Smallest fan cone containing the point, or None if outside."""
        best = None
        for c in self.cones:
            if self.cone_contains(c, point):
                if best is None or self.cone_dim(c) < self.cone_dim(best):
                    best = c
        return best

    def supports_point(self, point) -> bool:
        return any(self.cone_contains(c, point) for c in self.max_cones)

    def cone_multiplicity(self, cone: ConeKey):
        """Lattice index of a simplicial cone; None when not simplicial."""
        rays = self.cone_rays(cone)
        if len(rays) != self.cone_dim(cone):
            return None
        if not rays:
            return 1
        mat = [[r[i] for r in rays] for i in range(self.rank)]
        return linalg.lattice_index(mat)

    def is_smooth(self) -> bool:
        return all(self.cone_multiplicity(c) == 1 for c in self.max_cones)

    def is_complete(self) -> bool:
        if self.rank == 0:
            return True
        maxes = self.max_cones
        if not maxes or any(self.cone_dim(c) != self.rank for c in maxes):
            return False
        for ridge in self.cones_of_dim(self.rank - 1):
            touching = [m for m in maxes if set(ridge) <= set(m)
                        and ridge in _faces_as_keys(self, m)]
            if len(touching) != 2:
                return False
        return True

    def __eq__(self, other):
        return (isinstance(other, Fan) and self.rank == other.rank
                and self.rays == other.rays and self.cones == other.cones)

    def __hash__(self):
        return hash((self.rank, self.rays, self.cones))

    def __repr__(self):
        return f"Fan(rank={self.rank}, rays={len(self.rays)}, cones={len(self.cones)})"


def _faces_as_keys(fan: Fan, cone: ConeKey):
    key = ("faces", cone)
    if key not in fan._hrep:
        eqs, ineqs = fan.cone_hrep(cone)
        rays = fan.cone_rays(cone)
        faces = set()
        for k in range(len(ineqs) + 1):
            for sub in combinations(ineqs, k):
                face = tuple(idx for idx, r in zip(cone, rays)
                             if all(sum(a * b for a, b in zip(w, r)) == 0
                                    for w in sub))
                faces.add(face)
        faces.add(())
        fan._hrep[key] = tuple(sorted(faces))
    return fan._hrep[key]


def fan_from_max_cones(rank: int, generator_lists) -> Fan:
    """Build a canonical fan from generator sets of its top cones.

    Generators may be redundant or non-primitive; faces are closed over
    automatically. No fan axioms are checked here; see validate_fan.
    """
    cone_ray_sets = []
    for gens in generator_lists:
        cleaned = [linalg.primitive_vector(g) for g in gens if any(g)]
        if not cleaned:
            cone_ray_sets.append(())
            continue
        hrep = polyhedra.cone_constraints(cleaned, rank)
        cone_ray_sets.append(polyhedra.rays_from_constraints(hrep, rank))
    all_rays = sorted({r for rs in cone_ray_sets for r in rs})
    index = {r: i for i, r in enumerate(all_rays)}
    scratch = Fan(rank, all_rays,
                  sorted({tuple(sorted(index[r] for r in rs))
                          for rs in cone_ray_sets} | {()}))
    cones = set()
    for c in scratch.cones:
        cones.update(_faces_as_keys(scratch, c))
    ordered = sorted(cones, key=lambda c: (polyhedra.span_dim(
        [all_rays[i] for i in c]), c))
    return Fan(rank, all_rays, ordered)


def validate_fan(fan: Fan) -> list[str]:
    """Check fan axioms; returns a list of violations (empty when valid)."""
    problems = []
    for i, r in enumerate(fan.rays):
        if not any(r):
            problems.append(f"ray {i} is zero")
        elif linalg.vector_gcd(r) != 1:
            problems.append(f"ray {i} = {r} is not primitive")
    if list(fan.rays) != sorted(set(fan.rays)):
        problems.append("rays are not sorted and distinct")
    if () not in fan.cones:
        problems.append("zero cone missing")
    cone_set = set(fan.cones)
    for c in fan.cones:
        rays = fan.cone_rays(c)
        try:
            extreme = polyhedra.rays_from_constraints(fan.cone_hrep(c), fan.rank)
        except ValueError:
            problems.append(f"cone {c} contains a line")
            continue
        if set(extreme) != set(rays):
            problems.append(f"cone {c} has non-extremal or missing rays")
            continue
        for f in _faces_as_keys(fan, c):
            if f not in cone_set:
                problems.append(f"face {f} of cone {c} is not in the fan")
    maxes = fan.max_cones
    for a, b in combinations(maxes, 2):
        inter = polyhedra.intersect_cones(
            fan.cone_hrep(a), fan.cone_hrep(b), fan.rank)
        for cone in (a, b):
            mf = _minimal_face_containing_all(fan, cone, inter)
            if mf is None or set(fan.cone_rays(mf)) != set(inter):
                problems.append(
                    f"intersection of {a} and {b} is not a face of {cone}")
                break
    return problems


def _minimal_face_containing_all(fan: Fan, cone: ConeKey, points):
    eqs, ineqs = fan.cone_hrep(cone)
    for p in points:
        if not fan.cone_contains(cone, p):
            return None
    active = [a for a in ineqs
              if all(sum(x * y for x, y in zip(a, p)) == 0 for p in points)]
    return tuple(i for i in cone
                 if all(sum(x * y for x, y in zip(a, fan.rays[i])) == 0
                        for a in active))


# ---------------------------------------------------------------------------
# subdivision

def stellar_subdivision(fan: Fan, cone: ConeKey, new_ray=None) -> Fan:
    """Subdivide at a cone by a ray through its relative interior."""
    if cone not in fan.cones or not cone:
        raise ValueError("stellar center must be a nonzero fan cone")
    ray = (linalg.primitive_vector(fan.relint_point(cone)) if new_ray is None
           else linalg.primitive_vector(new_ray))
    new_max = []
    for m in fan.max_cones:
        if not set(cone) <= set(m):
            new_max.append(fan.cone_rays(m))
            continue
        for f in fan.facets_of(m):
            if set(cone) <= set(f):
                continue
            new_max.append(fan.cone_rays(f) + [ray])
    return fan_from_max_cones(fan.rank, new_max)


def insert_ray(fan: Fan, ray) -> Fan:
    """Refine so that the given direction becomes a fan ray."""
    ray = linalg.primitive_vector(ray)
    if ray in fan.rays:
        return fan
    home = fan.minimal_cone_containing(ray)
    if home is None:
        raise ValueError(f"direction {ray} lies outside the fan support")
    return stellar_subdivision(fan, home, ray)


def common_refinement(fan1: Fan, fan2: Fan) -> Fan:
    """Coarsest fan refining both inputs; they must share their support."""
    if fan1.rank != fan2.rank:
        raise ValueError("rank mismatch")
    pieces = []
    for a in fan1.max_cones:
        for b in fan2.max_cones:
            rays = polyhedra.intersect_cones(
                fan1.cone_hrep(a), fan2.cone_hrep(b), fan1.rank)
            pieces.append(rays)
    refined = fan_from_max_cones(fan1.rank, pieces)
    for coarse in (fan1, fan2):
        msg = _covering_defect(coarse, refined)
        if msg:
            raise ValueError(f"supports differ: {msg}")
    return refined


def _covering_defect(coarse: Fan, fine: Fan):
    """Check that fine tiles every top cone of coarse; None when it does."""
    for m in coarse.max_cones:
        d = coarse.cone_dim(m)
        cells = [c for c in fine.max_cones
                 if fine.cone_dim(c) == d
                 and all(coarse.cone_contains(m, r) for r in fine.cone_rays(c))]
        if not cells:
            return f"cone {m} holds no full-dimensional cell"
        eqs, ineqs = coarse.cone_hrep(m)
        for cell in cells:
            for facet in fine.facets_of(cell):
                pts = fine.cone_rays(facet)
                on_boundary = any(
                    all(sum(x * y for x, y in zip(a, p)) == 0 for p in pts)
                    for a in ineqs)
                if on_boundary:
                    continue
                sharers = [c for c in cells if c != cell
                           and all(fine.cone_contains(c, p) for p in pts)]
                if len(sharers) != 1:
                    return (f"facet {facet} of cell {cell} inside cone {m} "
                            f"is shared by {len(sharers)} cells")
    return None


def subdivision_assignment(fine: Fan, coarse: Fan) -> dict:
    """Map each cone of a refinement to the coarse cone holding its interior."""
    out = {}
    for c in fine.cones:
        pt = fine.relint_point(c)
        target = coarse.minimal_cone_containing(pt)
        if target is None or not all(
                coarse.cone_contains(target, r) for r in fine.cone_rays(c)):
            raise ValueError(f"cone {c} does not refine the target fan")
        out[c] = target
    return out


def resolve_smooth(fan: Fan, max_steps: int = 1000) -> Fan:
    """Refine until every cone is unimodular.

    Simplicial cones of multiplicity m > 1 are split at a parallelotope
    lattice point chosen to have minimal coefficient sum; this strictly
    decreases multiplicities, so the loop terminates.
    """
    current = fan
    for _ in range(max_steps):
        target = None
        for c in sorted(current.max_cones,
                        key=lambda c: (current.cone_dim(c), c)):
            mult = current.cone_multiplicity(c)
            if mult is None or mult > 1:
                target = c
                break
        if target is None:
            return current
        if current.cone_multiplicity(target) is None:
            current = stellar_subdivision(current, target)
            continue
        witness = _parallelotope_point(current, target)
        current = insert_ray(current, witness)
    raise RuntimeError("resolution did not terminate")


def _parallelotope_point(fan: Fan, cone: ConeKey):
    """Nonzero lattice point of the half-open ray parallelotope with the
    smallest coefficient sum (lex tie-break on the ambient vector)."""
    rays = fan.cone_rays(cone)
    d = len(rays)
    span_cols = [[r[i] for r in rays] for i in range(fan.rank)]
    _, sect, sat = linalg.saturation_data(span_cols)
    # coordinates of rays in the saturated lattice of their span
    amat = []
    for j in range(d):
        col = [rays[j][i] for i in range(fan.rank)]
        sol = linalg.solve(sat, col)
        assert sol is not None and all(x.denominator == 1 for x in sol)
        amat.append([int(x) for x in sol])
    a = [[amat[j][i] for j in range(d)] for i in range(d)]
    lo = [sum(min(0, a[i][j]) for j in range(d)) for i in range(d)]
    hi = [sum(max(0, a[i][j]) for j in range(d)) for i in range(d)]
    best = None
    def scan(prefix):
        nonlocal best
        if len(prefix) == d:
            t = linalg.solve(a, prefix)
            if t is None or any(x < 0 or x >= 1 for x in t) or not any(t):
                return
            ambient = tuple(
                sum(sat[i][j] * prefix[j] for j in range(d))
                for i in range(fan.rank))
            key = (sum(t), ambient)
            if best is None or key < best:
                best = key
            return
        i = len(prefix)
        for v in range(lo[i], hi[i] + 1):
            scan(prefix + [v])
    scan([])
    if best is None:
        raise RuntimeError("no parallelotope point found")
    return best[1]


# ---------------------------------------------------------------------------
# quotients

@dataclass
class StarFan:
    """Quotient fan at a cone, with the lattice maps realizing it.

    proj maps the ambient lattice onto the quotient; sect is an integer
    right inverse. cone_to_source maps each quotient cone back to the
    unique fan cone containing the center whose image it is.
    """
    fan: Fan
    center: ConeKey
    proj: list
    sect: list
    cone_to_source: dict = field(default_factory=dict)
    source_to_cone: dict = field(default_factory=dict)


def star_fan(fan: Fan, center: ConeKey) -> StarFan:
    if center not in fan.cones:
        raise ValueError("center is not a fan cone")
    c = fan.cone_dim(center)
    center_rays = fan.cone_rays(center)
    if c:
        cols = [[r[i] for r in center_rays] for i in range(fan.rank)]
        proj, sect, _ = linalg.saturation_data(cols)
    else:
        proj = linalg.identity_matrix(fan.rank)
        sect = linalg.identity_matrix(fan.rank)
    q = fan.rank - c
    sources = [m for m in fan.max_cones if set(center) <= set(m)]
    images = []
    for m in sources:
        img = [linalg.mat_vec(proj, fan.rays[i])
               for i in m if i not in center]
        images.append([v for v in img if any(v)])
    quotient = fan_from_max_cones(q, images)
    star = StarFan(quotient, center, proj, sect)
    for src in fan.cones:
        if not set(center) <= set(src):
            continue
        imgs = set()
        for i in src:
            if i in center:
                continue
            v = linalg.mat_vec(proj, fan.rays[i])
            if any(v):
                imgs.add(linalg.primitive_vector(v))
        key = tuple(sorted(quotient.rays.index(v) for v in imgs))
        if key not in set(quotient.cones):
            raise ValueError(f"image of {src} is not a quotient cone")
        star.cone_to_source[key] = src
        star.source_to_cone[src] = key
    return star
