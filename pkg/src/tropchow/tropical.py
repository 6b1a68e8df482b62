"""Tropical moduli of curves at desk scale.

Stable weighted dual graphs, their moduli cones, the subfan of points
admitting balanced functions with prescribed contact slopes, rubber
combinatorial types, the simplicial refinement by rubber type, and
fiber products of two such subfans over the moduli complex.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg, polyhedra


@dataclass(frozen=True)
class WeightedDualGraph:
    """Connected graph with vertex genera, multi-edges, loops, and
    labelled legs; every vertex satisfies 2h(v) - 2 + val(v) > 0."""

    genus: tuple
    edges: tuple
    legs: tuple

    def __post_init__(self):
        nv = len(self.genus)
        if nv == 0:
            raise ValueError("graph needs at least one vertex")
        if any(h < 0 for h in self.genus):
            raise ValueError("vertex genus must be nonnegative")
        edges = tuple(tuple(sorted(e)) for e in self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "genus", tuple(self.genus))
        object.__setattr__(self, "legs", tuple(self.legs))
        for a, b in edges:
            if not (0 <= a < nv and 0 <= b < nv):
                raise ValueError("edge endpoint out of range")
        if any(not 0 <= v < nv for v in self.legs):
            raise ValueError("leg vertex out of range")
        if not self._connected():
            raise ValueError("graph must be connected")
        for v in range(nv):
            if 2 * self.genus[v] - 2 + self.valence(v) <= 0:
                raise ValueError(f"vertex {v} is unstable")

    def _connected(self) -> bool:
        nv = len(self.genus)
        seen = {0}
        frontier = [0]
        while frontier:
            v = frontier.pop()
            for a, b in self.edges:
                for x, y in ((a, b), (b, a)):
                    if x == v and y not in seen:
                        seen.add(y)
                        frontier.append(y)
        return len(seen) == nv

    @property
    def num_vertices(self) -> int:
        return len(self.genus)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def valence(self, v: int) -> int:
        """Edge-endpoints at v (loops twice) plus incident legs."""
        out = sum((a == v) + (b == v) for a, b in self.edges)
        return out + sum(x == v for x in self.legs)

    @property
    def betti(self) -> int:
        return self.num_edges - self.num_vertices + 1

    @property
    def total_genus(self) -> int:
        return sum(self.genus) + self.betti

    def canonical(self):
        """(canonical graph, vertex relabelling onto it)."""
        best = None
        best_perm = None
        for perm in itertools.permutations(range(self.num_vertices)):
            g = [0] * self.num_vertices
            for v, h in enumerate(self.genus):
                g[perm[v]] = h
            key = (tuple(g),
                   tuple(sorted(tuple(sorted((perm[a], perm[b])))
                                for a, b in self.edges)),
                   tuple(perm[v] for v in self.legs))
            if best is None or key < best:
                best = key
                best_perm = perm
        return WeightedDualGraph(*best), best_perm

    def canonical_key(self):
        graph, _ = self.canonical()
        return (graph.genus, graph.edges, graph.legs)


def enumerate_stable_graphs(g: int, n: int, max_edges=None):
    """All stable weighted dual graphs of genus g with n labelled legs,
    one per isomorphism class, in canonical order."""
    if 2 * g - 2 + n <= 0:
        raise ValueError("no stable graphs: 2g - 2 + n must be positive")
    found = {}
    # the per-vertex surpluses 2h - 2 + val sum to 2g - 2 + n, each >= 1
    for nv in range(1, 2 * g - 2 + n + 1):
        pairs = [(i, j) for i in range(nv) for j in range(i, nv)]
        for genus in itertools.product(range(g + 1), repeat=nv):
            b1 = g - sum(genus)
            if b1 < 0:
                continue
            ne = nv - 1 + b1
            if max_edges is not None and ne > max_edges:
                continue
            for edges in itertools.combinations_with_replacement(pairs, ne):
                for legs in itertools.product(range(nv), repeat=n):
                    try:
                        graph = WeightedDualGraph(genus, edges, legs)
                    except ValueError:
                        continue
                    found.setdefault(graph.canonical_key(), graph)
    return [WeightedDualGraph(*key) for key in sorted(found)]


@dataclass(frozen=True)
class SlopeAssignment:
    """Integer slope per edge, read along the stored (low, high) endpoint
    order, balancing the contact slopes on the legs at every vertex."""

    graph: WeightedDualGraph
    contact: tuple
    slopes: tuple

    def __post_init__(self):
        object.__setattr__(self, "contact", tuple(self.contact))
        object.__setattr__(self, "slopes", tuple(self.slopes))
        if len(self.contact) != len(self.graph.legs):
            raise ValueError("one contact slope per leg is required")
        if len(self.slopes) != self.graph.num_edges:
            raise ValueError("one slope per edge is required")
        for v in range(self.graph.num_vertices):
            if self.outflow(v) != 0:
                raise ValueError(f"slopes do not balance at vertex {v}")

    def outflow(self, v: int):
        """Sum of outgoing slopes at v; loops cancel themselves."""
        total = 0
        for (a, b), m in zip(self.graph.edges, self.slopes):
            if a == v:
                total += m
            if b == v:
                total -= m
        for x, s in zip(self.graph.legs, self.contact):
            if x == v:
                total += s
        return total


def balanced_slopes(graph: WeightedDualGraph, contact, bound: int):
    """Every integer slope assignment with all |slope| <= bound.

    The balancing equations are solved once; their solution set is an
    affine space parametrised by the free edge coordinates, so running
    those over the integer box enumerates exactly the assignments whose
    remaining coordinates come out integral and within the bound.
    """
    contact = tuple(contact)
    if sum(contact) != 0:
        raise ValueError("contact slopes must sum to zero")
    if bound < 0:
        raise ValueError("slope bound must be nonnegative")
    ne = graph.num_edges
    rhs = []
    rows = []
    for v in range(graph.num_vertices):
        row = [0] * ne
        for i, (a, b) in enumerate(graph.edges):
            row[i] = (a == v) - (b == v)
        rows.append(row)
        rhs.append(-sum(s for x, s in zip(graph.legs, contact) if x == v))
    if ne == 0:
        if any(rhs):
            return []
        return [SlopeAssignment(graph, contact, ())]
    part = linalg.solve(rows, rhs)
    if part is None:
        return []
    kernel = linalg.nullspace(rows)
    out = []
    span = range(-bound, bound + 1)
    for coeffs in itertools.product(span, repeat=len(kernel)):
        m = list(part)
        for t, vec in zip(coeffs, kernel):
            for i in range(ne):
                m[i] += t * vec[i]
        if all(abs(x) <= bound and x.denominator == 1 for x in m):
            out.append(SlopeAssignment(
                graph, contact, tuple(int(x) for x in m)))
    out.sort(key=lambda a: a.slopes)
    return out


def _cycle_rows(graph: WeightedDualGraph, slopes):
    """One row per independent cycle: the slope-weighted, orientation-
    signed length functional that a balanced function must annihilate."""
    nv = graph.num_vertices
    parent = {0: None}
    order = [0]
    tree = set()
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for i, (a, b) in enumerate(graph.edges):
            if i in tree or a == b:
                continue
            for x, y in ((a, b), (b, a)):
                if x == v and y not in parent:
                    parent[y] = (v, i, 1 if x == a else -1)
                    tree.add(i)
                    order.append(y)
                    frontier.append(y)
    assert len(order) == nv

    def chain(v):
        # signed tree-edge incidence of the path from the root to v
        out = {}
        while parent[v] is not None:
            up, i, sign = parent[v]
            out[i] = out.get(i, 0) + sign
            v = up
        return out

    rows = []
    for i, (a, b) in enumerate(graph.edges):
        if i in tree:
            continue
        row = [0] * graph.num_edges
        row[i] = slopes[i]
        walk = chain(b)
        for j, s in chain(a).items():
            walk[j] = walk.get(j, 0) - s
        for j, s in walk.items():
            row[j] -= s * slopes[j]
        if any(row):
            rows.append(tuple(row))
    return tuple(rows)


@dataclass(frozen=True)
class DRCone:
    """Edge-length cone of an assignment: the nonnegative orthant cut by
    the cycle conditions, described by its extreme rays."""

    assignment: SlopeAssignment
    equations: tuple
    rays: tuple
    full_support: bool

    @property
    def graph(self) -> WeightedDualGraph:
        return self.assignment.graph

    @property
    def dim(self) -> int:
        return linalg.rank(list(self.rays)) if self.rays else 0

    def contains(self, point) -> bool:
        if any(x < 0 for x in point):
            return False
        return all(sum(c * x for c, x in zip(row, point)) == 0
                   for row in self.equations)

    def relint_point(self):
        ne = self.graph.num_edges
        if not self.rays:
            return tuple(Fraction(0) for _ in range(ne))
        return tuple(Fraction(sum(r[i] for r in self.rays))
                     for i in range(ne))


def dr_cone(graph: WeightedDualGraph, assignment: SlopeAssignment) -> DRCone:
    if assignment.graph != graph:
        raise ValueError("assignment does not belong to this graph")
    ne = graph.num_edges
    equations = _cycle_rows(graph, assignment.slopes)
    if ne == 0:
        return DRCone(assignment, (), (), True)
    ineqs = []
    for i in range(ne):
        row = [0] * ne
        row[i] = 1
        ineqs.append((tuple(row), 0))
    for row in equations:
        ineqs.append((row, 0))
        ineqs.append((tuple(-c for c in row), 0))
    _, rays = polyhedra.polytope_vertices(ineqs, ne)
    full = all(any(r[i] for r in rays) for i in range(ne))
    return DRCone(assignment, equations, tuple(sorted(rays)), full)


@dataclass(frozen=True)
class DRPiece:
    graph: WeightedDualGraph
    bound: int
    cones: tuple


@dataclass(frozen=True)
class DRSubfan:
    genus: int
    num_legs: int
    contact: tuple
    pieces: tuple

    def piece_for(self, graph: WeightedDualGraph) -> DRPiece:
        key = graph.canonical_key()
        for piece in self.pieces:
            if piece.graph.canonical_key() == key:
                return piece
        raise KeyError("graph is not part of this subfan")


def _maximal_cones(cones):
    uniq = []
    seen = set()
    for cone in cones:
        if cone.rays not in seen:
            seen.add(cone.rays)
            uniq.append(cone)
    kept = []
    for cone in uniq:
        inside = any(other.rays != cone.rays and
                     all(other.contains(r) for r in cone.rays)
                     for other in uniq)
        if not inside:
            kept.append(cone)
    return tuple(kept)


def default_bound(contact, num_edges: int) -> int:
    return max(sum(max(s, 0) for s in contact), 1) * num_edges


def dr_subfan(g: int, n: int, contact, bound=None) -> DRSubfan:
    """Per stable graph, the maximal edge-length cones admitting a
    balanced function with the given contact slopes and |slope| <= bound.

    Completeness is always relative to the bound; no finiteness claim
    beyond the box is made.
    """
    contact = tuple(contact)
    if len(contact) != n:
        raise ValueError("one contact slope per leg is required")
    pieces = []
    for graph in enumerate_stable_graphs(g, n):
        b = default_bound(contact, graph.num_edges) if bound is None else bound
        cones = [dr_cone(graph, assignment)
                 for assignment in balanced_slopes(graph, contact, b)]
        pieces.append(DRPiece(graph, b, _maximal_cones(cones)))
    return DRSubfan(g, n, contact, tuple(pieces))


def contract_edge(graph: WeightedDualGraph, e: int):
    """Contract edge e; a loop becomes a unit of genus instead.

    Returns the contracted graph together with the surviving edge
    indices in their inherited order.
    """
    a, b = graph.edges[e]
    kept = [i for i in range(graph.num_edges) if i != e]
    if a == b:
        genus = list(graph.genus)
        genus[a] += 1
        return (WeightedDualGraph(
            tuple(genus), tuple(graph.edges[i] for i in kept), graph.legs),
            kept)

    def relabel(v):
        if v == b:
            return a
        return v - 1 if v > b else v

    genus = [h for v, h in enumerate(graph.genus) if v != b]
    genus[a] += graph.genus[b]
    edges = tuple(tuple(sorted((relabel(x), relabel(y))))
                  for i in kept for x, y in [graph.edges[i]])
    legs = tuple(relabel(v) for v in graph.legs)
    return WeightedDualGraph(tuple(genus), edges, legs), kept


def _transport_to_canonical(graph: WeightedDualGraph, vectors):
    """Rewrite per-edge vectors in the coordinates of the canonical
    representative; parallel edges are matched in stored order, which is
    harmless because swapping them is an automorphism."""
    canon, perm = graph.canonical()
    images = [tuple(sorted((perm[a], perm[b]))) for a, b in graph.edges]
    used = [False] * canon.num_edges
    position = []
    for pair in images:
        for j, target in enumerate(canon.edges):
            if not used[j] and target == pair:
                used[j] = True
                position.append(j)
                break
    out = []
    for vec in vectors:
        moved = [0] * canon.num_edges
        for i, j in enumerate(position):
            moved[j] = vec[i]
        out.append(tuple(moved))
    return canon, out


def verify_face_closure(subfan: DRSubfan):
    """Check each zero-length face of each cone lands inside a cone of
    the contracted graph's piece; returns the list of violations."""
    bad = []
    for piece in subfan.pieces:
        graph = piece.graph
        for cone in piece.cones:
            for e in range(graph.num_edges):
                face = [r for r in cone.rays if r[e] == 0]
                smaller, kept = contract_edge(graph, e)
                projected = [tuple(r[i] for i in kept) for r in face]
                canon, moved = _transport_to_canonical(smaller, projected)
                target = subfan.piece_for(canon)
                if not any(all(c.contains(v) for v in moved)
                           for c in target.cones) and moved:
                    bad.append((graph, cone, e))
    return bad


def _potential_rows(graph: WeightedDualGraph, slopes):
    """Per vertex, the linear functional of the edge lengths giving its
    value under a balanced function normalised to zero at vertex 0."""
    rows = [None] * graph.num_vertices
    rows[0] = tuple([0] * graph.num_edges)
    frontier = [0]
    while frontier:
        v = frontier.pop()
        for i, (a, b) in enumerate(graph.edges):
            if a == b:
                continue
            for x, y, sign in ((a, b, 1), (b, a, -1)):
                if x == v and rows[y] is None:
                    row = list(rows[v])
                    row[i] += sign * slopes[i]
                    rows[y] = tuple(row)
                    frontier.append(y)
    return rows


@dataclass(frozen=True)
class RubberType:
    """Combinatorics of a balanced function at one metric point: the
    level line, the level-subdivided source graph, and its map down.

    Subdivided edges are listed in stored edge order, traversed from the
    lower stored endpoint; crossing vertices are appended after the
    original ones with genus 0.  An edge whose endpoints share a level
    maps to that level's vertex, even if its slope is nonzero and only
    its length vanishes; all others span one consecutive level pair,
    recorded by the lower level.
    """

    graph: WeightedDualGraph
    slopes: tuple
    num_levels: int
    vertex_level: tuple
    pieces: tuple        # (u, v, slope, kind, level) with kind "v" or "e"
    new_vertices: int
    potentials: tuple = field(compare=False)

    @property
    def target_edges(self) -> int:
        return self.num_levels - 1

    @property
    def contracted_free_edges(self) -> int:
        return sum(1 for _, _, m, kind, _ in self.pieces
                   if kind == "v" and m == 0)

    @property
    def expected_dimension(self) -> int:
        return self.contracted_free_edges + self.target_edges


def rubber_type(graph: WeightedDualGraph, assignment: SlopeAssignment,
                lengths) -> RubberType:
    lengths = tuple(Fraction(x) for x in lengths)
    if len(lengths) != graph.num_edges or any(x < 0 for x in lengths):
        raise ValueError("one nonnegative length per edge is required")
    rows = _potential_rows(graph, assignment.slopes)
    pot = [sum(c * x for c, x in zip(row, lengths)) for row in rows]
    for (a, b), m, l in zip(graph.edges, assignment.slopes, lengths):
        if pot[b] - pot[a] != m * l:
            raise ValueError(
                "lengths are inconsistent with the slopes; "
                "the point lies outside the cone")
    levels = sorted(set(pot))
    level_of = {value: i for i, value in enumerate(levels)}
    vertex_level = tuple(level_of[p] for p in pot)
    pieces = []
    next_vertex = graph.num_vertices
    for (a, b), m in zip(graph.edges, assignment.slopes):
        la, lb = vertex_level[a], vertex_level[b]
        if la == lb:
            pieces.append((a, b, m, "v", la))
            continue
        step = 1 if lb > la else -1
        stops = list(range(la, lb + step, step))
        chain = [a]
        for _ in stops[1:-1]:
            chain.append(next_vertex)
            next_vertex += 1
        chain.append(b)
        for u, v, lo in zip(chain, chain[1:], stops):
            pieces.append((u, v, m, "e", min(lo, lo + step)))
    return RubberType(graph, assignment.slopes, len(levels), vertex_level,
                      tuple(pieces), next_vertex - graph.num_vertices,
                      tuple(pot))


@dataclass(frozen=True)
class RubberPiece:
    cone: DRCone
    rays: tuple
    rubber: RubberType
    simplicial: bool
    smooth: bool
    dimension_ok: bool

    @property
    def graph(self) -> WeightedDualGraph:
        return self.cone.graph

    @property
    def dim(self) -> int:
        return linalg.rank(list(self.rays)) if self.rays else 0


def _wall_key(vec):
    g = 0
    for x in vec:
        g = math.gcd(g, abs(x))
    out = tuple(x // g for x in vec)
    for x in out:
        if x:
            return out if x > 0 else tuple(-y for y in out)
    return out


def _region_rays(ineqs, dim):
    _, rays = polyhedra.polytope_vertices(ineqs, dim)
    return tuple(sorted(rays))


def rubber_pieces(cone: DRCone):
    """Split a cone along every hyperplane equating two vertex levels,
    so the level picture is constant on each piece's interior."""
    graph = cone.graph
    ne = graph.num_edges
    if ne == 0:
        rt = rubber_type(graph, cone.assignment, ())
        return (RubberPiece(cone, (), rt, True, True,
                            rt.expected_dimension == 0),)
    base = []
    for i in range(ne):
        row = [0] * ne
        row[i] = 1
        base.append((tuple(row), 0))
    for row in cone.equations:
        base.append((row, 0))
        base.append((tuple(-c for c in row), 0))
    rows = _potential_rows(graph, cone.assignment.slopes)
    walls = set()
    for u in range(graph.num_vertices):
        for v in range(u + 1, graph.num_vertices):
            diff = tuple(a - b for a, b in zip(rows[u], rows[v]))
            if any(diff):
                walls.add(_wall_key(diff))
    regions = [(tuple(base), cone.rays)]
    for wall in sorted(walls):
        anti = tuple(-c for c in wall)
        split = []
        for ineqs, rays in regions:
            upper = ineqs + ((wall, 0),)
            lower = ineqs + ((anti, 0),)
            up_rays = _region_rays(upper, ne)
            if up_rays == rays:
                split.append((upper, rays))
                continue
            low_rays = _region_rays(lower, ne)
            if low_rays == rays:
                split.append((lower, rays))
                continue
            split.append((upper, up_rays))
            split.append((lower, low_rays))
        regions = split
    out = []
    seen = set()
    for _, rays in regions:
        if rays in seen:
            continue
        seen.add(rays)
        point = [Fraction(sum(r[i] for r in rays)) for i in range(ne)]
        rt = rubber_type(graph, cone.assignment, point)
        dim = linalg.rank(list(rays)) if rays else 0
        simplicial = len(rays) == dim
        columns = [tuple(r[i] for r in rays) for i in range(ne)]
        smooth = simplicial and (
            not rays or linalg.lattice_index(columns) == 1)
        out.append(RubberPiece(cone, rays, rt, simplicial, smooth,
                               dim == rt.expected_dimension))
    return tuple(out)


def rubber_subdivision(g: int, n: int, contact, bound=None):
    """The subfan refined until the rubber type is constant on every
    open piece, with simpliciality and dimension verdicts per piece."""
    out = []
    for piece in dr_subfan(g, n, contact, bound).pieces:
        for cone in piece.cones:
            out.extend(rubber_pieces(cone))
    return tuple(out)


@dataclass(frozen=True)
class TCCone:
    graph: WeightedDualGraph
    left: SlopeAssignment
    right: SlopeAssignment
    equations: tuple
    rays: tuple

    def contains(self, point) -> bool:
        if any(x < 0 for x in point):
            return False
        return all(sum(c * x for c, x in zip(row, point)) == 0
                   for row in self.equations)


@dataclass(frozen=True)
class TCPiece:
    graph: WeightedDualGraph
    cones: tuple


@dataclass(frozen=True)
class TCComplex:
    genus: int
    num_legs: int
    contacts: tuple
    pieces: tuple


def tc_fiber_product(a: DRSubfan, b: DRSubfan) -> TCComplex:
    """Cone-wise intersection of two subfans over the shared moduli
    complex: the locus meeting both slope conditions at once."""
    if a.genus != b.genus or a.num_legs != b.num_legs:
        raise ValueError("fiber product needs matching genus and leg count")
    pieces = []
    for left_piece, right_piece in zip(a.pieces, b.pieces):
        assert left_piece.graph == right_piece.graph
        graph = left_piece.graph
        ne = graph.num_edges
        cones = []
        for cl in left_piece.cones:
            for cr in right_piece.cones:
                equations = tuple(dict.fromkeys(cl.equations + cr.equations))
                if ne == 0:
                    cones.append(TCCone(graph, cl.assignment, cr.assignment,
                                        equations, ()))
                    continue
                ineqs = []
                for i in range(ne):
                    row = [0] * ne
                    row[i] = 1
                    ineqs.append((tuple(row), 0))
                for row in equations:
                    ineqs.append((row, 0))
                    ineqs.append((tuple(-c for c in row), 0))
                _, rays = polyhedra.polytope_vertices(ineqs, ne)
                cones.append(TCCone(graph, cl.assignment, cr.assignment,
                                    equations, tuple(sorted(rays))))
        pieces.append(TCPiece(graph, _maximal_cones(cones)))
    return TCComplex(a.genus, a.num_legs, (a.contact, b.contact),
                     tuple(pieces))
