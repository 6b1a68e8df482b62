"""Exact text documents for everything the command line touches.

Documents are JSON with a fixed envelope {kind, version, payload}.
Rationals are strings "p/q" in lowest terms with q > 0, or a bare
integer; printing always emits the canonical spelling, so documents
round-trip byte for byte once canonicalised.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .fans import Fan, fan_from_max_cones, validate_fan
from .ideals import MonomialIdeal
from .piecewise import PiecewisePolynomial
from .polynomials import Polynomial
from .transforms import BlowupSetup, ToricCycle
from .tropical import WeightedDualGraph
from .weights import MinkowskiWeight

DOCUMENT_VERSION = 1
KINDS = ("fan", "weight", "pp", "ideal", "graph", "setup", "report")


class DocumentError(ValueError):
    """Malformed input text or payload; commands exit 2 on this."""


@dataclass(frozen=True)
class Document:
    kind: str
    payload: object


def format_rational(x) -> str:
    q = Fraction(x)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def parse_rational(value) -> Fraction:
    if isinstance(value, bool):
        raise DocumentError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise DocumentError(f"not a rational: {value!r}")
    parts = value.split("/")
    try:
        nums = [int(p) for p in parts]
    except ValueError:
        nums = []
    if not 1 <= len(nums) <= 2:
        raise DocumentError(f"not a rational: {value!r}")
    if len(nums) == 2 and nums[1] == 0:
        raise DocumentError(f"zero denominator in rational {value!r}")
    return Fraction(*nums)


def _expect_keys(payload, keys, what):
    if not isinstance(payload, dict):
        raise DocumentError(f"{what} must be an object")
    extra = set(payload) - set(keys)
    if extra:
        raise DocumentError(f"unknown field in {what}: {sorted(extra)}")
    missing = set(keys) - set(payload)
    if missing:
        raise DocumentError(f"missing field in {what}: {sorted(missing)}")


def _int_list(value, what):
    if (not isinstance(value, list) or
            any(not isinstance(x, int) or isinstance(x, bool)
                for x in value)):
        raise DocumentError(f"{what} must be a list of integers")
    return tuple(value)


def parse_document(text: str) -> Document:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise DocumentError(
            f"parse error at line {e.lineno} column {e.colno}: {e.msg}")
    _expect_keys(raw, ("kind", "version", "payload"), "document")
    if raw["kind"] not in KINDS:
        raise DocumentError(f"unknown document kind {raw['kind']!r}")
    if raw["version"] != DOCUMENT_VERSION:
        raise DocumentError(f"unsupported document version {raw['version']!r}")
    return Document(raw["kind"], raw["payload"])


def print_document(doc: Document) -> str:
    body = {"kind": doc.kind, "version": DOCUMENT_VERSION,
            "payload": doc.payload}
    return json.dumps(body, indent=2, sort_keys=True) + "\n"


# fans

def fan_to_payload(fan: Fan):
    cones = [sorted(list(r) for r in fan.cone_rays(c)) for c in fan.max_cones]
    return {"rank": fan.rank, "max_cones": sorted(cones)}


def fan_payload_parts(payload):
    """Structural checks only; the fan axioms are the caller's business."""
    _expect_keys(payload, ("rank", "max_cones"), "fan")
    rank = payload["rank"]
    if not isinstance(rank, int) or rank < 0:
        raise DocumentError("fan rank must be a nonnegative integer")
    cones = payload["max_cones"]
    if not isinstance(cones, list):
        raise DocumentError("max_cones must be a list")
    return rank, [[_int_list(r, "ray") for r in cone] for cone in cones]


def fan_from_payload(payload) -> Fan:
    rank, gens = fan_payload_parts(payload)
    try:
        fan = fan_from_max_cones(rank, gens)
    except ValueError as e:
        raise DocumentError(f"invalid fan: {e}")
    problems = validate_fan(fan)
    if problems:
        raise DocumentError(f"invalid fan: {problems[0]}")
    return fan


def _cone_payload(fan: Fan, cone):
    return sorted(list(fan.rays[i]) for i in cone)


def _cone_from_payload(fan: Fan, rays, what="cone"):
    if not isinstance(rays, list):
        raise DocumentError(f"{what} must be a list of rays")
    idx = []
    for r in rays:
        vec = tuple(_int_list(r, "ray"))
        if vec not in fan.rays:
            raise DocumentError(f"{what} uses a ray {list(vec)} "
                                "that is not in the fan")
        idx.append(fan.rays.index(vec))
    cone = tuple(sorted(idx))
    if cone not in fan.cones:
        raise DocumentError(f"{what} {rays} is not a cone of the fan")
    return cone


# weights

def weight_values_payload(w: MinkowskiWeight):
    return [{"cone": _cone_payload(w.fan, c), "value": format_rational(v)}
            for c, v in sorted(w.values.items()) if v]


def weight_to_payload(w: MinkowskiWeight):
    return {"fan": fan_to_payload(w.fan), "codim": w.codim,
            "values": weight_values_payload(w)}


def weight_from_payload(payload) -> MinkowskiWeight:
    _expect_keys(payload, ("fan", "codim", "values"), "weight")
    fan = fan_from_payload(payload["fan"])
    codim = payload["codim"]
    if not isinstance(codim, int):
        raise DocumentError("codim must be an integer")
    values = {}
    if not isinstance(payload["values"], list):
        raise DocumentError("values must be a list")
    for item in payload["values"]:
        _expect_keys(item, ("cone", "value"), "weight value")
        cone = _cone_from_payload(fan, item["cone"])
        values[cone] = parse_rational(item["value"])
    try:
        return MinkowskiWeight(fan, codim, values)
    except ValueError as e:
        raise DocumentError(f"invalid weight: {e}")


# piecewise polynomials

def _poly_payload(p: Polynomial):
    return [{"exp": list(e), "coeff": format_rational(c)}
            for e, c in sorted(p.terms.items())]


def _poly_from_payload(terms, nvars) -> Polynomial:
    if not isinstance(terms, list):
        raise DocumentError("poly must be a list of terms")
    data = {}
    for item in terms:
        _expect_keys(item, ("exp", "coeff"), "term")
        exp = _int_list(item["exp"], "exp")
        if len(exp) != nvars or any(e < 0 for e in exp):
            raise DocumentError(f"bad exponent {list(exp)}")
        data[exp] = parse_rational(item["coeff"])
    return Polynomial(nvars, data)


def pp_to_payload(pp: PiecewisePolynomial):
    pieces = [{"cone": _cone_payload(pp.fan, c), "poly": _poly_payload(p)}
              for c, p in sorted(pp.pieces.items())]
    return {"fan": fan_to_payload(pp.fan), "pieces": pieces}


def pp_from_payload(payload) -> PiecewisePolynomial:
    _expect_keys(payload, ("fan", "pieces"), "pp")
    fan = fan_from_payload(payload["fan"])
    pieces = {}
    if not isinstance(payload["pieces"], list):
        raise DocumentError("pieces must be a list")
    for item in payload["pieces"]:
        _expect_keys(item, ("cone", "poly"), "piece")
        cone = _cone_from_payload(fan, item["cone"])
        pieces[cone] = _poly_from_payload(item["poly"], fan.rank)
    try:
        return PiecewisePolynomial(fan, pieces)
    except ValueError as e:
        raise DocumentError(f"invalid piecewise polynomial: {e}")


# monomial ideals

def ideal_to_payload(ideal: MonomialIdeal):
    return {"fan": fan_to_payload(ideal.fan),
            "generators": [list(g) for g in ideal.generators]}


def ideal_from_payload(payload) -> MonomialIdeal:
    _expect_keys(payload, ("fan", "generators"), "ideal")
    fan = fan_from_payload(payload["fan"])
    gens = payload["generators"]
    if not isinstance(gens, list):
        raise DocumentError("generators must be a list")
    try:
        return MonomialIdeal(fan, tuple(_int_list(g, "generator")
                                        for g in gens))
    except ValueError as e:
        raise DocumentError(f"invalid ideal: {e}")


# dual graphs

def graph_to_payload(graph: WeightedDualGraph):
    return {"genus": list(graph.genus),
            "edges": sorted(list(e) for e in graph.edges),
            "legs": list(graph.legs)}


def graph_from_payload(payload) -> WeightedDualGraph:
    _expect_keys(payload, ("genus", "edges", "legs"), "graph")
    if not isinstance(payload["edges"], list):
        raise DocumentError("edges must be a list")
    try:
        return WeightedDualGraph(
            _int_list(payload["genus"], "genus"),
            tuple(_int_list(e, "edge") for e in payload["edges"]),
            _int_list(payload["legs"], "legs"))
    except ValueError as e:
        raise DocumentError(f"invalid graph: {e}")


# blowup setups with their test cycle

def cycle_to_payload(cycle: ToricCycle):
    coeffs = [{"cone": _cone_payload(cycle.fan, c),
               "value": format_rational(v)}
              for c, v in sorted(cycle.coefficients.items())]
    klass = [{"cone": _cone_payload(cycle.fan, c),
              "value": format_rational(v)}
             for c, v in sorted(cycle.class_weight.values.items()) if v]
    return {"codim": cycle.codim, "coefficients": coeffs, "class": klass}


def setup_from_payload(payload):
    _expect_keys(payload, ("base", "center", "modification", "cycle"),
                 "setup")
    base = fan_from_payload(payload["base"])
    center = _cone_from_payload(base, payload["center"], "center")
    modification = None
    if payload["modification"] is not None:
        modification = fan_from_payload(payload["modification"])
    try:
        setup = BlowupSetup(base, center, modification)
    except ValueError as e:
        raise DocumentError(f"invalid setup: {e}")
    spec = payload["cycle"]
    _expect_keys(spec, ("codim", "coefficients"), "cycle")
    codim = spec["codim"]
    if not isinstance(codim, int):
        raise DocumentError("cycle codim must be an integer")
    coeffs = {}
    if not isinstance(spec["coefficients"], list):
        raise DocumentError("coefficients must be a list")
    for item in spec["coefficients"]:
        _expect_keys(item, ("cone", "value"), "coefficient")
        cone = _cone_from_payload(setup.modification, item["cone"])
        coeffs[cone] = parse_rational(item["value"])
    try:
        cycle = ToricCycle(setup.modification, codim, coeffs)
    except ValueError as e:
        raise DocumentError(f"invalid cycle: {e}")
    return setup, cycle


def setup_to_payload(setup: BlowupSetup, cycle: ToricCycle):
    return {"base": fan_to_payload(setup.base),
            "center": _cone_payload(setup.base, setup.center),
            "modification": fan_to_payload(setup.modification),
            "cycle": {"codim": cycle.codim,
                      "coefficients": [
                          {"cone": _cone_payload(cycle.fan, c),
                           "value": format_rational(v)}
                          for c, v in sorted(cycle.coefficients.items())]}}


def report_from_payload(payload):
    if not isinstance(payload, dict):
        raise DocumentError("report payload must be an object")
    return payload


def load(path: str) -> Document:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        raise DocumentError(f"cannot read {path}: {e.strerror}")
    return parse_document(text)


def expect_kind(doc: Document, kind: str) -> Document:
    if doc.kind != kind:
        raise DocumentError(f"expected a {kind} document, got {doc.kind}")
    return doc
