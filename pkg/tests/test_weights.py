import random
from fractions import Fraction

import pytest

from tropchow import fans, linalg, piecewise, weights
from tropchow.piecewise import PiecewisePolynomial, courant_function
from tropchow.weights import (MinkowskiWeight, balanced_weight_rank,
                              fundamental_weight, is_balanced,
                              localization_degree, mw_of_pp, mw_product,
                              mw_to_pp, pl_cap, pushforward_witness)


def _p1():
    return fans.fan_from_max_cones(1, [[(1,)], [(-1,)]])


def _p2():
    return fans.fan_from_max_cones(2, [
        [(1, 0), (0, 1)], [(1, 0), (-1, -1)], [(0, 1), (-1, -1)]])


def _bl_p2():
    return fans.insert_ray(_p2(), (1, 1))


def _phi(fan, ray):
    return courant_function(fan, fan.rays.index(ray))


def test_degree_on_line():
    f = _p1()
    w = mw_of_pp(_phi(f, (1,)), 1)
    assert w.values[()] == 1
    assert localization_degree(_phi(f, (1,)) * _phi(f, (-1,))) == 0


def test_degrees_on_plane():
    f = _p2()
    a, b, c = _phi(f, (1, 0)), _phi(f, (0, 1)), _phi(f, (-1, -1))
    assert localization_degree(a * b) == 1
    assert localization_degree(a * a) == 1
    assert localization_degree(a * c) == 1
    s = a + b + c
    assert localization_degree(s * s) == 9
    # degree ignores parts below the top degree
    assert localization_degree(a * b + s) == 1


def test_hyperplane_weight_is_all_ones():
    f = _p2()
    for ray in f.rays:
        w = mw_of_pp(_phi(f, ray), 1)
        assert all(v == 1 for v in w.values.values())
        assert is_balanced(w)


def test_exceptional_weight():
    bl = _bl_p2()
    w = mw_of_pp(_phi(bl, (1, 1)), 1)
    expect = {(-1, -1): 0, (0, 1): 1, (1, 0): 1, (1, 1): -1}
    for ray, val in expect.items():
        assert w.values[(bl.rays.index(ray),)] == val
    assert is_balanced(w)


def test_fundamental_weight_balanced():
    for fan in (_p1(), _p2(), _bl_p2()):
        w = mw_of_pp(PiecewisePolynomial.constant(fan, 1), 0)
        assert w == fundamental_weight(fan)
        assert is_balanced(w)


def test_unbalanced_detected():
    f = _p2()
    ray = (f.rays.index((1, 0)),)
    w = MinkowskiWeight(f, 1, {ray: 1})
    assert not is_balanced(w)


def test_product_matches_function_product():
    rng = random.Random(41)
    for fan in (_p2(), _bl_p2()):
        phis = [courant_function(fan, i) for i in range(len(fan.rays))]
        for _ in range(8):
            f = phis[rng.randrange(len(phis))]
            g = phis[rng.randrange(len(phis))]
            lhs = mw_of_pp(f * g, 2)
            rhs = mw_product(mw_of_pp(f, 1), mw_of_pp(g, 1))
            assert lhs == rhs, (fan, f, g)


def test_product_with_fundamental_is_identity():
    f = _p2()
    one = fundamental_weight(f)
    h = mw_of_pp(_phi(f, (1, 0)), 1)
    assert mw_product(one, h) == h
    assert mw_product(h, one) == h


def test_corner_locus_of_linear_is_zero():
    f = _p2()
    from tropchow.polynomials import Polynomial
    lin = PiecewisePolynomial.from_polynomial(f, Polynomial.linear([3, -2]))
    out = pl_cap(lin, fundamental_weight(f))
    assert out.is_zero()


def test_corner_locus_matches_weight_of_function():
    for fan in (_p2(), _bl_p2()):
        for ray in fan.rays:
            phi = _phi(fan, ray)
            assert pl_cap(phi, fundamental_weight(fan)) == mw_of_pp(phi, 1)


def test_corner_locus_on_blown_up_plane_chart():
    chart = fans.fan_from_max_cones(2, [[(1, 0), (1, 1)], [(1, 1), (0, 1)]])
    phi = _phi(chart, (1, 1))
    out = pl_cap(phi, fundamental_weight(chart))
    assert out.values[(chart.rays.index((1, 1)),)] == -1
    assert out.values[(chart.rays.index((1, 0)),)] == 1
    assert out.values[(chart.rays.index((0, 1)),)] == 1


def test_witness_roundtrip():
    rng = random.Random(43)
    for fan in (_p2(), _bl_p2()):
        phis = [courant_function(fan, i) for i in range(len(fan.rays))]
        for k in (1, 2):
            for _ in range(4):
                f = PiecewisePolynomial.zero(fan)
                for _ in range(k):
                    g = phis[rng.randrange(len(phis))]
                    coeff = rng.randrange(-3, 4)
                    mono = phis[rng.randrange(len(phis))] if k == 2 else g
                    f = f + (g * mono if k == 2 else g).scale(coeff)
                w = mw_of_pp(f, k)
                assert is_balanced(w)
                back = mw_to_pp(w)
                assert mw_of_pp(back, k) == w


def test_witness_rejects_unbalanced():
    f = _p2()
    ray = (f.rays.index((1, 0)),)
    with pytest.raises(ValueError):
        mw_to_pp(MinkowskiWeight(f, 1, {ray: 1}))


def test_pushforward_along_blowdown():
    coarse = _p2()
    fine = _bl_p2()
    ident = linalg.identity_matrix(2)
    # class pulled back and pushed forward returns to itself
    pulled = piecewise.pp_pullback(fine, ident, _phi(coarse, (1, 0)))
    down = pushforward_witness(fine, pulled, 1, coarse)
    assert down == mw_of_pp(_phi(coarse, (1, 0)), 1)
    # the contracted curve pushes to zero
    exc = _phi(fine, (1, 1))
    assert pushforward_witness(fine, exc, 1, coarse).is_zero()


def test_balanced_ranks():
    p2 = _p2()
    assert [balanced_weight_rank(p2, k) for k in range(3)] == [1, 1, 1]
    bl = _bl_p2()
    assert [balanced_weight_rank(bl, k) for k in range(3)] == [1, 2, 1]
