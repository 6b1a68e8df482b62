from fractions import Fraction

import pytest

from tropchow import fans
from tropchow.piecewise import courant_function
from tropchow.transforms import (BlowupSetup, ToricCycle, cycle_from_class,
                                 fulton_correction, fundamental_cycle,
                                 strict_transform, total_transform,
                                 verify_fulton_identity)
from tropchow.weights import mw_of_pp


def _p2():
    return fans.fan_from_max_cones(2, [
        [(1, 0), (0, 1)], [(1, 0), (-1, -1)], [(0, 1), (-1, -1)]])


def _p1xp1():
    return fans.fan_from_max_cones(2, [
        [(1, 0), (0, 1)], [(0, 1), (-1, 0)],
        [(-1, 0), (0, -1)], [(0, -1), (1, 0)]])


def _ray_cone(fan, *rays):
    return tuple(sorted(fan.rays.index(r) for r in rays))


def _corner_setup(modification=None):
    f = _p2()
    return BlowupSetup(f, _ray_cone(f, (1, 0), (0, 1)), modification)


def test_setup_validation():
    f = _p2()
    with pytest.raises(ValueError):
        BlowupSetup(f, ())
    with pytest.raises(ValueError):
        BlowupSetup(f, (0, 1, 2))
    # a lone ray (1, 2) leaves a non-unimodular cone, which is rejected
    with pytest.raises(ValueError):
        _corner_setup(fans.insert_ray(f, (1, 2)))


def test_working_fan_refines_both():
    setup = _corner_setup()
    assert setup.blowup == fans.insert_ray(setup.base, (1, 1))
    assert setup.refined == setup.blowup
    assert setup.tower() == setup.tower()
    assert len(setup.tower()) == 1


def test_fundamental_transforms():
    setup = _corner_setup()
    v = fundamental_cycle(setup.modification)
    assert strict_transform(v, setup) == fundamental_cycle(setup.refined)
    assert total_transform(v, setup) == fundamental_cycle(setup.refined)
    corr, decomposition = fulton_correction(v, setup)
    assert corr.class_weight.is_zero()
    assert decomposition == ()


def test_line_through_center():
    setup = _corner_setup()
    f = setup.modification
    v = ToricCycle(f, 1, {_ray_cone(f, (1, 0)): 1})
    fine = setup.refined

    strict = strict_transform(v, setup)
    assert strict.coefficients == {_ray_cone(fine, (1, 0)): 1}
    sw = strict.class_weight.values
    assert sw[_ray_cone(fine, (1, 1))] == 1      # meets the new divisor once
    assert sw[_ray_cone(fine, (1, 0))] == 0      # self-pairing drops by one
    assert sw[_ray_cone(fine, (-1, -1))] == 1

    total = total_transform(v, setup)
    assert total.coefficients == {
        _ray_cone(fine, (1, 0)): 1, _ray_cone(fine, (1, 1)): 1}
    tw = total.class_weight.values
    assert tw[_ray_cone(fine, (1, 1))] == 0
    assert tw[_ray_cone(fine, (1, 0))] == 1
    assert tw[_ray_cone(fine, (0, 1))] == 1
    assert tw[_ray_cone(fine, (-1, -1))] == 1


def test_correction_for_line_is_new_divisor():
    setup = _corner_setup()
    f = setup.modification
    v = ToricCycle(f, 1, {_ray_cone(f, (1, 0)): 1})
    corr, decomposition = fulton_correction(v, setup)
    fine = setup.refined
    expected = mw_of_pp(
        courant_function(fine, fine.rays.index((1, 1))), 1)
    assert corr.class_weight == expected
    assert len(decomposition) == 1
    entry = decomposition[0]
    assert entry.new_ray == (1, 1)
    assert entry.stratum_rays == ((1, 0),)
    assert entry.slots == ((1, 0),)
    report = verify_fulton_identity(v, setup)
    assert report.verdict == "verified"


def test_point_at_center():
    setup = _corner_setup()
    f = setup.modification
    v = ToricCycle(f, 2, {_ray_cone(f, (1, 0), (0, 1)): 1})
    total = total_transform(v, setup)
    assert total.class_weight.values[()] == 1
    strict = strict_transform(v, setup)
    assert strict.coefficients == {}
    corr, decomposition = fulton_correction(v, setup)
    assert corr.class_weight.values[()] == 1
    assert [e.slots for e in decomposition] == [((0, 1),)]
    assert verify_fulton_identity(v, setup).verdict == "verified"


def test_cycle_away_from_center():
    setup = _corner_setup()
    f = setup.modification
    away = ToricCycle(f, 2, {_ray_cone(f, (-1, -1), (0, 1)): 1})
    strict = strict_transform(away, setup)
    assert strict.coefficients == {
        _ray_cone(setup.refined, (-1, -1), (0, 1)): 1}
    assert total_transform(away, setup).class_weight == strict.class_weight
    corr, _ = fulton_correction(away, setup)
    assert corr.class_weight.is_zero()


def test_invertible_pullback_needs_no_correction():
    f = _p2()
    blown = fans.insert_ray(f, (1, 1))
    setup = _corner_setup(blown)
    assert setup.refined == blown
    assert setup.tower() == ()
    for v in (fundamental_cycle(blown),
              ToricCycle(blown, 1, {_ray_cone(blown, (1, 1)): 1})):
        report = verify_fulton_identity(v, setup)
        assert report.verdict == "verified"
        assert report.correction.class_weight.is_zero()
        assert report.total.class_weight == report.strict.class_weight


def test_divisor_center_never_corrects():
    f = _p2()
    setup = BlowupSetup(f, _ray_cone(f, (1, 0)))
    assert setup.blowup == f and setup.refined == f
    for cone in [(), _ray_cone(f, (1, 0)), _ray_cone(f, (0, 1)),
                 _ray_cone(f, (1, 0), (0, 1))]:
        v = ToricCycle(f, f.cone_dim(cone), {cone: 1})
        report = verify_fulton_identity(v, setup)
        assert report.verdict == "verified"
        assert report.correction.class_weight.is_zero()


def test_decomposition_sums_to_correction():
    f = _p2()
    wide = fans.insert_ray(fans.insert_ray(f, (-1, 0)), (0, -1))
    setup = _corner_setup(wide)
    assert len(setup.tower()) == 1
    v = ToricCycle(wide, 1, {_ray_cone(wide, (1, 0)): 1,
                             _ray_cone(wide, (-1, 0)): 2})
    corr, decomposition = fulton_correction(v, setup)
    acc = corr.class_weight.scale(0)
    for entry in decomposition:
        acc = acc + entry.weight
    assert acc == corr.class_weight
    assert verify_fulton_identity(v, setup).verdict == "verified"


def test_product_surface_line():
    f = _p1xp1()
    setup = BlowupSetup(f, _ray_cone(f, (1, 0), (0, 1)))
    fine = setup.refined
    v = ToricCycle(f, 1, {_ray_cone(f, (1, 0)): 1})
    corr, _ = fulton_correction(v, setup)
    cw = corr.class_weight.values
    assert cw[_ray_cone(fine, (1, 0))] == 1
    assert cw[_ray_cone(fine, (1, 1))] == -1
    assert cw[_ray_cone(fine, (0, 1))] == 1
    assert cw[_ray_cone(fine, (-1, 0))] == 0
    assert cw[_ray_cone(fine, (0, -1))] == 0
    assert verify_fulton_identity(v, setup).verdict == "verified"


def test_class_representatives_roundtrip():
    f = _p2()
    v = ToricCycle(f, 1, {_ray_cone(f, (1, 0)): 2, _ray_cone(f, (0, 1)): -1})
    again = cycle_from_class(f, v.class_weight)
    assert again.class_weight == v.class_weight
    pt = ToricCycle(f, 2, {_ray_cone(f, (1, 0), (0, 1)): Fraction(3)})
    assert cycle_from_class(f, pt.class_weight).class_weight == pt.class_weight
