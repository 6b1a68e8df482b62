from tropchow import fans


def _projective_plane():
    return fans.fan_from_max_cones(2, [
        [(1, 0), (0, 1)], [(1, 0), (-1, -1)], [(0, 1), (-1, -1)]])


def _square():
    return fans.fan_from_max_cones(2, [
        [(1, 0), (0, 1)], [(0, 1), (-1, 0)],
        [(-1, 0), (0, -1)], [(0, -1), (1, 0)]])


def test_canonical_construction():
    f = _projective_plane()
    assert f.rays == ((-1, -1), (0, 1), (1, 0))
    assert () in f.cones
    assert len(f.cones) == 1 + 3 + 3
    assert len(f.max_cones) == 3
    assert fans.validate_fan(f) == []
    assert f.is_complete()
    assert f.is_smooth()
    # redundant and scaled generators canonicalize away
    g = fans.fan_from_max_cones(2, [
        [(2, 0), (0, 3), (1, 1)], [(1, 0), (-2, -2)], [(0, 2), (-1, -1)]])
    assert g == f


def test_validate_catches_overlap():
    bad = fans.Fan(2, ((0, 1), (1, 0), (1, 1), (1, 2)),
                   ((), (0,), (1,), (2,), (3,), (1, 3), (0, 2)))
    problems = fans.validate_fan(bad)
    assert any("intersection" in p for p in problems)


def test_validate_catches_redundant_generator():
    bad = fans.Fan(2, ((0, 1), (1, 0), (1, 1)), ((), (0,), (1,), (2,), (0, 1, 2)))
    problems = fans.validate_fan(bad)
    assert any("non-extremal" in p for p in problems)


def test_completeness_negative():
    orthant = fans.fan_from_max_cones(2, [[(1, 0), (0, 1)]])
    assert fans.validate_fan(orthant) == []
    assert not orthant.is_complete()


def test_stellar_subdivision():
    f = _projective_plane()
    corner = f.cones[f.cones.index((1, 2))]
    assert set(f.cone_rays(corner)) == {(0, 1), (1, 0)}
    bl = fans.stellar_subdivision(f, corner)
    assert (1, 1) in bl.rays
    assert fans.validate_fan(bl) == []
    assert bl.is_complete() and bl.is_smooth()
    assert len(bl.max_cones) == 4
    # inserting the ray directly gives the same fan
    assert fans.insert_ray(f, (2, 2)) == bl
    assert fans.insert_ray(bl, (1, 1)) is bl


def test_multiplicity_and_resolution():
    f = fans.fan_from_max_cones(2, [[(1, 0), (1, 2)]])
    cone = f.max_cones[0]
    assert f.cone_multiplicity(cone) == 2
    res = fans.resolve_smooth(f)
    assert res.is_smooth()
    assert (1, 1) in res.rays
    assert fans.validate_fan(res) == []

    g = fans.fan_from_max_cones(2, [[(1, 0), (1, 3)]])
    res = fans.resolve_smooth(g)
    assert res.is_smooth()
    assert set(res.rays) == {(1, 0), (1, 1), (1, 2), (1, 3)}

    h = fans.fan_from_max_cones(3, [[(1, 0, 0), (0, 1, 0), (1, 1, 2)]])
    resh = fans.resolve_smooth(h)
    assert resh.is_smooth()
    assert fans.validate_fan(resh) == []


def test_star_fan():
    f = _projective_plane()
    ray_e1 = (f.rays.index((1, 0)),)
    star = fans.star_fan(f, ray_e1)
    assert star.fan.rank == 1
    assert star.fan.is_complete()
    assert len(star.fan.max_cones) == 2
    assert star.cone_to_source[()] == ray_e1
    # projection kills the center and section splits it
    from tropchow import linalg
    assert linalg.mat_vec(star.proj, (1, 0)) == (0,)
    ps = linalg.mat_mul(star.proj, star.sect)
    assert ps == linalg.identity_matrix(1)
    # star at the origin cone is the fan itself
    whole = fans.star_fan(f, ())
    assert whole.fan == f


def test_common_refinement():
    sq = _square()
    d1 = fans.insert_ray(sq, (1, 1))
    d2 = fans.insert_ray(sq, (1, -1))
    ref = fans.common_refinement(d1, d2)
    assert (1, 1) in ref.rays and (1, -1) in ref.rays
    assert fans.validate_fan(ref) == []
    assert ref.is_complete()
    assert len(ref.max_cones) == 6
    # refining with itself changes nothing
    assert fans.common_refinement(sq, sq) == sq


def test_common_refinement_rejects_support_mismatch():
    orthant = fans.fan_from_max_cones(2, [[(1, 0), (0, 1)]])
    try:
        fans.common_refinement(orthant, _projective_plane())
        assert False
    except ValueError:
        pass


def test_subdivision_assignment():
    f = _projective_plane()
    corner = (1, 2)
    bl = fans.stellar_subdivision(f, corner)
    amap = fans.subdivision_assignment(bl, f)
    assert amap[()] == ()
    new_ray = (bl.rays.index((1, 1)),)
    assert amap[new_ray] == corner
    for c in bl.cones:
        assert all(f.cone_contains(amap[c], r) for r in bl.cone_rays(c))
