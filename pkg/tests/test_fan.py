import random

import pytest

from generators import flip_fixture, random_smooth_fan
from toricmmp.corpus import (class_polytope, example_fan, octant_fan, projective_space_fan,
                             split_square_cones)
from toricmmp.errors import FanValidationError, NotRefinementError
from toricmmp.fan import (Cone, Fan, check_complete_simplicial, common_refinement, desingularize,
                          dual_fan, host_cone, is_complete, is_simplicial, is_smooth, make_simplicial,
                          parallelepiped_points, refines, star_subdivide, validate_fan)
from toricmmp.polytope import Halfspace, intersect


def test_cone_basics():
    c = Cone([(1, 0, 0), (0, 1, 0), (1, 1, 0)])
    assert c.dim == 2
    assert c.contains((2, 1, 0)) and not c.contains((0, 0, 1))
    assert Cone([(1, 0), (1, 2)]).multiplicity() == 2
    assert not Cone([(1, 0), (-1, 0)]).is_strongly_convex


def test_validation_names_the_offending_pair():
    bad = Fan([(1, 0), (0, 1), (1, 1)], [(0, 1), (0, 2)])
    with pytest.raises(FanValidationError) as err:
        validate_fan(bad)
    assert err.value.pair is not None
    validate_fan(projective_space_fan(2))


def test_completeness():
    assert is_complete(projective_space_fan(3))
    assert is_complete(octant_fan())
    half = Fan([(1, 0), (0, 1), (-1, 0)], [(0, 1), (1, 2)])
    assert not is_complete(half)


def test_dual_fan_of_cube_is_octant_fan():
    hs = [Halfspace(e, -1) for e in [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]]
    assert dual_fan(intersect(hs)) == octant_fan()


def test_star_subdivision_counts():
    F = star_subdivide(octant_fan(), (1, 1, 1))
    assert len(F.cones) == 10 and is_smooth(F)
    G = star_subdivide(octant_fan(), (1, 1, 0))
    assert len(G.cones) == 10 and is_smooth(G)
    check_complete_simplicial(F)
    check_complete_simplicial(G)


def test_example_fans_are_smooth_and_complete():
    for name in ("example-1", "example-2"):
        F = example_fan(name)
        assert len(F.rays) == 14 and len(F.cones) == 24
        assert is_smooth(F) and is_complete(F)
        check_complete_simplicial(F)
        # 3 * cones / 2 walls in dimension three
        assert len(F.wall_map) == 36


def test_make_simplicial_agrees_with_octant_refinement():
    normal = dual_fan(class_polytope([1] * 6 + [2] * 8))
    assert len(normal.cones) == 12 and not is_simplicial(normal)
    tri = make_simplicial(normal)
    assert len(tri.cones) == 24 and is_smooth(tri)
    assert tri == common_refinement(normal, octant_fan())
    assert split_square_cones(normal) == tri


def test_parallelepiped_and_desingularize_2d():
    pts = parallelepiped_points([(1, 0), (1, 3)])
    assert sorted(p for p, _ in pts) == [(1, 1), (1, 2)]
    F = Fan([(1, 0), (1, 3), (-1, -1)], [(0, 1), (1, 2), (2, 0)])
    S = desingularize(F)
    assert is_smooth(S) and refines(S, F)
    assert S.ray_set() >= F.ray_set()


def test_desingularize_3d_quotient():
    # cone over (1,0,0), (0,1,0), (1,1,2) has multiplicity 2
    F = Fan([(1, 0, 0), (0, 1, 0), (1, 1, 2), (-1, -1, -1)],
            [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)])
    validate_fan(F)
    S = desingularize(F)
    assert is_smooth(S) and refines(S, F)
    check_complete_simplicial(S)


def test_refinement_and_host_cone():
    F = octant_fan()
    G = star_subdivide(F, (1, 1, 1))
    assert refines(G, F) and not refines(F, G)
    k = host_cone(F, [(1, 1, 1), (1, 0, 0)])
    assert all(F.cone(k).contains(r) for r in [(1, 1, 1), (1, 0, 0)])
    with pytest.raises(NotRefinementError):
        host_cone(F, [(1, 0, 0), (-1, 0, 0)])


def test_overlap_detected_by_cheap_check():
    F = flip_fixture()
    bad = Fan(F.rays, list(F.cones) + [(0, 2, 3)])
    with pytest.raises(FanValidationError):
        check_complete_simplicial(bad)


@pytest.mark.parametrize("seed", range(10))
def test_random_blowups_stay_valid(seed):
    F = random_smooth_fan(random.Random(seed))
    assert is_smooth(F)
    check_complete_simplicial(F)
    validate_fan(F)
