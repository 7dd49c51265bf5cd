import random
from fractions import Fraction

import pytest

import toricmmp.puffing as puffing
from generators import random_ample_pair
from toricmmp.corpus import example_pair, projective_space_fan
from toricmmp.divisors import DivisorClassOfX, adjoint_support, box_of, nef_certificate
from toricmmp.errors import ClaimFailure, EmptyAdjointPolytope
from toricmmp.fan import Fan, is_smooth
from toricmmp.polytope import count_lattice_points, scale
from toricmmp.puffing import (construct_minimal_model, contributing_halfspaces,
                              puffed_polytope, sample_epsilon_in_chamber)

AXES = {(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)}


def test_contributing_half_spaces_example_one():
    fan, X = example_pair("example-1")
    hs = contributing_halfspaces(adjoint_support(X))
    assert {(H.normal, H.level) for H in hs} == {(a, 0) for a in AXES}


def test_contributing_half_spaces_example_two():
    fan, X = example_pair("example-2")
    hs = contributing_halfspaces(adjoint_support(X))
    expected = {((1, 0, 0), -1), ((-1, 0, 0), -1)} | {(a, 0) for a in AXES if a[0] == 0}
    assert {(H.normal, H.level) for H in hs} == expected


def test_puffed_polytope_is_a_hexahedron():
    fan, X = example_pair("example-1")
    h = adjoint_support(X)
    eps, cert = sample_epsilon_in_chamber(h, seed=7)
    P = puffed_polytope(h, eps)
    assert len(P.facet_indices()) == 6 and len(P.vertices) == 8
    assert cert.valid and len(set(eps.values)) == 6
    assert all(0 < e for e in eps.values)


def test_puffed_polytope_rejects_bad_epsilon():
    fan, X = example_pair("example-1")
    h = adjoint_support(X)
    with pytest.raises(ValueError):
        puffed_polytope(h, [Fraction(1, 10)] * 5)
    with pytest.raises(ValueError):
        puffed_polytope(h, [Fraction(1, 10)] * 5 + [0])


def test_example_one_minimal_model():
    fan, X = example_pair("example-1")
    r = construct_minimal_model(fan, X, seed=0)
    assert r.sigma.ray_set() == AXES
    assert len(r.sigma.cones) == 8 and is_smooth(r.sigma)
    assert set(r.k.values) == {0}
    assert r.kappa == 0 and r.ok
    assert all(v == 1 for v in r.positivity.values()) and len(r.positivity) == 8


def test_example_two_minimal_model():
    fan, X = example_pair("example-2")
    r = construct_minimal_model(fan, X, seed=0)
    assert r.sigma.ray_set() == AXES
    assert r.k.as_dict() == {a: (-1 if a[0] else 0) for a in AXES}
    assert r.kappa == 1
    # the proper transform of X on Sigma is 2 D_p1 + 2 D_p2 + sum D_p, an ample class
    assert r.x_class.support.as_dict() == {a: (-2 if a[0] else -1) for a in AXES}
    assert [count_lattice_points(scale(r.box, m)) for m in range(1, 9)] == [2 * m + 1 for m in range(1, 9)]


@pytest.mark.parametrize("name", ["example-1", "example-2"])
def test_sigma_does_not_depend_on_the_seed(name):
    fan, X = example_pair(name)
    fans = {construct_minimal_model(fan, X, seed=s).sigma for s in (0, 1, 2)}
    assert len(fans) == 1


def test_same_seed_same_chamber():
    fan, X = example_pair("example-2")
    h = adjoint_support(X)
    a, _ = sample_epsilon_in_chamber(h, seed=11)
    b, _ = sample_epsilon_in_chamber(h, seed=11)
    assert a == b


def test_empty_box_points_to_the_mmp():
    F = projective_space_fan(2)
    with pytest.raises(EmptyAdjointPolytope):
        construct_minimal_model(F, DivisorClassOfX(F, [0, 0, 0]))


def test_singular_input_is_resolved_first():
    F = Fan([(1, 0), (1, 2), (-1, -1)], [(0, 1), (1, 2), (2, 0)])
    X = DivisorClassOfX(F, [-2, -4, -2])
    r = construct_minimal_model(F, X)
    assert is_smooth(r.input_fan) and r.ok


def test_failed_check_names_the_claim(monkeypatch):
    monkeypatch.setattr(puffing, "is_nef", lambda h: False)
    fan, X = example_pair("example-1")
    with pytest.raises(ClaimFailure) as err:
        construct_minimal_model(fan, X)
    assert err.value.claim == "nef"
    assert str(err.value) == "claim: nef"


@pytest.mark.parametrize("seed", range(8))
def test_random_pairs_with_nonempty_box(seed):
    fan, X = random_ample_pair(random.Random(500 + seed), max_rays=10)
    h = adjoint_support(X)
    if box_of(h).is_empty:
        pytest.skip("kappa = -inf instance")
    r = construct_minimal_model(fan, X, seed=seed)
    assert r.ok
    cert = nef_certificate(r.k)
    assert cert["nef"] and cert["lattice_parts"]
    assert r.box.same_set(box_of(h))
