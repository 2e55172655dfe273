import random

import pytest

from artifact import linalg as la
from artifact import orbits as ob
from artifact.plocal import DomainError, FieldConfig, FNumber

F3 = FieldConfig(3)
E = F3.eps


def test_r_map_basic():
    I = la.identity(2, E)
    assert la.equal(ob.r_map(I), I)
    rational = la.matrix([[2, 1], [1, 1]], E)
    assert la.equal(ob.r_map(rational), I)


def test_r_map_lands_in_S():
    rng = random.Random(1)
    for _ in range(10):
        g = ob.random_matrix_F(rng, 3, 2, F3)
        if la.det(g).is_zero():
            continue
        r = ob.r_map(g)
        assert la.equal(la.mul(r, la.conj(r)), la.identity(3, E))
        assert ob.in_S(r)


def test_delta_plus_identity_is_zero():
    assert ob.delta_plus(la.identity(2, E)).is_zero()
    assert not ob.is_rss_S(la.identity(3, E))


def test_delta_plus_vandermonde():
    lams = [FNumber(1, 1, E), FNumber(2, -1, E), FNumber(0, 3, E)]
    D = la.diag(lams, E)
    ones = [FNumber(1, 0, E)] * 3
    vdm = FNumber(1, 0, E)
    for i in range(3):
        for j in range(i + 1, 3):
            vdm = vdm * (lams[j] - lams[i])
    assert ob.delta_plus(D, ones) == vdm


def test_fixed_last_vector_is_not_rss():
    g = la.matrix([[FNumber(0, 1, E), 0], [0, 1]], E)
    assert not ob.is_rss_S(g)


def test_sampler_is_deterministic_and_rss():
    a = ob.sample_rss(11, "S", 2, 2, F3)
    b = ob.sample_rss(11, "S", 2, 2, F3)
    assert la.equal(a, b)
    for seed in range(100):
        assert ob.is_rss_S(ob.sample_rss(seed, "S", 1, 2, F3))


@pytest.mark.parametrize("split", [True, False])
def test_pair_n1_matches(split):
    rng = random.Random(5)
    for eps_u in (0, 1):
        for _ in range(5):
            gamma, g, setup = ob.sample_pair_n1(rng, F3, eps_u, split, 3)
            assert ob.invariants_S(gamma) == ob.invariants_U(g, setup)
            assert ob.matching_side(gamma, 3, eps_u) == ("split" if split else "nonsplit")


def test_unitary_samples_are_unitary():
    rng = random.Random(2)
    for n in (1, 2):
        setup = ob.standard_setup(F3, n, 0, True)
        g = ob.sample_unitary(rng, setup, 2)
        assert ob.is_unitary(g, setup.gram)


def test_rss_U_rejects_non_unitary():
    setup = ob.standard_setup(F3, 1, 0, True)
    with pytest.raises(DomainError):
        ob.is_rss_U(la.scale(la.identity(2, E), FNumber(3, 0, E)), setup)


def test_sub_seeds_differ():
    assert ob.derive_seed(1, "a", 0) != ob.derive_seed(1, "a", 1)
    assert ob.derive_seed(1, "a", 0) == ob.derive_seed(1, "a", 0)
