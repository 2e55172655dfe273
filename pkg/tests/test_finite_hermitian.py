import pytest

from artifact import finite_hermitian as fh


def test_isotropic_counts():
    V2 = fh.FinHermSpace.standard(3, 2)
    assert len(fh.enumerate_isotropic(V2, 0)) == 1
    assert len(fh.enumerate_isotropic(V2, 1)) == 4
    assert fh.enumerate_isotropic(fh.FinHermSpace.standard(3, 1), 1) == []


@pytest.mark.parametrize("q,d,k", [(3, 2, 1), (3, 3, 1), (3, 4, 2), (5, 2, 1), (5, 3, 1)])
def test_isotropic_closed_form(q, d, k):
    V = fh.FinHermSpace.standard(q, d)
    assert len(fh.enumerate_isotropic(V, k)) == fh.isotropic_subspace_count(q, d, k)


def test_non_hermitian_gram_rejected():
    with pytest.raises(ValueError):
        fh.FinHermSpace(3, [[1, 1], [0, 1]])


@pytest.mark.parametrize("q", [3, 5])
def test_unitary_dim1(q):
    V = fh.FinHermSpace.standard(q, 1)
    assert len(fh.norm_one_elements(V.k)) == q + 1
    assert fh.unitary_group(V, verify="closure").order == q + 1


def test_unitary_dim2_brute_force():
    V = fh.FinHermSpace.standard(3, 2)
    G = fh.unitary_group(V, verify="brute")
    assert G.order == 96
    assert len(fh.generated_group(V.k, G.generators)) == 96


def test_reflections_are_unitary():
    V = fh.FinHermSpace.standard(3, 3)
    for g in fh.reflection_generators(V):
        assert V.is_unitary(g)


@pytest.mark.parametrize("n,r,expected", [(2, 0, 1), (3, 3, 1), (3, 1, 1), (1, 2, 1), (2, 2, 2)])
def test_two_orbit_scenarios(n, r, expected):
    assert fh.two_orbit_scenario(3, n, r)["orbits"] == expected


def test_two_orbit_iii_sizes():
    res = fh.two_orbit_scenario(3, 3, 2)
    assert res["orbits"] == 2
    assert sorted(res["sizes"]) == [28, 252]


@pytest.mark.parametrize("r", [1, 2])
def test_transitive(r):
    assert fh.transitive_scenario(3, r)["orbits"] == 1


def test_coset_decomposition():
    res = fh.coset_decomposition(3, 2, 2)
    assert res["transitive"] and res["disjoint"] and res["exhaustive"]


@pytest.mark.parametrize("q", [3, 5])
def test_kfk(q):
    assert fh.kfk_check(q, 1)["equal"]


@pytest.mark.parametrize("q,expected", [(3, 4), (5, 6), (7, 8)])
def test_lattice_covers(q, expected):
    assert fh.lattice_covers_count("type0_over_type2", q) == expected
    assert fh.lattice_covers_count("type0_containing_type1_flag", q) == expected
    assert fh.lattice_covers_count("type0_over_type0", q) == 1
    with pytest.raises(ValueError):
        fh.lattice_covers_count("other", q)


@pytest.mark.parametrize("q,expected", [(3, 80), (5, 624), (7, 2400)])
def test_mirabolic_index(q, expected):
    assert fh.mirabolic_index(q) == expected


def test_mirabolic_index_by_counting():
    assert fh.mirabolic_index(3, "count") == 80
