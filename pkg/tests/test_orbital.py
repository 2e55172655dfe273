import random
from fractions import Fraction

import pytest

from artifact import linalg as la
from artifact import orbital as orb
from artifact import orbits as ob
from artifact.plocal import DomainError, FieldConfig, FNumber, XLaurent

F3 = FieldConfig(3)
E = F3.eps
X = XLaurent.monomial(1)


def _gamma_with_delta_val(v):
    # n = 1 elements of S whose Delta^+ has valuation v
    for seed in range(500):
        g = ob.sample_rss(seed, "S", 1, 2, F3)
        if ob.delta_plus(g).val(3) == v:
            return g
    raise AssertionError("no sample found")


def test_transfer_factor_values():
    assert orb.transfer_factor_S(_gamma_with_delta_val(0), 3) == XLaurent.one()
    assert orb.transfer_factor_S(_gamma_with_delta_val(1), 3) == -X ** -1
    with pytest.raises(DomainError):
        orb.transfer_factor_S(la.identity(2, E), 3)


def test_orb_requires_rss():
    with pytest.raises(DomainError):
        orb.orb_S(la.identity(2, E), orb.ind_S_O(), F3)


def test_phi_prime_even_r_is_unit_indicator():
    f, correction = orb.phi_prime_r(2, 2, 3)
    assert f.terms == orb.ind_S_O().terms
    assert not correction


def test_routes_agree_on_n1():
    for seed in range(8):
        gamma = ob.sample_rss(seed, "S", 1, 2, F3)
        for fn in (orb.ind_S_O(), orb.translate(orb.u_matrix(1, 3))):
            a = orb.orb_S(gamma, fn, F3).poly
            b = orb.orb_S_direct_n1(gamma, fn, F3).poly
            assert a == b


def test_semilie_identity_with_volume_coefficient():
    for seed in range(6):
        gamma = ob.sample_rss(seed, "S", 1, 2, F3)
        lhs = orb.orb_semilie(gamma, F3).poly
        rhs = orb.orb_S(gamma, orb.phi_prime_s(1, 3, 3 - 1), F3).poly
        assert lhs == rhs


def test_sharp_signs():
    Kt = orb.GprimeAtom("Ktilde")
    d = orb.natural_sharp([(1, Kt)], 1, 3)
    lit = orb.natural_sharp([(1, Kt)], 1, 3, sign="literal")
    (cd, _), = d.terms
    (cl, _), = lit.terms
    assert cd == Fraction(1, 3 ** 2 - 1) and cl == -cd
    with pytest.raises(ValueError):
        orb.natural_sharp([(1, Kt)], 1, 3, sign="other")


def test_orbital_value_accessors():
    v = orb.OrbitalValue(XLaurent({0: 1, 1: -2}))
    assert v.at_zero == -1
    assert v.d_at_zero_coeff == 2
    assert v.doubled().poly == XLaurent({0: 1, 2: -2})


def test_unitary_counts_agree_with_window():
    rng = random.Random(3)
    for eps_u in (0, 1):
        setup = ob.standard_setup(F3, 1, eps_u, True)
        for _ in range(3):
            g = ob.sample_unitary(rng, setup, 2)
            assert orb.orb_U(g, setup) == orb.orb_U_window(g, setup, 1, 3)
            assert orb.orb_U(g, setup) == orb.orb_U_semilie(g, setup.u, setup)


def test_type01_count_is_one_at_n1():
    rng = random.Random(4)
    setup = ob.standard_setup(F3, 1, 1, False)
    for _ in range(5):
        g = ob.sample_unitary(rng, setup, 3)
        assert orb.orb_U_type01(g, setup) == 1
