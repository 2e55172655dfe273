import random
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from artifact import finite_hermitian as fh
from artifact import hecke as hk
from artifact import linalg as la
from artifact import orbital as orb
from artifact import orbits as ob
from artifact.plocal import FieldConfig, FNumber, XLaurent, val

F3 = FieldConfig(3)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)
laurent = st.dictionaries(st.integers(-4, 4), fractions, max_size=4).map(XLaurent)
nonzero = st.tuples(fractions, fractions).filter(lambda t: t != (0, 0)).map(
    lambda t: FNumber(t[0], t[1], F3.eps))


@given(laurent, laurent, laurent)
def test_laurent_ring_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - a).is_zero()


@given(laurent, laurent)
def test_derivative_is_a_derivation(a, b):
    assert (a * b).d_at_zero() == a.d_at_zero() * b.value_at_zero() + a.value_at_zero() * b.d_at_zero()


@given(laurent)
def test_pairs_roundtrip(a):
    assert XLaurent.from_pairs(a.to_pairs()) == a


@given(nonzero, nonzero)
def test_valuation_is_additive(x, y):
    assert val(x * y, 3) == val(x, 3) + val(y, 3)
    assert (x * y).norm() == x.norm() * y.norm()


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_transfer_factor_covariance(seed):
    rng = random.Random(seed)
    n = 1 + seed % 2
    gamma = ob.sample_S(rng, n, 2, F3)
    h = ob.random_GL_F0(rng, n, 2, F3)
    v = la.det(h).val(3)
    lhs = orb.transfer_factor_S(ob.conjugate_S(gamma, h, F3), 3)
    assert lhs == orb.transfer_factor_S(gamma, 3) * XLaurent({v: (-1) ** v})


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_orbital_integral_is_conjugation_invariant(seed):
    rng = random.Random(seed)
    gamma = ob.sample_S(rng, 1, 2, F3)
    h = ob.random_GL_F0(rng, 1, 2, F3)
    conj = ob.conjugate_S(gamma, h, F3)
    for fn in (orb.ind_S_O(), orb.ind_K_S_varpi()):
        assert orb.orb_S(conj, fn, F3).poly == orb.orb_S(gamma, fn, F3).poly


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10 ** 6), st.booleans())
def test_matching_pairs_share_invariants(seed, split):
    gamma, g, setup = ob.sample_pair_n1(random.Random(seed), F3, seed % 2, split, 3)
    assert ob.invariants_S(gamma) == ob.invariants_U(g, setup)


@settings(max_examples=20, deadline=None)
@given(st.dictionaries(st.integers(0, 2), st.integers(-5, 5), min_size=1))
def test_unitary_satake_is_symmetric(coeffs):
    f = hk.HeckeElement("U2", "K", {(-b, b): Fraction(c) for b, c in coeffs.items()})
    assert hk.is_symmetric(hk.satake(f, 3))


@settings(max_examples=10, deadline=None)
@given(st.sampled_from([3, 5]), st.integers(1, 3), st.integers(0, 1))
def test_isotropic_count_formula(q, d, k):
    if 2 * k > d or (q == 5 and d == 3):
        return
    V = fh.FinHermSpace.standard(q, d)
    assert len(fh.enumerate_isotropic(V, k)) == fh.isotropic_subspace_count(q, d, k)
