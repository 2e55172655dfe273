from fractions import Fraction

import pytest

from artifact import hecke as hk
from artifact import linalg as la
from artifact.plocal import XLaurent


@pytest.fixture(params=[3, 5])
def plane(request):
    return hk.HyperbolicPlane(request.param)


def test_levels(plane):
    q = plane.p
    K = hk.Level(plane.selfdual(), "K")
    K2 = hk.Level(plane.type2(), "K[2]")
    assert hk.index(K, K2, plane.H) == q + 1
    assert hk.index(K2, K, plane.H) == q + 1
    assert hk.volume(K2, K, plane.H) == 1
    assert hk.intersection_volume(K, K2, K, plane.H) == Fraction(1, q + 1)


def test_torus_and_unipotent_are_unitary(plane):
    assert plane.is_unitary(plane.torus(2))
    assert plane.is_unitary(plane.unipotent(Fraction(1, plane.p)))
    assert sorted(hk.cartan_label(plane.torus(1), plane.p)) == [-1, 1]


def test_convolution_at_one(plane):
    K = hk.Level(plane.selfdual(), "K")
    K2 = hk.Level(plane.type2(), "K[2]")
    one = la.identity(2, plane.field.eps)
    v = hk.intersection_volume(K, K2, K, plane.H)
    assert hk.convolve_eval(K, K2, one, K, plane.H) == v
    assert hk.convolve_eval(K2, K, one, K, plane.H) == v
    assert hk.convolve_eval(K, K2, plane.torus(2), K, plane.H) == 0


def test_volume_by_group_enumeration():
    W = hk.HyperbolicPlane(3)
    K = hk.Level(W.selfdual(), "K")
    K2 = hk.Level(W.type2(), "K[2]")
    assert hk.stabilizer_volume_bruteforce(3) == hk.intersection_volume(K, K2, K, W.H)


def test_atomic_phi(plane):
    q = plane.p
    phi = hk.atomic_phi(q, 2)
    assert phi((0, 0)) == q + 1
    assert phi((-1, 1)) == 1
    assert phi((-2, 2)) == 0


def test_satake_values(plane):
    q = plane.p
    X = XLaurent.monomial(1)
    assert hk.satake(hk.indicator("U2", (0, 0)), q) == XLaurent.one()
    assert hk.satake(hk.atomic_phi(q, 2), q) == q * (X + 2 + X ** -1)
    mismatch, (sf, sg) = hk.bc_mismatch_check(q)
    assert mismatch
    assert sf == q * (X + X ** -1)
    assert hk.is_symmetric(sf) and hk.is_symmetric(sg)


def test_degenerate_mismatch_call():
    phi = hk.atomic_phi(3, 2)
    assert hk.bc_mismatch_check(3, phi, phi)[0] is False


@pytest.mark.parametrize("q", [3, 5, 7])
def test_constants(q):
    assert hk.c_r(1, 1, q) == 1
    assert hk.c_r(2, 1, q) == 1
    assert hk.c_prime_1(q) == (q * q + 1) * (q * q - 1)
