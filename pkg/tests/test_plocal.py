from fractions import Fraction

import pytest

from artifact.plocal import (DomainError, FieldConfig, FNumber, XLaurent, d_at_zero, eta,
                             eta_tilde_s, least_nonresidue, val)

X = XLaurent.monomial(1)


@pytest.fixture(params=[3, 5, 7])
def field(request):
    return FieldConfig(request.param)


def test_nonresidue_is_least():
    assert least_nonresidue(3) == 2
    assert least_nonresidue(7) == 3
    assert least_nonresidue(17) == 3


def test_field_rejects_even_or_composite():
    for p in (2, 9, 1):
        with pytest.raises(DomainError):
            FieldConfig(p)


def test_valuations(field):
    p = field.p
    assert val(Fraction(p), p) == 1
    assert val(Fraction(1, p), p) == -1
    assert field.delta.val(p) == 0
    assert FNumber(p, p, field.eps).val(p) == 1
    with pytest.raises(DomainError):
        val(Fraction(0), p)


def test_eta(field):
    p = field.p
    assert eta(Fraction(p), p) == -1
    assert eta(Fraction(2 * p + 1, 1 if p != 3 else 2), p) == 1
    z = FNumber(p, 1, field.eps)
    assert eta(z.norm(), p) == 1


def test_eta_tilde(field):
    p = field.p
    w = FNumber(p, 0, field.eps)
    assert eta_tilde_s(w, p) == -X
    assert eta_tilde_s(field.delta, p) == XLaurent.one()
    assert eta_tilde_s(w * w, p) == X ** 2


def test_d_at_zero():
    assert d_at_zero(X) == -1
    assert d_at_zero(XLaurent.const(3)) == 0
    assert d_at_zero(X ** 2 - X ** -1) == -3


def test_fnumber_field_ops(field):
    e = field.eps
    a, b = FNumber(2, 1, e), FNumber(Fraction(1, 3), -4, e)
    assert (a * b) / b == a
    assert (a * a.inverse()) == FNumber(1, 0, e)
    assert a.norm() == (a * a.conj()).a
    assert (a * b).conj() == a.conj() * b.conj()
    with pytest.raises(ZeroDivisionError):
        FNumber(0, 0, e).inverse()


def test_xlaurent_pairs_roundtrip():
    P = XLaurent({-2: Fraction(1, 3), 0: 5, 3: -1})
    assert XLaurent.from_pairs(P.to_pairs()) == P
    assert P.to_pairs() == [[-2, 1, 3], [0, 5, 1], [3, -1, 1]]
    assert XLaurent({1: 0}).is_zero()


def test_substitute_power():
    P = XLaurent({-1: 2, 1: 3})
    assert P.substitute_power(2) == XLaurent({-2: 2, 2: 3})
    assert P.substitute_power(-1) == XLaurent({1: 2, -1: 3})
