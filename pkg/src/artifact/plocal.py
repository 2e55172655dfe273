"""Exact arithmetic in Q_p and its unramified quadratic extension.

F0 = Q_p is modelled by rationals, F = F0(delta) with delta^2 = eps, eps the
least quadratic nonresidue mod p.  Valuations are p-adic, so every element
of Q(delta) carries exact valuation data even though we never leave Q.

XLaurent is the value type of s-dependent quantities: a Laurent polynomial
in X = q^{-s} with rational coefficients.
"""

from fractions import Fraction
from functools import lru_cache


class DomainError(ValueError):
    pass


def _is_prime(p):
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@lru_cache(maxsize=None)
def least_nonresidue(p):
    for a in range(2, p):
        if pow(a, (p - 1) // 2, p) == p - 1:
            return a
    raise DomainError("no nonresidue mod %d" % p)


class FieldConfig:
    """The pair F/F0 for an odd prime p (q = p)."""

    __slots__ = ("p", "eps")

    def __init__(self, p):
        if p % 2 == 0 or not _is_prime(p):
            raise DomainError("p must be an odd prime, got %r" % (p,))
        self.p = p
        self.eps = least_nonresidue(p)

    @property
    def q(self):
        return self.p

    def __eq__(self, other):
        return isinstance(other, FieldConfig) and other.p == self.p

    def __hash__(self):
        return hash(("FieldConfig", self.p))

    def __repr__(self):
        return "FieldConfig(p=%d, eps=%d)" % (self.p, self.eps)

    def F(self, a, b=0):
        return FNumber(a, b, self.eps)

    @property
    def one(self):
        return FNumber(1, 0, self.eps)

    @property
    def zero(self):
        return FNumber(0, 0, self.eps)

    @property
    def delta(self):
        return FNumber(0, 1, self.eps)

    @property
    def uniformizer(self):
        return FNumber(self.p, 0, self.eps)


def val_p(x, p):
    """p-adic valuation of a nonzero rational."""
    x = Fraction(x)
    if x == 0:
        raise DomainError("valuation of zero")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def val_p_or_inf(x, p):
    if x == 0:
        return None
    return val_p(x, p)


class PLocalNumber:
    """An element of F0 = Q_p represented by an exact rational."""

    __slots__ = ("value", "p")

    def __init__(self, value, p):
        self.value = Fraction(value)
        self.p = p

    def val(self):
        return val_p(self.value, self.p)

    def __eq__(self, other):
        if isinstance(other, PLocalNumber):
            return self.value == other.value
        return self.value == other

    def __hash__(self):
        return hash(self.value)

    def __mul__(self, other):
        if isinstance(other, PLocalNumber):
            other = other.value
        return PLocalNumber(self.value * other, self.p)

    __rmul__ = __mul__

    def __repr__(self):
        return "PLocalNumber(%s, p=%d)" % (self.value, self.p)


class FNumber:
    """a + b*delta with a, b rational and delta^2 = eps."""

    __slots__ = ("a", "b", "eps")

    def __init__(self, a, b=0, eps=None):
        self.a = a if type(a) is Fraction else Fraction(a)
        self.b = b if type(b) is Fraction else Fraction(b)
        self.eps = eps

    def _coerce(self, other):
        if isinstance(other, FNumber):
            return other
        return FNumber(other, 0, self.eps)

    def __add__(self, other):
        if type(other) is FNumber:
            return FNumber(self.a + other.a, self.b + other.b, self.eps)
        return FNumber(self.a + other, self.b, self.eps)

    __radd__ = __add__

    def __sub__(self, other):
        if type(other) is FNumber:
            return FNumber(self.a - other.a, self.b - other.b, self.eps)
        return FNumber(self.a - other, self.b, self.eps)

    def __rsub__(self, other):
        return FNumber(other - self.a, -self.b, self.eps)

    def __neg__(self):
        return FNumber(-self.a, -self.b, self.eps)

    def __mul__(self, other):
        if type(other) is FNumber:
            a, b, c, d = self.a, self.b, other.a, other.b
            if not b and not d:
                return FNumber(a * c, b, self.eps)
            return FNumber(a * c + self.eps * b * d, a * d + b * c, self.eps)
        return FNumber(self.a * other, self.b * other, self.eps)

    __rmul__ = __mul__

    def norm(self):
        return self.a * self.a - self.eps * self.b * self.b

    def conj(self):
        return FNumber(self.a, -self.b, self.eps)

    def trace(self):
        return 2 * self.a

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        return FNumber(self.a / n, -self.b / n, self.eps)

    def __truediv__(self, other):
        if type(other) is FNumber:
            if not other.b:
                return FNumber(self.a / other.a, self.b / other.a, self.eps)
            return self * other.inverse()
        return FNumber(self.a / other, self.b / other, self.eps)

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        out = FNumber(1, 0, self.eps)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_zero(self):
        return not self.a and not self.b

    def is_rational(self):
        return not self.b

    def __eq__(self, other):
        if isinstance(other, FNumber):
            return self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if not self.b:
            return hash(self.a)
        return hash((self.a, self.b))

    def __repr__(self):
        if not self.b:
            return str(self.a)
        if not self.a:
            return "%s*d" % (self.b,)
        return "(%s%+s*d)" % (self.a, self.b)

    def val(self, p):
        """Valuation normalized so that val(p) = 1.

        Since 1, delta is an integral basis of O_F, this is the minimum of
        the valuations of the two coordinates.
        """
        if not self.a and not self.b:
            raise DomainError("valuation of zero")
        if not self.b:
            return val_p(self.a, p)
        if not self.a:
            return val_p(self.b, p)
        return min(val_p(self.a, p), val_p(self.b, p))


def val(x, p=None):
    """Valuation of a nonzero element of F0 or F."""
    if isinstance(x, PLocalNumber):
        return x.val()
    if isinstance(x, FNumber):
        if p is None:
            raise DomainError("prime required for FNumber valuation")
        return x.val(p)
    if p is None:
        raise DomainError("prime required for rational valuation")
    return val_p(x, p)


def val_or_none(x, p):
    if isinstance(x, FNumber):
        return None if x.is_zero() else x.val(p)
    return val_p_or_inf(x, p)


def eta(x, p=None):
    """Unramified quadratic character of F0^x: (-1)^val."""
    return -1 if val(x, p) % 2 else 1


def eta_tilde(z, p):
    """The unramified extension of eta to F^x."""
    return -1 if val(z, p) % 2 else 1


class XLaurent:
    """Laurent polynomial sum a_k X^k with rational coefficients."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            items = coeffs.items() if isinstance(coeffs, dict) else coeffs
            for k, v in items:
                v = Fraction(v)
                if v:
                    c[int(k)] = c.get(int(k), 0) + v
        self._c = {k: v for k, v in c.items() if v}

    @classmethod
    def const(cls, a):
        return cls({0: a})

    @classmethod
    def monomial(cls, k, a=1):
        return cls({k: a})

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def one(cls):
        return cls({0: 1})

    def coefficients(self):
        return dict(self._c)

    def items(self):
        return sorted(self._c.items())

    def __getitem__(self, k):
        return self._c.get(k, Fraction(0))

    def is_zero(self):
        return not self._c

    def _lift(self, other):
        if isinstance(other, XLaurent):
            return other
        return XLaurent({0: other})

    def __add__(self, other):
        other = self._lift(other)
        c = dict(self._c)
        for k, v in other._c.items():
            c[k] = c.get(k, 0) + v
        return XLaurent(c)

    __radd__ = __add__

    def __neg__(self):
        return XLaurent({k: -v for k, v in self._c.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, XLaurent):
            other = Fraction(other)
            return XLaurent({k: v * other for k, v in self._c.items()})
        c = {}
        for k1, v1 in self._c.items():
            for k2, v2 in other._c.items():
                c[k1 + k2] = c.get(k1 + k2, 0) + v1 * v2
        return XLaurent(c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Fraction(other)
        return XLaurent({k: v / other for k, v in self._c.items()})

    def __pow__(self, e):
        if e < 0:
            if len(self._c) != 1:
                raise DomainError("only monomials are invertible")
            ((k, v),) = self._c.items()
            return XLaurent({k * e: Fraction(1) / v ** (-e)})
        out = XLaurent.one()
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, XLaurent):
            try:
                other = XLaurent({0: other})
            except (TypeError, ValueError):
                return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(tuple(sorted(self._c.items())))

    def substitute_power(self, m):
        """P(X) -> P(X^m); m = -1 gives the inverse twist, m = 2 doubles s."""
        return XLaurent({k * m: v for k, v in self._c.items()})

    def evaluate(self, x):
        x = Fraction(x)
        return sum((v * x ** k for k, v in self._c.items()), Fraction(0))

    def value_at_zero(self):
        return sum(self._c.values(), Fraction(0))

    def d_at_zero(self):
        return -sum((k * v for k, v in self._c.items()), Fraction(0))

    def min_degree(self):
        return min(self._c) if self._c else 0

    def max_degree(self):
        return max(self._c) if self._c else 0

    def to_pairs(self):
        """Serializable form: [[k, num, den], ...]."""
        return [[k, v.numerator, v.denominator] for k, v in self.items()]

    @classmethod
    def from_pairs(cls, pairs):
        return cls({k: Fraction(n, d) for k, n, d in pairs})

    def __repr__(self):
        if not self._c:
            return "0"
        parts = []
        for k, v in sorted(self._c.items(), reverse=True):
            if k == 0:
                parts.append(str(v))
            else:
                mono = "X" if k == 1 else "X^%d" % k
                if v == 1:
                    parts.append(mono)
                elif v == -1:
                    parts.append("-" + mono)
                else:
                    parts.append("%s*%s" % (v, mono))
        return " + ".join(parts).replace("+ -", "- ")


X = XLaurent.monomial(1)


def eta_tilde_s(z, p):
    """eta~(z)|z|_F^{s/2} = (-1)^v X^v with v = val_F(z)."""
    v = val(z, p)
    return XLaurent({v: -1 if v % 2 else 1})


def eta_tilde_minus_s(z, p):
    return eta_tilde_s(z, p).substitute_power(-1)


def eta_s(x, p):
    """eta(x)|x|^s on F0^x: (-1)^v X^v."""
    v = val(x, p)
    return XLaurent({v: -1 if v % 2 else 1})


def d_at_zero(P):
    return P.d_at_zero()


def value_at_zero(P):
    return P.value_at_zero()


def reduce_mod(x, k, p):
    """Canonical representative of the rational x modulo p^k Z_p.

    Representatives have the form r / p^t with 0 <= r < p^(k+t).
    """
    x = Fraction(x)
    if x == 0:
        return Fraction(0)
    v = val_p(x, p)
    if v >= k:
        return Fraction(0)
    t = max(0, -v)
    scaled = x * p ** t
    mod = p ** (k + t)
    r = scaled.numerator * pow(scaled.denominator, -1, mod) % mod
    return Fraction(r, p ** t)


def reduce_mod_F(z, k, p):
    """Canonical representative of z in F modulo p^k O_F, coordinatewise."""
    return FNumber(reduce_mod(z.a, k, p), reduce_mod(z.b, k, p), z.eps)


def unit_part(z, p):
    """z = p^v * w with w a unit; returns (v, w)."""
    v = val(z, p)
    if isinstance(z, FNumber):
        return v, z / (Fraction(p) ** v)
    return v, Fraction(z) / Fraction(p) ** v
