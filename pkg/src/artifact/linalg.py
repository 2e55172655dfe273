"""Small exact matrix helpers over F = Q(delta).

Matrices are lists of rows of FNumber.  Sizes here never exceed 4x4, so
plain Gaussian elimination is all we need.
"""

from fractions import Fraction

from .plocal import FNumber, DomainError


def F(x, eps):
    if isinstance(x, FNumber):
        return x
    if isinstance(x, tuple):
        return FNumber(x[0], x[1], eps)
    return FNumber(x, 0, eps)


def matrix(rows, eps):
    return [[F(x, eps) for x in row] for row in rows]


def identity(n, eps):
    return [[FNumber(1 if i == j else 0, 0, eps) for j in range(n)] for i in range(n)]


def zeros(r, c, eps):
    return [[FNumber(0, 0, eps) for _ in range(c)] for _ in range(r)]


def diag(entries, eps):
    n = len(entries)
    out = zeros(n, n, eps)
    for i, x in enumerate(entries):
        out[i][i] = F(x, eps)
    return out


def mul(A, B):
    Bt = list(zip(*B))
    out = []
    for row in A:
        out_row = []
        for col in Bt:
            s = row[0] * col[0]
            for a, b in zip(row[1:], col[1:]):
                if (a.a or a.b) and (b.a or b.b):
                    s = s + a * b
            out_row.append(s)
        out.append(out_row)
    return out


def mat_vec(A, v):
    out = []
    for row in A:
        s = row[0] * v[0]
        for a, b in zip(row[1:], v[1:]):
            if (a.a or a.b) and (b.a or b.b):
                s = s + a * b
        out.append(s)
    return out


def transpose(A):
    return [list(r) for r in zip(*A)]


def conj(A):
    return [[x.conj() for x in row] for row in A]


def conj_transpose(A):
    return [[x.conj() for x in col] for col in zip(*A)]


def scale(A, c):
    return [[x * c for x in row] for row in A]


def add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def columns(A):
    return [list(c) for c in zip(*A)]


def from_columns(cols):
    return [list(r) for r in zip(*cols)]


def det(A):
    n = len(A)
    M = [list(r) for r in A]
    eps = M[0][0].eps
    d = FNumber(1, 0, eps)
    for c in range(n):
        piv = None
        for i in range(c, n):
            if not M[i][c].is_zero():
                piv = i
                break
        if piv is None:
            return FNumber(0, 0, eps)
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            d = -d
        pv = M[c][c]
        d = d * pv
        inv = pv.inverse()
        for i in range(c + 1, n):
            if not M[i][c].is_zero():
                f = M[i][c] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return d


def inverse(A):
    n = len(A)
    eps = A[0][0].eps
    M = [list(r) + [FNumber(1 if i == j else 0, 0, eps) for j in range(n)]
         for i, r in enumerate(A)]
    for c in range(n):
        piv = None
        for i in range(c, n):
            if not M[i][c].is_zero():
                piv = i
                break
        if piv is None:
            raise DomainError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        inv = M[c][c].inverse()
        M[c] = [x * inv for x in M[c]]
        for i in range(n):
            if i != c and not M[i][c].is_zero():
                f = M[i][c]
                M[i] = [x - f * y for x, y in zip(M[i], M[c])]
    return [row[n:] for row in M]


def power(A, k):
    n = len(A)
    out = identity(n, A[0][0].eps)
    base = A
    if k < 0:
        base = inverse(A)
        k = -k
    while k:
        if k & 1:
            out = mul(out, base)
        base = mul(base, base)
        k >>= 1
    return out


def charpoly(A):
    """Coefficients c_0..c_n of det(x - A), lowest degree first (Faddeev-LeVerrier)."""
    n = len(A)
    eps = A[0][0].eps
    coeffs = [None] * (n + 1)
    coeffs[n] = FNumber(1, 0, eps)
    M = zeros(n, n, eps)
    I = identity(n, eps)
    for k in range(1, n + 1):
        M = add(mul(A, M), scale(I, coeffs[n - k + 1]))
        AM = mul(A, M)
        tr = AM[0][0]
        for i in range(1, n):
            tr = tr + AM[i][i]
        coeffs[n - k] = tr * Fraction(-1, k)
    return coeffs


def is_integral_entry(x, p):
    if isinstance(x, FNumber):
        return x.a.denominator % p != 0 and x.b.denominator % p != 0
    return Fraction(x).denominator % p != 0


def is_integral(A, p):
    return all(is_integral_entry(x, p) for row in A for x in row)


def min_val(A, p):
    vals = [x.val(p) for row in A for x in row if not x.is_zero()]
    return min(vals) if vals else None


def real_imag(A):
    """Split A = A1 + delta*A2 with A1, A2 rational matrices."""
    eps = A[0][0].eps
    A1 = [[FNumber(x.a, 0, eps) for x in row] for row in A]
    A2 = [[FNumber(x.b, 0, eps) for x in row] for row in A]
    return A1, A2


def equal(A, B):
    return all(a == b for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def is_rational(A):
    return all(x.is_rational() for row in A for x in row)


def to_pairs(A):
    """Serializable form: rows of [a_num, a_den, b_num, b_den]."""
    return [[[x.a.numerator, x.a.denominator, x.b.numerator, x.b.denominator]
             for x in row] for row in A]
