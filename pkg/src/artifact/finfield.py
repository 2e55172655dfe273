"""Residue fields F_p and F_{p^2} with table-driven arithmetic.

Elements are ints in range(Q).  For the quadratic field, x = a + b*p stands
for a + b*dbar with dbar^2 = eps, the reduction of delta, so the reduction
map from O_F is literal.
"""

from functools import lru_cache
from itertools import combinations, product

from .plocal import least_nonresidue


class FiniteField:
    def __init__(self, p, degree):
        if degree not in (1, 2):
            raise ValueError("degree must be 1 or 2")
        self.p = p
        self.degree = degree
        self.Q = p ** degree
        self.eps = least_nonresidue(p)
        Q = self.Q
        pairs = [(x % p, x // p) for x in range(Q)]
        enc = lambda a, b: (a % p) + (b % p) * p if degree == 2 else a % p
        self.add = [[enc(a + c, b + d) for (c, d) in pairs] for (a, b) in pairs]
        self.sub = [[enc(a - c, b - d) for (c, d) in pairs] for (a, b) in pairs]
        self.mul = [[enc(a * c + self.eps * b * d, a * d + b * c)
                     for (c, d) in pairs] for (a, b) in pairs]
        self.neg = [enc(-a, -b) for (a, b) in pairs]
        self.conj = [enc(a, -b) for (a, b) in pairs]
        self.inv = [0] * Q
        for x in range(1, Q):
            for y in range(1, Q):
                if self.mul[x][y] == 1:
                    self.inv[x] = y
                    break
        self.elements = list(range(Q))
        self.units = list(range(1, Q))

    def __repr__(self):
        return "FiniteField(%d^%d)" % (self.p, self.degree)

    def norm(self, x):
        """x * xbar, an element of the prime field."""
        return self.mul[x][self.conj[x]]

    def in_prime_field(self, x):
        return x < self.p

    def reduce(self, z):
        """Residue of an integral FNumber (or rational)."""
        p = self.p
        a = getattr(z, "a", z)
        b = getattr(z, "b", 0)
        ra = a.numerator * pow(a.denominator, -1, p) % p
        if self.degree == 1:
            if b:
                raise ValueError("element not in prime field")
            return ra
        rb = b.numerator * pow(b.denominator, -1, p) % p
        return ra + rb * p

    def lift_pair(self, x):
        return x % self.p, x // self.p

    # vectors and matrices

    def dot(self, u, v):
        s = 0
        add, mul = self.add, self.mul
        for a, b in zip(u, v):
            if a and b:
                s = add[s][mul[a][b]]
        return s

    def mat_vec(self, A, v):
        return tuple(self.dot(row, v) for row in A)

    def mat_mul(self, A, B):
        Bt = list(zip(*B))
        return tuple(tuple(self.dot(row, col) for col in Bt) for row in A)

    def scale(self, c, v):
        mul = self.mul
        return tuple(mul[c][x] for x in v)

    def vadd(self, u, v):
        add = self.add
        return tuple(add[a][b] for a, b in zip(u, v))

    def vsub(self, u, v):
        sub = self.sub
        return tuple(sub[a][b] for a, b in zip(u, v))

    def rref(self, rows):
        """Reduced row echelon form; returns (rows, pivots)."""
        rows = [list(r) for r in rows]
        pivots = []
        r = 0
        ncols = len(rows[0]) if rows else 0
        for c in range(ncols):
            piv = None
            for i in range(r, len(rows)):
                if rows[i][c]:
                    piv = i
                    break
            if piv is None:
                continue
            rows[r], rows[piv] = rows[piv], rows[r]
            inv = self.inv[rows[r][c]]
            rows[r] = [self.mul[inv][x] for x in rows[r]]
            for i in range(len(rows)):
                if i != r and rows[i][c]:
                    f = rows[i][c]
                    rows[i] = [self.sub[x][self.mul[f][y]] for x, y in zip(rows[i], rows[r])]
            pivots.append(c)
            r += 1
            if r == len(rows):
                break
        return tuple(tuple(x) for x in rows[:r]), tuple(pivots)

    def rank(self, rows):
        if not rows:
            return 0
        return len(self.rref(rows)[1])

    def det(self, A):
        A = [list(r) for r in A]
        n = len(A)
        d = 1
        for c in range(n):
            piv = None
            for i in range(c, n):
                if A[i][c]:
                    piv = i
                    break
            if piv is None:
                return 0
            if piv != c:
                A[c], A[piv] = A[piv], A[c]
                d = self.neg[d]
            d = self.mul[d][A[c][c]]
            inv = self.inv[A[c][c]]
            for i in range(c + 1, n):
                if A[i][c]:
                    f = self.mul[A[i][c]][inv]
                    A[i] = [self.sub[x][self.mul[f][y]] for x, y in zip(A[i], A[c])]
        return d

    def in_span(self, basis, pivots, v):
        """Membership of v in the row space of an rref basis."""
        v = list(v)
        for row, c in zip(basis, pivots):
            f = v[c]
            if f:
                v = [self.sub[x][self.mul[f][y]] for x, y in zip(v, row)]
        return not any(v)

    def vectors(self, d):
        return product(range(self.Q), repeat=d)


@lru_cache(maxsize=None)
def residue_field(p, degree):
    return FiniteField(p, degree)


@lru_cache(maxsize=None)
def all_subspaces(p, degree, d):
    """Every subspace of k^d as an rref basis, each exactly once."""
    k = residue_field(p, degree)
    out = [((), ())]
    for dim in range(1, d + 1):
        for pivots in combinations(range(d), dim):
            free = []
            for i, c in enumerate(pivots):
                for c2 in range(c + 1, d):
                    if c2 not in pivots:
                        free.append((i, c2))
            for vals in product(range(k.Q), repeat=len(free)):
                rows = [[0] * d for _ in range(dim)]
                for i, c in enumerate(pivots):
                    rows[i][c] = 1
                for (i, c2), x in zip(free, vals):
                    rows[i][c2] = x
                out.append((tuple(tuple(r) for r in rows), tuple(pivots)))
    return tuple(out)

