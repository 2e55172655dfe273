"""Lattices over O_F0 = Z_p and O_F in canonical Hermite form.

A lattice is stored by an upper triangular basis (columns) whose i-th
column has diagonal entry p^k_i, zeros below, and entries above reduced to
the canonical representatives of F / p^k_r O.  Two lattices are equal iff
their canonical bases agree, so lattices hash and deduplicate cheaply.

ring is "F" for O_F-lattices in F^m and "F0" for O_F0-lattices in F0^m
(entries then have zero delta-part).
"""

from fractions import Fraction
from itertools import product

from . import linalg as la
from .finfield import residue_field, all_subspaces
from .plocal import FNumber, DomainError, reduce_mod, val_p


DEFAULT_BUDGET_EXP = 24


class BudgetExceeded(RuntimeError):
    def __init__(self, index, budget):
        super().__init__("enumeration budget exceeded: index %s > %s" % (index, budget))
        self.index = index
        self.budget = budget


def _ppow(p, k):
    return Fraction(p) ** k


def _reduce(x, k, p, ring):
    if ring == "F":
        return FNumber(reduce_mod(x.a, k, p), reduce_mod(x.b, k, p), x.eps)
    return FNumber(reduce_mod(x.a, k, p), 0, x.eps)


def _integral(x, p):
    return x.a.denominator % p != 0 and x.b.denominator % p != 0


def hermite_form(cols, field, ring):
    """Canonical basis of the O-span of the given columns.

    Returns (basis_columns, exponents).  Raises DomainError when the
    columns do not span the ambient space.
    """
    p = field.p
    eps = field.eps
    if not cols:
        raise DomainError("not full rank")
    m = len(cols[0])
    pool = [list(c) for c in cols if any(not x.is_zero() for x in c)]
    basis = [None] * m
    exps = [0] * m
    for i in range(m - 1, -1, -1):
        best, bv = None, None
        for j, c in enumerate(pool):
            x = c[i]
            if x.a or x.b:
                v = x.val(p)
                if bv is None or v < bv:
                    best, bv = j, v
        if best is None:
            raise DomainError("not full rank")
        piv = pool.pop(best)
        pk = _ppow(p, bv)
        w = piv[i] / pk
        if not (w.a == 1 and not w.b):
            winv = w.inverse()
            piv = [x * winv for x in piv[:i]] + [FNumber(pk, 0, eps)] + [FNumber(0, 0, eps)] * (m - i - 1)
        else:
            piv = piv[:i] + [FNumber(pk, 0, eps)] + [FNumber(0, 0, eps)] * (m - i - 1)
        newpool = []
        for c in pool:
            x = c[i]
            if x.a or x.b:
                t = x / pk
                c = [a - t * b for a, b in zip(c[:i], piv[:i])]
            else:
                c = c[:i]
            if any(y.a or y.b for y in c):
                newpool.append(c + [FNumber(0, 0, eps)] * (m - i))
        pool = newpool
        basis[i] = piv
        exps[i] = bv
    for j in range(m):
        col = basis[j]
        for i in range(j - 1, -1, -1):
            x = col[i]
            r = _reduce(x, exps[i], p, ring)
            if r != x:
                t = (x - r) / _ppow(p, exps[i])
                bi = basis[i]
                col = [a - t * b if k <= i else a for k, (a, b) in enumerate(zip(col, bi))]
                col[i] = r
        basis[j] = col
    return tuple(tuple(c) for c in basis), tuple(exps)


class Lattice:
    """Full-rank lattice in canonical Hermite form."""

    __slots__ = ("field", "ring", "basis", "exps", "_key", "_inv")

    def __init__(self, field, ring, basis, exps):
        self.field = field
        self.ring = ring
        self.basis = basis
        self.exps = exps
        self._key = None
        self._inv = None

    @classmethod
    def from_columns(cls, cols, field, ring="F"):
        cols = [[la.F(x, field.eps) for x in c] for c in cols]
        if ring == "F0" and any(not x.is_rational() for c in cols for x in c):
            raise DomainError("O_F0-lattice needs rational generators")
        basis, exps = hermite_form(cols, field, ring)
        return cls(field, ring, basis, exps)

    @classmethod
    def from_matrix(cls, B, field, ring="F"):
        return cls.from_columns(la.columns(B), field, ring)

    @classmethod
    def standard(cls, m, field, ring="F", k=0):
        eps = field.eps
        pk = _ppow(field.p, k)
        cols = [[FNumber(pk if i == j else 0, 0, eps) for i in range(m)] for j in range(m)]
        return cls(field, ring, tuple(tuple(c) for c in cols), tuple([k] * m))

    @property
    def dim(self):
        return len(self.basis)

    @property
    def p(self):
        return self.field.p

    def key(self):
        if self._key is None:
            self._key = (self.ring, tuple((x.a, x.b) for c in self.basis for x in c))
        return self._key

    def __eq__(self, other):
        return isinstance(other, Lattice) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def sort_key(self):
        return (sum(self.exps), self.exps,
                tuple((x.a, x.b) for c in self.basis for x in c))

    def __repr__(self):
        return "Lattice(%s, exps=%s)" % (self.ring, list(self.exps))

    def matrix(self):
        return la.from_columns([list(c) for c in self.basis])

    def columns(self):
        return [list(c) for c in self.basis]

    def val(self):
        """Valuation of the determinant of a basis."""
        return sum(self.exps)

    def coords(self, v):
        """Coordinates of v in the canonical basis (back substitution)."""
        m = self.dim
        B = self.basis
        x = [None] * m
        p = self.p
        for i in range(m - 1, -1, -1):
            s = v[i]
            for j in range(i + 1, m):
                bij = B[j][i]
                if bij.a or bij.b:
                    s = s - bij * x[j]
            x[i] = s / _ppow(p, self.exps[i])
        return x

    def contains(self, v):
        p = self.p
        return all(_integral(c, p) for c in self.coords(v))

    def contains_lattice(self, other):
        return all(self.contains(c) for c in other.basis)

    def __le__(self, other):
        return other.contains_lattice(self)

    def __ge__(self, other):
        return self.contains_lattice(other)

    def scaled(self, k):
        return Lattice.from_columns([[x * _ppow(self.p, k) for x in c] for c in self.basis],
                                    self.field, self.ring)

    def apply(self, g):
        return Lattice.from_columns([la.mat_vec(g, list(c)) for c in self.basis],
                                    self.field, self.ring)

    def is_stable(self, g):
        return all(self.contains(la.mat_vec(g, list(c))) for c in self.basis)

    def stabilizes(self, g):
        """True iff g L = L."""
        return self.apply(g) == self

    def __add__(self, other):
        return Lattice.from_columns(self.columns() + other.columns(), self.field, self.ring)

    def add_vectors(self, vecs):
        return Lattice.from_columns(self.columns() + [list(v) for v in vecs],
                                    self.field, self.ring)

    def bilinear_dual(self):
        """{y : y^T x in O for all x in L}, the dual for the standard pairing."""
        Binv = la.inverse(self.matrix())
        return Lattice.from_columns([list(r) for r in Binv], self.field, self.ring)

    def intersect(self, other):
        return (self.bilinear_dual() + other.bilinear_dual()).bilinear_dual()

    def index_in(self, other):
        """log_p of [other : self] as O_F0-modules; requires self <= other."""
        deg = 2 if self.ring == "F" else 1
        return deg * (self.val() - other.val())

    # hermitian data

    def gram(self, H):
        B = self.matrix()
        return la.mul(la.mul(la.transpose(B), H), la.conj(B))

    def dual(self, H):
        """L^vee = {x : (x, L) in O_F} for the pairing x^T H ybar."""
        if self.ring != "F":
            raise DomainError("hermitian dual needs an O_F-lattice")
        B = self.matrix()
        M = la.mul(la.conj_transpose(B), la.transpose(H))
        D = la.inverse(M)
        return Lattice.from_matrix(D, self.field, "F")

    def invariants(self, H):
        return InvariantProfile(smith_valuations(self.gram(H), self.p))

    def is_integral_for(self, H):
        return la.is_integral(self.gram(H), self.p)

    def is_selfdual(self, H):
        G = self.gram(H)
        return la.is_integral(G, self.p) and la.det(G).val(self.p) == 0

    def is_vertex(self, H):
        a = self.invariants(H).a
        return all(0 <= x <= 1 for x in a)


class InvariantProfile:
    """Fundamental invariants a_1 <= ... <= a_n of L^vee / L."""

    __slots__ = ("a",)

    def __init__(self, a):
        self.a = tuple(sorted(a))

    @property
    def type_t(self):
        return sum(1 for x in self.a if x != 0)

    @property
    def valuation(self):
        return sum(self.a)

    @property
    def integral(self):
        return not self.a or self.a[0] >= 0

    def __eq__(self, other):
        return isinstance(other, InvariantProfile) and self.a == other.a

    def __hash__(self):
        return hash(self.a)

    def __repr__(self):
        return "InvariantProfile(%s)" % (list(self.a),)


def smith_valuations(A, p):
    """Elementary divisor valuations of a square matrix over a DVR."""
    M = [list(r) for r in A]
    n = len(M)
    out = []
    rows = list(range(n))
    cols = list(range(n))
    while rows:
        best = None
        for i in rows:
            for j in cols:
                x = M[i][j]
                if x.a or x.b:
                    v = x.val(p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        if best is None:
            raise DomainError("degenerate matrix")
        v, i0, j0 = best
        out.append(v)
        piv = M[i0][j0]
        inv = piv.inverse()
        for i in rows:
            if i != i0 and not M[i][j0].is_zero():
                f = M[i][j0] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[i0])]
        for j in cols:
            if j != j0 and not M[i0][j].is_zero():
                f = M[i0][j] * inv
                for i in rows:
                    M[i][j] = M[i][j] - f * M[i][j0]
        rows.remove(i0)
        cols.remove(j0)
    return sorted(out)


def canonicalize(B, field, ring="F"):
    """Lattice spanned by the columns of B."""
    return Lattice.from_matrix(B, field, ring)


def dual(L, H):
    return L.dual(H)


def invariants(L, H):
    return L.invariants(H)


def is_selfdual(L, H):
    return L.is_selfdual(H)


def is_vertex(L, H):
    return L.is_vertex(H)


def stabilizes(g, L):
    return L.stabilizes(g)


def _residue_degree(ring):
    return 2 if ring == "F" else 1


def _budget(field, budget):
    if budget is None:
        return field.p ** DEFAULT_BUDGET_EXP
    return budget


def closure(start_vectors, ops, field, ring, bound=None, max_steps=200):
    """Smallest ops-stable lattice containing the given vectors.

    The vectors must span the ambient space.  Returns None when the
    closure escapes the lattice `bound` (if given) or fails to stabilize,
    which happens exactly when the operators are not integral on any
    lattice containing the vectors.
    """
    L = Lattice.from_columns([list(v) for v in start_vectors], field, ring)
    for _ in range(max_steps):
        if bound is not None and not bound.contains_lattice(L):
            return None
        new = []
        for A in ops:
            for c in L.basis:
                w = la.mat_vec(A, list(c))
                if not L.contains(w):
                    new.append(w)
        if not new:
            return L
        L = L.add_vectors(new)
    return None


def _covers(M, ops, hi, kfield, extra_ok=None):
    """Stable lattices M' with M < M' <= p^-1 M (and M' <= hi)."""
    field = M.field
    p = field.p
    m = M.dim
    B = M.matrix()
    Binv = la.inverse(B)
    red_ops = []
    for A in ops:
        C = la.mul(la.mul(Binv, A), B)
        if not la.is_integral(C, p):
            raise DomainError("lattice is not stable under the operators")
        red_ops.append(tuple(tuple(kfield.reduce(x) for x in row) for row in C))
    up = M.scaled(-1)
    if hi is not None:
        N = up.intersect(hi)
        if N == M:
            return []
        gens = []
        for c in N.basis:
            x = la.mat_vec(Binv, list(c))
            gens.append(tuple(kfield.reduce(y * p) for y in x))
        Vb, Vp = kfield.rref(gens)
    else:
        Vb = tuple(tuple(1 if i == j else 0 for j in range(m)) for i in range(m))
    dV = len(Vb)
    if dV == 0:
        return []
    out = []
    for S, _ in all_subspaces(p, kfield.degree, dV):
        if not S:
            continue
        W = [tuple(_comb(kfield, s, Vb)) for s in S]
        Wb, Wp = kfield.rref(W)
        ok = True
        for A in red_ops:
            for w in Wb:
                if not kfield.in_span(Wb, Wp, kfield.mat_vec(A, w)):
                    ok = False
                    break
            if not ok:
                break
        if not ok:
            continue
        lifted = []
        for w in Wb:
            vec = [_lift(kfield, x, field) for x in w]
            lifted.append([y * Fraction(1, p) for y in la.mat_vec(B, vec)])
        out.append(M.add_vectors(lifted))
    return out


def _comb(k, coeffs, rows):
    out = [0] * len(rows[0])
    for c, r in zip(coeffs, rows):
        if c:
            out = [k.add[x][k.mul[c][y]] for x, y in zip(out, r)]
    return out


def _lift(k, x, field):
    a, b = k.lift_pair(x)
    if k.degree == 1:
        b = 0
    return FNumber(a, b, field.eps)


def stable_lattices(lo, ops, hi=None, keep=None, budget=None):
    """All lattices M with lo <= M (<= hi) stable under ops and satisfying keep.

    `keep` must be inherited by stable sublattices containing lo (for
    example integrality for a hermitian form); the search walks upward by
    covers of exponent one, so every such lattice is reached.
    """
    field = lo.field
    kfield = residue_field(field.p, _residue_degree(lo.ring))
    budget = _budget(field, budget)
    seen = {lo}
    stack = [lo]
    while stack:
        M = stack.pop()
        for M2 in _covers(M, ops, hi, kfield):
            if M2 in seen:
                continue
            if keep is not None and not keep(M2):
                continue
            seen.add(M2)
            if len(seen) > budget:
                raise BudgetExceeded(len(seen), budget)
            stack.append(M2)
    return sorted(seen)


def smith_adapted(lo, hi):
    """Basis H' of hi and exponents d with lo = H' diag(p^d) O^m."""
    if not hi.contains_lattice(lo):
        raise DomainError("precondition failed: Lo is not contained in Hi")
    p = lo.p
    Hb = hi.matrix()
    P = la.mul(la.inverse(Hb), lo.matrix())
    m = len(P)
    eps = lo.field.eps
    S = la.identity(m, eps)
    M = [list(r) for r in P]
    d = []
    for t in range(m):
        best = None
        for i in range(t, m):
            for j in range(t, m):
                x = M[i][j]
                if not x.is_zero():
                    v = x.val(p)
                    if best is None or v < best[0]:
                        best = (v, i, j)
        v, i0, j0 = best
        M[t], M[i0] = M[i0], M[t]
        S[t], S[i0] = S[i0], S[t]
        for r in M:
            r[t], r[j0] = r[j0], r[t]
        piv = M[t][t]
        inv = piv.inverse()
        for i in range(t + 1, m):
            if not M[i][t].is_zero():
                f = M[i][t] * inv
                M[i] = [x - f * y for x, y in zip(M[i], M[t])]
                S[i] = [x - f * y for x, y in zip(S[i], S[t])]
        for j in range(t + 1, m):
            if not M[t][j].is_zero():
                f = M[t][j] * inv
                for r in M:
                    r[j] = r[j] - f * r[t]
        d.append(v)
    Hprime = la.mul(Hb, la.inverse(S))
    return Hprime, d


def intermediate_lattices(lo, hi, predicate=None, budget=None):
    """Every lattice M with lo <= M <= hi satisfying the predicate, once each.

    Works in the finite quotient hi/lo: an adapted basis puts lo in the
    form diag(p^d_i), and submodules are enumerated as echelon forms
    with diagonal exponents 0 <= k_i <= d_i.
    """
    field = lo.field
    p = field.p
    ring = lo.ring
    deg = _residue_degree(ring)
    Hprime, d = smith_adapted(lo, hi)
    index = p ** (deg * sum(d))
    budget = _budget(field, budget)
    if index > budget:
        raise BudgetExceeded(index, budget)
    m = len(d)
    eps = field.eps
    found = []
    seen = set()
    for ks in product(*[range(x + 1) for x in d]):
        slots = [(r, j) for j in range(m) for r in range(j)]
        ranges = []
        for (r, j) in slots:
            ranges.append(_residues(p, ks[r], ring, eps))
        for vals in product(*ranges):
            cols = []
            for j in range(m):
                col = [FNumber(0, 0, eps) for _ in range(m)]
                col[j] = FNumber(p ** ks[j], 0, eps)
                cols.append(col)
            for (r, j), x in zip(slots, vals):
                cols[j][r] = x
            C = la.from_columns(cols)
            Cinv = la.inverse(C)
            ok = True
            for j in range(m):
                e = [FNumber(0, 0, eps) for _ in range(m)]
                e[j] = FNumber(p ** d[j], 0, eps)
                if not la.is_integral([la.mat_vec(Cinv, e)], p):
                    ok = False
                    break
            if not ok:
                continue
            L = Lattice.from_matrix(la.mul(Hprime, C), field, ring)
            if L in seen:
                raise AssertionError("duplicate submodule in enumeration")
            seen.add(L)
            if predicate is None or predicate(L):
                found.append(L)
    return sorted(found)


def _residues(p, k, ring, eps):
    n = p ** k
    if ring == "F":
        return [FNumber(a, b, eps) for a in range(n) for b in range(n)]
    return [FNumber(a, 0, eps) for a in range(n)]


def window_lattices(field, ring, m, B, predicate, exps_filter=None):
    """Brute force: every Hermite form with exponents in [-B, B] and entries
    in p^-B O, tested against the predicate.

    This is the independent oracle for the structured enumerations: it
    shares only the canonical form with them.
    """
    p = field.p
    eps = field.eps
    out = []
    scale = Fraction(1, p ** B)
    for ks in product(range(-B, B + 1), repeat=m):
        if exps_filter is not None and not exps_filter(ks):
            continue
        slots = [(r, j) for j in range(m) for r in range(j)]
        ranges = []
        for (r, j) in slots:
            n = p ** (ks[r] + B)
            if ring == "F":
                ranges.append([(a, b) for a in range(n) for b in range(n)])
            else:
                ranges.append([(a, 0) for a in range(n)])
        for vals in product(*ranges):
            cols = []
            for j in range(m):
                col = [FNumber(0, 0, eps) for _ in range(m)]
                col[j] = FNumber(Fraction(p) ** ks[j], 0, eps)
                cols.append(col)
            for (r, j), (a, b) in zip(slots, vals):
                cols[j][r] = FNumber(a * scale, b * scale, eps)
            L = Lattice(field, ring, tuple(tuple(c) for c in cols), tuple(ks))
            if predicate(L):
                out.append(L)
    return out
