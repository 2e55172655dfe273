"""Hermitian spaces, the symmetric space S_{n+1}, matching and sampling.

Conventions:
  * the hermitian pairing on F^m given by a Gram matrix H is
    (x, y) = x^T H ybar;
  * e = e_{n+1} is the last standard basis vector, e^* the last coordinate;
  * the special vector u is the last basis vector of W, with (u, u) = p^eps_u,
    and W^flat is spanned by the first n basis vectors.
"""

import hashlib
import random
from fractions import Fraction

from . import linalg as la
from .lattice import Lattice
from .plocal import FNumber, DomainError


class SamplingError(RuntimeError):
    pass


def derive_seed(*parts):
    """Stable sub-seed from arbitrary printable parts."""
    h = hashlib.sha256("/".join(str(x) for x in parts).encode()).hexdigest()
    return int(h[:16], 16)


class HermSpace:
    """Nondegenerate hermitian space F^m with Gram matrix `gram`."""

    def __init__(self, field, gram):
        self.field = field
        self.gram = gram
        if not la.equal(la.conj_transpose(gram), gram):
            raise DomainError("Gram matrix is not hermitian")
        d = la.det(gram)
        if d.is_zero():
            raise DomainError("degenerate hermitian form")
        self.det_val = d.val(field.p)

    @property
    def dim(self):
        return len(self.gram)

    @property
    def split(self):
        """Split iff the discriminant is a norm, i.e. val(det) is even."""
        return self.det_val % 2 == 0

    def pair(self, x, y):
        s = FNumber(0, 0, self.field.eps)
        for i, xi in enumerate(x):
            if xi.is_zero():
                continue
            for j, yj in enumerate(y):
                h = self.gram[i][j]
                if not h.is_zero() and not yj.is_zero():
                    s = s + xi * h * yj.conj()
        return s


class SpecialSetup:
    """(W, u) with (u, u) = p^eps_u; u is the last basis vector."""

    def __init__(self, W, eps_u):
        self.W = W
        self.eps_u = eps_u
        self.field = W.field
        n1 = W.dim
        eps = self.field.eps
        self.u = [FNumber(1 if i == n1 - 1 else 0, 0, eps) for i in range(n1)]
        self.flat_basis = [[FNumber(1 if i == j else 0, 0, eps) for i in range(n1)]
                           for j in range(n1 - 1)]
        unorm = W.pair(self.u, self.u)
        if unorm != FNumber(Fraction(self.field.p) ** eps_u, 0, eps):
            raise DomainError("special vector does not have norm p^eps_u")
        for v in self.flat_basis:
            if not W.pair(v, self.u).is_zero():
                raise DomainError("flat basis is not orthogonal to u")

    @property
    def n(self):
        return self.W.dim - 1

    @property
    def split(self):
        return self.W.split

    @property
    def gram(self):
        return self.W.gram

    def u_norm(self):
        return FNumber(Fraction(self.field.p) ** self.eps_u, 0, self.field.eps)

    def base_lattice(self):
        """A self-dual lattice containing u (split W only).

        eps_u = 0: the standard lattice.  eps_u = 1: the standard lattice
        enlarged by (e_n + u)/p, which is self-dual for the diagonal Gram
        matrix diag(1, ..., 1, -p, p).
        """
        if not self.split:
            raise DomainError("a nonsplit space has no self-dual lattice")
        field = self.field
        n1 = self.W.dim
        L = Lattice.standard(n1, field, "F")
        if self.eps_u == 1:
            v = [FNumber(0, 0, field.eps) for _ in range(n1)]
            v[n1 - 2] = FNumber(Fraction(1, field.p), 0, field.eps)
            v[n1 - 1] = FNumber(Fraction(1, field.p), 0, field.eps)
            L = L.add_vectors([v])
        if not L.is_selfdual(self.gram):
            raise DomainError("base lattice is not self-dual")
        return L

    def vertex_lattice_type1(self):
        """Lambda_0^flat (+) O u, the type-1 lattice used for W_1 with eps_u = 1."""
        return Lattice.standard(self.W.dim, self.field, "F")


def standard_gram(field, n, eps_u, split):
    """diag(1, ..., 1, -p^a, p^eps_u) of size n+1.

    a = eps_u for the split space W_0 and a = 1 - eps_u for the nonsplit
    space W_1, so val(det) is 2*eps_u, resp. 1.
    """
    p = field.p
    a = eps_u if split else 1 - eps_u
    entries = [1] * (n - 1) + [-Fraction(p) ** a, Fraction(p) ** eps_u]
    return la.diag(entries, field.eps)


def standard_setup(field, n, eps_u=0, split=True):
    W = HermSpace(field, standard_gram(field, n, eps_u, split))
    return SpecialSetup(W, eps_u)


# the symmetric space

def e_vector(field, m):
    eps = field.eps
    return [FNumber(1 if i == m - 1 else 0, 0, eps) for i in range(m)]


def r_map(gamma_prime):
    """gamma' -> gamma' * conj(gamma')^{-1}, landing in S."""
    if la.det(gamma_prime).is_zero():
        raise DomainError("singular input")
    return la.mul(gamma_prime, la.inverse(la.conj(gamma_prime)))


def r_map_pair(g1, g2):
    """The G'-form r(g1, g2) = r(g1^{-1} g2); g1 is block-embedded if smaller."""
    g1 = embed_block(g1, len(g2))
    return r_map(la.mul(la.inverse(g1), g2))


def embed_block(h, m):
    """diag(h, 1, ...) of size m."""
    k = len(h)
    if k == m:
        return h
    eps = h[0][0].eps
    out = la.identity(m, eps)
    for i in range(k):
        for j in range(k):
            out[i][j] = h[i][j]
    return out


def in_S(gamma):
    m = len(gamma)
    return la.equal(la.mul(gamma, la.conj(gamma)), la.identity(m, gamma[0][0].eps))


def krylov_columns(A, v, count):
    cols = [list(v)]
    for _ in range(count - 1):
        cols.append(la.mat_vec(A, cols[-1]))
    return cols


def delta_plus(gamma, e=None):
    """det of the matrix with columns gamma^i e, i = 0..n (e defaults to e_{n+1})."""
    m = len(gamma)
    eps = gamma[0][0].eps
    if e is None:
        e = [FNumber(1 if i == m - 1 else 0, 0, eps) for i in range(m)]
    return la.det(la.from_columns(krylov_columns(gamma, e, m)))


def delta_plus_semilie(gamma, e):
    """Delta^+(gamma, w') for w' = (e, e'^*): only the vector part enters."""
    return delta_plus(gamma, e)


def row_krylov_det(gamma):
    """det of the matrix with rows e^* gamma^i."""
    m = len(gamma)
    rows = [[FNumber(1 if j == m - 1 else 0, 0, gamma[0][0].eps) for j in range(m)]]
    for _ in range(m - 1):
        prev = rows[-1]
        rows.append([sum((prev[k] * gamma[k][j] for k in range(m)), FNumber(0, 0, gamma[0][0].eps))
                     for j in range(m)])
    return la.det(rows)


def is_rss_S(gamma):
    return not delta_plus(gamma).is_zero() and not row_krylov_det(gamma).is_zero()


def is_unitary(g, gram):
    return la.equal(la.mul(la.mul(la.transpose(g), gram), la.conj(g)), gram)


def is_rss_U(g, setup):
    if not is_unitary(g, setup.gram):
        raise DomainError("precondition failed: g is not unitary")
    cols = krylov_columns(g, setup.u, setup.W.dim)
    return not la.det(la.from_columns(cols)).is_zero()


class MatchingInvariants:
    __slots__ = ("charpoly", "pairing_seq")

    def __init__(self, charpoly, pairing_seq):
        self.charpoly = tuple(charpoly)
        self.pairing_seq = tuple(pairing_seq)

    def __eq__(self, other):
        return (isinstance(other, MatchingInvariants) and self.charpoly == other.charpoly
                and self.pairing_seq == other.pairing_seq)

    def __hash__(self):
        return hash((self.charpoly, self.pairing_seq))

    def __repr__(self):
        return "MatchingInvariants(charpoly=%s, pairing_seq=%s)" % (list(self.charpoly), list(self.pairing_seq))


def invariants_S(gamma):
    if not is_rss_S(gamma):
        raise DomainError("not regular semisimple")
    m = len(gamma)
    seq = []
    P = la.identity(m, gamma[0][0].eps)
    for _ in range(m):
        seq.append(P[m - 1][m - 1])
        P = la.mul(P, gamma)
    return MatchingInvariants(la.charpoly(gamma), seq)


def invariants_U(g, setup):
    if not is_rss_U(g, setup):
        raise DomainError("not regular semisimple")
    W = setup.W
    unorm = W.pair(setup.u, setup.u)
    seq = []
    v = list(setup.u)
    for _ in range(W.dim):
        seq.append(W.pair(v, setup.u) / unorm)
        v = la.mat_vec(g, v)
    return MatchingInvariants(la.charpoly(g), seq)


def matches(gamma, g, setup):
    return invariants_S(gamma) == invariants_U(g, setup)


def toeplitz_from_invariants(inv):
    c = list(inv.pairing_seq)
    m = len(c)
    T = [[None] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            k = i - j
            T[i][j] = c[k] if k >= 0 else c[-k].conj()
    return T


def matching_side(gamma, p, eps_u=0):
    """'split' or 'nonsplit': the class of the hermitian space matching gamma.

    In the cyclic basis g^i u the Gram matrix of the matched space is
    (u, u) * T with T_ij = c_{i-j}, c_k = e^* gamma^k e and
    c_{-k} = conj(c_k), so the class is read off val(det T) + (n+1) eps_u.
    """
    inv = invariants_S(gamma)
    d = la.det(toeplitz_from_invariants(inv))
    if d.is_zero():
        raise DomainError("degenerate cyclic form")
    v = d.val(p) + len(gamma) * eps_u
    return "split" if v % 2 == 0 else "nonsplit"


def unitary_model(gamma, field, eps_u=0):
    """A unitary pair matching gamma, built on the cyclic space.

    Returns (setup_like, g): the hermitian space is F^{n+1} with Gram
    matrix p^eps_u * T in the basis v_i = g^i u, g is the companion matrix
    of the characteristic polynomial, and u = v_0.  This works for every n
    but yields a space that is only isometric to W_0 or W_1 over F_0.
    """
    inv = invariants_S(gamma)
    T = toeplitz_from_invariants(inv)
    m = len(gamma)
    eps = field.eps
    N = Fraction(field.p) ** eps_u
    gram = [[x * N for x in row] for row in T]
    coeffs = inv.charpoly
    g = la.zeros(m, m, eps)
    for i in range(m - 1):
        g[i + 1][i] = FNumber(1, 0, eps)
    for i in range(m):
        g[i][m - 1] = -coeffs[i]
    W = HermSpace(field, gram)
    setup = CyclicSetup(W, eps_u)
    if not is_unitary(g, gram):
        raise DomainError("companion matrix is not unitary for the cyclic form")
    return setup, g


class CyclicSetup:
    """Special setup whose special vector is the first basis vector."""

    def __init__(self, W, eps_u):
        self.W = W
        self.eps_u = eps_u
        self.field = W.field
        m = W.dim
        eps = self.field.eps
        self.u = [FNumber(1 if i == 0 else 0, 0, eps) for i in range(m)]

    @property
    def n(self):
        return self.W.dim - 1

    @property
    def split(self):
        return self.W.split

    @property
    def gram(self):
        return self.W.gram

    def u_norm(self):
        return FNumber(Fraction(self.field.p) ** self.eps_u, 0, self.field.eps)


# sampling

def _rand_F0(rng, height, p, allow_p=True):
    a = rng.randint(-height, height)
    if allow_p and rng.random() < 0.25:
        k = rng.choice([-1, 1])
        a = Fraction(a) * Fraction(p) ** k
    return Fraction(a)


def _rand_F(rng, height, field, allow_p=True):
    return FNumber(_rand_F0(rng, height, field.p, allow_p),
                   _rand_F0(rng, height, field.p, allow_p), field.eps)


def random_matrix_F(rng, m, height, field, allow_p=True):
    return [[_rand_F(rng, height, field, allow_p) for _ in range(m)] for _ in range(m)]


def random_GL_F0(rng, m, height, field, max_tries=100):
    eps = field.eps
    for _ in range(max_tries):
        h = [[FNumber(_rand_F0(rng, height, field.p), 0, eps) for _ in range(m)] for _ in range(m)]
        if not la.det(h).is_zero():
            return h
    raise SamplingError("could not sample an invertible matrix")


def sample_S(rng, n, height, field, max_tries=200):
    for _ in range(max_tries):
        gp = random_matrix_F(rng, n + 1, height, field)
        if la.det(gp).is_zero():
            continue
        gamma = r_map(gp)
        if is_rss_S(gamma):
            return gamma
    raise SamplingError("no rss element after %d attempts" % max_tries)


def cayley(A, eps):
    m = len(A)
    I = la.identity(m, eps)
    return la.mul(la.inverse(la.add(I, A)), la.sub(I, A))


def sample_unitary(rng, setup, height, integral_bias=0.7, max_tries=200):
    """Unitary g on setup.W via the Cayley transform of a skew element.

    With probability integral_bias the skew element is integral on a
    self-dual (or the standard) lattice, which makes g likely to stabilize
    lattices and gives nonzero orbital integrals.
    """
    field = setup.field
    eps = field.eps
    m = setup.W.dim
    H = setup.gram
    Hb = la.conj(H)
    Hb_inv = la.inverse(Hb)
    if setup.split:
        P = setup.base_lattice().matrix()
    else:
        P = la.identity(m, eps)
    P_inv = la.inverse(P)
    for _ in range(max_tries):
        integral = rng.random() < integral_bias
        Y0 = random_matrix_F(rng, m, height, field, allow_p=not integral)
        if integral and rng.random() < 0.5:
            # mixed valuations vary the discriminant
            Y0 = [[x * field.p if rng.random() < 0.5 else x for x in row] for row in Y0]
        if integral and rng.random() < 0.35:
            # g close to 1 stabilizes many lattices
            k = rng.choice([1, 1, 2])
            Y0 = [[x * field.p ** k for x in row] for row in Y0]
        Y = la.mul(la.mul(P, Y0), P_inv)
        A = la.sub(Y, la.mul(la.mul(Hb_inv, la.transpose(la.conj(Y))), Hb))
        I = la.identity(m, eps)
        if la.det(la.add(I, A)).is_zero():
            continue
        g = cayley(A, eps)
        if rng.random() < 0.3:
            # multiply by a unitary reflection-free diagonal in U(W^flat) x U(u)
            g = la.mul(g, _random_torus_element(rng, setup))
        if not is_unitary(g, H):
            raise AssertionError("Cayley transform failed to be unitary")
        if is_rss_U(g, setup):
            return g
    raise SamplingError("no rss unitary element after %d attempts" % max_tries)


def _random_torus_element(rng, setup):
    field = setup.field
    eps = field.eps
    m = setup.W.dim
    out = la.identity(m, eps)
    for i in range(m):
        z = FNumber(rng.randint(-3, 3), rng.randint(-3, 3), eps)
        if z.is_zero():
            continue
        out[i][i] = z / z.conj()
    return out


def n1_matching_gamma(g, setup, c=1):
    """Closed-form gamma in S_2 matching (g, u) for n = 1.

    gamma = [[t - d, x], [y, d]] with t = tr g, D = det g, d = (gu,u)/(u,u),
    x = c*delta*z where z/zbar = D (z = 1 + D, or delta when D = -1), and
    y = ((t - d) d - D)/x.
    """
    field = setup.field
    eps = field.eps
    if setup.W.dim != 2:
        raise DomainError("closed form only for n = 1")
    W = setup.W
    t = g[0][0] + g[1][1]
    D = la.det(g)
    d = W.pair(la.mat_vec(g, setup.u), setup.u) / W.pair(setup.u, setup.u)
    one = FNumber(1, 0, eps)
    delta = FNumber(0, 1, eps)
    z = one + D
    if z.is_zero():
        z = delta
    x = delta * z * Fraction(c)
    y = ((t - d) * d - D) / x
    gamma = [[t - d, x], [y, d]]
    if not in_S(gamma):
        raise AssertionError("closed-form gamma is not in S")
    return gamma


def sample_pair_n1(rng, field, eps_u, split, height):
    """A matching pair (gamma, g, setup) with n = 1."""
    setup = standard_setup(field, 1, eps_u, split)
    for _ in range(100):
        g = sample_unitary(rng, setup, height)
        c = Fraction(rng.choice([1, 1, 1, 2, -1, field.p, Fraction(1, field.p)]))
        gamma = n1_matching_gamma(g, setup, c)
        if is_rss_S(gamma):
            if invariants_S(gamma) != invariants_U(g, setup):
                raise AssertionError("closed-form pair does not match")
            return gamma, g, setup
    raise SamplingError("no matching pair found")


def sample_rss(seed, kind, n, height_bound, field, eps_u=0):
    """Deterministic sampler; kind in {S, U_split, U_nonsplit, pair_n1}."""
    rng = random.Random(derive_seed(seed, kind, n, height_bound, field.p, eps_u))
    if n < 1:
        raise DomainError("n must be at least 1")
    if kind == "S":
        return sample_S(rng, n, height_bound, field)
    if kind in ("U_split", "U_nonsplit"):
        setup = standard_setup(field, n, eps_u, kind == "U_split")
        return sample_unitary(rng, setup, height_bound), setup
    if kind == "pair_n1":
        if n != 1:
            raise DomainError("pair_n1 requires n = 1")
        split = rng.random() < 0.5
        return sample_pair_n1(rng, field, eps_u, split, height_bound)
    raise DomainError("unknown sample kind %r" % (kind,))


def conjugate_S(gamma, h, field):
    """h^{-1} gamma h with h in GL_n(F0) block-embedded."""
    H = embed_block(h, len(gamma))
    return la.mul(la.mul(la.inverse(H), gamma), H)
