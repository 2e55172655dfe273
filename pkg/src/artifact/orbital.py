"""Transfer factors and weighted orbital integrals.

Symmetric-space side.  With X = q^{-s}, the inhomogeneous integral

    Orb(gamma, phi, s) = omega_S(gamma) * int_{GL_n(F0)} phi(h^-1 gamma h) |det h|^s eta(h) dh

is a finite sum over lattices: h^-1 gamma h lies in S(O) exactly when
gamma stabilizes h O_F^{n+1}, and |det h|^s eta(h) = (-X)^{val det h}.
Each atom below is turned into a condition on O_F0-lattices M in
F0^{n+1} (gamma-stability of M (x) O_F is gamma_1 M <= M and
gamma_2 M <= M for gamma = gamma_1 + delta gamma_2) and summed over a
sandwich Lo <= M <= Hi.

Unitary side.  Orbital integrals of stabilizers of lattices are counts
of g-stable lattices, enumerated between O_F[g]u and its dual.
"""

from fractions import Fraction

from . import linalg as la
from . import orbits as ob
from .finfield import all_subspaces, residue_field
from .lattice import (BudgetExceeded, Lattice, closure, intermediate_lattices, smith_adapted, stable_lattices,
                      window_lattices)
from .plocal import FNumber, XLaurent, DomainError, eta_tilde_minus_s, eta_tilde, val


class NoSharpReduction(DomainError):
    pass


class OrbitalValue:
    __slots__ = ("poly", "at_zero", "d_at_zero_coeff")

    def __init__(self, poly):
        self.poly = poly
        self.at_zero = poly.value_at_zero()
        self.d_at_zero_coeff = poly.d_at_zero()

    def __eq__(self, other):
        return isinstance(other, OrbitalValue) and self.poly == other.poly

    def __repr__(self):
        return "OrbitalValue(%r)" % (self.poly,)

    def doubled(self):
        """The value at 2s."""
        return OrbitalValue(self.poly.substitute_power(2))


# transfer factors

def transfer_factor_S(gamma, p):
    """omega_{S,s}(gamma) = eta~_{-s}(Delta^+(gamma))."""
    d = ob.delta_plus(gamma)
    if d.is_zero():
        raise DomainError("not regular semisimple")
    return eta_tilde_minus_s(d, p)


def transfer_factor_semilie(gamma, e, p):
    """omega_{S x W', s}(gamma, w') with w' = (e, e^*)."""
    d = ob.delta_plus_semilie(gamma, e)
    if d.is_zero():
        raise DomainError("not regular semisimple")
    return eta_tilde_minus_s(d, p)


def transfer_factor_Gprime(g_n, g_n1, p):
    """omega_{G',s}(gamma) for gamma = (g_n, g_n1) in GL_n(F) x GL_{n+1}(F).

    eta~^n(det(g_n^-1 g_n1)) * |det g_n|_F^{-s} * omega_{S,2s}(r(gamma)),
    where |z|_F^{-s} = q^{2 val(z) s} = X^{-2 val(z)}.
    """
    n = len(g_n)
    gamma = ob.r_map_pair(g_n, g_n1)
    dn = la.det(g_n)
    ratio = la.det(g_n1) / dn
    sign = eta_tilde(ratio, p) ** n
    return transfer_factor_S(gamma, p).substitute_power(2) * XLaurent({-2 * val(dn, p): sign})


# test functions on S

class TestFunctionS:
    """Finite sum of (XLaurent coefficient, atom).

    Atoms: ("S_O",), ("translate", t) with t a rational (n+1)x(n+1)
    matrix given as a tuple of row tuples, and ("K_S_varpi",).
    """

    def __init__(self, terms=()):
        self.terms = [(c if isinstance(c, XLaurent) else XLaurent.const(c), a) for c, a in terms]

    def __add__(self, other):
        return TestFunctionS(self.terms + other.terms)

    def scale(self, c):
        c = c if isinstance(c, XLaurent) else XLaurent.const(c)
        return TestFunctionS([(c * a, atom) for a, atom in self.terms])

    def __repr__(self):
        return "TestFunctionS(%r)" % (self.terms,)


def ind_S_O():
    return TestFunctionS([(1, ("S_O",))])


def ind_K_S_varpi():
    return TestFunctionS([(1, ("K_S_varpi",))])


def translate(t):
    key = tuple(tuple(Fraction(x) for x in row) for row in t)
    return TestFunctionS([(1, ("translate", key))])


def u_matrix(n, p):
    """[[1_n, p^-1 e_n], [0, 1]]."""
    t = [[Fraction(int(i == j)) for j in range(n + 1)] for i in range(n + 1)]
    t[n - 1][n] = Fraction(1, p)
    return t


def h0_matrix(n, p):
    t = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
    for i in range(n):
        t[i][i] = Fraction(p)
    t[n][n] = Fraction(1)
    return t


def u_prime_matrix(n, p):
    h0 = h0_matrix(n, p)
    u = u_matrix(n, p)
    return [[sum(h0[i][k] * u[k][j] for k in range(n + 1)) for j in range(n + 1)]
            for i in range(n + 1)]


def phi_prime_s(n, q, coefficient=None):
    """The s-dependent function
    c * u*1_{S(O)} + ((-1)^{n+1} X^{n+1} + 1) * 1_{S(O)},
    with c = q^{2(n+1)} - 1 unless another coefficient is passed."""
    if coefficient is None:
        coefficient = q ** (2 * (n + 1)) - 1
    sign = -1 if (n + 1) % 2 else 1
    return (translate(u_matrix(n, q)).scale(coefficient)
            + ind_S_O().scale(XLaurent({n + 1: sign, 0: 1})))


def phi_prime_r(n, r, q, coefficient=None):
    """(phi'_s, correction) for 0 <= r <= n.

    r odd: phi'_s above; the correction (n+1) 1_{S(O)} log q is present
    when n is even.  r even: 1_{S(O)} and no correction.
    """
    if not 0 <= r <= n:
        raise DomainError("need 0 <= r <= n")
    if r % 2 == 0:
        return ind_S_O(), None
    corr = ind_S_O().scale(n + 1) if n % 2 == 0 else None
    return phi_prime_s(n, q, coefficient), corr


# the symmetric-space sums

def _split_F0(A, eps):
    A1, A2 = la.real_imag(A)
    return A1, A2


def _e(m, eps, scale=1):
    return [FNumber(scale if i == m - 1 else 0, 0, eps) for i in range(m)]


def row_dual_bound(gamma, field):
    """{x in F0^{n+1} : e^* gamma^i x in O_F for i = 0..n}."""
    m = len(gamma)
    eps = field.eps
    rows = [_e(m, eps)]
    for _ in range(m - 1):
        prev = rows[-1]
        rows.append([sum((prev[k] * gamma[k][j] for k in range(m)), FNumber(0, 0, eps))
                     for j in range(m)])
    gens = []
    for r in rows:
        gens.append([FNumber(x.a, 0, eps) for x in r])
        gens.append([FNumber(x.b, 0, eps) for x in r])
    R = Lattice.from_columns(gens, field, "F0")
    return R.bilinear_dual()


def _stable_F0_lattices(gamma, field, start, hi, method="bfs", budget=None):
    """gamma-stable O_F0-lattices M with start <= M <= hi."""
    ops = list(_split_F0(gamma, field.eps))
    lo = closure(start, ops, field, "F0", bound=hi)
    if lo is None:
        return []
    if method == "bfs":
        return stable_lattices(lo, ops, hi=hi, budget=budget)
    return intermediate_lattices(lo, hi, predicate=lambda M: all(M.is_stable(A) for A in ops),
                                 budget=budget)


def _translate_data(t, field):
    """(j, k, val L_t): e^* L_t = p^j O and k = min{i >= 0 : p^{j+i} e in L_t}."""
    eps = field.eps
    p = field.p
    m = len(t)
    T = [[FNumber(x, 0, eps) for x in row] for row in t]
    L = Lattice.from_matrix(T, field, "F0")
    j = min(val(x, p) for x in t[m - 1] if x != 0)
    k = 0
    while not L.contains(_e(m, eps, Fraction(p) ** (j + k))):
        k += 1
        if k > 64:
            raise DomainError("translate data did not stabilize")
    return j, k, L.val()


def _orbit_weight(n, k, q):
    """1 / [GL_n(O) : stabilizer of a vector of exact order p^k in (F0/O)^n]."""
    if k == 0:
        return Fraction(1)
    return Fraction(1, q ** (n * k) - q ** (n * (k - 1)))


def translate_sum(gamma, t, field, method="bfs", budget=None):
    """sum over h in GL_n(F0) of 1[gamma stabilizes h t O_F] (-X)^{val det h}."""
    p = field.p
    m = len(gamma)
    n = m - 1
    eps = field.eps
    j, k, vt = _translate_data(t, field)
    hi = row_dual_bound(gamma, field)
    start = [_e(m, eps, Fraction(p) ** k)]
    lats = _stable_F0_lattices(gamma, field, start + _rational_parts(gamma, start[0], field),
                               hi, method, budget)
    e_prev = _e(m, eps, Fraction(p) ** (k - 1)) if k > 0 else None
    total = XLaurent.zero()
    for M in lats:
        if not _last_coord_unit(M, p):
            continue
        if e_prev is not None and M.contains(e_prev):
            continue
        v = M.val() + j * m - vt
        total = total + XLaurent({v: -1 if v % 2 else 1})
    return total * _orbit_weight(n, k, p)


def _rational_parts(gamma, v, field):
    """Real and imaginary parts of gamma^i v; together they span F0^{n+1} for rss gamma."""
    out = []
    eps = field.eps
    w = list(v)
    for _ in range(len(gamma)):
        out.append([FNumber(x.a, 0, eps) for x in w])
        out.append([FNumber(x.b, 0, eps) for x in w])
        w = la.mat_vec(gamma, w)
    return [x for x in out if any(not y.is_zero() for y in x)]


def _last_coord_unit(M, p):
    # canonical form is upper triangular, so e^* M is generated by the last diagonal entry
    return M.exps[-1] == 0


def S_O_sum(gamma, field, method="bfs", budget=None):
    """sum over Xi of (-X)^{val Xi} for gamma-stable Xi (+) O e."""
    m = len(gamma)
    eps = field.eps
    hi = row_dual_bound(gamma, field)
    e = _e(m, eps)
    lats = _stable_F0_lattices(gamma, field, _rational_parts(gamma, e, field), hi, method, budget)
    total = XLaurent.zero()
    for M in lats:
        v = M.val()
        total = total + XLaurent({v: -1 if v % 2 else 1})
    return total


def K_S_varpi_sum(gamma, field, method="bfs", budget=None):
    """Lattices Xi (+) O e with Xi (+) p^-1 O e also gamma-stable."""
    m = len(gamma)
    eps = field.eps
    p = field.p
    ops = list(_split_F0(gamma, eps))
    hi = row_dual_bound(gamma, field)
    e = _e(m, eps)
    lats = _stable_F0_lattices(gamma, field, _rational_parts(gamma, e, field), hi, method, budget)
    einv = _e(m, eps, Fraction(1, p))
    total = XLaurent.zero()
    for M in lats:
        M2 = M.add_vectors([einv])
        if all(M2.is_stable(A) for A in ops):
            v = M.val()
            total = total + XLaurent({v: -1 if v % 2 else 1})
    return total


def _require_rss(gamma):
    if not ob.is_rss_S(gamma):
        raise DomainError("not regular semisimple")


def orb_S(gamma, f, field, method="bfs", budget=None):
    """Orb(gamma, f, s) as an OrbitalValue."""
    _require_rss(gamma)
    omega = transfer_factor_S(gamma, field.p)
    total = XLaurent.zero()
    for coeff, atom in f.terms:
        kind = atom[0]
        if kind == "S_O":
            part = S_O_sum(gamma, field, method, budget)
        elif kind == "translate":
            part = translate_sum(gamma, atom[1], field, method, budget)
        elif kind == "K_S_varpi":
            part = K_S_varpi_sum(gamma, field, method, budget)
        else:
            raise DomainError("unknown atom %r" % (kind,))
        total = total + coeff * part
    return OrbitalValue(omega * total)


# independent oracles on the symmetric side

def _window_grow(compute, start_B, max_B):
    """Grow the window until two consecutive sizes agree."""
    B = start_B
    prev = compute(B)
    while B < max_B:
        B += 1
        cur = compute(B)
        if cur == prev:
            return cur
        prev = cur
    raise DomainError("support window not stabilized")


def window_start(gamma, p, shift=0):
    """A starting window size from Delta^+, Delta^- and the denominators of gamma.

    For integral gamma every contributing lattice lies between
    p^{val Delta^+} O and p^{-val Delta^-} O, which this bound covers.
    """
    vp = ob.delta_plus(gamma).val(p)
    vm = ob.row_krylov_det(gamma).val(p)
    mv = la.min_val(gamma, p)
    return max(1, max(vp, vm) + len(gamma) * max(0, -mv) + shift)


def orb_S_window(gamma, f, field, start_B=None, max_B=6):
    """Orb(gamma, f, s) by brute force over Hermite-form windows (small n only)."""
    _require_rss(gamma)
    p = field.p
    if start_B is None:
        start_B = window_start(gamma, p, 1)
    m = len(gamma)
    n = m - 1
    eps = field.eps
    ops = list(_split_F0(gamma, eps))
    omega = transfer_factor_S(gamma, p)

    def stable(M):
        return all(M.is_stable(A) for A in ops)

    def atom_sum(atom, B):
        kind = atom[0]
        total = XLaurent.zero()
        if kind in ("S_O", "K_S_varpi"):
            e = _e(m, eps)
            einv = _e(m, eps, Fraction(1, p))

            def pred(M):
                if M.exps[-1] != 0 or not M.contains(e) or not stable(M):
                    return False
                if kind == "K_S_varpi":
                    M2 = M.add_vectors([einv])
                    return all(M2.is_stable(A) for A in ops)
                return True
            for M in window_lattices(field, "F0", m, B, pred,
                                     exps_filter=lambda ks: ks[-1] == 0):
                v = M.val()
                total = total + XLaurent({v: -1 if v % 2 else 1})
            return total
        if kind == "translate":
            j, k, vt = _translate_data(atom[1], field)
            ek = _e(m, eps, Fraction(p) ** (j + k))
            ek1 = _e(m, eps, Fraction(p) ** (j + k - 1))

            def pred(M):
                if not M.contains(ek):
                    return False
                if k > 0 and M.contains(ek1):
                    return False
                return stable(M)
            for M in window_lattices(field, "F0", m, B, pred,
                                     exps_filter=lambda ks: ks[-1] == j):
                v = M.val() - vt
                total = total + XLaurent({v: -1 if v % 2 else 1})
            return total * _orbit_weight(n, k, p)
        raise DomainError("unknown atom %r" % (kind,))

    def compute(B):
        total = XLaurent.zero()
        for coeff, atom in f.terms:
            total = total + coeff * atom_sum(atom, B)
        return total

    return OrbitalValue(omega * _window_grow(compute, start_B, max_B))


def orb_S_direct_n1(gamma, f, field, window=10):
    """n = 1: sum over h in F0^x modulo 1 + p^N O of phi(h^-1 gamma h) weights.

    Uses only matrix arithmetic: for each valuation a in [-window, window]
    and unit class v mod p^N, the integrand is tested on the conjugated
    matrix itself.  Each class has volume 1/((q-1) q^{N-1}).
    """
    _require_rss(gamma)
    if len(gamma) != 2:
        raise DomainError("direct summation is for n = 1")
    p = field.p
    eps = field.eps
    omega = transfer_factor_S(gamma, p)

    def conj_by(h, t):
        H = [[FNumber(h, 0, eps), FNumber(0, 0, eps)], [FNumber(0, 0, eps), FNumber(1, 0, eps)]]
        T = [[FNumber(x, 0, eps) for x in row] for row in t]
        A = la.mul(H, T)
        return la.mul(la.mul(la.inverse(A), gamma), A)

    def in_S_O(A):
        return la.is_integral(A, p)

    total = XLaurent.zero()
    for coeff, atom in f.terms:
        kind = atom[0]
        if kind == "translate":
            t = atom[1]
            _, k, _ = _translate_data(t, field)
            N = max(1, k)
        else:
            t = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
            N = 1
        units = [v for v in range(1, p ** N) if v % p]
        vol = Fraction(1, len(units))
        part = XLaurent.zero()
        for a in range(-window, window + 1):
            for v in units:
                h = Fraction(p) ** a * v
                A = conj_by(h, t)
                if not in_S_O(A):
                    continue
                if kind == "K_S_varpi" and not A[0][1].is_zero() and A[0][1].val(p) < 1:
                    # O (+) p^-1 O is stable iff the upper right entry lies in p O
                    continue
                part = part + XLaurent({a: (-1 if a % 2 else 1) * vol})
        total = total + coeff * part
    return OrbitalValue(omega * total)


# semi-Lie

def semilie_sum(gamma, field, e_vec=None, method="bfs", budget=None):
    """sum over gamma-stable Xi with e' in Xi and e^* Xi <= O of (-X)^{val Xi}.

    e' defaults to p e_{n+1}, the vector part of w_0.
    """
    m = len(gamma)
    eps = field.eps
    p = field.p
    if e_vec is None:
        e_vec = _e(m, eps, p)
    hi = row_dual_bound(gamma, field)
    lats = _stable_F0_lattices(gamma, field, _rational_parts(gamma, e_vec, field), hi, method, budget)
    total = XLaurent.zero()
    for M in lats:
        v = M.val()
        total = total + XLaurent({v: -1 if v % 2 else 1})
    return total


SEMILIE_CONVENTION = ("omega_S(gamma): the semi-Lie transfer factor is normalized to agree with "
                      "omega_S(gamma); the literal column-scaling value differs by (-X^-1)^(n+1)")


def orb_semilie(gamma, field, e_vec=None, normalization="matched", method="bfs", budget=None):
    """Orb((gamma, w_0), 1_{K' x Lambda'}, s) integrated over GL_{n+1}(F0).

    normalization "matched" uses omega_S(gamma) as the transfer factor;
    "literal" uses eta~_{-s}(det(gamma^i e')) as written.
    """
    _require_rss(gamma)
    m = len(gamma)
    if e_vec is None:
        e_vec = _e(m, field.eps, field.p)
    if normalization == "matched":
        omega = transfer_factor_S(gamma, field.p)
    elif normalization == "literal":
        omega = transfer_factor_semilie(gamma, e_vec, field.p)
    else:
        raise DomainError("unknown normalization %r" % (normalization,))
    return OrbitalValue(omega * semilie_sum(gamma, field, e_vec, method, budget))


def orb_semilie_window(gamma, field, start_B=None, max_B=6):
    _require_rss(gamma)
    if start_B is None:
        start_B = window_start(gamma, field.p, 1)
    m = len(gamma)
    eps = field.eps
    p = field.p
    ops = list(_split_F0(gamma, eps))
    ev = _e(m, eps, p)

    def pred(M):
        return M.exps[-1] <= 1 and M.contains(ev) and _last_row_integral(M, p) and \
            all(M.is_stable(A) for A in ops)

    def compute(B):
        total = XLaurent.zero()
        for M in window_lattices(field, "F0", m, B, pred, exps_filter=lambda ks: 0 <= ks[-1] <= 1):
            v = M.val()
            total = total + XLaurent({v: -1 if v % 2 else 1})
        return total

    omega = transfer_factor_S(gamma, p)
    return OrbitalValue(omega * _window_grow(compute, start_B, max_B))


def _last_row_integral(M, p):
    return all(c[-1].is_zero() or c[-1].val(p) >= 0 for c in M.basis)


# homogeneous side

class GprimeAtom:
    """Indicator of a product of compact opens in G' = GL_n(F) x GL_{n+1}(F).

    kind "G_O": K'_n x K'^dagger_{n+1};  kind "Ktilde": K~'^{[1]}_n x K'_{n+1}.
    """

    def __init__(self, kind):
        if kind not in ("G_O", "Ktilde"):
            raise NoSharpReduction("no sharp-reduction known for %r" % (kind,))
        self.kind = kind

    def __repr__(self):
        return "GprimeAtom(%s)" % self.kind


def mirabolic_level_index(n, q):
    """[GL_n(O_F) : {g : g e_n = e_n mod p}] = q^{2n} - 1."""
    return q ** (2 * n) - 1


SHARP_SIGNS = ("derived", "literal")


def natural_sharp(terms, n, q, sign="derived"):
    """Linear map phi' -> phi'^natural on the supported atoms.

    terms: list of (coefficient, GprimeAtom).  The Ktilde atom goes to
    u'*1_{S(O)} / [GL_n(O_F) : K~'] with sign +1 ("derived": the eta^n
    factor of u' cancels the one from the transfer factor) or with sign
    (-1)^n ("literal").
    """
    if sign not in SHARP_SIGNS:
        raise ValueError("sign must be one of %s" % (SHARP_SIGNS,))
    out = TestFunctionS()
    for c, atom in terms:
        if atom.kind == "G_O":
            out = out + ind_S_O().scale(c)
        elif atom.kind == "Ktilde":
            cp = mirabolic_level_index(n, q)
            eps = -1 if sign == "literal" and n % 2 else 1
            out = out + translate(u_prime_matrix(n, q)).scale(Fraction(c) * eps / cp)
        else:
            raise NoSharpReduction("no sharp-reduction known for %r" % (atom,))
    return out


def orb_Gprime(g_n, g_n1, terms, field, sign="derived", budget=None):
    """Orb(gamma, phi', s) through the symmetric space at 2s."""
    n = len(g_n)
    gamma = ob.r_map_pair(g_n, g_n1)
    f = natural_sharp(terms, n, field.p, sign)
    return orb_S(gamma, f, field, budget=budget).doubled()


def _base_lattice_Gprime(kind, field):
    """The O_F-lattice whose stabilizer is the GL_2 factor, with its O_F0 model."""
    eps = field.eps
    p = field.p
    L = Lattice.standard(2, field, "F")
    if kind == "Ktilde":
        L = L.add_vectors([[FNumber(Fraction(1, p), 0, eps), FNumber(Fraction(1, p), 0, eps)]])
    return L


def _conj_lattice(L):
    return Lattice.from_columns([[x.conj() for x in c] for c in L.basis], L.field, "F")


def _F_residue_reps(field):
    eps = field.eps
    p = field.p
    return [FNumber(a, b, eps) for a in range(p) for b in range(p) if a or b]


def orb_Gprime_direct_n1(g1, g2, terms, field, window=8):
    """n = 1 homogeneous orbital integral by direct coset summation.

    The integral over (h1, h2', h2'') in F^x x F0^x x GL_2(F0) is summed over
    h1 in F^x / (1 + p O_F) (volume 1/(q^2-1) each).  The F0^x factor is
    the exact measure of {h2' : h1^-1 g1 h2' in A}; the GL_2(F0) factor
    is nonzero only when g2^-1 diag(h1, 1) Lambda_B is F0-rational, in
    which case it is eta(det h2'') on a single coset of volume one.
    """
    if len(g1) != 1:
        raise DomainError("direct summation is for n = 1")
    p = field.p
    eps = field.eps
    q = p
    omega = transfer_factor_Gprime(g1, g2, p)
    g2inv = la.inverse(g2)
    x1 = g1[0][0]
    total = XLaurent.zero()
    for c, atom in terms:
        LB = _base_lattice_Gprime(atom.kind, field)
        vB = LB.val()
        part = XLaurent.zero()
        for a in range(-window, window + 1):
            for z in _F_residue_reps(field):
                h1 = z * Fraction(p) ** a
                # measure of h2' in F0^x with x1 h2' / h1 in A
                ratio = x1 / h1
                w = ratio / Fraction(p) ** ratio.val(p)
                if atom.kind == "G_O":
                    m2 = Fraction(1)
                else:
                    # need w * v = 1 mod p for a unit v of F0: w mod p must lie in F_p^x
                    k = w.b.numerator * pow(w.b.denominator, -1, p) % p if w.b else 0
                    m2 = Fraction(1, q - 1) if k == 0 else Fraction(0)
                if not m2:
                    continue
                D = [[h1, FNumber(0, 0, eps)], [FNumber(0, 0, eps), FNumber(1, 0, eps)]]
                LC = LB.apply(la.mul(g2inv, D))
                if _conj_lattice(LC) != LC:
                    continue
                v = LC.val() - vB
                sign = -1 if v % 2 else 1
                part = part + XLaurent({2 * a: Fraction(sign) * m2 / (q * q - 1)})
        total = total + part * c
    return OrbitalValue(omega * total)


# unitary side

def _krylov_lattice(g, v, field):
    cols = ob.krylov_columns(g, v, len(g))
    return Lattice.from_columns(cols, field, "F")


def _integral_stable_lattices(g, setup, v=None, budget=None):
    """g-stable integral O_F-lattices containing v (default u); [] if none."""
    field = setup.field
    H = setup.gram
    v = setup.u if v is None else v
    try:
        L1 = _krylov_lattice(g, v, field)
    except DomainError:
        raise DomainError("not regular semisimple")
    if not L1.is_integral_for(H):
        return []
    hi = L1.dual(H)
    lo = closure([list(c) for c in L1.basis], [g], field, "F", bound=hi)
    if lo is None or not lo.is_integral_for(H):
        return []
    return stable_lattices(lo, [g], hi=lo.dual(H), keep=lambda M: M.is_integral_for(H),
                           budget=budget)


def orb_U(g, setup, budget=None):
    """#{self-dual Lambda : u in Lambda, g Lambda = Lambda} (vol K~ = 1)."""
    if not ob.is_rss_U(g, setup):
        raise DomainError("not regular semisimple")
    H = setup.gram
    return sum(1 for M in _integral_stable_lattices(g, setup, budget=budget) if M.is_selfdual(H))


def orb_U_semilie(g, v, setup, budget=None):
    """Count of g-stable self-dual lattices containing v, grown one p-layer at a time.

    Starting from the g-stable hull M_0 of O[g]v, any such lattice M is
    the union of M_j = M cap p^-j M_0, and M_{j+1}/M_j is a g-stable
    subspace of (p^-1 M_j cap M_j^vee)/M_j.  The search walks those
    subspaces directly, so it shares no enumeration code with orb_U.
    """
    field = setup.field
    H = setup.gram
    if not ob.is_unitary(g, H):
        raise DomainError("precondition failed: g is not unitary")
    L1 = _krylov_lattice(g, v, field)
    if la.det(L1.matrix()).is_zero():
        raise DomainError("not regular semisimple")
    if not L1.is_integral_for(H):
        return 0
    M0 = closure([list(c) for c in L1.basis], [g], field, "F", bound=L1.dual(H))
    if M0 is None or not M0.is_integral_for(H):
        return 0
    return len(_layered_selfdual(M0, g, H, field, budget))


def _layered_selfdual(M0, g, H, field, budget=None):
    p = field.p
    k = residue_field(p, 2)
    eps = field.eps
    lift = [FNumber(*k.lift_pair(x), eps) for x in range(k.Q)]
    pw = FNumber(p, 0, eps)
    found = set()
    seen = {M0}
    stack = [M0]
    while stack:
        M = stack.pop()
        if M.is_selfdual(H):
            found.add(M)
            continue
        A = M.scaled(-1).intersect(M.dual(H))
        Hp, d = smith_adapted(M, A)
        J = [j for j in range(len(d)) if d[j] == 1]
        layer = [[row[j] for row in Hp] for j in J]
        Hinv = la.inverse(Hp)
        # g and p(.,.) on the F_{q^2}-space A/M, in the basis given by layer
        gbar = []
        for c in layer:
            w = la.mat_vec(Hinv, la.mat_vec(g, c))
            gbar.append([k.reduce(w[j]) for j in J])
        form = [[k.reduce(pw * _pair(H, a, b)) for b in layer] for a in layer]
        for rows, piv in all_subspaces(p, 2, len(layer))[1:]:
            if not _isotropic(k, form, rows) or not _stable(k, gbar, rows, piv):
                continue
            vecs = []
            for r in rows:
                vec = [FNumber(0, 0, eps)] * len(Hp)
                for c, x in zip(layer, r):
                    if x:
                        vec = [a + lift[x] * b for a, b in zip(vec, c)]
                vecs.append(vec)
            N = M.add_vectors(vecs)
            if N in seen:
                continue
            seen.add(N)
            if budget is not None and len(seen) > budget:
                raise BudgetExceeded(len(seen), budget)
            stack.append(N)
    return found


def _pair(H, x, y):
    return sum((x[i] * H[i][j] * y[j].conj() for i in range(len(x)) for j in range(len(y))
                if not H[i][j].is_zero()), FNumber(0, 0, H[0][0].eps))


def _isotropic(k, form, rows):
    for r in rows:
        for s in rows:
            t = 0
            for i, a in enumerate(r):
                if a:
                    for j, b in enumerate(s):
                        if b and form[i][j]:
                            t = k.add[t][k.mul[k.mul[a][form[i][j]]][k.conj[b]]]
            if t:
                return False
    return True


def _stable(k, gbar, rows, piv):
    for r in rows:
        img = [0] * len(r)
        for i, a in enumerate(r):
            if a:
                img = k.vadd(img, k.scale(a, gbar[i]))
        if not k.in_span(rows, piv, img):
            return False
    return True


def orb_U_type01(g, setup, budget=None):
    """#{g-stable L (+) O u : L self-dual in u^perp} for (u, u) = p."""
    if not ob.is_rss_U(g, setup):
        raise DomainError("not regular semisimple")
    H = setup.gram
    W = setup.W
    p = setup.field.p
    u = setup.u
    count = 0
    for M in _integral_stable_lattices(g, setup, budget=budget):
        if M.invariants(H).a != tuple([0] * (len(H) - 1) + [1]):
            continue
        if all(W.pair(list(c), u).is_zero() or W.pair(list(c), u).val(p) >= 1 for c in M.basis):
            count += 1
    return count


def orb_U_window(g, setup, start_B=1, max_B=3, kind="selfdual"):
    """Brute-force oracle for the unitary counts (n = 1)."""
    field = setup.field
    H = setup.gram
    W = setup.W
    p = field.p
    u = setup.u
    target = -la.det(H).val(p)
    if kind == "type01":
        target += 1

    def pred(M):
        if not M.contains(u) or not M.is_stable(g):
            return False
        if kind == "selfdual":
            return M.is_selfdual(H)
        if M.invariants(H).a != tuple([0] * (len(H) - 1) + [1]):
            return False
        return all(W.pair(list(c), u).is_zero() or W.pair(list(c), u).val(p) >= 1 for c in M.basis)

    # val(Lambda) is fixed by the discriminant: 2 val(Lambda) = type - val det H
    if target % 2:
        return 0

    def compute(B):
        return len(window_lattices(field, "F", len(H), B, pred,
                                   exps_filter=lambda ks: 2 * sum(ks) == target))
    return _window_grow(compute, start_B, max_B)
