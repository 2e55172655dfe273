"""Small Hecke algebra computations on the rank one unitary group and GL_2.

The unitary side lives on the split hermitian plane W = F e + F f with
(e, f) = 1 and (e, e) = (f, f) = 0, where U(W) is the group U(1,1).  Its
compact open subgroups are stabilizers of vertex lattices; volumes and
indices are orbit sizes in the finite hermitian reductions of
finite_hermitian.  Double cosets K x K are labelled by the elementary
divisors of x relative to the standard lattice.
"""

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from . import finite_hermitian as fh
from . import linalg as la
from .finfield import residue_field
from .lattice import Lattice, smith_adapted, smith_valuations
from .plocal import DomainError, FieldConfig, FNumber, XLaurent


class LevelMismatch(DomainError):
    pass


# the hermitian plane and its vertex lattices


class HyperbolicPlane:
    def __init__(self, p):
        self.field = FieldConfig(p)
        e = self.field.eps
        self.H = la.matrix([[0, 1], [1, 0]], e)

    @property
    def p(self):
        return self.field.p

    def lattice(self, cols):
        return Lattice.from_columns(cols, self.field, "F")

    def selfdual(self):
        """O e + O f."""
        return Lattice.standard(2, self.field)

    def type2(self):
        """O e + p O f, contained in the standard self-dual lattice."""
        return self.lattice([[1, 0], [0, self.p]])

    def torus(self, b):
        """diag(p^b, p^-b)."""
        p = Fraction(self.p)
        return la.diag([p ** b, p ** -b], self.field.eps)

    def unipotent(self, c):
        """[[1, c delta], [0, 1]] with c in F_0; unitary since c delta is
        trace zero."""
        eps = self.field.eps
        return [[FNumber(1, 0, eps), FNumber(0, c, eps)],
                [FNumber(0, 0, eps), FNumber(1, 0, eps)]]

    def is_unitary(self, g):
        G = la.mul(la.mul(la.transpose(g), self.H), la.conj(g))
        return la.equal(G, self.H)


def cartan_label(x, p):
    """Elementary divisors of x relative to the standard lattice."""
    return tuple(smith_valuations(x, p))


# finite reductions of lattice pairs


@dataclass
class Reduction:
    """hi / lo as a hermitian space over F_{q^2} with form p^shift (,)."""

    lo: Lattice
    hi: Lattice
    basis: list
    coords: list
    space: fh.FinHermSpace

    def subspace(self, M):
        """Image of lo <= M <= hi."""
        k = self.space.k
        Binv = la.inverse(self.basis)
        rows = []
        for col in M.basis:
            c = la.mat_vec(Binv, list(col))
            rows.append(tuple(k.reduce(c[i]) for i in self.coords))
        return fh.FinSubspace.from_rows(k, rows)

    def lattice(self, S):
        k = self.space.k
        eps = self.lo.field.eps
        cols = []
        for row in S.rows:
            v = [FNumber(0, 0, eps) for _ in self.basis]
            for x, i in zip(row, self.coords):
                a, b = k.lift_pair(x)
                v[i] = FNumber(a, b, eps)
            cols.append(la.mat_vec(self.basis, v))
        return self.lo.add_vectors(cols)


def reduction(lo, hi, H, shift):
    """Hermitian reduction of p hi <= lo <= hi with the form p^shift (,).

    The form must be integral on hi and vanish modulo p against lo; this
    holds for (lo, hi, shift) = (pL, L, 0) with L self-dual and for
    (L, L^vee, 1) with L a vertex lattice.
    """
    if not hi.contains_lattice(lo) or not lo.contains_lattice(hi.scaled(1)):
        raise LevelMismatch("need p hi <= lo <= hi")
    p = lo.p
    B, d = smith_adapted(lo, hi)
    coords = [i for i, x in enumerate(d) if x == 1]
    k = residue_field(p, 2)
    scale = Fraction(p) ** shift
    cols = la.columns(B)
    G = []
    for i in coords:
        row = []
        for j in coords:
            x = la.mul([cols[i]], la.mul(H, la.conj(la.transpose([cols[j]]))))[0][0] * scale
            if not x.is_zero() and x.val(p) < 0:
                raise LevelMismatch("form is not integral on hi")
            row.append(k.reduce(x))
        G.append(row)
    return Reduction(lo, hi, B, coords, fh.FinHermSpace(p, G))


def finite_orbit(red, M):
    """Orbit of M under the stabilizer of the reduction's lattices, read off
    in the finite unitary group of the reduction."""
    V = red.space
    start = red.subspace(M)
    gens = fh.reflection_generators(V)
    return fh._orbit_of(V.k, start, gens)


# levels and volumes


@dataclass(frozen=True)
class Level:
    """K = U(L) for a vertex lattice L of the hermitian plane."""

    lattice: Lattice
    name: str = ""

    def reduction_for(self, other, H):
        """Reduction of self in which `other` is visible, if any."""
        L = self.lattice
        D = L.dual(H)
        if D == L and L.contains_lattice(other) and other.contains_lattice(L.scaled(1)):
            return reduction(L.scaled(1), L, H, 0)
        if D.contains_lattice(other) and other.contains_lattice(L):
            return reduction(L, D, H, 1)
        return None


def orbit_lattices(A, B, H):
    """K_A-orbit of the lattice of level B, as a set of lattices."""
    red = A.reduction_for(B.lattice, H)
    if red is None:
        raise LevelMismatch("lattices are not adjacent")
    return {red.lattice(S) for S in finite_orbit(red, B.lattice)}


def index(A, B, H):
    """[K_A : K_A cap K_B], the size of the K_A-orbit of B's lattice."""
    if A.lattice == B.lattice:
        return 1
    return len(orbit_lattices(A, B, H))


def volume(level, base, H):
    """vol(K_level) for the Haar measure giving K_base volume one."""
    if level.lattice == base.lattice:
        return Fraction(1)
    # vol(K_B) = vol(K_A cap K_B) [K_B : K_A cap K_B]
    return Fraction(index(level, base, H), index(base, level, H))


def intersection_volume(A, B, base, H):
    return volume(A, base, H) / index(A, B, H)


def convolve_eval(A, B, x, base, H):
    """(1_{K_A} * 1_{K_B})(x) = vol(K_A cap x K_B x^-1) if x in K_A K_B.

    x lies in K_A K_B iff x L_B is in the K_A-orbit of L_B.
    """
    xLB = B.lattice.apply(x)
    orbit = orbit_lattices(A, B, H)
    if xLB not in orbit:
        return Fraction(0)
    return volume(A, base, H) / len(orbit)


def stabilizer_volume_bruteforce(p):
    """vol(K cap K^[2]) as |P| / |U_2(F_{q^2})| by enumerating the finite
    unitary group and the stabilizer of an isotropic line."""
    V = fh.FinHermSpace(p, [[0, 1], [1, 0]])
    k = V.k
    group = fh.brute_force_unitary(V)
    line = fh.FinSubspace.from_rows(k, [(1, 0)])
    stab = [g for g in group if line.image(k, g) == line]
    return Fraction(len(stab), len(group))


# Hecke elements


@dataclass
class HeckeElement:
    group: str
    level: str
    terms: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        self.terms = {tuple(sorted(k)): Fraction(v) for k, v in self.terms.items() if v}

    def __call__(self, label):
        return self.terms.get(tuple(sorted(label)), Fraction(0))

    def __add__(self, other):
        if (self.group, self.level) != (other.group, other.level):
            raise LevelMismatch("different Hecke algebras")
        t = dict(self.terms)
        for k, v in other.terms.items():
            t[k] = t.get(k, 0) + v
        return HeckeElement(self.group, self.level, t)

    def scaled(self, c):
        return HeckeElement(self.group, self.level, {k: v * c for k, v in self.terms.items()})

    def __eq__(self, other):
        return (self.group, self.level, self.terms) == (other.group, other.level, other.terms)

    def support(self):
        return sorted(self.terms)


def indicator(group, label, level="K"):
    return HeckeElement(group, level, {tuple(label): 1})


def atomic_phi(p, r=2, max_distance=3):
    """phi_r = vol(K^[r])^-1 1_{K K^[r]} * 1_{K^[r] K} on U(1,1), r in {0, 2}.

    Its value at x is the number of lattices in the K-orbit O of the type r
    lattice that also lie in x O; the expansion evaluates this at the
    Cartan representatives diag(p^a, p^-a).
    """
    if r == 0:
        return indicator("U2", (0, 0))
    if r != 2:
        raise ValueError("the rank one unitary group has vertex types 0 and 2")
    W = HyperbolicPlane(p)
    K = Level(W.selfdual(), "K")
    Kr = Level(W.type2(), "K[2]")
    orbit = orbit_lattices(K, Kr, W.H)
    terms = {}
    for a in range(max_distance + 1):
        x = W.torus(a)
        moved = {M.apply(x) for M in orbit}
        terms[cartan_label(x, p)] = len(orbit & moved)
    if terms[cartan_label(W.torus(max_distance), p)]:
        raise AssertionError("support of phi_r reaches the search horizon")
    return HeckeElement("U2", "K", terms)


# Satake transforms by counting on the building


def satake_unitary(f, p):
    """Sat(f)(X) = sum_b X^b q^-b sum_{n in N/N(O)} f(t_b n) on U(1,1).

    t_b = diag(p^b, p^-b) and N consists of [[1, c delta], [0, 1]], c in
    F_0.  If f is supported on labels (-a, a) with a <= A then t_b n has
    a nonzero value only for |b| <= A and val(c) >= -2A, so the sums are
    finite.
    """
    if f.group != "U2":
        raise DomainError("not a unitary Hecke element")
    A = max((max(abs(x) for x in lab) for lab in f.terms), default=0)
    W = HyperbolicPlane(p)
    D = 2 * A
    out = XLaurent()
    for b in range(-A, A + 1):
        total = Fraction(0)
        for num in range(p ** D):
            x = la.mul(W.torus(b), W.unipotent(Fraction(num, p ** D)))
            total += f(cartan_label(x, p))
        out = out + XLaurent.monomial(b, total * Fraction(p) ** (-b))
    return out


def gl2_indicator(a1, a2):
    return indicator("GL2", (a1, a2), "K'")


def satake_gl2(f, p):
    """Two-variable Satake transform on GL_2(F) by counting y in F / O_F:

    Sat(f)(X1, X2) = sum X1^a1 X2^a2 q^-(a1 - a2) sum_y f(diag(p^a1, p^a2) n_y),
    with q_F^{1/2} = q.  Returns {(a1, a2): coefficient}.
    """
    if f.group != "GL2":
        raise DomainError("not a GL_2 Hecke element")
    A = max((max(abs(x) for x in lab) for lab in f.terms), default=0)
    field = FieldConfig(p)
    eps = field.eps
    D = 2 * A
    out = {}
    for a1 in range(-A, A + 1):
        for a2 in range(-A, A + 1):
            total = Fraction(0)
            for u in range(p ** D):
                for v in range(p ** D):
                    y = FNumber(Fraction(u, p ** D), Fraction(v, p ** D), eps)
                    t = [[FNumber(Fraction(p) ** a1, 0, eps), y * Fraction(p) ** a1],
                         [FNumber(0, 0, eps), FNumber(Fraction(p) ** a2, 0, eps)]]
                    total += f(cartan_label(t, p))
            if total:
                out[(a1, a2)] = total * Fraction(p) ** (a2 - a1)
    return out


def restrict_to_unitary_torus(sat2):
    """Specialize (X1, X2) -> (X, X^-1)."""
    out = XLaurent()
    for (a1, a2), c in sat2.items():
        out = out + XLaurent.monomial(a1 - a2, c)
    return out


def satake(f, p):
    if f.group == "U2":
        return satake_unitary(f, p)
    if f.group == "GL2":
        return restrict_to_unitary_torus(satake_gl2(f, p))
    raise DomainError("unsupported group %r" % (f.group,))


def is_symmetric(P):
    return all(P[k] == P[-k] for k, _ in P.items())


def bc_mismatch_check(p, f=None, g=None):
    """Compare Sat(1_{K' p^(1,0) K'}) with Sat(phi_2).

    Returns (mismatch, (Sat f, Sat g)).
    """
    if f is None:
        f = gl2_indicator(1, 0)
    if g is None:
        g = atomic_phi(p, 2)
    sf = satake(f, p)
    sg = satake(g, p)
    return sf != sg, (sf, sg)


# volume constants


def c_r(n, r, q):
    """[K~^[eps] : K~^[r]]: type r sublattices in the type eps lattice of
    rank n, counted as an orbit in the finite reduction."""
    eps = r % 2
    V = fh.FinHermSpace.standard(q, n - eps)
    points = fh.enumerate_isotropic(V, (r - eps) // 2)
    return len(fh._orbit_of(V.k, points[0], fh.reflection_generators(V)))


def c_prime_1(q):
    """The mirabolic index in GL_2(F_{q^2})."""
    return fh.mirabolic_index(q)
