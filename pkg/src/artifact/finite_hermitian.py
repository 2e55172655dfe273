"""Hermitian geometry over F_{q^2}/F_q.

Everything here is finite: subspaces are enumerated, group orbits are
computed by union-find over a generating set of unitary reflections.
The quadratic field is the residue field of plocal's F, so reductions of
lattice data land here without any change of model.
"""

from dataclasses import dataclass
from itertools import product

from .finfield import all_subspaces, residue_field

DEFAULT_BUDGET = 10 ** 6


class FiniteBudgetExceeded(RuntimeError):
    pass


class FinHermSpace:
    """k^d with the form (x, y) = sum x_i G_ij conj(y_j), k = F_{q^2}."""

    def __init__(self, p, gram):
        self.p = p
        self.k = residue_field(p, 2)
        self.gram = tuple(tuple(row) for row in gram)
        self.dim = len(self.gram)
        k = self.k
        for i in range(self.dim):
            for j in range(self.dim):
                if self.gram[j][i] != k.conj[self.gram[i][j]]:
                    raise ValueError("gram matrix is not hermitian")
        if self.dim and k.det(self.gram) == 0:
            raise ValueError("degenerate hermitian form")

    @classmethod
    def standard(cls, p, dim):
        # over a finite field the form is determined by its dimension
        return cls(p, [[1 if i == j else 0 for j in range(dim)] for i in range(dim)])

    @property
    def q(self):
        return self.p

    def __repr__(self):
        return "FinHermSpace(q=%d, dim=%d)" % (self.p, self.dim)

    def pair(self, x, y):
        k = self.k
        s = 0
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                g = self.gram[i][j]
                if g and yj:
                    s = k.add[s][k.mul[k.mul[xi][g]][k.conj[yj]]]
        return s

    def norm(self, x):
        return self.pair(x, x)

    def vectors(self):
        return product(range(self.k.Q), repeat=self.dim)

    def is_unitary(self, g):
        """g acts on column vectors; unitary iff g^* G g = G."""
        k = self.k
        cols = [tuple(g[i][j] for i in range(self.dim)) for j in range(self.dim)]
        return all(self.pair(cols[a], cols[b]) == self.gram[a][b]
                   for a in range(self.dim) for b in range(self.dim))

    def perp(self, vectors):
        """Orthogonal complement of the span of vectors, as a FinSubspace."""
        k = self.k
        # (x, v) = 0  <=>  sum_i x_i * (sum_j G_ij conj(v_j)) = 0
        rows = []
        for v in vectors:
            rows.append(tuple(self.pair([1 if t == i else 0 for t in range(self.dim)], v)
                              for i in range(self.dim)))
        return FinSubspace.from_rows(k, _kernel(k, rows, self.dim))


def _kernel(k, rows, d):
    rows = [r for r in rows if any(r)]
    if not rows:
        return [tuple(1 if i == j else 0 for i in range(d)) for j in range(d)]
    R, piv = k.rref(rows)
    free = [c for c in range(d) if c not in piv]
    out = []
    for f in free:
        v = [0] * d
        v[f] = 1
        for row, c in zip(R, piv):
            v[c] = k.neg[row[f]]
        out.append(tuple(v))
    return out


@dataclass(frozen=True)
class FinSubspace:
    rows: tuple
    pivots: tuple

    @classmethod
    def from_rows(cls, k, rows):
        rows = [tuple(r) for r in rows if any(r)]
        if not rows:
            return cls((), ())
        R, piv = k.rref(rows)
        return cls(R, piv)

    @property
    def dim(self):
        return len(self.rows)

    def contains(self, k, v):
        return k.in_span(self.rows, self.pivots, v)

    def is_isotropic(self, V):
        return all(V.pair(a, b) == 0 for a in self.rows for b in self.rows)

    def image(self, k, g):
        return FinSubspace.from_rows(k, [k.mat_vec(g, v) for v in self.rows])

    def vectors(self, k):
        for coeffs in product(range(k.Q), repeat=self.dim):
            v = (0,) * (len(self.rows[0]) if self.rows else 0)
            for c, row in zip(coeffs, self.rows):
                if c:
                    v = k.vadd(v, k.scale(c, row))
            yield v


def enumerate_subspaces(V, dim, budget=DEFAULT_BUDGET):
    if V.k.Q ** (dim * V.dim) > budget * V.k.Q ** dim:
        raise FiniteBudgetExceeded("subspace enumeration over budget")
    return [FinSubspace(rows, piv) for rows, piv in all_subspaces(V.p, 2, V.dim)
            if len(rows) == dim]


def enumerate_isotropic(V, k, budget=DEFAULT_BUDGET):
    """All totally isotropic k-dimensional subspaces of V, each once."""
    if k == 0:
        return [FinSubspace((), ())]
    if 2 * k > V.dim:
        return []
    return [S for S in enumerate_subspaces(V, k, budget) if S.is_isotropic(V)]


def isotropic_subspace_count(q, d, k):
    """Closed form for the number of isotropic k-spaces in a d-dim space."""
    num = 1
    for i in range(d - 2 * k + 1, d + 1):
        num *= q ** i - (-1) ** i
    den = 1
    for i in range(1, k + 1):
        den *= q ** (2 * i) - 1
    return num // den


def lagrangians(V, budget=DEFAULT_BUDGET):
    if V.dim % 2:
        return []
    return enumerate_isotropic(V, V.dim // 2, budget)


# unitary groups


def unitary_order_formula(q, d):
    out = q ** (d * (d - 1) // 2)
    for i in range(1, d + 1):
        out *= q ** i - (-1) ** i
    return out


def norm_one_elements(k):
    return [x for x in k.units if k.norm(x) == 1]


def reflection(V, v, zeta):
    """x -> x + (zeta - 1) (x, v) / (v, v) v, for anisotropic v."""
    k = V.k
    nv = V.norm(v)
    if nv == 0:
        raise ValueError("reflection vector is isotropic")
    c = k.mul[k.sub[zeta][1]][k.inv[nv]]
    d = V.dim
    cols = []
    for j in range(d):
        e = tuple(1 if t == j else 0 for t in range(d))
        coef = k.mul[c][V.pair(e, v)]
        cols.append(k.vadd(e, k.scale(coef, v)))
    return tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))


def identity(d):
    return tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))


def reflection_generators(V, within=None, all_zeta=False):
    """Reflections in anisotropic lines of `within` (default: all of V).

    Using a subspace W^flat gives generators of U(W^flat) acting as the
    identity on its orthogonal complement.
    """
    k = V.k
    zetas = [z for z in norm_one_elements(k) if z != 1]
    # a generator of the cyclic group of norm-one elements suffices
    order = len(zetas) + 1
    gen = None
    for z in zetas:
        x, m = z, 1
        while x != 1:
            x = k.mul[x][z]
            m += 1
        if m == order:
            gen = z
            break
    use = zetas if all_zeta else [gen]
    if within is None:
        within = FinSubspace.from_rows(k, identity(V.dim))
    lines = [S for S in _lines_in(k, within) if V.norm(S.rows[0]) != 0]
    return [reflection(V, S.rows[0], z) for S in lines for z in use]


def _lines_in(k, S):
    seen = set()
    out = []
    for v in S.vectors(k):
        if not any(v):
            continue
        L = FinSubspace.from_rows(k, [v])
        if L not in seen:
            seen.add(L)
            out.append(L)
    return out


def generated_group(k, gens, budget=DEFAULT_BUDGET):
    """All elements of the group generated by gens (breadth-first)."""
    d = len(gens[0]) if gens else 0
    one = identity(d)
    seen = {one}
    frontier = [one]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = k.mat_mul(g, x)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > budget:
                        raise FiniteBudgetExceeded("group closure over budget")
                    nxt.append(y)
        frontier = nxt
    return seen


def brute_force_unitary(V, budget=DEFAULT_BUDGET):
    """Every unitary matrix, by exhaustive search over d x d matrices."""
    k = V.k
    d = V.dim
    if k.Q ** (d * d) > budget:
        raise FiniteBudgetExceeded("matrix enumeration over budget")
    out = []
    for entries in product(range(k.Q), repeat=d * d):
        g = tuple(tuple(entries[i * d:(i + 1) * d]) for i in range(d))
        if V.is_unitary(g):
            out.append(g)
    return out


@dataclass
class UnitaryGroup:
    space: FinHermSpace
    generators: list
    order: int


def unitary_group(V, verify=None, budget=DEFAULT_BUDGET):
    """Generators (reflections) and order of U(V).

    The order is the closed formula; with verify="closure" it is checked
    against the size of the generated group, with verify="brute" against
    exhaustive matrix enumeration.
    """
    gens = reflection_generators(V)
    order = unitary_order_formula(V.q, V.dim)
    if verify == "closure":
        n = len(generated_group(V.k, gens, budget)) if gens else 1
        if n != order:
            raise AssertionError("generated group has order %d, expected %d" % (n, order))
    elif verify == "brute":
        n = len(brute_force_unitary(V, budget))
        if n != order:
            raise AssertionError("unitary group has order %d, expected %d" % (n, order))
    return UnitaryGroup(V, gens, order)


# orbits


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


def orbits(k, points, generators, act=None):
    """Partition of points into orbits of the group generated by generators.

    points must be closed under the action; act(g, x) defaults to the
    image of a FinSubspace.
    """
    if act is None:
        act = lambda g, S: S.image(k, g)
    index = {x: i for i, x in enumerate(points)}
    uf = _UnionFind(len(points))
    for i, x in enumerate(points):
        for g in generators:
            y = act(g, x)
            if y not in index:
                raise ValueError("point set is not stable under the generators")
            uf.union(i, index[y])
    groups = {}
    for i, x in enumerate(points):
        groups.setdefault(uf.find(i), []).append(x)
    return sorted(groups.values(), key=lambda o: (-len(o), repr(o[0])))


def orbit_count(k, points, generators, act=None):
    return len(orbits(k, points, generators, act))


def vector_orbits_by_norm(V):
    """{norm: number of U(V)-orbits on nonzero vectors of that norm}."""
    k = V.k
    gens = reflection_generators(V)
    vecs = [v for v in V.vectors() if any(v)]
    out = {}
    for part in orbits(k, vecs, gens, act=lambda g, v: k.mat_vec(g, v)):
        nv = V.norm(part[0])
        out[nv] = out.get(nv, 0) + 1
    return out


# scenarios from the vertex lattice reductions


def _split_space(p, dim_flat, with_line):
    """W = W^flat (+) <u> with the standard form; u is the last basis vector."""
    d = dim_flat + (1 if with_line else 0)
    V = FinHermSpace.standard(p, d)
    k = V.k
    flat = FinSubspace.from_rows(k, [identity(d)[i] for i in range(dim_flat)])
    u = identity(d)[d - 1] if with_line else None
    return V, flat, u


def two_orbit_scenario(q, n, r):
    """U(W^flat)-orbits on type r lattices inside Lambda_0^flat (+) <u_0>.

    Reduction: isotropic subspaces of dimension (r - eps)/2 in a hermitian
    space of dimension n + 1 - eps, where eps = r mod 2; for eps = 0 the
    reduction of u_0 is an anisotropic vector and the group is U of its
    orthogonal complement.
    """
    eps = r % 2
    if not 0 <= r <= n + 1:
        raise ValueError("need 0 <= r <= n + 1")
    if eps:
        V, flat, _ = _split_space(q, n, False)
        u = None
    else:
        V, flat, u = _split_space(q, n, True)
    points = enumerate_isotropic(V, (r - eps) // 2)
    gens = reflection_generators(V, within=flat)
    parts = orbits(V.k, points, gens)
    perp_u = [all(V.pair(row, u) == 0 for row in part[0].rows) if u else True
              for part in parts]
    return {"orbits": len(parts), "sizes": [len(o) for o in parts],
            "perp_to_u": perp_u, "points": len(points)}


def transitive_scenario(q, r):
    """Lagrangians of a (r + eps)-dim space under the pointwise stabilizer of
    the reduction of <u_0>^vee / <u_0> (zero for eps = 0, an anisotropic
    line for eps = 1)."""
    eps = r % 2
    d = r + eps
    if eps:
        V, flat, _ = _split_space(q, d - 1, True)
    else:
        V, flat, _ = _split_space(q, d, False)
    points = lagrangians(V)
    gens = reflection_generators(V, within=flat)
    return {"orbits": orbit_count(V.k, points, gens), "points": len(points)}


def coset_decomposition(q, n, r):
    """Exhaustive check of K^[0] K^[r],+ = K_n K^[r],+ |_| K_n h K^[r],+.

    Left cosets of K^[r],+ in K^[0] K^[r],+ are the isotropic subspaces
    of dimension r/2 in the (n+1)-dim reduction (U(W) acts transitively).
    Returns the classification of every coset together with the chosen h.
    """
    if r % 2 or not 1 <= r <= n:
        raise ValueError("needs r even with 1 <= r <= n")
    V, flat, u = _split_space(q, n, True)
    k = V.k
    points = enumerate_isotropic(V, r // 2)
    full = orbits(k, points, reflection_generators(V))
    flat_gens = reflection_generators(V, within=flat)
    base = next(S for S in points if all(V.pair(row, u) == 0 for row in S.rows))
    h = None
    for g in reflection_generators(V, all_zeta=True):
        if not all(V.pair(row, u) == 0 for row in base.image(k, g).rows):
            h = g
            break
    parts = orbits(k, points, flat_gens)
    part_of = {}
    for i, part in enumerate(parts):
        for S in part:
            part_of[S] = i
    plus = part_of[base]
    minus = part_of[base.image(k, h)]
    classified = {"plus": 0, "minus": 0, "other": 0}
    for S in points:
        i = part_of[S]
        classified["plus" if i == plus else "minus" if i == minus else "other"] += 1
    return {
        "h": h,
        "transitive": len(full) == 1,
        "disjoint": plus != minus,
        "classified": classified,
        "exhaustive": classified["other"] == 0,
        "cosets": len(points),
    }


def kfk_check(q, n):
    """Lagrangians of W^flat (+) <u> reached by U(W^flat) versus by U(W).

    The two sides of the set equality are unions of right K_{n+1} cosets,
    i.e. sets of self-dual lattices over the type n+1 lattice; after
    rescaling these are lagrangians of the (n+1)-dim reduction.
    """
    if n % 2 == 0:
        raise ValueError("n must be odd")
    V, flat, _ = _split_space(q, n, True)
    k = V.k
    points = lagrangians(V)
    base = points[0]
    left = _orbit_of(k, base, reflection_generators(V, within=flat))
    right = _orbit_of(k, base, reflection_generators(V))
    return {"equal": left == right, "left": len(left), "right": len(right)}


def _orbit_of(k, x, gens, act=None):
    if act is None:
        act = lambda g, S: S.image(k, g)
    seen = {x}
    frontier = [x]
    while frontier:
        nxt = []
        for y in frontier:
            for g in gens:
                z = act(g, y)
                if z not in seen:
                    seen.add(z)
                    nxt.append(z)
        frontier = nxt
    return seen


# counts


def lattice_covers_count(kind, q):
    """Finite counts behind the degree of the forgetful map.

    type0_over_type2: self-dual lattices over a fixed type 2 lattice, i.e.
    lagrangians of the 2-dim quotient.  type0_containing_type1_flag:
    isotropic lines orthogonal to an anisotropic line in a 3-dim space.
    type0_over_type0: the lattice itself.
    """
    if kind == "type0_over_type0":
        return 1
    if kind == "type0_over_type2":
        return len(lagrangians(FinHermSpace.standard(q, 2)))
    if kind == "type0_containing_type1_flag":
        V = FinHermSpace.standard(q, 3)
        line = identity(3)[2]
        perp = V.perp([line])
        return sum(1 for S in enumerate_isotropic(V, 1)
                   if perp.contains(V.k, S.rows[0]))
    raise ValueError("unknown kind %r" % (kind,))


def gl2_order(Q):
    return (Q * Q - 1) * (Q * Q - Q)


def mirabolic_index(q, method="orbit"):
    """[GL_2(F_{q^2}) : {[[a, 0], [c, 1]]}].

    "orbit": the mirabolic subgroup is the stabilizer of the column e_2, so
    the index is the size of its GL_2-orbit.  "count": both orders by
    exhaustive enumeration of 2 x 2 matrices.
    """
    k = residue_field(q, 2)
    if method == "orbit":
        gens = []
        for a in k.units:
            gens.append(((a, 0), (0, 1)))
        gens.append(((0, 1), (1, 0)))
        for c in k.units:
            gens.append(((1, c), (0, 1)))
        orbit = _orbit_of(k, (0, 1), gens, act=lambda g, v: k.mat_vec(g, v))
        return len(orbit)
    if method == "count":
        gl = mir = 0
        for a, b, c, d in product(range(k.Q), repeat=4):
            if k.sub[k.mul[a][d]][k.mul[b][c]] == 0:
                continue
            gl += 1
            if b == 0 and d == 1:
                mir += 1
        if gl != gl2_order(k.Q):
            raise AssertionError("GL_2 count disagrees with its order formula")
        return gl // mir
    raise ValueError("unknown method %r" % (method,))


def isotropic_sublattice_count(q, n, r):
    """Type r vertex lattices inside a fixed type eps (= r mod 2) lattice of
    rank n: isotropic subspaces of dimension (r - eps)/2 in the
    (n - eps)-dim nondegenerate reduction."""
    eps = r % 2
    V = FinHermSpace.standard(q, n - eps)
    return len(enumerate_isotropic(V, (r - eps) // 2))
