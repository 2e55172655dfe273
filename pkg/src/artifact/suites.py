"""Named verification suites.

A suite maps (config, sample_id, rng) to a list of Check records.  Both
sides of every check come from separate code paths; the sampling is
seeded by derive_seed(seed, suite, sample_id) so that a sample does not
depend on which other samples or suites run.
"""

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction

from . import finite_hermitian as fh
from . import hecke as hk
from . import linalg as la
from . import orbital as orb
from . import orbits as ob
from .lattice import Lattice, intermediate_lattices
from .plocal import FieldConfig, FNumber, XLaurent


@dataclass
class Check:
    name: str
    lhs: object
    rhs: object
    parameters: dict = field(default_factory=dict)
    status: str = ""
    note: str = ""

    def __post_init__(self):
        if not self.status:
            self.status = "pass" if self.lhs == self.rhs else "fail"


@dataclass(frozen=True)
class Suite:
    name: str
    anchor: str
    defaults: dict
    run: object
    samples_fixed: bool = False


REGISTRY = {}


def suite(name, anchor, samples_fixed=False, **defaults):
    def wrap(fn):
        REGISTRY[name] = Suite(name, anchor, defaults, fn, samples_fixed)
        return fn
    return wrap


def list_suites():
    return [{"name": s.name, "anchor": s.anchor, "defaults": dict(s.defaults),
             "per_sample": not s.samples_fixed} for s in REGISTRY.values()]


def _field(cfg):
    return FieldConfig(cfg["prime"])


def _side(sample_id):
    return "split" if sample_id % 2 == 0 else "nonsplit"


# transfer identities on the symmetric space


@suite("fl_n1", "fundamental lemma, special vector of unit length, n = 1")
def fl_n1(cfg, sample_id, rng):
    f = _field(cfg)
    side = _side(sample_id)
    gamma, g, setup = ob.sample_pair_n1(rng, f, 0, side == "split", cfg["height_bound"])
    lhs = orb.orb_S(gamma, orb.ind_S_O(), f, budget=cfg["budget"]).at_zero
    rhs = orb.orb_U(g, setup, budget=cfg["budget"]) if side == "split" else Fraction(0)
    return [Check("orb_S(1_S(O)) at 0 vs unitary count", lhs, rhs, {"side": side})]


def qcfl_coefficients(n, q):
    """The u*1_{S(O)} coefficient: as stated, and the volume of the
    translate support that makes the identity hold."""
    return {"literal": q ** (2 * (n + 1)) - 1, "volume": q ** n - 1}


@suite("qcfl_n1", "quasi-canonical fundamental lemma, inhomogeneous, n = 1")
def qcfl_n1(cfg, sample_id, rng):
    f = _field(cfg)
    q = f.p
    side = _side(sample_id)
    gamma, g, setup = ob.sample_pair_n1(rng, f, 1, side == "split", cfg["height_bound"])
    rhs = orb.orb_U(g, setup, budget=cfg["budget"]) if side == "split" else Fraction(0)
    out = []
    for label, coef in qcfl_coefficients(1, q).items():
        val = orb.orb_S(gamma, orb.phi_prime_s(1, q, coef), f, budget=cfg["budget"]).at_zero
        out.append(Check("orb_S(phi'_1) at 0 vs unitary count [%s coefficient]" % label,
                         val, rhs, {"side": side, "coefficient": coef}))
    return out


def hilbert90_lift(gamma, field):
    """h in GL_{n+1}(F) with h conj(h)^-1 = gamma, of the form a + gamma abar."""
    eps = field.eps
    m = len(gamma)
    for a in (FNumber(1, 0, eps), FNumber(0, 1, eps), FNumber(1, 1, eps), FNumber(2, 1, eps)):
        h = la.add(la.scale(la.identity(m, eps), a), la.scale(gamma, a.conj()))
        if not la.det(h).is_zero():
            return h
    raise ob.SamplingError("no lift found")


def homogeneous_qcfl_terms(n, q, which):
    if which == "literal":
        c = fh.mirabolic_index(q) * (q ** (2 * (n + 1)) - 1)
    else:
        c = (-1) ** n * (q ** n - 1) * orb.mirabolic_level_index(n, q)
    return [(Fraction(c), orb.GprimeAtom("Ktilde")),
            (Fraction((-1) ** (n + 1) + 1), orb.GprimeAtom("G_O"))]


@suite("qcfl_hom_n1", "quasi-canonical fundamental lemma, homogeneous, n = 1")
def qcfl_hom_n1(cfg, sample_id, rng):
    f = _field(cfg)
    q = f.p
    side = _side(sample_id)
    gamma, g, setup = ob.sample_pair_n1(rng, f, 1, side == "split", cfg["height_bound"])
    g1 = [[FNumber(1, 0, f.eps)]]
    g2 = hilbert90_lift(gamma, f)
    rhs = orb.orb_U(g, setup, budget=cfg["budget"]) if side == "split" else Fraction(0)
    out = []
    for which in ("literal", "volume"):
        terms = homogeneous_qcfl_terms(1, q, which)
        direct = orb.orb_Gprime_direct_n1(g1, g2, terms, f)
        out.append(Check("direct homogeneous Orb at 0 vs unitary count [%s coefficient]" % which,
                         direct.at_zero, rhs, {"side": side}))
        if which == "volume":
            via = orb.orb_Gprime(g1, g2, terms, f, budget=cfg["budget"])
            out.append(Check("homogeneous Orb: direct vs through r(gamma)",
                             direct.poly.to_pairs(), via.poly.to_pairs(), {"side": side}))
    return out


def _sample_S(cfg, rng, n):
    return ob.sample_S(rng, n, cfg["height_bound"], _field(cfg))


@suite("orb_red", "reduction of the semi-Lie orbital integral to the symmetric space", rank=2)
def orb_red(cfg, sample_id, rng):
    f = _field(cfg)
    q = f.p
    out = []
    for n in _ranks(cfg):
        gamma = _sample_S(cfg, rng, n)
        sl = orb.orb_semilie(gamma, f, budget=cfg["budget"]).poly
        for label, coef in qcfl_coefficients(n, q).items():
            rhs = orb.orb_S(gamma, orb.phi_prime_s(n, q, coef), f, budget=cfg["budget"]).poly
            out.append(Check("semi-Lie Orb vs Orb(phi'_s) [%s coefficient]" % label,
                             sl.to_pairs(), rhs.to_pairs(), {"n": n}))
    return out


def _ranks(cfg):
    return [1, 2] if cfg["rank"] >= 2 else [1]


@suite("u_translate", "u' versus u translate identity", rank=2)
def u_translate(cfg, sample_id, rng):
    f = _field(cfg)
    p = f.p
    out = []
    for n in _ranks(cfg):
        gamma = _sample_S(cfg, rng, n)
        a = orb.orb_S(gamma, orb.translate(orb.u_prime_matrix(n, p)), f,
                      method="sub", budget=cfg["budget"]).poly
        b = orb.orb_S(gamma, orb.translate(orb.u_matrix(n, p)), f, budget=cfg["budget"]).poly
        rhs = b * XLaurent({-n: (-1) ** n})
        out.append(Check("Orb(u'*1) vs (-1)^n q^{ns} Orb(u*1)", a.to_pairs(), rhs.to_pairs(), {"n": n}))
    return out


@suite("covariance", "transfer factor covariance and orbit invariance", rank=2)
def covariance(cfg, sample_id, rng):
    f = _field(cfg)
    p = f.p
    n = 1 + sample_id % min(2, cfg["rank"])
    gamma = _sample_S(cfg, rng, n)
    h = ob.random_GL_F0(rng, n, cfg["height_bound"], f)
    conj = ob.conjugate_S(gamma, h, f)
    v = la.det(h).val(p)
    lhs = orb.transfer_factor_S(conj, p)
    rhs = orb.transfer_factor_S(gamma, p) * XLaurent({v: (-1) ** v})
    out = [Check("omega(h^-1 gamma h) vs eta_s(h) omega(gamma)", lhs.to_pairs(), rhs.to_pairs(), {"n": n})]
    if n == 1:
        a = orb.orb_S(conj, orb.ind_S_O(), f, budget=cfg["budget"]).poly
        b = orb.orb_S(gamma, orb.ind_S_O(), f, budget=cfg["budget"]).poly
        out.append(Check("Orb(h^-1 gamma h) vs Orb(gamma)", a.to_pairs(), b.to_pairs(), {"n": n}))
    return out


def _random_Gprime_n1(rng, f, height):
    while True:
        g1 = [[ob._rand_F(rng, height, f)]]
        g2 = ob.random_matrix_F(rng, 2, height, f)
        if g1[0][0].is_zero() or la.det(g2).is_zero():
            continue
        if ob.is_rss_S(ob.r_map_pair(g1, g2)):
            return g1, g2


@suite("g2s", "homogeneous to inhomogeneous comparison, n = 1")
def g2s(cfg, sample_id, rng):
    f = _field(cfg)
    g1, g2 = _random_Gprime_n1(rng, f, cfg["height_bound"])
    gamma = ob.r_map_pair(g1, g2)
    out = []
    for kind in ("G_O", "Ktilde"):
        terms = [(1, orb.GprimeAtom(kind))]
        direct = orb.orb_Gprime_direct_n1(g1, g2, terms, f)
        via = orb.orb_Gprime(g1, g2, terms, f, budget=cfg["budget"])
        out.append(Check("Orb(gamma', %s) direct vs Orb(r(gamma'), sharp)" % kind,
                         direct.poly.to_pairs(), via.poly.to_pairs(), {"atom": kind}))
        sharp = orb.orb_S(gamma, orb.natural_sharp(terms, 1, f.p), f, budget=cfg["budget"])
        out.append(Check("dOrb(gamma', %s) vs 2 dOrb(r(gamma'), sharp)" % kind,
                         direct.d_at_zero_coeff, 2 * sharp.d_at_zero_coeff, {"atom": kind}))
    return out


# unitary side


@suite("semilie_bridge", "lattice counting bridge between the unitary integrals", rank=2)
def semilie_bridge(cfg, sample_id, rng):
    f = _field(cfg)
    n = 1 + sample_id % min(2, cfg["rank"])
    eps_u = (sample_id // 2) % 2
    setup = ob.standard_setup(f, n, eps_u, True)
    g = ob.sample_unitary(rng, setup, cfg["height_bound"])
    a = orb.orb_U(g, setup, budget=cfg["budget"])
    b = orb.orb_U_semilie(g, setup.u, setup, budget=cfg["budget"])
    return [Check("orb_U vs orb_U_semilie at u_0", a, b, {"n": n, "eps_u": eps_u})]


@suite("type01_n1", "transfer for the type (0,1) level, n = 1")
def type01_n1(cfg, sample_id, rng):
    f = _field(cfg)
    n = 1
    side = "nonsplit" if sample_id % 2 == 0 else "split"
    gamma, g, setup = ob.sample_pair_n1(rng, f, 1, side == "split", cfg["height_bound"])
    base = orb.orb_S(gamma, orb.ind_K_S_varpi(), f, budget=cfg["budget"]).at_zero
    rhs = orb.orb_U_type01(g, setup, budget=cfg["budget"]) if side == "nonsplit" else Fraction(0)
    return [
        Check("(-1)^(n-1) orb_S(1_K_S(p)) at 0 vs type (0,1) count", (-1) ** (n - 1) * base, rhs,
              {"side": side}),
        Check("(-1)^n orb_S(1_K_S(p)) at 0 vs type (0,1) count", (-1) ** n * base, rhs,
              {"side": side}),
    ]


# oracle equivalence


@suite("oracles", "structured enumeration versus windowed brute force, n = 1")
def oracles(cfg, sample_id, rng):
    f = _field(cfg)
    out = []
    kind = sample_id % 3
    if kind == 0:
        # symmetric-space sums; keep samples whose window stays small
        for _ in range(50):
            gamma = _sample_S(cfg, rng, 1)
            if orb.window_start(gamma, f.p, 1) <= cfg.get("max_window", 3):
                break
        else:
            return [Check("window sample", "none", "found", status="skipped")]
        for label, fn in (("1_S(O)", orb.ind_S_O()), ("u*1", orb.translate(orb.u_matrix(1, f.p))),
                          ("1_K_S(p)", orb.ind_K_S_varpi())):
            a = orb.orb_S(gamma, fn, f, budget=cfg["budget"]).poly
            b = orb.orb_S_window(gamma, fn, f).poly
            out.append(Check("sandwich vs window: Orb(%s)" % label, a.to_pairs(), b.to_pairs()))
        a = orb.orb_semilie(gamma, f, budget=cfg["budget"]).poly
        b = orb.orb_semilie_window(gamma, f).poly
        out.append(Check("sandwich vs window: semi-Lie", a.to_pairs(), b.to_pairs()))
    elif kind == 1:
        eps_u = rng.choice([0, 1])
        setup = ob.standard_setup(f, 1, eps_u, True)
        g = ob.sample_unitary(rng, setup, cfg["height_bound"])
        a = orb.orb_U(g, setup, budget=cfg["budget"])
        b = orb.orb_U_window(g, setup, start_B=1, max_B=3)
        out.append(Check("unitary count: stable lattices vs window", a, b, {"eps_u": eps_u}))
    else:
        setup = ob.standard_setup(f, 1, 1, False)
        g = ob.sample_unitary(rng, setup, cfg["height_bound"])
        a = orb.orb_U_type01(g, setup, budget=cfg["budget"])
        b = orb.orb_U_window(g, setup, start_B=1, max_B=3, kind="type01")
        out.append(Check("type (0,1) count: stable lattices vs window", a, b))
    return out


# finite constants; these run once per invocation


@suite("constants", "volume constants c_1 and c'_1", samples_fixed=True)
def constants(cfg, sample_id, rng):
    q = cfg["prime"]
    out = [
        Check("c_1 as an index", hk.c_r(cfg["rank"], 1, q), 1, {"q": q}),
        Check("c'_1 by orbit of the mirabolic", hk.c_prime_1(q), (q * q + 1) * (q * q - 1), {"q": q}),
    ]
    W = hk.HyperbolicPlane(q)
    K = hk.Level(W.selfdual(), "K")
    out.append(Check("index(K, K)", hk.index(K, K, W.H), 1, {"q": q}))
    if q <= 5:
        out.append(Check("c'_1 by counting matrices", fh.mirabolic_index(q, "count"),
                         hk.c_prime_1(q), {"q": q}))
    return out


def _selfdual_over_type2_padic(q):
    W = hk.HyperbolicPlane(q)
    L = W.type2()
    return len(intermediate_lattices(L, L.dual(W.H), lambda M: M.is_selfdual(W.H)))


@suite("finite_counts", "lattice counts over finite hermitian spaces", samples_fixed=True)
def finite_counts(cfg, sample_id, rng):
    q = cfg["prime"]
    V2 = fh.FinHermSpace.standard(q, 2)
    return [
        Check("type 0 over type 2", fh.lattice_covers_count("type0_over_type2", q), q + 1, {"q": q}),
        Check("type 0 over type 2, p-adic enumeration", _selfdual_over_type2_padic(q),
              fh.lattice_covers_count("type0_over_type2", q), {"q": q}),
        Check("isotropic lines in the perp of an anisotropic line",
              fh.lattice_covers_count("type0_containing_type1_flag", q), q + 1, {"q": q}),
        Check("isotropic lines in a plane, closed form",
              len(fh.enumerate_isotropic(V2, 1)), fh.isotropic_subspace_count(q, 2, 1), {"q": q}),
        Check("type 0 over type 0", fh.lattice_covers_count("type0_over_type0", q), 1, {"q": q}),
    ]


@suite("orbits_12", "orbit counts over the residue field, coset decompositions, KfK equality", samples_fixed=True)
def orbits_12(cfg, sample_id, rng):
    q = cfg["prime"]
    big = q == 3
    out = []
    cases = [("r = 0", 2, 0, 1), ("r odd", 3 if big else 2, 3 if big else 1, 1),
             ("r = n + 1", 3 if big else 1, 4 if big else 2, 1), ("r = 2", 2, 2, 2)]
    if big:
        cases.append(("r = 2, n = 3", 3, 2, 2))
    for label, n, r, expected in cases:
        res = fh.two_orbit_scenario(q, n, r)
        out.append(Check("U(W^flat)-orbits on type r lattices, %s" % label, res["orbits"], expected,
                         {"q": q, "n": n, "r": r, "expected": expected}))
    for r in ((1, 2, 3) if big else (1, 2)):
        res = fh.transitive_scenario(q, r)
        out.append(Check("transitivity on lagrangians, r = %d" % r, res["orbits"], 1, {"q": q, "r": r}))
    for n in ((2, 3) if big else (2,)):
        res = fh.coset_decomposition(q, n, 2)
        ok = res["transitive"] and res["disjoint"] and res["exhaustive"]
        out.append(Check("coset decomposition for even r", ok, True,
                         {"q": q, "n": n, "classified": res["classified"]}))
    res = fh.kfk_check(q, 1)
    out.append(Check("KfK set equality, n = 1", res["equal"], True, {"q": q, "size": res["left"]}))
    norms = fh.vector_orbits_by_norm(fh.FinHermSpace.standard(q, 3 if big else 2))
    out.append(Check("one orbit per norm on nonzero vectors", sorted(norms.values()),
                     [1] * q, {"q": q}))
    return out


@suite("hecke_conv", "convolution identities for the atomic Hecke function", samples_fixed=True)
def hecke_conv(cfg, sample_id, rng):
    q = cfg["prime"]
    W = hk.HyperbolicPlane(q)
    K = hk.Level(W.selfdual(), "K")
    K2 = hk.Level(W.type2(), "K[2]")
    one = la.identity(2, W.field.eps)
    vol_int = hk.intersection_volume(K, K2, K, W.H)
    out = [
        Check("(1_K * 1_K[2])(1) vs vol(K cap K[2])", hk.convolve_eval(K, K2, one, K, W.H), vol_int, {"q": q}),
        Check("(1_K[2] * 1_K)(1) vs (1_K * 1_K[2])(1)", hk.convolve_eval(K2, K, one, K, W.H),
              hk.convolve_eval(K, K2, one, K, W.H), {"q": q}),
        Check("(1_K * 1_K)(1) vs vol(K)", hk.convolve_eval(K, K, one, K, W.H), 1, {"q": q}),
        Check("(1_K * 1_K[2])(t_1) vs (1_K * 1_K[2])(1)", hk.convolve_eval(K, K2, W.torus(1), K, W.H),
              vol_int, {"q": q}),
        Check("(1_K * 1_K[2])(t_2) off the support", hk.convolve_eval(K, K2, W.torus(2), K, W.H), 0, {"q": q}),
    ]
    if q == 3:
        out.append(Check("vol(K cap K[2]) by group enumeration", hk.stabilizer_volume_bruteforce(q),
                         vol_int, {"q": q}))
    phi = hk.atomic_phi(q, 2)
    expected = hk.HeckeElement("U2", "K", {(0, 0): q + 1, (-1, 1): 1})
    out.append(Check("phi_2 coefficients", sorted((k, v) for k, v in phi.terms.items()),
                     sorted((k, v) for k, v in expected.terms.items()), {"q": q}))
    return out


@suite("satake_mismatch", "Satake transforms of the two base change candidates", samples_fixed=True)
def satake_mismatch(cfg, sample_id, rng):
    q = cfg["prime"]
    mismatch, (sf, sg) = hk.bc_mismatch_check(q)
    quoted_f = XLaurent({1: q, -1: q})
    quoted_g = XLaurent({1: q, 0: 2 * q, -1: q})
    same, _ = hk.bc_mismatch_check(q, hk.atomic_phi(q, 2), hk.atomic_phi(q, 2))
    return [
        Check("Sat(1_{K' p^(1,0) K'})", sf.to_pairs(), quoted_f.to_pairs(), {"q": q}),
        Check("Sat(phi_2)", sg.to_pairs(), quoted_g.to_pairs(), {"q": q}),
        Check("the two transforms differ", mismatch, True, {"q": q}),
        Check("equal inputs do not differ", same, False, {"q": q}),
        Check("Sat(1_K)", hk.satake(hk.indicator("U2", (0, 0)), q).to_pairs(),
              XLaurent.one().to_pairs(), {"q": q}),
    ]


# running


def run_one(name, cfg, sample_id):
    """All checks of one sample, never raising."""
    s = REGISTRY[name]
    seed = ob.derive_seed(cfg["seed"], name, sample_id)
    rng = random.Random(seed)
    t0 = time.perf_counter()
    try:
        checks = s.run(cfg, sample_id, rng)
    except Exception as exc:
        checks = [Check("error", type(exc).__name__, None, status="fail", note=str(exc))]
    elapsed = (time.perf_counter() - t0) * 1000.0
    return name, sample_id, seed, checks, elapsed
