"""Acceptance gate: one line per criterion, printed in the terminal summary.

Criteria 2, 3 and 12 are checked exactly as stated and fail; they are
marked strict xfail, and the accompanying *_corrected tests check the
identity with the coefficient or sign that the computation supports.
"""

import time
from functools import lru_cache

import pytest

from artifact import finite_hermitian as fh
from artifact.cli import ScenarioConfig, run_suite


@lru_cache(maxsize=None)
def report(suites, prime=3, rank=1, samples=1):
    return run_suite(ScenarioConfig(prime=prime, rank=rank, samples=samples, seed=2024,
                                    suites=list(suites)))["records"]


def select(records, suite=None, contains=""):
    return [r for r in records if (suite is None or r["suite"] == suite) and contains in r["check"]]


def all_pass(records):
    return bool(records) and all(r["status"] == "pass" for r in records)


def sides(records):
    out = {"split": 0, "nonsplit": 0}
    for r in records:
        out[r["parameters"]["side"]] += 1
    return out


def test_criterion_01_fl_n1(criterion):
    ok, detail = True, []
    for p in (3, 5):
        t0 = time.perf_counter()
        recs = report(("fl_n1",), prime=p, samples=50)
        elapsed = time.perf_counter() - t0
        s = sides(recs)
        ok &= all_pass(recs) and s["split"] >= 25 and s["nonsplit"] >= 25 and elapsed < 60
        detail.append("p=%d: %d/%d split+nonsplit, %.1fs" % (p, s["split"], s["nonsplit"], elapsed))
    criterion(1, ok, "FL n=1; " + "; ".join(detail))
    assert ok


def _qcfl(p, which):
    inh = select(report(("qcfl_n1", "qcfl_hom_n1"), prime=p, samples=50), "qcfl_n1", "[%s" % which)
    hom = select(report(("qcfl_n1", "qcfl_hom_n1"), prime=p, samples=50), "qcfl_hom_n1")
    hom = [r for r in hom if "[%s" % which in r["check"] or "through r(gamma)" in r["check"]]
    return inh, hom


@pytest.mark.xfail(strict=True, reason="the stated u*1 coefficient q^(2(n+1))-1 does not transfer")
def test_criterion_02_qcfl_literal(criterion):
    ok = True
    for p in (3, 5):
        inh, hom = _qcfl(p, "literal")
        ok &= all_pass(inh) and all_pass(hom) and min(sides(inh).values()) >= 25
    _, corrected = _criterion_02_status()
    criterion(2, ok, "quasi-canonical FL n=1 with coefficient q^4-1 (corrected coefficient q-1: %s)"
              % ("PASS" if corrected else "FAIL"))
    assert ok


def _criterion_02_status():
    ok = True
    for p in (3, 5):
        inh, hom = _qcfl(p, "volume")
        ok &= all_pass(inh) and all_pass(hom) and min(sides(inh).values()) >= 25
    return None, ok


def test_criterion_02_qcfl_corrected():
    assert _criterion_02_status()[1]


def _orb_red(which):
    recs = select(report(("orb_red",), rank=2, samples=10), "orb_red", "[%s" % which)
    per_n = {n: sum(r["parameters"]["n"] == n for r in recs) for n in (1, 2)}
    return all_pass(recs) and min(per_n.values()) >= 10


@pytest.mark.xfail(strict=True, reason="the stated u*1 coefficient q^(2(n+1))-1 does not reduce")
def test_criterion_03_orb_red_literal(criterion):
    ok = _orb_red("literal")
    criterion(3, ok, "semi-Lie reduction, n=1,2, coefficient q^(2(n+1))-1 (corrected q^n-1: %s)"
              % ("PASS" if _orb_red("volume") else "FAIL"))
    assert ok


def test_criterion_03_orb_red_corrected():
    assert _orb_red("volume")


def test_criterion_04_u_translate(criterion):
    recs = report(("u_translate",), rank=2, samples=10)
    ns = {r["parameters"]["n"] for r in recs}
    ok = all_pass(recs) and ns == {1, 2}
    criterion(4, ok, "Orb(u'*1) = (-1)^n q^(ns) Orb(u*1) on %d samples, n in %s" % (len(recs), sorted(ns)))
    assert ok


def test_criterion_05_covariance(criterion):
    recs = select(report(("covariance",), rank=2, samples=50), contains="omega")
    ok = all_pass(recs) and len(recs) >= 50
    criterion(5, ok, "transfer factor covariance on %d (gamma, h)" % len(recs))
    assert ok


def test_criterion_06_constants(criterion):
    ok, vals = True, []
    for q in (3, 5, 7):
        recs = report(("constants",), prime=q, rank=2)
        c1 = select(recs, contains="c_1 as an index")[0]["lhs"]
        cp = select(recs, contains="c'_1 by orbit")[0]["lhs"]
        ok &= all_pass(recs) and c1 == 1 and cp == (q * q + 1) * (q * q - 1)
        vals.append(cp)
    criterion(6, ok, "c_1 = 1, c'_1 = %s" % "/".join(map(str, vals)))
    assert ok and vals == [80, 624, 2400]


def test_criterion_07_finite_counts(criterion):
    ok = True
    for q in (3, 5, 7):
        recs = report(("finite_counts",), prime=q)
        ok &= all_pass(recs)
        ok &= fh.lattice_covers_count("type0_over_type2", q) == q + 1
        ok &= fh.lattice_covers_count("type0_containing_type1_flag", q) == q + 1
    criterion(7, ok, "type-0-over-type-2 and isotropic lines in the perp both q+1, q=3,5,7")
    assert ok


def test_criterion_08_orbit_counts(criterion):
    recs3 = report(("orbits_12",), prime=3)
    recs5 = report(("orbits_12",), prime=5)
    ok = all_pass(recs3) and all_pass(select(recs5, contains="KfK"))
    counts = sorted({r["lhs"] for r in select(recs3, contains="U(W^flat)-orbits")})
    ok &= counts == [1, 2]
    ok &= all_pass(select(recs3, contains="transitivity")) and all_pass(select(recs3, contains="coset"))
    criterion(8, ok, "orbit counts 1/1/2, transitivity, coset decomposition, KfK at q=3,5")
    assert ok


def test_criterion_09_hecke(criterion):
    recs3 = report(("hecke_conv",), prime=3)
    recs5 = report(("hecke_conv",), prime=5)
    conv = select(recs3, contains="vs vol(K cap K[2])")
    ok = all_pass(recs3) and all_pass(select(recs5, contains="phi_2")) and all_pass(conv)
    criterion(9, ok, "(1_K * 1_K[2])(1) = vol = %s at q=3; phi_2 coefficients at q=3,5"
              % "/".join(map(str, conv[0]["lhs"])))
    assert ok


def test_criterion_10_satake(criterion):
    ok = True
    for q in (3, 5):
        ok &= all_pass(report(("satake_mismatch",), prime=q))
    criterion(10, ok, "Sat(1_{K'p^(1,0)K'}) = q(X+X^-1) differs from Sat(phi_2) = q(X+2+X^-1), q=3,5")
    assert ok


def test_criterion_11_semilie_bridge(criterion):
    recs = report(("semilie_bridge",), rank=2, samples=30)
    ns = {r["parameters"]["n"] for r in recs}
    ok = all_pass(recs) and ns == {1, 2}
    criterion(11, ok, "orb_U = orb_U_semilie on %d unitary samples, n=1,2" % len(recs))
    assert ok


def _type01(sign_label):
    recs = select(report(("type01_n1",), samples=30), contains=sign_label)
    s = sides(recs)
    return all_pass(recs) and min(s.values()) >= 15


@pytest.mark.xfail(strict=True, reason="the sign (-1)^(n-1) is off by a global -1 at n = 1")
def test_criterion_12_type01_literal(criterion):
    ok = _type01("(-1)^(n-1)")
    criterion(12, ok, "type (0,1) transfer with sign (-1)^(n-1) (with (-1)^n: %s)"
              % ("PASS" if _type01("(-1)^n orb") else "FAIL"))
    assert ok


def test_criterion_12_type01_corrected():
    assert _type01("(-1)^n orb")


def test_criterion_13_oracles(criterion):
    recs = report(("oracles",), samples=60)
    kinds = {"lattice counts": select(recs, contains="count"),
             "symmetric sums": select(recs, contains="Orb("),
             "semi-Lie sums": select(recs, contains="semi-Lie")}
    ok = all(all_pass(v) and len(v) >= 20 for v in kinds.values())
    criterion(13, ok, "sandwich = window; " + ", ".join("%s %d" % (k, len(v)) for k, v in kinds.items()))
    assert ok
