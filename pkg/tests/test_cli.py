import json

import pytest

from artifact import cli
from artifact.cli import ConfigError, ScenarioConfig, run_suite
from artifact.suites import REGISTRY, list_suites


def test_fl_n1_reference_run():
    rep = run_suite(ScenarioConfig(prime=3, rank=1, samples=25, seed=7, suites=["fl_n1"]))
    assert rep["summary"]["counts"] == {"pass": 25, "fail": 0, "skipped": 0}
    assert {r["sample_id"] for r in rep["records"]} == set(range(25))


def test_unknown_suite_is_config_error(capsys):
    with pytest.raises(ConfigError):
        ScenarioConfig(suites=["nope"]).validate()
    assert cli.main(["--suite", "nope"]) == 2
    assert "unknown suite" in capsys.readouterr().err


@pytest.mark.parametrize("bad", [dict(prime=4), dict(prime=2), dict(samples=0), dict(output="xml")])
def test_invalid_configs(bad):
    with pytest.raises(ConfigError):
        ScenarioConfig(**bad).validate()


def test_reports_are_byte_identical(tmp_path):
    args = ["--prime", "3", "--samples", "3", "--seed", "11", "--suite", "fl_n1", "--suite", "g2s",
            "--suite", "finite_counts"]
    a, b, c = tmp_path / "a.json", tmp_path / "b.json", tmp_path / "c.json"
    assert cli.main(args + ["--out", str(a)]) == 0
    assert cli.main(args + ["--out", str(b)]) == 0
    assert cli.main(args + ["--out", str(c), "--jobs", "2"]) == 0
    assert a.read_bytes() == b.read_bytes() == c.read_bytes()


def test_exact_serialization():
    rep = run_suite(ScenarioConfig(prime=3, samples=2, suites=["g2s", "hecke_conv"]))
    for r in rep["records"]:
        json.dumps(r)
    poly = [r for r in rep["records"] if r["suite"] == "g2s"][0]["lhs"]
    assert all(len(t) == 3 and all(isinstance(x, int) for x in t) for t in poly)
    frac = [r for r in rep["records"] if r["check"].startswith("(1_K * 1_K[2])(1) vs")][0]
    assert frac["lhs"] == [1, 4]


def test_failures_give_exit_code_one(capsys):
    code = cli.main(["--prime", "3", "--samples", "2", "--suite", "type01_n1", "--format", "text"])
    out = capsys.readouterr().out
    assert code == 1
    assert "FAIL type01_n1" in out


def test_errors_are_recorded_not_raised(monkeypatch):
    from artifact import suites

    def boom(cfg, sample_id, rng):
        if sample_id == 1:
            raise RuntimeError("broken sample")
        return [suites.Check("ok", 1, 1)]
    monkeypatch.setitem(suites.REGISTRY, "fl_n1", suites.Suite("fl_n1", "x", {}, boom))
    rep = run_suite(ScenarioConfig(samples=3, suites=["fl_n1"]))
    assert [r["status"] for r in rep["records"]] == ["pass", "fail", "pass"]
    assert rep["records"][1]["note"] == "broken sample"


def test_config_file_overridden_by_flags(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"prime": 5, "samples": 2, "suites": ["fl_n1"], "output": "csv"}))
    assert cli.main(["--config", str(cfg), "--samples", "1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0].startswith("suite,sample_id")
    assert len(lines) == 2
    cfg.write_text(json.dumps({"primes": 5}))
    assert cli.main(["--config", str(cfg)]) == 2


def test_list_suites():
    entries = list_suites()
    names = [e["name"] for e in entries]
    assert "qcfl_n1" in names
    assert len(entries) >= 12
    assert all(e["anchor"] for e in entries)
    assert set(names) == set(REGISTRY)
