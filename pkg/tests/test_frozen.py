"""Sandwich-route values against a table frozen from the window oracle
(see freeze_oracles.py for how the table was produced)."""

import json
from pathlib import Path

import pytest

from artifact import orbital as orb
from artifact import orbits as ob
from artifact.plocal import FieldConfig, XLaurent

TABLE = json.loads((Path(__file__).parent / "data" / "frozen_oracles.json").read_text())


@pytest.mark.parametrize("row", TABLE["S"], ids=lambda r: "p%d-s%d" % (r["p"], r["seed"]))
def test_symmetric_side(row):
    f = FieldConfig(row["p"])
    gamma = ob.sample_rss(row["seed"], "S", 1, 2, f)
    assert orb.orb_S(gamma, orb.ind_S_O(), f).poly == XLaurent.from_pairs(row["S_O"])
    assert orb.orb_S(gamma, orb.ind_K_S_varpi(), f).poly == XLaurent.from_pairs(row["K_S_varpi"])
    assert orb.orb_semilie(gamma, f).poly == XLaurent.from_pairs(row["semilie"])


@pytest.mark.parametrize("row", TABLE["U"], ids=lambda r: "p%d-s%d" % (r["p"], r["seed"]))
def test_unitary_side(row):
    f = FieldConfig(row["p"])
    g, setup = ob.sample_rss(row["seed"], "U_split", 1, 2, f, eps_u=row["eps_u"])
    assert orb.orb_U(g, setup) == row["count"]
