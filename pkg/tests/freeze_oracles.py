"""Regenerate the frozen oracle table used by test_frozen.py.

Values come only from the brute-force window enumerations, never from
the sandwich code path they are later compared against.

    PYTHONPATH=src python3 tests/freeze_oracles.py
"""

import json

from artifact import orbital as orb
from artifact import orbits as ob
from artifact.plocal import FieldConfig

SEEDS = range(6)


def table():
    out = {"S": [], "U": []}
    for p in (3, 5):
        f = FieldConfig(p)
        for seed in SEEDS:
            gamma = ob.sample_rss(seed, "S", 1, 2, f)
            if orb.window_start(gamma, p, 1) > 3:
                continue
            out["S"].append({
                "p": p, "seed": seed,
                "S_O": orb.orb_S_window(gamma, orb.ind_S_O(), f).poly.to_pairs(),
                "K_S_varpi": orb.orb_S_window(gamma, orb.ind_K_S_varpi(), f).poly.to_pairs(),
                "semilie": orb.orb_semilie_window(gamma, f).poly.to_pairs(),
            })
        for seed in SEEDS:
            g, setup = ob.sample_rss(seed, "U_split", 1, 2, f, eps_u=seed % 2)
            out["U"].append({"p": p, "seed": seed, "eps_u": seed % 2,
                             "count": int(orb.orb_U_window(g, setup, 1, 3))})
    return out


if __name__ == "__main__":
    print(json.dumps(table()))
