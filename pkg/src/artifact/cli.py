"""Command line runner for the verification suites.

    python3 -m artifact --prime 3 --samples 25 --suite fl_n1

Exit status is 0 when every check passes, 1 on any failure and 2 on a
configuration error.
"""

import argparse
import csv
import io
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from . import __version__
from .plocal import XLaurent
from .suites import REGISTRY, list_suites, run_one

FORMATS = ("json", "text", "csv")


class ConfigError(ValueError):
    pass


@dataclass
class ScenarioConfig:
    prime: int = 3
    rank: int = 1
    samples: int = 10
    seed: int = 0
    suites: list = field(default_factory=lambda: list(REGISTRY))
    budget: int = None
    output: str = "json"
    height_bound: int = 3
    jobs: int = 1
    timings: bool = False

    def validate(self):
        p = self.prime
        if not isinstance(p, int) or p < 3 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
            raise ConfigError("prime must be an odd prime, got %r" % (p,))
        if self.rank not in (1, 2, 3):
            raise ConfigError("rank must be 1, 2 or 3")
        if not isinstance(self.samples, int) or self.samples < 1:
            raise ConfigError("samples must be a positive integer")
        if not self.suites:
            raise ConfigError("no suites selected")
        unknown = [s for s in self.suites if s not in REGISTRY]
        if unknown:
            raise ConfigError("unknown suite(s): %s" % ", ".join(unknown))
        if self.output not in FORMATS:
            raise ConfigError("output must be one of %s" % ", ".join(FORMATS))
        if self.height_bound < 0:
            raise ConfigError("height_bound must be nonnegative")
        if self.budget is not None and self.budget < 1:
            raise ConfigError("budget must be positive")
        return self

    def run_dict(self):
        return {"prime": self.prime, "rank": self.rank, "seed": self.seed,
                "budget": self.budget, "height_bound": self.height_bound}


def encode(x):
    """Exact JSON form: rationals as [num, den], XLaurent as [[k, num, den], ...]."""
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return [x.numerator, x.denominator]
    if isinstance(x, XLaurent):
        return x.to_pairs()
    if isinstance(x, dict):
        return {str(k): encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [encode(v) for v in x]
    return str(x)


def _job(args):
    name, cfg, sample_id = args
    return run_one(name, cfg, sample_id)


def run_suite(config):
    """Run the configured suites and return the report as a dict."""
    config.validate()
    cfg = config.run_dict()
    jobs = []
    for name in config.suites:
        count = 1 if REGISTRY[name].samples_fixed else config.samples
        jobs.extend((name, cfg, i) for i in range(count))
    if config.jobs > 1:
        with ProcessPoolExecutor(config.jobs) as pool:
            results = list(pool.map(_job, jobs))
    else:
        results = [_job(j) for j in jobs]

    order = {name: i for i, name in enumerate(config.suites)}
    results.sort(key=lambda r: (order[r[0]], r[1]))
    records = []
    for name, sample_id, seed, checks, elapsed in results:
        for c in checks:
            rec = {"suite": name, "sample_id": sample_id, "check": c.name,
                   "parameters": encode(c.parameters), "lhs": encode(c.lhs),
                   "rhs": encode(c.rhs), "status": c.status, "seed": seed}
            if c.note:
                rec["note"] = c.note
            if config.timings:
                rec["runtime_ms"] = round(elapsed, 3)
            records.append(rec)
    counts = {s: sum(r["status"] == s for r in records) for s in ("pass", "fail", "skipped")}
    echo = asdict(config)
    echo.pop("jobs")
    return {"records": records,
            "summary": {"counts": counts, "config": echo, "version": __version__}}


def exit_code(report):
    return 1 if report["summary"]["counts"]["fail"] else 0


def render(report, fmt):
    if fmt == "json":
        return json.dumps(report, indent=1, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        cols = ["suite", "sample_id", "check", "status", "lhs", "rhs", "parameters", "seed"]
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(cols)
        for r in report["records"]:
            w.writerow([json.dumps(r[c]) if c in ("lhs", "rhs", "parameters") else r[c] for c in cols])
        return buf.getvalue()
    lines = []
    for r in report["records"]:
        lines.append("%-4s %-15s #%-3d %s" % (r["status"].upper(), r["suite"], r["sample_id"], r["check"]))
        if r["status"] == "fail":
            lines.append("       lhs=%s rhs=%s" % (json.dumps(r["lhs"]), json.dumps(r["rhs"])))
    c = report["summary"]["counts"]
    lines.append("pass %d, fail %d, skipped %d" % (c["pass"], c["fail"], c["skipped"]))
    return "\n".join(lines) + "\n"


def build_parser():
    ap = argparse.ArgumentParser(prog="artifact", description="Run orbital integral verification suites.")
    ap.add_argument("--prime", type=int)
    ap.add_argument("--rank", type=int)
    ap.add_argument("--samples", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--suite", action="append", dest="suites", metavar="NAME")
    ap.add_argument("--budget", type=int)
    ap.add_argument("--height-bound", type=int, dest="height_bound")
    ap.add_argument("--format", choices=FORMATS, dest="output")
    ap.add_argument("--out", metavar="PATH")
    ap.add_argument("--config", metavar="JSON", help="config file; flags override it")
    ap.add_argument("--jobs", type=int)
    ap.add_argument("--timings", action="store_true", default=None,
                    help="record runtime_ms (reports are then no longer byte-identical)")
    ap.add_argument("--list", action="store_true", help="list the suites and exit")
    return ap


def config_from_args(args):
    values = {}
    if args.config:
        try:
            with open(args.config) as fh:
                values = json.load(fh)
        except (OSError, ValueError) as exc:
            raise ConfigError("cannot read config: %s" % exc)
        if not isinstance(values, dict):
            raise ConfigError("config file must hold a JSON object")
        known = set(ScenarioConfig.__dataclass_fields__)
        extra = set(values) - known
        if extra:
            raise ConfigError("unknown config keys: %s" % ", ".join(sorted(extra)))
    for key in ScenarioConfig.__dataclass_fields__:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    return ScenarioConfig(**values)


def main(argv=None):
    args = build_parser().parse_args(argv)
    if args.list:
        sys.stdout.write(json.dumps(list_suites(), indent=1) + "\n")
        return 0
    try:
        config = config_from_args(args).validate()
    except (ConfigError, TypeError) as exc:
        sys.stderr.write("configuration error: %s\n" % exc)
        return 2
    report = run_suite(config)
    text = render(report, config.output)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return exit_code(report)


if __name__ == "__main__":
    sys.exit(main())
