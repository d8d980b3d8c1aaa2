"""Command-line entry point: ``polytor run | constants | tables``."""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path
from typing import List, Optional

from .errors import ConfigError, PolytorError
from .harness import checks as C
from .harness.instances import corner_kind, random_vpoly, random_walsh_poly, rng_for
from .harness.runner import SEED_ENV, bundled_config_path, run_experiment
from .poly import stirling_ratio_exact
from .projections import hilbert_inverse_growth
from .spaces import NormedSpace

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _error(msg: str) -> int:
    print(f"polytor: error: {msg}", file=sys.stderr)
    return EXIT_CONFIG


def _seed(value: Optional[str]) -> Optional[int]:
    if value is None:
        return None
    v = int(value, 0)
    if not -(2**63) <= v < 2**64:
        raise ConfigError(f"seed {value} does not fit in 64 bits")
    return v


def cmd_run(args) -> int:
    config = args.config or str(bundled_config_path())
    if not Path(config).is_file():
        return _error(f"config {config} does not exist")
    try:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        code, payload, digest = run_experiment(config, _seed(args.seed), args.jobs, args.filter, out)
    except (ConfigError, OSError, ValueError) as exc:
        return _error(str(exc))
    counts = {}
    for check in payload["checks"]:
        for k, v in check["status_counts"].items():
            counts[k] = counts.get(k, 0) + v
    summary = ", ".join(f"{k}={v}" for k, v in sorted(counts.items())) or "no reports"
    print(f"{len(payload['checks'])} checks, {summary}; digest {digest}")
    print(f"wrote {out / 'results.json'} and {out / 'summary.csv'}")
    return code


def cmd_constants(args) -> int:
    try:
        space = NormedSpace.from_json(json.loads(args.space))
    except (json.JSONDecodeError, PolytorError) as exc:
        return _error(f"bad --space: {exc}")
    if (args.q is None) == (args.p is None):
        return _error("give exactly one of --q (cotype) or --p (type)")
    seed = _seed(args.seed)
    if seed is None:
        env = os.environ.get(SEED_ENV)
        seed = int(env) if env else 0
    try:
        if args.q is not None:
            est = C.estimate_cotype_constant(space, args.q, args.n, args.budget, seed)
        else:
            est = C.estimate_type_constant(space, args.p, args.n, args.budget, seed)
    except PolytorError as exc:
        return _error(str(exc))
    print(json.dumps(est.to_json(), sort_keys=True))
    return EXIT_OK


KAHANE_SPACES = [NormedSpace.ellp(1, 2), NormedSpace.euclidean(2), NormedSpace.ellp("inf", 2)]


def kahane_rows(count: int = 20, seed: int = 0) -> List[dict]:
    """Largest measured ratio ||P||_r / ||P||_s per space, degree and (s, r), next to the bound."""
    rows = []
    for si, space in enumerate(KAHANE_SPACES):
        for m in (1, 2, 3):
            rng = rng_for(seed, 40, si, m)
            polys = [random_vpoly(space, 3, m, rng, kind=corner_kind(i)) for i in range(count)]
            walsh = [random_walsh_poly(space, 5, m, rng, homogeneous=True, kind=corner_kind(i)) for i in range(count)]
            for s, r in ((1.0, 2.0), (2.0, 4.0)):
                for domain, reps in (("torus", C.check_kahane(space, s, r, polys)),
                                     ("cube", C.check_walsh_kahane(space, s, r, walsh))):
                    worst = max(reps, key=lambda rep: rep.ratio)
                    rows.append({"space": space.describe(), "domain": domain, "m": m, "s": s, "r": r,
                                 "max_ratio": worst.ratio, "bound": worst.constant})
    return rows


def cmd_tables(args) -> int:
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        with (out / "hilbert_growth.csv").open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["m", "max_abs_entry", "log_max_abs_entry"])
            for m, top, lg in hilbert_inverse_growth(range(0, 13)):
                w.writerow([m, top, repr(lg)])
        with (out / "stirling_ratios.csv").open("w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["n", "m", "k", "ratio"])
            for n in range(1, 41):
                for k in range(1, n + 1):
                    if n % k == 0:
                        w.writerow([n, n // k, k, repr(float(stirling_ratio_exact(n, n // k, k)))])
        rows = kahane_rows(seed=args.seed)
        with (out / "kahane_ratios.csv").open("w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    except OSError as exc:
        return _error(str(exc))
    print(f"wrote hilbert_growth.csv, stirling_ratios.csv, kahane_ratios.csv to {out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polytor", description="Vector-valued polynomial and Dirichlet inequality checks.")
    sub = ap.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a check config and write results.json and summary.csv")
    run.add_argument("--config", help="JSON config (default: bundled acceptance config)")
    run.add_argument("--seed", help=f"64-bit seed; overrides ${SEED_ENV} and the config")
    run.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes")
    run.add_argument("--filter", help="only run checks whose name matches this glob")
    run.add_argument("--out", default="polytor-out", help="output directory")
    run.set_defaults(func=cmd_run)

    con = sub.add_parser("constants", help="search for a lower bound of a cotype or type constant")
    con.add_argument("--space", required=True, help='e.g. \'{"family": "ellp", "p": "inf", "dim": 2}\'')
    con.add_argument("--q", type=float, help="cotype exponent (>= 2)")
    con.add_argument("--p", type=float, help="type exponent (1..2)")
    con.add_argument("--n", type=int, default=2, help="number of vectors")
    con.add_argument("--budget", type=int, default=20, help="random starts")
    con.add_argument("--seed", help="64-bit seed")
    con.set_defaults(func=cmd_constants)

    tab = sub.add_parser("tables", help="write CSV tables of numeric summaries")
    tab.add_argument("--out", required=True, help="output directory")
    tab.add_argument("--seed", type=int, default=0)
    tab.set_defaults(func=cmd_tables)
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "jobs", 1) is not None and getattr(args, "jobs", 1) < 1:
        return _error("--jobs must be >= 1")
    try:
        return args.func(args)
    except ConfigError as exc:
        return _error(str(exc))


if __name__ == "__main__":
    sys.exit(main())
