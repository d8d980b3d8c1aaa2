"""Config-driven experiment runner.

A config is a JSON document ``{"seed": int, "budget": {...}, "checks": [...]}``.
Each check entry names a check ``kind`` (defaults to its ``name``), one space
or a list of ``spaces``, ``params`` for the inequality and ``instances`` for
the generator. Entries are independent: each draws its instances from its own
counter-based stream, so results do not depend on the number of workers.
"""

from __future__ import annotations

import csv
import fnmatch
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from ..errors import ConfigError, PolytorError
from ..norms import NormEstimate, SamplerSpec, l2_parseval, lq_norm_grid, lq_norm_mc
from ..poly import (
    DirichletPoly,
    bohr_lift,
    bohr_push,
    combinatorial_identity_check,
    monomial_integer,
    omega,
    prime_table,
    stirling_ratio_exact,
)
from ..projections import (
    RationalMatrix,
    biorthogonality_defect,
    hilbert_inverse,
    hilbert_inverse_growth,
    hilbert_matrix,
    lemma3_projection,
    rademacher_projection_search,
    walsh_homog_filter,
)
from ..spaces import NormedSpace
from . import checks as C
from .instances import corner_kind, degree_one_family, random_dirichlet, random_vpoly, random_walsh_poly, rng_for
from .reports import FAIL, FLOAT_SLACK, ConstantEstimate, InequalityReport, digest_of

SEED_ENV = "POLYTOR_SEED"

Outcome = Tuple[List[InequalityReport], List[ConstantEstimate]]


# ---------------------------------------------------------------------------
# config handling


def load_config(path) -> dict:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        cfg = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    validate_config(cfg)
    return cfg


def validate_config(cfg) -> None:
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    checks = cfg.get("checks", [])
    if not isinstance(checks, list):
        raise ConfigError("'checks' must be a list")
    for i, entry in enumerate(checks):
        if not isinstance(entry, dict) or "name" not in entry:
            raise ConfigError(f"check #{i} must be an object with a 'name'")
        kind = entry.get("kind", entry["name"])
        if kind not in CHECKS:
            raise ConfigError(f"check #{i} ({entry['name']}): unknown kind {kind!r}")
    if "budget" in cfg and not isinstance(cfg["budget"], dict):
        raise ConfigError("'budget' must be an object")


def resolve_seed(cfg: dict, seed_override: Optional[int] = None) -> int:
    """CLI flag, then the environment variable, then the config."""
    if seed_override is not None:
        return int(seed_override)
    env = os.environ.get(SEED_ENV)
    if env not in (None, ""):
        try:
            return int(env)
        except ValueError as exc:
            raise ConfigError(f"{SEED_ENV}={env!r} is not an integer") from exc
    return int(cfg.get("seed", 0))


def _spaces(entry: dict) -> List[NormedSpace]:
    raw = entry.get("spaces", [entry["space"]] if "space" in entry else [])
    try:
        return [NormedSpace.from_json(s) for s in raw]
    except PolytorError as exc:
        raise ConfigError(f"check {entry['name']}: {exc}") from exc


def _as_list(v) -> list:
    return v if isinstance(v, list) else [v]


# ---------------------------------------------------------------------------
# instance generation


def _poly_instances(space, inst: dict, rng, tetrahedral=False, homogeneous=None) -> list:
    count = int(inst.get("count", 20))
    n_max, m_max = int(inst.get("n", 3)), int(inst.get("m", 2))
    m_min = int(inst.get("m_min", 0))
    homog = inst.get("homogeneous", "mixed") if homogeneous is None else homogeneous
    out = []
    for i in range(count):
        n = int(rng.integers(1, n_max + 1))
        top = min(m_max, n) if tetrahedral else m_max
        m = int(rng.integers(min(m_min, top), top + 1))
        h = bool(rng.integers(0, 2)) if homog == "mixed" else bool(homog)
        out.append(random_vpoly(space, n, m, rng, homogeneous=h, tetrahedral=tetrahedral,
                                max_terms=int(inst.get("max_terms", 8)), kind=corner_kind(i)))
    return out


def _walsh_instances(space, inst: dict, rng) -> list:
    count = int(inst.get("count", 20))
    n_max, m_max = int(inst.get("n", 6)), int(inst.get("m", 3))
    out = []
    for i in range(count):
        n = int(rng.integers(1, n_max + 1))
        m = int(rng.integers(0, min(m_max, n) + 1))
        out.append(random_walsh_poly(space, n, m, rng, homogeneous=bool(inst.get("homogeneous", False)),
                                     max_terms=int(inst.get("max_terms", 12)), kind=corner_kind(i)))
    return out


def _dirichlet_instances(space, inst: dict, rng) -> List[DirichletPoly]:
    count, N = int(inst.get("count", 20)), int(inst.get("N", 64))
    return [random_dirichlet(space, N, rng, int(inst.get("max_terms", 6)), corner_kind(i)) for i in range(count)]


def _vector_instances(space, inst: dict, rng) -> list:
    count, n = int(inst.get("count", 20)), int(inst.get("n", 3))
    return [degree_one_family(space, n, rng, corner_kind(i)) for i in range(count)]


# ---------------------------------------------------------------------------
# check kinds: (entry, space, seed, budget) -> (reports, constants)


def _exact(v: float, method: str = "exact") -> NormEstimate:
    return NormEstimate.exact(float(v), method)


def _count_report(name: str, mismatches: int, total: int, params: dict) -> InequalityReport:
    """Exact-equality bookkeeping: passes iff there are no mismatches."""
    return InequalityReport(name, _exact(mismatches, "count"), _exact(total, "count"), 0.0, 0,
                            digest_of({"name": name, **params}), {"checked": total, **params})


def _kind_bohr_roundtrip(entry, space, seed, budget) -> Outcome:
    inst = entry.get("instances", {})
    count, N = int(inst.get("count", 1000)), int(inst.get("N", 10**6))
    rng = rng_for(seed, 10)
    # pi(N): every n <= N factors over the primes up to N
    n_primes = prime_table(N).index(N + 1)
    bad_round, bad_omega, terms = 0, 0, 0
    for _ in range(count):
        k = int(rng.integers(1, 9))
        support = rng.choice(N, size=k, replace=False) + 1
        D = DirichletPoly({int(n): rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
                           for n in support}, space)
        P = bohr_lift(D, n_primes)
        if bohr_push(P) != D:
            bad_round += 1
        for a, _ in P:
            terms += 1
            if omega(monomial_integer(a)) != a.degree:
                bad_omega += 1
    return [_count_report("bohr_roundtrip", bad_round, count, {"N": N, "n_primes": n_primes}),
            _count_report("omega_degree", bad_omega, terms, {"N": N})], []


def _kind_hilbert_exactness(entry, space, seed, budget) -> Outcome:
    p = entry.get("params", {})
    m_max = int(p.get("m_max", 12))
    lo, hi = int(p.get("fit_from", 4)), int(p.get("fit_to", m_max))
    tol = float(p.get("fit_tolerance", 0.05))
    reports = []
    for m in range(m_max + 1):
        ident = hilbert_matrix(m) @ hilbert_inverse(m) == RationalMatrix.identity(m + 1)
        reports.append(_count_report("hilbert_identity", int(not ident), 1, {"m": m}))
        reports.append(_count_report("biorthogonality", len(biorthogonality_defect(m)), (m + 1) ** 2, {"m": m}))
    dev, slope = growth_fit_deviation(range(lo, hi + 1))
    reports.append(InequalityReport("hilbert_growth_fit", _exact(dev), _exact(tol), 1.0, 0,
                                    digest_of({"fit": [lo, hi]}), {"m_range": [lo, hi], "slope": slope}))
    return reports, []


def growth_fit_deviation(ms) -> Tuple[float, float]:
    """Max relative deviation of log max|a_ij| from its least-squares line in m, and the slope."""
    rows = hilbert_inverse_growth(list(ms))
    x = np.array([r[0] for r in rows], dtype=float)
    y = np.array([r[2] for r in rows])
    slope, icpt = np.polyfit(x, y, 1)
    fit = slope * x + icpt
    return float(np.max(np.abs(y - fit) / np.abs(y))), float(slope)


def _kind_projection_oracle(entry, space, seed, budget) -> Outcome:
    inst = entry.get("instances", {})
    count, n_max, m_max = int(inst.get("count", 200)), int(inst.get("n", 8)), int(inst.get("m", 8))
    rng = rng_for(seed, 11)
    bad = 0
    from ..projections import random_walsh

    for _ in range(count):
        n = int(rng.integers(1, n_max + 1))
        m = int(rng.integers(0, min(n, m_max) + 1))
        W = random_walsh(space, n, rng, max_degree=m, density=float(rng.uniform(0.2, 1.0)))
        for k in range(m + 1):
            if lemma3_projection(W, k, m) != walsh_homog_filter(W, k):
                bad += 1
    return [_count_report("projection_oracle", bad, count, {"n_max": n_max, "m_max": m_max})], []


def _kind_parseval_triangulation(entry, space, seed, budget) -> Outcome:
    inst = entry.get("instances", {})
    p = entry.get("params", {})
    grid_tol = float(p.get("grid_tolerance", 1e-9))
    samples = int(p.get("samples", budget.mc_samples))
    rng = rng_for(seed, 12)
    reports = []
    for i, P in enumerate(_poly_instances(space, inst, rng)):
        exact = l2_parseval(P)
        M = 2 * P.max_var_degree() + 1 + int(P.max_var_degree() == 0)
        grid = lq_norm_grid(P, 2, max(M, 2))
        mc = lq_norm_mc(P, 2, SamplerSpec(seed=int(rng_for(seed, 13, i).integers(2**63)), samples=samples))
        dg = C._digest(P)
        gap = abs(grid.value - exact.value)
        reports.append(InequalityReport("parseval_grid", _exact(gap), exact, grid_tol, P.degree(), dg,
                                        {"M": max(M, 2)}))
        # the true value must lie inside the Monte Carlo interval
        # a constant |P| gives a zero-width interval; allow roundoff there
        width = (mc.halfwidth or 0.0) + FLOAT_SLACK * exact.value
        reports.append(InequalityReport("parseval_mc", _exact(abs(mc.value - exact.value)),
                                        _exact(width, "ci_halfwidth"), 1.0, P.degree(), dg,
                                        {"samples": samples, "level": mc.level}))
    return reports, []


def _kind_combinatorics(entry, space, seed, budget) -> Outcome:
    p = entry.get("params", {})
    n_max, stir_max = int(p.get("n_max", 10)), int(p.get("stirling_max", 40))
    bad = total = 0
    for n in range(1, n_max + 1):
        for m in range(1, n + 1):
            for k in range(1, n + 1):
                lhs, rhs = combinatorial_identity_check(n, m, k)
                total += 1
                bad += lhs != rhs
    out = [_count_report("combinatorial_identity", bad, total, {"n_max": n_max})]
    lo = hi = None
    bad_s = total_s = 0
    for n in range(1, stir_max + 1):
        for k in range(1, n + 1):
            if n % k:
                continue
            m = n // k
            r = stirling_ratio_exact(n, m, k)
            total_s += 1
            lo = r if lo is None else min(lo, r)
            hi = r if hi is None else max(hi, r)
            bad_s += not (0.5 <= r <= 4)
    out.append(_count_report("stirling_ratio_bounds", bad_s, total_s,
                             {"n_max": stir_max, "min": float(lo), "max": float(hi)}))
    return out, []


def _kind_cotype_def(entry, space, seed, budget) -> Outcome:
    p = entry.get("params", {})
    inst = entry.get("instances", {})
    reports = []
    for q in _as_list(p.get("q", 2)):
        xs = _vector_instances(space, inst, rng_for(seed, 20))
        reports += C.check_cotype_def(space, float(q), int(inst.get("n", 3)), xs, p.get("constant"), budget, seed)
    return reports, []


def _kind_type_def(entry, space, seed, budget) -> Outcome:
    p = entry.get("params", {})
    inst = entry.get("instances", {})
    reports = []
    for pp in _as_list(p.get("p", 2)):
        xs = _vector_instances(space, inst, rng_for(seed, 21))
        reports += C.check_type_def(space, float(pp), int(inst.get("n", 3)), xs, p.get("constant"), budget, seed)
    return reports, []


def _kind_constants(entry, space, seed, budget) -> Outcome:
    p = entry.get("params", {})
    n, b = int(p.get("n", 2)), int(p.get("search_budget", 20))
    out = []
    for q in _as_list(p.get("q", [])):
        out.append(C.estimate_cotype_constant(space, float(q), n, b, seed, budget))
    for pp in _as_list(p.get("p", [])):
        out.append(C.estimate_type_constant(space, float(pp), n, b, seed, budget))
    return [], out


def _kind_hypercontractive(entry, space, seed, budget) -> Outcome:
    p = entry.get("params", {})
    inst = entry.get("instances", {})
    m = int(inst.get("m", 2))
    reports = []
    for q in _as_list(p.get("q", 2)):
        polys = _poly_instances(space, inst, rng_for(seed, 22))
        reports += C.check_hypercontractive_cotype(space, float(q), m, int(inst.get("n", 3)), polys,
                                                   p.get("C_hyp"), budget, seed)
    return reports, []


def _kind_cotawalsh(entry, space, seed, budget) -> Outcome:
    p = entry.get("params", {})
    inst = entry.get("instances", {})
    reports = []
    for q in _as_list(p.get("q", 2)):
        polys = _poly_instances(space, inst, rng_for(seed, 23), tetrahedral=True, homogeneous=True)
        reports += C.check_cotawalsh(space, float(q), polys, p.get("C_q"), budget, seed)
    return reports, []


def _kind_walsh_cotype(entry, space, seed, budget) -> Outcome:
    p = entry.get("params", {})
    reports = []
    for q in _as_list(p.get("q", 2)):
        W = _walsh_instances(space, entry.get("instances", {}), rng_for(seed, 24))
        reports += C.check_walsh_cotype(space, float(q), W, p.get("C_q"), budget, seed)
    return reports, []


def _kind_lemma1(entry, space, seed, budget) -> Outcome:
    p = entry.get("params", {})
    inst = entry.get("instances", {})
    polys = _poly_instances(space, inst, rng_for(seed, 25), tetrahedral=True)
    reports = []
    for q in _as_list(p.get("q", [1, 2, 4])):
        reports += C.check_lemma1_bridge(space, float(q), int(inst.get("m", 3)), int(inst.get("n", 4)), polys,
                                         budget, seed, int(p.get("sup_M", 16)))
    return reports, []


def _pairs(p) -> List[Tuple[float, float]]:
    return [(float(s), float(r)) for s, r in p.get("pairs", [[1, 2], [2, 4]])]


def _kahane_constant(name, reports) -> List[ConstantEstimate]:
    best = None
    for rep in reports:
        if rep.constant and rep.exponent_m > 0 and rep.rhs.value > 0:
            v = rep.ratio ** (1.0 / rep.exponent_m)
            if best is None or v > best[0]:
                best = (v, rep)
    if best is None:
        return []
    v, rep = best
    return [ConstantEstimate("empirical_kahane", v, "lower_bound", len(reports), 0,
                             {"instance_digest": rep.instance_digest}, {"check": name, **rep.params})]


def _kind_kahane(entry, space, seed, budget) -> Outcome:
    inst = dict(entry.get("instances", {}))
    polys = _poly_instances(space, inst, rng_for(seed, 26))
    reports = []
    for s, r in _pairs(entry.get("params", {})):
        reports += C.check_kahane(space, s, r, polys, budget, seed)
    return reports, _kahane_constant("kahane", reports)


def _kind_walsh_kahane(entry, space, seed, budget) -> Outcome:
    W = _walsh_instances(space, entry.get("instances", {}), rng_for(seed, 27))
    reports = []
    for s, r in _pairs(entry.get("params", {})):
        reports += C.check_walsh_kahane(space, s, r, W, budget, seed)
    return reports, _kahane_constant("walsh_kahane", reports)


def _kind_dirichlet_chain(entry, space, seed, budget) -> Outcome:
    """Cotype-side theorem, corollary for each delta, and the type side on one instance set."""
    p = entry.get("params", {})
    Ds = _dirichlet_instances(space, entry.get("instances", {}), rng_for(seed, 28))
    q, pn = float(p.get("q", 2)), float(p.get("p", 2))
    cal = C.calibrate_cotype_degrees(space, q, pn, Ds, budget, seed)
    reports = C.check_hy_dirichlet_cotype(space, q, pn, p.get("r"), Ds, budget, seed, cal)
    for delta in _as_list(p.get("delta", [])):
        reports += C.check_corollary_delta(space, q, pn, float(delta), Ds, p.get("r"), budget, seed, cal)
    if "type_p" in p:
        reports += C.check_hy_dirichlet_type(space, float(p["type_p"]), float(p.get("type_q", 2)), p.get("R"),
                                             Ds, budget, seed)
    return reports, []


def _kind_hy_dirichlet_type(entry, space, seed, budget) -> Outcome:
    p = entry.get("params", {})
    Ds = _dirichlet_instances(space, entry.get("instances", {}), rng_for(seed, 29))
    return C.check_hy_dirichlet_type(space, float(p.get("p", 2)), float(p.get("q", 2)), p.get("R"), Ds,
                                     budget, seed), []


def _kind_isenbeck(entry, space, seed, budget) -> Outcome:
    """Fixed rho if given; otherwise search the radius and re-verify at a fraction of it on fresh instances."""
    p = entry.get("params", {})
    inst = entry.get("instances", {})
    q = float(p.get("q", 2))
    polys = _poly_instances(space, inst, rng_for(seed, 30))
    if "rho" in p:
        return C.check_isenbeck(space, q, float(p["rho"]), polys, budget, seed), []
    est = C.isenbeck_radius(space, q, polys, budget, seed)
    holdout = _poly_instances(space, inst, rng_for(seed, 31))
    factor = float(p.get("holdout_factor", 0.9))
    rho = factor * est.value
    if rho <= 0:
        return [], [est]
    reports = C.check_isenbeck(space, q, rho, holdout, budget, seed + 1)
    for rep in reports:
        rep.name = rep.name.replace("isenbeck", "isenbeck_holdout")
        rep.params["searched_rho"] = est.value
    return reports, [est]


def _kind_plconvexity(entry, space, seed, budget) -> Outcome:
    p = entry.get("params", {})
    return [], [C.check_plconvexity(space, float(q), int(p.get("samples", 200)), seed)
                for q in _as_list(p.get("q", 2))]


def _kind_rademacher(entry, space, seed, budget) -> Outcome:
    """||P_m|| on L2(cube, X): asserted <= 1 for Hilbert X and for m = 0, recorded otherwise."""
    p = entry.get("params", {})
    n, trials = int(p.get("n", 4)), int(p.get("trials", 10))
    reports, consts = [], []
    for m in _as_list(p.get("m", [0, 1, 2])):
        val, W = rademacher_projection_search(space, n, int(m), trials, seed)
        bound = 1.0 if (space.is_hilbert or int(m) == 0) else None
        reports.append(InequalityReport("rademacher_projection", _exact(val, "search"), _exact(1.0), bound, int(m),
                                        C._digest(W), {"n": n, "m": int(m), "trials": trials}))
        consts.append(ConstantEstimate("rademacher_projection", val, "lower_bound", trials, seed, W.to_json(),
                                       {"n": n, "m": int(m)}))
    return reports, consts


CHECKS: Dict[str, Callable] = {
    "bohr_roundtrip": _kind_bohr_roundtrip,
    "hilbert_exactness": _kind_hilbert_exactness,
    "projection_oracle": _kind_projection_oracle,
    "parseval_triangulation": _kind_parseval_triangulation,
    "combinatorics": _kind_combinatorics,
    "cotype_def": _kind_cotype_def,
    "type_def": _kind_type_def,
    "constants": _kind_constants,
    "hypercontractive_cotype": _kind_hypercontractive,
    "cotawalsh": _kind_cotawalsh,
    "walsh_cotype": _kind_walsh_cotype,
    "lemma1_bridge": _kind_lemma1,
    "kahane": _kind_kahane,
    "walsh_kahane": _kind_walsh_kahane,
    "dirichlet_chain": _kind_dirichlet_chain,
    "hy_dirichlet_type": _kind_hy_dirichlet_type,
    "isenbeck": _kind_isenbeck,
    "plconvexity": _kind_plconvexity,
    "rademacher_projection": _kind_rademacher,
}

SPACELESS = {"hilbert_exactness", "combinatorics"}


# ---------------------------------------------------------------------------
# execution


def entry_seed(base: int, index: int, entry: dict) -> int:
    local = int(entry.get("seed", index))
    return int(np.random.SeedSequence([base & (2**64 - 1), local & (2**64 - 1)]).generate_state(1, np.uint64)[0] >> 1)


def run_entry(task) -> dict:
    """Run one config entry; picklable so it can go to a worker process."""
    entry, seed, budget_json = task
    budget = C.Budget.from_json(budget_json)
    kind = entry.get("kind", entry["name"])
    fn = CHECKS[kind]
    spaces = _spaces(entry) or ([NormedSpace.euclidean(1)] if kind in SPACELESS else [])
    if not spaces:
        raise ConfigError(f"check {entry['name']}: no space given")
    reports, consts = [], []
    for si, space in enumerate(spaces):
        r, c = fn(entry, space, seed + si, budget)
        for rep in r:
            rep.params.setdefault("space", space.describe())
        for ce in c:
            ce.params.setdefault("space", space.describe())
        reports += r
        consts += c
    reports.sort(key=lambda rep: (rep.name, rep.params.get("space", ""), rep.instance_digest,
                                  json.dumps(rep.params, sort_keys=True, default=str)))
    counts: Dict[str, int] = {}
    for rep in reports:
        counts[rep.status] = counts.get(rep.status, 0) + 1
    return {
        "name": entry["name"],
        "kind": kind,
        "seed": seed,
        "spaces": [s.to_json() for s in spaces],
        "params": entry.get("params", {}),
        "instances": entry.get("instances", {}),
        "status_counts": dict(sorted(counts.items())),
        "reports": [rep.to_json() for rep in reports],
        "constants": [ce.to_json() for ce in consts],
    }


def select(checks: List[dict], pattern: Optional[str]) -> List[Tuple[int, dict]]:
    indexed = list(enumerate(checks))
    if not pattern:
        return indexed
    return [(i, e) for i, e in indexed if fnmatch.fnmatchcase(e["name"], pattern)]


def execute(cfg: dict, seed: int, jobs: int = 1, filter_glob: Optional[str] = None) -> dict:
    """Run the selected checks; the returned payload is independent of ``jobs``."""
    validate_config(cfg)
    budget = C.Budget.from_json(cfg.get("budget"))
    chosen = select(cfg.get("checks", []), filter_glob)
    tasks = [(entry, entry_seed(seed, i, entry), budget.to_json()) for i, entry in chosen]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(tasks))) as pool:
            results = list(pool.map(run_entry, tasks))
    else:
        results = [run_entry(t) for t in tasks]
    return {"seed": seed, "budget": budget.to_json(), "filter": filter_glob, "checks": results}


def iter_reports(payload: dict):
    for check in payload["checks"]:
        for rep in check["reports"]:
            yield check, rep


def exit_code(payload: dict) -> int:
    return 1 if any(rep["status"] == FAIL for _, rep in iter_reports(payload)) else 0


def write_outputs(payload: dict, out_dir) -> Tuple[Path, Path, str]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    digest = digest_of(payload)
    bundle = {"digest": digest, "timestamp": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()), "payload": payload}
    res = out / "results.json"
    res.write_text(json.dumps(bundle, indent=1, sort_keys=True, default=str))
    summ = out / "summary.csv"
    cols = ["check", "name", "space", "lhs", "rhs", "constant", "margin", "pass", "status"]
    with summ.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=cols)
        w.writeheader()
        for check, rep in iter_reports(payload):
            w.writerow({
                "check": check["name"],
                "name": rep["name"],
                "space": rep["params"].get("space", ""),
                "lhs": repr(rep["lhs"]["value"]),
                "rhs": repr(rep["rhs"]["value"]),
                "constant": "" if rep["constant"] is None else rep["constant"],
                "margin": "" if rep["margin"] is None else rep["margin"],
                "pass": str(rep["pass"]).lower(),
                "status": rep["status"],
            })
    return res, summ, digest


def run_experiment(config, seed_override: Optional[int] = None, jobs: int = 1, filter_glob: Optional[str] = None,
                   out_dir=None) -> Tuple[int, dict, str]:
    """Load (if given a path), run, optionally write outputs. Returns (exit code, payload, digest)."""
    cfg = load_config(config) if isinstance(config, (str, Path)) else config
    seed = resolve_seed(cfg, seed_override)
    payload = execute(cfg, seed, jobs, filter_glob)
    if out_dir is not None:
        _, _, digest = write_outputs(payload, out_dir)
    else:
        digest = digest_of(payload)
    return exit_code(payload), payload, digest


def bundled_config_path() -> Path:
    return Path(__file__).resolve().parent.parent / "configs" / "acceptance.json"
