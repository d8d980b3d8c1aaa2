"""Falsifiable inequality checks.

Each ``check_*`` function evaluates one inequality on a list of instances and
returns :class:`InequalityReport` objects. Constants the underlying theorems
leave implicit are either taken from a provable bound (distance of the space
to Hilbert space) or measured on the instance set first and then fed into
the full chain of estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..errors import DomainError
from ..norms import (
    INF,
    NormEstimate,
    SamplerSpec,
    coefficient_lq,
    cube_lq,
    default_grid_points,
    l2_parseval,
    lq_norm_grid,
    lq_norm_mc,
    sup_grid,
)
from ..poly import (
    DirichletPoly,
    MultiIndex,
    VPoly,
    WalshPoly,
    bohr_lift,
    bohr_push,
    homogeneous_part,
    omega,
    prime_table,
    walsh_to_tetra,
)
from ..projections import hilbert_inverse
from ..spaces import NormedSpace, conjugate_exponent, hilbert_distance_bound
from .instances import degree_one_family, rng_for
from .reports import ConstantEstimate, InequalityReport, digest_of, skipped

SQRT2P1 = 1.0 + math.sqrt(2.0)


@dataclass(frozen=True)
class Budget:
    """Evaluation limits for torus and cube norms."""

    grid_points: int = 2**19
    min_grid: int = 24
    mc_samples: int = 20000
    cube_vars: int = 16

    @classmethod
    def from_json(cls, d: Optional[dict]) -> "Budget":
        d = d or {}
        known = {k: int(v) for k, v in d.items() if k in cls.__dataclass_fields__}
        return cls(**known)

    def to_json(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


DEFAULT_BUDGET = Budget()


# ---------------------------------------------------------------------------
# estimator selection


def torus_norm(P: VPoly, q: float, budget: Budget = DEFAULT_BUDGET, seed: int = 0) -> NormEstimate:
    """L_q(T^n, X) norm by the most trustworthy estimator the budget allows.

    Parseval for q = 2 in Hilbert spaces, an exact roots-of-unity grid for
    other even q in Hilbert spaces, a fine grid otherwise, Monte Carlo when no
    adequate grid fits.
    """
    if P.is_zero():
        return NormEstimate.exact(0.0, "zero")
    if q == 2 and P.space.is_hilbert:
        return l2_parseval(P)
    n = len(P.active_vars())
    deg = max(1, P.max_var_degree())
    exact_M = default_grid_points(P, q)
    hilbert_even = P.space.is_hilbert and float(q).is_integer() and int(q) % 2 == 0
    wanted = exact_M if hilbert_even else max(budget.min_grid, exact_M)
    if n == 0 or wanted**n <= budget.grid_points:
        return lq_norm_grid(P, q, wanted)
    fit = int(math.floor(budget.grid_points ** (1.0 / n) + 1e-9))
    if not hilbert_even and fit >= max(8, 2 * deg + 1):
        return lq_norm_grid(P, q, fit)
    return lq_norm_mc(P, q, SamplerSpec(seed=seed, samples=budget.mc_samples))


def cube_norm(W, q: float, budget: Budget = DEFAULT_BUDGET, seed: int = 0) -> NormEstimate:
    P = walsh_to_tetra(W) if isinstance(W, WalshPoly) else W
    if len(P.active_vars()) > budget.cube_vars:
        from ..norms import cube_lq_mc

        return cube_lq_mc(P, q, SamplerSpec(seed=seed, samples=budget.mc_samples))
    return cube_lq(P, q)


def degree_one_poly(space: NormedSpace, xs: np.ndarray) -> VPoly:
    """sum_n x_n z_n written with z_1 = 1.

    The substitution z -> z * conj(z_1) preserves Haar measure, so the L_q
    norm is unchanged and one integration variable is saved.
    """
    xs = np.asarray(xs, dtype=complex)
    n = len(xs)
    terms = {MultiIndex(max(n - 1, 1)): xs[0]}
    for i in range(1, n):
        terms[MultiIndex(n - 1, [(i - 1, 1)])] = xs[i]
    return VPoly(max(n - 1, 1), terms, space)


def degree_one_full(space: NormedSpace, xs: np.ndarray) -> VPoly:
    xs = np.asarray(xs, dtype=complex)
    n = len(xs)
    return VPoly(n, {MultiIndex(n, [(i, 1)]): xs[i] for i in range(n)}, space)


def _digest(obj) -> str:
    if isinstance(obj, np.ndarray):
        return digest_of([[complex(c).real, complex(c).imag] for c in obj.ravel()] + [list(obj.shape)])
    return digest_of(obj.to_json())


# ---------------------------------------------------------------------------
# constants appearing in the theorem chain


def lemma3_envelope(m: int) -> float:
    """Measured B with (m'+1) * max|a_ij^(m')| <= B^m' for all 1 <= m' <= max(m, 1)."""
    best = 2.0
    for k in range(1, max(1, m) + 1):
        best = max(best, ((k + 1) * float(hilbert_inverse(k).max_abs())) ** (1.0 / k))
    return best


def cotype_bound(space: NormedSpace) -> float:
    """Provable upper bound for C_q(X), q >= 2 (and for T_p(X), p <= 2)."""
    return hilbert_distance_bound(space)


# ---------------------------------------------------------------------------
# cotype / type definitions


def check_cotype_def(space: NormedSpace, q: float, n: int, instances: Sequence[np.ndarray],
                     constant: Optional[float] = None, budget: Budget = DEFAULT_BUDGET,
                     seed: int = 0) -> List[InequalityReport]:
    """(sum ||x_n||^q)^(1/q) <= C (int ||sum x_n z_n||^q)^(1/q)."""
    if q < 2:
        raise DomainError(f"cotype needs q >= 2, got {q}")
    C = cotype_bound(space) if constant is None else constant
    out = []
    for i, xs in enumerate(instances):
        xs = space.check(xs)
        lhs = NormEstimate.exact(coefficient_lq(space.norms(xs), q), "coefficients")
        rhs = torus_norm(degree_one_poly(space, xs), q, budget, seed + i)
        out.append(InequalityReport("cotype_def", lhs, rhs, C, 1, _digest(xs), {"q": q, "n": len(xs)}))
    return out


def check_type_def(space: NormedSpace, p: float, n: int, instances: Sequence[np.ndarray],
                   constant: Optional[float] = None, budget: Budget = DEFAULT_BUDGET,
                   seed: int = 0) -> List[InequalityReport]:
    """(int ||sum x_n z_n||^p)^(1/p) <= T (sum ||x_n||^p)^(1/p)."""
    if not 1 <= p <= 2:
        raise DomainError(f"type needs 1 <= p <= 2, got {p}")
    T = cotype_bound(space) if constant is None else constant
    out = []
    for i, xs in enumerate(instances):
        xs = space.check(xs)
        lhs = torus_norm(degree_one_poly(space, xs), p, budget, seed + i)
        rhs = NormEstimate.exact(coefficient_lq(space.norms(xs), p), "coefficients")
        out.append(InequalityReport("type_def", lhs, rhs, T, 1, _digest(xs), {"p": p, "n": len(xs)}))
    return out


def _cotype_ratio(space, xs, q, budget):
    den = torus_norm(degree_one_poly(space, xs), q, budget).value
    num = coefficient_lq(space.norms(xs), q)
    return num / den if den > 0 else 0.0


def _type_ratio(space, xs, p, budget):
    den = coefficient_lq(space.norms(xs), p)
    num = torus_norm(degree_one_poly(space, xs), p, budget).value
    return num / den if den > 0 else 0.0


def _estimate_constant(kind: str, space: NormedSpace, exponent: float, n: int, budget: int, seed: int,
                       norm_budget: Budget, sweeps: int = 6) -> ConstantEstimate:
    ratio = _cotype_ratio if kind == "cotype" else _type_ratio
    rng = rng_for(seed, 0)
    kinds = ["basis", "equal", "single", "signs"]
    best, witness = -1.0, None
    for t in range(max(1, budget)):
        xs = degree_one_family(space, n, rng, kinds[t] if t < len(kinds) else "gaussian")
        r = ratio(space, xs, exponent, norm_budget)
        if r > best:
            best, witness = r, xs
    # coordinate ascent around the best start
    step = 0.5
    for _ in range(sweeps):
        improved = False
        for i in range(n):
            trial = witness.copy()
            scale = max(float(np.abs(witness).max()), 1e-12)
            trial[i] = trial[i] + step * scale * (rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim))
            r = ratio(space, trial, exponent, norm_budget)
            if r > best:
                best, witness, improved = r, trial, True
        if not improved:
            step *= 0.5
    name = "cotype C_q" if kind == "cotype" else "type T_p"
    key = "q" if kind == "cotype" else "p"
    return ConstantEstimate(
        name,
        best,
        "lower_bound",
        budget,
        seed,
        {"vectors": [[[c.real, c.imag] for c in row] for row in witness]},
        {key: exponent, "n": n, "space": space.to_json()},
    )


def estimate_cotype_constant(space: NormedSpace, q: float, n: int, budget: int = 20, seed: int = 0,
                             norm_budget: Budget = DEFAULT_BUDGET) -> ConstantEstimate:
    """Lower bound for C_q(X) from random search plus coordinate ascent."""
    if q < 2:
        raise DomainError(f"cotype needs q >= 2, got {q}")
    if budget < 1:
        raise DomainError("search budget must be >= 1")
    return _estimate_constant("cotype", space, q, n, budget, seed, norm_budget)


def estimate_type_constant(space: NormedSpace, p: float, n: int, budget: int = 20, seed: int = 0,
                           norm_budget: Budget = DEFAULT_BUDGET) -> ConstantEstimate:
    """Lower bound for T_p(X) from random search plus coordinate ascent."""
    if not 1 <= p <= 2:
        raise DomainError(f"type needs 1 <= p <= 2, got {p}")
    if budget < 1:
        raise DomainError("search budget must be >= 1")
    return _estimate_constant("type", space, p, n, budget, seed, norm_budget)


# ---------------------------------------------------------------------------
# polynomial cotype


def hypercontractive_constant(space: NormedSpace, q: float, m: int, cq: Optional[float] = None) -> float:
    """20 * B * C_q, the per-degree constant of the Walsh/torus chain."""
    cq = cotype_bound(space) if cq is None else cq
    return 20.0 * lemma3_envelope(m) * cq


def check_hypercontractive_cotype(space: NormedSpace, q: float, m: int, n: int, instances: Sequence[VPoly],
                                  C_hyp: Optional[float] = None, budget: Budget = DEFAULT_BUDGET,
                                  seed: int = 0) -> List[InequalityReport]:
    """(sum_{|a|<=m} ||x_a||^q)^(1/q) <= C_hyp^deg * ||P||_{L_q(T^n)}."""
    C = hypercontractive_constant(space, q, m) if C_hyp is None else C_hyp
    out = []
    for i, P in enumerate(instances):
        d = P.degree()
        lhs = NormEstimate.exact(coefficient_lq(P.coefficient_norms(), q), "coefficients")
        rhs = torus_norm(P, q, budget, seed + i)
        out.append(InequalityReport("hypercontractive_cotype", lhs, rhs, C**d, d, _digest(P),
                                    {"q": q, "C_hyp": C, "homogeneous": P.is_homogeneous()}))
    return out


def check_cotawalsh(space: NormedSpace, q: float, instances: Sequence[VPoly], cq: Optional[float] = None,
                    budget: Budget = DEFAULT_BUDGET, seed: int = 0) -> List[InequalityReport]:
    """Tetrahedral m-homogeneous case with constant (4^(1/q) C_q)^m."""
    cq = cotype_bound(space) if cq is None else cq
    base = 4.0 ** (1.0 / q) * cq
    out = []
    for i, P in enumerate(instances):
        if not P.is_homogeneous() or any(not a.is_tetrahedral() for a in P.terms):
            out.append(skipped("cotawalsh", "instance is not tetrahedral and homogeneous", _digest(P)))
            continue
        m = P.degree()
        lhs = NormEstimate.exact(coefficient_lq(P.coefficient_norms(), q), "coefficients")
        rhs = torus_norm(P, q, budget, seed + i)
        out.append(InequalityReport("cotawalsh", lhs, rhs, base**m, m, _digest(P), {"q": q, "C_q": cq}))
    return out


def check_walsh_cotype(space: NormedSpace, q: float, instances: Sequence[WalshPoly], cq: Optional[float] = None,
                       budget: Budget = DEFAULT_BUDGET, seed: int = 0) -> List[InequalityReport]:
    """(sum ||x_A||^q)^(1/q) <= (20 B C_q)^m (E ||sum x_A eps_A||^q)^(1/q)."""
    out = []
    for i, W in enumerate(instances):
        m = W.degree()
        C = hypercontractive_constant(space, q, m, cq)
        lhs = NormEstimate.exact(coefficient_lq(space.norms(np.stack([x for _, x in W])) if len(W) else [], q),
                                 "coefficients")
        rhs = cube_norm(W, q, budget, seed + i)
        out.append(InequalityReport("walsh_cotype", lhs, rhs, C**m, m, _digest(W), {"q": q, "C": C}))
    return out


# ---------------------------------------------------------------------------
# torus / cube bridge


def check_lemma1_bridge(space: NormedSpace, q: float, m: int, n: int, instances: Sequence[VPoly],
                        budget: Budget = DEFAULT_BUDGET, seed: int = 0, sup_M: int = 16) -> List[InequalityReport]:
    """Both sides of the torus/cube equivalence for tetrahedral polynomials,
    and the scalar sup-norm comparison coordinate by coordinate."""
    out = []
    for i, P in enumerate(instances):
        dg = _digest(P)
        if any(not a.is_tetrahedral() for a in P.terms):
            out.append(skipped("lemma1_upper", "instance is not tetrahedral", dg))
            continue
        d = P.degree()
        c = SQRT2P1**d
        torus = torus_norm(P, q, budget, seed + i)
        cube = cube_norm(P, q, budget, seed + i)
        params = {"q": q, "degree": d}
        out.append(InequalityReport("lemma1_upper", torus, cube, c, d, dg, params))
        out.append(InequalityReport("lemma1_lower", cube, torus, c, d, dg, params))
        if sup_M ** len(P.active_vars()) <= budget.grid_points:
            for coord in range(space.dim):
                Q = VPoly(P.n_vars, {a: x[coord : coord + 1] for a, x in P.terms.items()}, NormedSpace.euclidean(1))
                if Q.is_zero():
                    continue
                st = sup_grid(Q, sup_M, "torus")
                # Q is affine in each variable, so |Q| is separately convex and
                # its max over [-1,1]^n sits on a vertex: the cube max is exact
                sc = sup_grid(Q, 0, "cube")
                sp = {"coordinate": coord, "M": sup_M, "degree": d}
                out.append(InequalityReport("lemma1_sup_upper", st, sc, c, d, dg, sp))
                # even M puts {-1,1}^n inside the torus grid
                out.append(InequalityReport("lemma1_sup_lower", sc, st, 1.0, d, dg, sp))
    return out


# ---------------------------------------------------------------------------
# Kahane-type moment comparisons


def check_kahane(space: NormedSpace, s: float, r: float, instances: Sequence[VPoly], budget: Budget = DEFAULT_BUDGET,
                 seed: int = 0) -> List[InequalityReport]:
    """||P||_r <= (r/s)^(m/2) ||P||_s for m-homogeneous P; ratios of
    non-homogeneous instances are only recorded."""
    if not 1 <= s <= r:
        raise DomainError(f"need 1 <= s <= r, got s={s}, r={r}")
    out = []
    for i, P in enumerate(instances):
        m = P.degree()
        lhs = torus_norm(P, r, budget, seed + i)
        rhs = torus_norm(P, s, budget, seed + i + 7919)
        if P.is_homogeneous():
            out.append(InequalityReport("kahane", lhs, rhs, (r / s) ** (m / 2), m, _digest(P), {"s": s, "r": r}))
        else:
            out.append(InequalityReport("kahane_nonhomogeneous", lhs, rhs, None, m, _digest(P), {"s": s, "r": r}))
    return out


def check_walsh_kahane(space: NormedSpace, s: float, r: float, instances: Sequence[WalshPoly],
                       budget: Budget = DEFAULT_BUDGET, seed: int = 0) -> List[InequalityReport]:
    """Cube moments: ||W||_r <= ((1+sqrt2) sqrt(r/s))^m ||W||_s for degree <= m."""
    if not 1 <= s <= r:
        raise DomainError(f"need 1 <= s <= r, got s={s}, r={r}")
    out = []
    for i, W in enumerate(instances):
        m = W.degree()
        lhs = cube_norm(W, r, budget, seed + i)
        rhs = cube_norm(W, s, budget, seed + i + 7919)
        c = (SQRT2P1 * math.sqrt(r / s)) ** m
        out.append(InequalityReport("walsh_kahane", lhs, rhs, c, m, _digest(W), {"s": s, "r": r}))
    return out


# ---------------------------------------------------------------------------
# Dirichlet series


def minimal_lift(D: DirichletPoly) -> VPoly:
    """Bohr lift using just enough primes for the support of D."""
    table = prime_table()
    top = 0
    for n in D.terms:
        for p in table.factor(n):
            top = max(top, table.index(p) + 1)
    return bohr_lift(D, max(top, 1))


def _degrees(P: VPoly) -> List[int]:
    return sorted({a.degree for a in P.terms})


@dataclass
class DirichletCalibration:
    """Per-degree constants measured on an instance set, with the norms used."""

    c: float
    lifts: List[VPoly]
    full: List[NormEstimate]
    parts: List[Dict[int, Tuple[float, NormEstimate]]]


def calibrate_cotype_degrees(space: NormedSpace, q: float, p: float, instances: Sequence[DirichletPoly],
                             budget: Budget = DEFAULT_BUDGET, seed: int = 0) -> DirichletCalibration:
    """c = max over instances and degrees m >= 1 of (||coef of f_m||_q / ||f_m||_p)^(1/m), at least 1."""
    c = 1.0
    lifts, full, parts = [], [], []
    for i, D in enumerate(instances):
        P = minimal_lift(D)
        lifts.append(P)
        full.append(torus_norm(P, p, budget, seed + i))
        per = {}
        for m in _degrees(P):
            Pm = homogeneous_part(P, m)
            coef = coefficient_lq(Pm.coefficient_norms(), q)
            nm = torus_norm(Pm, p, budget, seed + i)
            per[m] = (coef, nm)
            if m >= 1 and nm.value > 0:
                c = max(c, (coef / nm.value) ** (1.0 / m))
        parts.append(per)
    return DirichletCalibration(c, lifts, full, parts)


def ponzio_constants(c: float, q: float, r: Optional[float] = None) -> Tuple[float, float]:
    """(r, C) with r c^q < 1 and C = (sum_m (r c^q)^m)^(1/q)."""
    if r is None:
        r = 0.5 / c**q
    x = r * c**q
    if not 0 < r < 1 or x >= 1:
        raise DomainError(f"r = {r} does not satisfy 0 < r < 1/c^q with c = {c}")
    return r, (1.0 / (1.0 - x)) ** (1.0 / q)


def weighted_omega_sum(D: DirichletPoly, q: float, r: float) -> float:
    """(sum r^Omega(n) ||a_n||^q)^(1/q)."""
    if not D.terms:
        return 0.0
    ns = sorted(D.terms)
    norms = D.space.norms(np.stack([D.terms[n] for n in ns]))
    return coefficient_lq(norms, q, [r ** omega(n) for n in ns])


def weighted_power_sum(D: DirichletPoly, q: float, delta: float) -> float:
    """(sum ||a_n||^q / n^delta)^(1/q)."""
    if not D.terms:
        return 0.0
    ns = sorted(D.terms)
    norms = D.space.norms(np.stack([D.terms[n] for n in ns]))
    return coefficient_lq(norms, q, [float(n) ** (-delta) for n in ns])


def check_hy_dirichlet_cotype(space: NormedSpace, q: float, p: float, r: Optional[float],
                              D_instances: Sequence[DirichletPoly], budget: Budget = DEFAULT_BUDGET,
                              seed: int = 0, calibration: Optional[DirichletCalibration] = None
                              ) -> List[InequalityReport]:
    """(sum r^Omega(n) ||a_n||^q)^(1/q) <= C ||D||_{H_p(X)} with c measured per degree.

    Also reports the contraction ||f_m||_p <= ||f||_p that the chain relies on.
    """
    cal = calibration or calibrate_cotype_degrees(space, q, p, D_instances, budget, seed)
    r, C = ponzio_constants(cal.c, q, r)
    out = []
    for D, P, full, per in zip(D_instances, cal.lifts, cal.full, cal.parts):
        dg = _digest(D)
        lhs = NormEstimate.exact(weighted_omega_sum(D, q, r), "weighted_coefficients")
        params = {"q": q, "p": p, "r": r, "c": cal.c}
        out.append(InequalityReport("hy_dirichlet_cotype", lhs, full, C, P.degree(), dg, params))
        if len(per) > 1:
            for m, (_, nm) in per.items():
                out.append(InequalityReport("homogeneous_contraction", nm, full, 1.0, m, dg, {"p": p, "m": m}))
    return out


def split_primes(delta: float, r: float) -> List[int]:
    """Primes p_j with p_j^(-delta) > r, i.e. those the weight r^Omega cannot absorb."""
    table = prime_table()
    out = []
    j = 0
    while True:
        pj = table.prime(j)
        if pj ** (-delta) <= r:
            return out
        out.append(pj)
        j += 1


def corollary_constant(C: float, q: float, delta: float, r: float) -> float:
    """C * (prod over split primes of 1/(1 - p^-delta))^(1/q)."""
    prod = 1.0
    for pj in split_primes(delta, r):
        prod /= 1.0 - pj ** (-delta)
    return C * prod ** (1.0 / q)


def holder_chain(D: DirichletPoly, q: float, delta: float) -> Tuple[float, float, float]:
    """(sum ||a_n|| n^-sigma, (sum ||a_n||^q n^-delta)^(1/q), (sum n^-(delta+1))^(1/q'))
    with sigma = delta + 1/q'; the sums run over the support of D."""
    qp = conjugate_exponent(q)
    sigma = delta + 1.0 / qp
    if not D.terms:
        return 0.0, 0.0, 0.0
    ns = sorted(D.terms)
    norms = D.space.norms(np.stack([D.terms[n] for n in ns]))
    left = float(sum(a * float(n) ** (-sigma) for a, n in zip(norms, ns)))
    mid = weighted_power_sum(D, q, delta)
    tail = coefficient_lq(np.ones(len(ns)), qp, [float(n) ** (-(delta + 1)) for n in ns])
    return left, mid, tail


def zeta(s: float) -> float:
    from scipy.special import zeta as _zeta

    return float(_zeta(s, 1))


def check_corollary_delta(space: NormedSpace, q: float, p: float, delta: float, D_instances: Sequence[DirichletPoly],
                          r: Optional[float] = None, budget: Budget = DEFAULT_BUDGET, seed: int = 0,
                          calibration: Optional[DirichletCalibration] = None) -> List[InequalityReport]:
    """n^-delta weights, the Hoelder cross-check and the sigma = delta + 1/q' l1 bound."""
    if delta <= 0:
        raise DomainError(f"delta must be positive, got {delta}")
    cal = calibration or calibrate_cotype_degrees(space, q, p, D_instances, budget, seed)
    r, C = ponzio_constants(cal.c, q, r)
    Cd = corollary_constant(C, q, delta, r)
    qp = conjugate_exponent(q)
    zeta_factor = zeta(delta + 1.0) ** (1.0 / qp)
    out = []
    for D, P, full in zip(D_instances, cal.lifts, cal.full):
        dg = _digest(D)
        params = {"q": q, "p": p, "delta": delta, "r": r, "c": cal.c, "split_primes": split_primes(delta, r)}
        lhs = NormEstimate.exact(weighted_power_sum(D, q, delta), "weighted_coefficients")
        out.append(InequalityReport("corollary_delta", lhs, full, Cd, P.degree(), dg, params))
        left, mid, tail = holder_chain(D, q, delta)
        hp = {"q": q, "delta": delta, "sigma": delta + 1.0 / qp}
        out.append(InequalityReport("holder_chain", NormEstimate.exact(left, "l1_weighted"),
                                    NormEstimate.exact(mid, "weighted_coefficients"), tail, 0, dg, hp))
        out.append(InequalityReport("fractalosa", NormEstimate.exact(left, "l1_weighted"), full,
                                    zeta_factor * Cd, P.degree(), dg, hp))
    return out


def calibrate_type_degrees(space: NormedSpace, p: float, q_out: float, instances: Sequence[DirichletPoly],
                           budget: Budget = DEFAULT_BUDGET, seed: int = 0) -> DirichletCalibration:
    """t = max over instances, m >= 1 of (||f_m||_{q_out} / ||coef of f_m||_p)^(1/m), at least 1."""
    t = 1.0
    lifts, full, parts = [], [], []
    for i, D in enumerate(instances):
        P = minimal_lift(D)
        lifts.append(P)
        full.append(torus_norm(P, q_out, budget, seed + i))
        per = {}
        for m in _degrees(P):
            Pm = homogeneous_part(P, m)
            coef = coefficient_lq(Pm.coefficient_norms(), p)
            nm = torus_norm(Pm, q_out, budget, seed + i)
            per[m] = (coef, nm)
            if m >= 1 and coef > 0:
                t = max(t, ((nm.value + nm.err) / coef) ** (1.0 / m))
        parts.append(per)
    return DirichletCalibration(t, lifts, full, parts)


def maidana_constants(t: float, p: float, R: Optional[float] = None) -> Tuple[float, float]:
    """(R, C) with t R^(-1/p) < 1 and C = ||(t R^(-1/p))^m||_{l_p'}."""
    if R is None:
        R = (2.0 * t) ** p
    x = t * R ** (-1.0 / p)
    if R < 1 or x >= 1:
        raise DomainError(f"R = {R} does not satisfy R >= 1 and R > t^p with t = {t}")
    pp = conjugate_exponent(p)
    if pp == INF:
        return R, 1.0
    return R, (1.0 / (1.0 - x**pp)) ** (1.0 / pp)


def check_hy_dirichlet_type(space: NormedSpace, p: float, q_out: float, R: Optional[float],
                            D_instances: Sequence[DirichletPoly], budget: Budget = DEFAULT_BUDGET,
                            seed: int = 0) -> List[InequalityReport]:
    """||D||_{H_q(X)} <= C (sum R^Omega(n) ||a_n||^p)^(1/p).

    Mirrors the cotype construction: per-degree type constants are measured,
    then the triangle inequality over degrees and Hoelder close the chain.
    """
    if not 1 <= p <= 2:
        raise DomainError(f"type needs 1 <= p <= 2, got {p}")
    cal = calibrate_type_degrees(space, p, q_out, D_instances, budget, seed)
    R, C = maidana_constants(cal.c, p, R)
    out = []
    for D, P, full in zip(D_instances, cal.lifts, cal.full):
        rhs = NormEstimate.exact(weighted_omega_sum(D, p, R), "weighted_coefficients")
        params = {"p": p, "q": q_out, "R": R, "t": cal.c, "mirrors": "cotype construction"}
        out.append(InequalityReport("hy_dirichlet_type", full, rhs, C, P.degree(), _digest(D), params))
    return out


# ---------------------------------------------------------------------------
# uniform PL-convexity and Bohr radius


def circle_moment(space: NormedSpace, x, y, q: float, M: int = 512) -> float:
    """int_T ||x + z y||^q dz on M roots of unity."""
    z = np.exp(2j * np.pi * np.arange(M) / M)
    vals = space.norms(np.asarray(x)[None, :] + z[:, None] * np.asarray(y)[None, :])
    return float(np.mean(vals**q))


def check_plconvexity(space: NormedSpace, q: float, samples: int = 200, seed: int = 0,
                      M: int = 512) -> ConstantEstimate:
    """Smallest sampled (int ||x+zy||^q - ||x||^q) / ||y||^q: an upper bound for lambda."""
    rng = rng_for(seed, 1)
    best, witness = math.inf, None
    for s in range(max(1, samples)):
        x = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
        y = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
        y *= 10.0 ** rng.uniform(-1.5, 0.5)
        ny = space.norm(y)
        if ny == 0:
            continue
        lam = (circle_moment(space, x, y, q, M) - space.norm(x) ** q) / ny**q
        if lam < best:
            best, witness = lam, (x, y)
    x, y = witness
    return ConstantEstimate("plconvex_lambda", best, "upper_witness", samples, seed,
                            {"x": [[c.real, c.imag] for c in x], "y": [[c.real, c.imag] for c in y]},
                            {"q": q, "M": M, "space": space.to_json()})


def isenbeck_lhs(P: VPoly, q: float, rho: float) -> float:
    """(sum ||x_a||^q rho^(|a| q))^(1/q)."""
    items = list(P)
    if not items:
        return 0.0
    norms = P.space.norms(np.stack([x for _, x in items]))
    return coefficient_lq(norms, q, [rho ** (a.degree * q) for a, _ in items])


def check_isenbeck(space: NormedSpace, q: float, rho: float, instances: Sequence[VPoly],
                   budget: Budget = DEFAULT_BUDGET, seed: int = 0, sup_M: int = 16) -> List[InequalityReport]:
    """Weighted Bohr-radius inequality on the torus and its Dirichlet form."""
    if not 0 < rho <= 1:
        raise DomainError(f"rho must lie in (0, 1], got {rho}")
    out = []
    for i, P in enumerate(instances):
        dg = _digest(P)
        rhs = torus_norm(P, q, budget, seed + i)
        lhs = NormEstimate.exact(isenbeck_lhs(P, q, rho), "weighted_coefficients")
        out.append(InequalityReport("isenbeck", lhs, rhs, 1.0, P.degree(), dg, {"q": q, "rho": rho}))
        D = bohr_push(P)
        dl = NormEstimate.exact(weighted_omega_sum(D, q, rho**q), "weighted_dirichlet")
        out.append(InequalityReport("isenbeck_dirichlet", dl, rhs, 1.0, P.degree(), dg, {"q": q, "rho": rho}))
        n = len(P.active_vars())
        if n and sup_M**n <= budget.grid_points:
            grid_q = lq_norm_grid(P, q, sup_M)
            top = sup_grid(P, sup_M, "torus")
            out.append(InequalityReport("hq_below_hinf", grid_q, top, 1.0, P.degree(), dg, {"q": q, "M": sup_M}))
    return out


def _largest_rho(P: VPoly, q: float, rhs: float, tol: float = 1e-10) -> float:
    if isenbeck_lhs(P, q, 1.0) <= rhs:
        return 1.0
    lo, hi = 0.0, 1.0
    if isenbeck_lhs(P, q, 0.0) > rhs:
        return 0.0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if isenbeck_lhs(P, q, mid) <= rhs:
            lo = mid
        else:
            hi = mid
    return lo


def isenbeck_radius(space: NormedSpace, q: float, instances: Sequence[VPoly], budget: Budget = DEFAULT_BUDGET,
                    seed: int = 0) -> ConstantEstimate:
    """Largest rho surviving every instance (an upper bound for the true radius)."""
    best, witness = 1.0, None
    for i, P in enumerate(instances):
        rho = _largest_rho(P, q, torus_norm(P, q, budget, seed + i).value)
        if rho < best or witness is None:
            best, witness = min(best, rho), P
    return ConstantEstimate("bohr_rho", best, "upper_witness", len(instances), seed,
                            witness.to_json() if witness is not None else None, {"q": q, "space": space.to_json()})
