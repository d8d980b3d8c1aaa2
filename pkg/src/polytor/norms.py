"""Norm and expectation estimators for vector-valued polynomials.

Torus integrals use tensor grids of M-th roots of unity (evaluated with an
inverse FFT) or Monte Carlo; Boolean-cube expectations use exact enumeration
through a fast Walsh-Hadamard transform. Every result is a :class:`NormEstimate`
that says how it was obtained and how far it can be trusted.

Only the variables a polynomial actually uses are integrated over; the
remaining coordinates do not change the integrand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from statistics import NormalDist
from typing import Iterator, Optional, Sequence, Union

import numpy as np

from .errors import BudgetExceeded, DimensionMismatch, DomainError
from .poly import VPoly, WalshPoly, walsh_to_tetra
from .spaces import INF

GRID_BUDGET = 10**8
CUBE_MAX_VARS = 24
CI_LEVEL = 0.99
# complex entries materialised at once by the grid/cube evaluators
_CHUNK = 1 << 21


@dataclass(frozen=True)
class SamplerSpec:
    seed: int = 0
    samples: int = 20000
    grid_points: int = 16

    def __post_init__(self):
        if self.samples < 1 or self.grid_points < 1:
            raise DomainError("samples and grid_points must be positive")


@dataclass(frozen=True)
class NormEstimate:
    """A nonnegative norm value with provenance.

    ``error`` is ``"exact"``, ``"ci"`` (with ``halfwidth`` at ``level``) or
    ``"grid_gap_unknown"``.
    """

    value: float
    method: str
    params: dict = field(default_factory=dict)
    error: str = "exact"
    halfwidth: float = 0.0
    level: Optional[float] = None

    def __post_init__(self):
        if not self.value >= 0:
            raise DomainError(f"norm estimate must be nonnegative, got {self.value}")
        if self.error == "exact" and self.halfwidth != 0:
            raise DomainError("exact estimates carry no halfwidth")

    @property
    def err(self) -> float:
        """Numeric error bar used when combining estimates (0 unless a CI)."""
        return self.halfwidth if self.error == "ci" else 0.0

    def scaled(self, c: float) -> "NormEstimate":
        return NormEstimate(self.value * c, self.method, self.params, self.error, self.halfwidth * c, self.level)

    def to_json(self) -> dict:
        d = {"value": self.value, "method": self.method, "params": dict(self.params), "error": self.error}
        if self.error == "ci":
            d["halfwidth"] = self.halfwidth
            d["level"] = self.level
        return d

    @classmethod
    def exact(cls, value: float, method: str = "exact", **params) -> "NormEstimate":
        return cls(float(value), method, params)


# ---------------------------------------------------------------------------
# evaluation


def _monomials(E: np.ndarray, Z: np.ndarray) -> np.ndarray:
    """z^alpha for every point (rows of Z) and exponent row of E."""
    N, n = Z.shape
    out = np.ones((N, E.shape[0]), dtype=complex)
    for j in range(n):
        top = int(E[:, j].max(initial=0))
        if top == 0:
            continue
        powers = np.ones((N, top + 1), dtype=complex)
        for e in range(1, top + 1):
            powers[:, e] = powers[:, e - 1] * Z[:, j]
        out *= powers[:, E[:, j]]
    return out


def evaluate(P: VPoly, Z, vars_: Optional[Sequence[int]] = None) -> np.ndarray:
    """Values P(z) for the points in Z (shape (N, len(vars_))), shape (N, dim).

    No unit-modulus check; used for box grids as well as the torus.
    """
    if vars_ is None:
        vars_ = list(range(P.n_vars))
    Z = np.atleast_2d(np.asarray(Z, dtype=complex))
    if Z.shape[1] != len(vars_):
        raise DimensionMismatch(len(vars_), Z.shape[1], what="point")
    E, C = P.arrays(vars_)
    if len(C) == 0:
        return np.zeros((Z.shape[0], P.space.dim), dtype=complex)
    rows = max(1, _CHUNK // max(1, len(C)))
    out = np.empty((Z.shape[0], P.space.dim), dtype=complex)
    for s in range(0, Z.shape[0], rows):
        out[s : s + rows] = _monomials(E, Z[s : s + rows]) @ C
    return out


def eval_at(P: VPoly, z) -> np.ndarray:
    """P(z) for a single point of the polytorus."""
    z = np.asarray(z, dtype=complex).ravel()
    if z.shape[0] != P.n_vars:
        raise DimensionMismatch(P.n_vars, z.shape[0], what="point")
    if np.any(np.abs(np.abs(z) - 1.0) > 1e-12):
        raise DomainError("evaluation points must lie on the unit torus")
    active = P.active_vars()
    return evaluate(P, z[active][None, :], active)[0]


# ---------------------------------------------------------------------------
# Parseval


def l2_parseval(P: Union[VPoly, WalshPoly]) -> NormEstimate:
    """Exact L2 norm for Hilbert-space coefficients (orthonormal characters)."""
    if not P.space.is_hilbert:
        raise DomainError(
            f"Parseval needs a Hilbert space, got {P.space.describe()}; use lq_norm_grid or lq_norm_mc"
        )
    total = sum(float(np.vdot(x, x).real) for _, x in P.terms.items())
    return NormEstimate.exact(math.sqrt(total), "parseval")


# ---------------------------------------------------------------------------
# torus grids


def _grid_norm_chunks(P: VPoly, M: int) -> Iterator[np.ndarray]:
    """Norms ||P(z)|| over the tensor grid of M-th roots of unity, in slabs.

    P(w^k) = sum_alpha x_alpha w^(k.alpha) is an inverse DFT of the
    coefficient array folded modulo M, so each slab is one ifftn.
    """
    active = P.active_vars()
    n = len(active)
    dim = P.space.dim
    if n == 0:
        const = next(iter(P.terms.values()), np.zeros(dim, dtype=complex))
        yield np.atleast_1d(P.space.norms(const))
        return
    E, C = P.arrays(active)
    E = E % M
    # split variables into an outer loop and an inner FFT block
    inner = n
    while inner > 1 and M**inner * dim > _CHUNK:
        inner -= 1
    outer = n - inner
    shape = (M,) * inner + (dim,)
    root = np.exp(2j * np.pi * np.arange(M) / M)
    for idx in np.ndindex(*((M,) * outer)):
        # phase from the outer (fixed) coordinates
        if outer:
            k = np.asarray(idx, dtype=np.int64)
            phase = root[(E[:, :outer] @ k) % M]
            coeffs = C * phase[:, None]
        else:
            coeffs = C
        X = np.zeros(shape, dtype=complex)
        np.add.at(X, tuple(E[:, outer + j] for j in range(inner)), coeffs)
        vals = np.fft.ifftn(X, axes=tuple(range(inner))) * (M**inner)
        yield P.space.norms(vals).ravel()


def _check_grid_budget(P: VPoly, M: int) -> int:
    n = len(P.active_vars())
    needed = M**n
    if needed > GRID_BUDGET:
        raise BudgetExceeded(needed, GRID_BUDGET, "lq_norm_mc")
    return n


def default_grid_points(P: VPoly, q: float = 2.0) -> int:
    """Smallest M for which even-q Hilbert integrals are exact, at least 8."""
    qq = 2 if q == INF else q
    return max(8, int(math.ceil(qq)) * max(1, P.max_var_degree()) + 1)


def lq_norm_grid(P: VPoly, q: float, M: Optional[int] = None) -> NormEstimate:
    """(mean over the roots-of-unity grid of ||P||^q)^(1/q)."""
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    if M is None:
        M = default_grid_points(P, q)
    if M < 1:
        raise DomainError("grid needs M >= 1")
    n = _check_grid_budget(P, M)
    count = 0
    if q == INF:
        top = max(float(c.max(initial=0.0)) for c in _grid_norm_chunks(P, M))
        return NormEstimate(top, "grid", {"M": M, "q": "inf"}, "grid_gap_unknown")
    total = 0.0
    scale = max(float(P.coefficient_norms().sum()), 1e-300)
    for chunk in _grid_norm_chunks(P, M):
        total += float(np.sum((chunk / scale) ** q))
        count += chunk.size
    value = scale * (total / count) ** (1.0 / q)
    exact = (
        P.space.is_hilbert
        and float(q).is_integer()
        and int(q) % 2 == 0
        and M > q * P.max_var_degree()
    ) or P.is_zero() or n == 0
    return NormEstimate(value, "grid", {"M": M, "q": q}, "exact" if exact else "grid_gap_unknown")


def sup_grid(P: Union[VPoly, WalshPoly], M: int = 16, domain: str = "torus") -> NormEstimate:
    """Max of ||P|| over a finite grid: a lower bound for the true supremum.

    ``domain`` is ``"torus"`` (M-th roots of unity), ``"cube"`` ({-1,1}^n,
    M ignored) or ``"box"`` (M equispaced points of [-1,1] per variable).
    """
    if isinstance(P, WalshPoly):
        P = walsh_to_tetra(P)
    if domain == "cube":
        _check_cube_vars(len(P.active_vars()))
        top = max(float(c.max(initial=0.0)) for c in _cube_norm_chunks(P))
        return NormEstimate.exact(top, "sup_grid", domain="cube")
    if domain == "torus":
        _check_grid_budget(P, M)
        top = max(float(c.max(initial=0.0)) for c in _grid_norm_chunks(P, M))
        err = "exact" if len(P.active_vars()) == 0 else "grid_gap_unknown"
        return NormEstimate(top, "sup_grid", {"M": M, "domain": "torus"}, err)
    if domain == "box":
        active = P.active_vars()
        _check_grid_budget(P, M)
        axis = np.linspace(-1.0, 1.0, M)
        top = 0.0
        if not active:
            return NormEstimate.exact(float(P.space.norms(evaluate(P, np.zeros((1, 0)), []))[0]), "sup_grid", domain="box")
        pts = np.stack(np.meshgrid(*([axis] * len(active)), indexing="ij"), axis=-1).reshape(-1, len(active))
        rows = max(1, _CHUNK // max(1, len(P)))
        for s in range(0, len(pts), rows):
            top = max(top, float(P.space.norms(evaluate(P, pts[s : s + rows], active)).max()))
        return NormEstimate(top, "sup_grid", {"M": M, "domain": "box"}, "grid_gap_unknown")
    raise DomainError(f"unknown domain {domain!r}")


# ---------------------------------------------------------------------------
# Monte Carlo on the torus


def _z_quantile(level: float) -> float:
    return NormalDist().inv_cdf(0.5 + level / 2.0)


def _mc_from_powers(powered: np.ndarray, q: float, scale: float) -> tuple:
    mean = float(powered.mean())
    N = powered.size
    var = float(powered.var(ddof=1)) if N > 1 else 0.0
    value = scale * mean ** (1.0 / q)
    if mean <= 0 or var <= 0:
        return value, 0.0
    se = math.sqrt(var / N)
    # delta method for the 1/q root
    half = _z_quantile(CI_LEVEL) * se * (1.0 / q) * mean ** (1.0 / q - 1.0) * scale
    return value, half


def lq_norm_mc(P: VPoly, q: float, spec: SamplerSpec = SamplerSpec()) -> NormEstimate:
    """Monte Carlo estimate with a 99% normal-approximation CI."""
    if q < 1 or q == INF:
        raise DomainError(f"Monte Carlo needs finite q >= 1, got {q}")
    active = P.active_vars()
    rng = np.random.Generator(np.random.Philox(key=spec.seed))
    theta = rng.random((spec.samples, len(active)))
    Z = np.exp(2j * np.pi * theta)
    scale = max(float(P.coefficient_norms().sum()), 1e-300)
    vals = P.space.norms(evaluate(P, Z, active)) / scale
    value, half = _mc_from_powers(vals**q, q, scale)
    return NormEstimate(value, "mc", {"samples": spec.samples, "seed": spec.seed, "q": q}, "ci", half, CI_LEVEL)


def lq_norm(P: VPoly, q: float, M: Optional[int] = None, spec: Optional[SamplerSpec] = None) -> NormEstimate:
    """Grid estimate when within budget, Monte Carlo otherwise."""
    if M is None:
        M = default_grid_points(P, q)
    try:
        return lq_norm_grid(P, q, M)
    except BudgetExceeded:
        return lq_norm_mc(P, q, spec or SamplerSpec())


# ---------------------------------------------------------------------------
# Boolean cube


def _check_cube_vars(n: int) -> None:
    if n > CUBE_MAX_VARS:
        raise BudgetExceeded(2**n, 2**CUBE_MAX_VARS, "cube_lq_mc")


def _fwht(a: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform along axis 0 (length 2^n)."""
    a = a.copy()
    h = 1
    N = a.shape[0]
    while h < N:
        a = a.reshape(N // (2 * h), 2, h, *a.shape[1:])
        x = a[:, 0].copy()
        y = a[:, 1]
        a[:, 0] = x + y
        a[:, 1] = x - y
        a = a.reshape(N, *a.shape[3:])
        h *= 2
    return a


def _cube_norm_chunks(P: VPoly) -> Iterator[np.ndarray]:
    """Norms ||P(eps)|| over every eps in {-1,1}^active (P tetrahedral or not).

    Exponents only matter through their parity on the cube.
    """
    active = P.active_vars()
    n = len(active)
    dim = P.space.dim
    E, C = P.arrays(active)
    bits = (E % 2).astype(np.int64)
    inner = n
    while inner > 0 and (2**inner) * dim > _CHUNK:
        inner -= 1
    outer = n - inner
    weights_in = (1 << np.arange(inner, dtype=np.int64))
    low = bits[:, outer:] @ weights_in if inner else np.zeros(len(C), dtype=np.int64)
    for idx in np.ndindex(*((2,) * outer)):
        if outer:
            # idx bit 1 means eps_j = -1
            flips = bits[:, :outer] @ np.asarray(idx, dtype=np.int64)
            coeffs = C * np.where(flips % 2, -1.0, 1.0)[:, None]
        else:
            coeffs = C
        X = np.zeros((2**inner, dim), dtype=complex)
        np.add.at(X, low, coeffs)
        yield P.space.norms(_fwht(X))


def _as_tetra(W: Union[WalshPoly, VPoly]) -> VPoly:
    return walsh_to_tetra(W) if isinstance(W, WalshPoly) else W


def cube_lq_exact(W: Union[WalshPoly, VPoly], q: float) -> NormEstimate:
    """(E ||W(eps)||^q)^(1/q) by enumerating {-1,1}^n."""
    if q < 1:
        raise DomainError(f"q must be >= 1, got {q}")
    P = _as_tetra(W)
    _check_cube_vars(len(P.active_vars()))
    if q == INF:
        return NormEstimate.exact(max(float(c.max(initial=0.0)) for c in _cube_norm_chunks(P)), "cube_exact", q="inf")
    scale = max(float(P.coefficient_norms().sum()), 1e-300)
    total = 0.0
    count = 0
    for chunk in _cube_norm_chunks(P):
        total += float(np.sum((chunk / scale) ** q))
        count += chunk.size
    return NormEstimate.exact(scale * (total / count) ** (1.0 / q), "cube_exact", q=q)


def cube_lq_mc(W: Union[WalshPoly, VPoly], q: float, spec: SamplerSpec = SamplerSpec()) -> NormEstimate:
    if q < 1 or q == INF:
        raise DomainError(f"Monte Carlo needs finite q >= 1, got {q}")
    P = _as_tetra(W)
    active = P.active_vars()
    rng = np.random.Generator(np.random.Philox(key=spec.seed))
    eps = np.where(rng.random((spec.samples, len(active))) < 0.5, -1.0, 1.0).astype(complex)
    scale = max(float(P.coefficient_norms().sum()), 1e-300)
    vals = P.space.norms(evaluate(P, eps, active)) / scale
    value, half = _mc_from_powers(vals**q, q, scale)
    return NormEstimate(value, "cube_mc", {"samples": spec.samples, "seed": spec.seed, "q": q}, "ci", half, CI_LEVEL)


def cube_lq(W: Union[WalshPoly, VPoly], q: float, spec: Optional[SamplerSpec] = None) -> NormEstimate:
    try:
        return cube_lq_exact(W, q)
    except BudgetExceeded:
        return cube_lq_mc(W, q, spec or SamplerSpec())


def coefficient_lq(values, q: float, weights=None) -> float:
    """(sum w_i * a_i^q)^(1/q) for nonnegative a_i; max for q = inf."""
    a = np.asarray(values, dtype=float)
    w = np.ones_like(a) if weights is None else np.asarray(weights, dtype=float)
    if a.size == 0:
        return 0.0
    if q == INF:
        return float(np.max(a * (w > 0)))
    scale = a.max()
    if scale == 0:
        return 0.0
    return float(scale * np.sum(w * (a / scale) ** q) ** (1.0 / q))
