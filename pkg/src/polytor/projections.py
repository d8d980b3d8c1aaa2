"""Homogeneous projections of Walsh polynomials.

Two independent routes to the degree-k part of a Walsh polynomial of degree
at most m: plain coefficient filtering, and the integral formula
``P_k(eps) = int_0^1 P(t eps) p_{k+1}(t) dt`` whose kernel polynomials come
from the exact inverse of the (m+1)x(m+1) Hilbert matrix. All Hilbert-matrix
arithmetic is done in :class:`fractions.Fraction`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError, PolytorError
from .norms import cube_lq_exact
from .poly import WalshPoly
from .spaces import NormedSpace

MAX_EXACT_DEGREE = 20


@dataclass(frozen=True)
class RationalMatrix:
    entries: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        widths = {len(r) for r in self.entries}
        if len(widths) > 1:
            raise DomainError("rational matrix rows differ in length")

    @classmethod
    def from_rows(cls, rows) -> "RationalMatrix":
        return cls(tuple(tuple(Fraction(x) for x in r) for r in rows))

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls.from_rows([[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def shape(self) -> Tuple[int, int]:
        return len(self.entries), len(self.entries[0]) if self.entries else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        n, k = self.shape
        k2, p = other.shape
        if k != k2:
            raise DomainError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other.entries))
        return RationalMatrix(
            tuple(tuple(sum((a * b for a, b in zip(row, col)), Fraction(0)) for col in cols) for row in self.entries)
        )

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(tuple(zip(*self.entries)))

    def max_abs(self) -> Fraction:
        return max(abs(x) for r in self.entries for x in r)

    def to_json(self) -> List[List[str]]:
        return [[f"{x.numerator}/{x.denominator}" for x in r] for r in self.entries]

    @classmethod
    def from_json(cls, rows) -> "RationalMatrix":
        return cls.from_rows([[Fraction(s) for s in r] for r in rows])


def hilbert_matrix(m: int) -> RationalMatrix:
    """(m+1)x(m+1) matrix with entries 1/(i+j-1), 1-based."""
    if m < 0:
        raise DomainError(f"m must be >= 0, got {m}")
    n = m + 1
    return RationalMatrix(tuple(tuple(Fraction(1, i + j - 1) for j in range(1, n + 1)) for i in range(1, n + 1)))


def rational_inverse(M: RationalMatrix) -> RationalMatrix:
    """Gauss-Jordan elimination over the rationals."""
    n, n2 = M.shape
    if n != n2:
        raise DomainError(f"matrix is not square: {M.shape}")
    X = [list(r) for r in M.entries]
    Y = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if X[r][c] != 0), None)
        if piv is None:
            raise PolytorError("matrix is singular")
        X[c], X[piv] = X[piv], X[c]
        Y[c], Y[piv] = Y[piv], Y[c]
        inv = 1 / X[c][c]
        X[c] = [x * inv for x in X[c]]
        Y[c] = [y * inv for y in Y[c]]
        for r in range(n):
            f = X[r][c]
            if r != c and f != 0:
                X[r] = [a - f * b for a, b in zip(X[r], X[c])]
                Y[r] = [a - f * b for a, b in zip(Y[r], Y[c])]
    return RationalMatrix(tuple(tuple(r) for r in Y))


def _guard(m: int) -> None:
    if not 0 <= m <= MAX_EXACT_DEGREE:
        raise DomainError(f"exact Hilbert inversion is limited to 0 <= m <= {MAX_EXACT_DEGREE}, got {m}")


_INVERSES: dict = {}


def hilbert_inverse(m: int) -> RationalMatrix:
    _guard(m)
    if m not in _INVERSES:
        _INVERSES[m] = rational_inverse(hilbert_matrix(m))
    return _INVERSES[m]


@dataclass(frozen=True)
class ProjectionPolynomial:
    """p(t) = sum_k coeffs[k] t^k with exact rational coefficients."""

    coeffs: Tuple[Fraction, ...]

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for c in reversed(self.coeffs):
            out = out * t + float(c)
        return out

    def moment(self, j: int) -> Fraction:
        """int_0^1 t^j p(t) dt, exactly."""
        return sum((c / (j + k + 1) for k, c in enumerate(self.coeffs)), Fraction(0))

    @property
    def degree_bound(self) -> int:
        return len(self.coeffs) - 1


def projection_polynomials(m: int) -> List[ProjectionPolynomial]:
    """p_1, ..., p_{m+1}: column j of the inverse Hilbert matrix."""
    A = hilbert_inverse(m)
    return [ProjectionPolynomial(tuple(A[k, j] for k in range(m + 1))) for j in range(m + 1)]


def biorthogonality_defect(m: int) -> List[Tuple[int, int, Fraction]]:
    """Entries where int t^(i-1) p_j(t) dt differs from delta_ij (should be empty)."""
    ps = projection_polynomials(m)
    bad = []
    for i in range(1, m + 2):
        for j, p in enumerate(ps, start=1):
            val = p.moment(i - 1)
            if val != (1 if i == j else 0):
                bad.append((i, j, val))
    return bad


def projection_sup_on_grid(m: int, points: int = 4001) -> float:
    """Max over j of max |p_j(t)| on a grid of (0,1) (lower bound of the sup)."""
    t = np.linspace(0.0, 1.0, points)[1:-1]
    return max(float(np.max(np.abs(p(t)))) for p in projection_polynomials(m))


def hilbert_inverse_growth(ms: Sequence[int]) -> List[Tuple[int, int, float]]:
    """(m, max|a_ij|, log max|a_ij|) for each m."""
    out = []
    for m in ms:
        top = hilbert_inverse(m).max_abs()
        out.append((m, int(top), math.log(top)))
    return out


# ---------------------------------------------------------------------------
# Walsh projections


def walsh_homog_filter(W: WalshPoly, k: int) -> WalshPoly:
    return WalshPoly(W.n_vars, {A: x for A, x in W.terms.items() if len(A) == k}, W.space)


def lemma3_weights(k: int, m: int) -> List[Fraction]:
    """int_0^1 t^j p_{k+1}(t) dt for j = 0..m: the multiplier of the degree-j part.

    Substituting t*eps multiplies the degree-j part by t^j, so the integral
    acts on each homogeneous part through this moment.
    """
    _guard(m)
    if not 0 <= k <= m:
        raise DomainError(f"need 0 <= k <= m, got k={k}, m={m}")
    p = projection_polynomials(m)[k]
    return [p.moment(j) for j in range(m + 1)]


def lemma3_projection(W: WalshPoly, k: int, m: int) -> WalshPoly:
    """Degree-k part of W via the Hilbert-kernel integral formula."""
    if W.degree() > m:
        raise DomainError(f"Walsh polynomial has degree {W.degree()} > m = {m}")
    weights = lemma3_weights(k, m)
    terms = {}
    for A, x in W.terms.items():
        w = weights[len(A)]
        if w != 0:
            terms[A] = x * float(w)
    return WalshPoly(W.n_vars, terms, W.space)


def random_walsh(space: NormedSpace, n: int, rng: np.random.Generator, max_degree: Optional[int] = None,
                 density: float = 1.0) -> WalshPoly:
    """Walsh polynomial with complex-Gaussian coefficients on a random set of subsets."""
    import itertools

    top = n if max_degree is None else max_degree
    terms = {}
    for d in range(top + 1):
        for A in itertools.combinations(range(1, n + 1), d):
            if density >= 1.0 or rng.random() < density:
                terms[A] = rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim)
    return WalshPoly(n, terms, space)


def _projection_ratio(W: WalshPoly, m: int) -> float:
    den = cube_lq_exact(W, 2).value
    if den == 0:
        return 0.0
    return cube_lq_exact(walsh_homog_filter(W, m), 2).value / den


def rademacher_projection_search(space: NormedSpace, n: int, m: int, trials: int = 20, seed: int = 0,
                                 climb_steps: int = 40) -> Tuple[float, WalshPoly]:
    """Lower bound for ||P_m|| on L2({-1,1}^n, X) with its witness polynomial.

    Random starts followed by a multiplicative hill-climb on the coefficients.
    """
    if n > 24:
        raise DomainError("rademacher projection search enumerates the cube; n must be <= 24")
    rng = np.random.Generator(np.random.Philox(key=seed))
    best, witness = -1.0, None
    for _ in range(max(1, trials)):
        W = random_walsh(space, n, rng, density=0.5)
        if W.is_zero():
            continue
        r = _projection_ratio(W, m)
        step = 0.5
        for _ in range(climb_steps):
            trial = WalshPoly(
                n,
                {A: x + step * np.abs(x).max() * (rng.standard_normal(space.dim) + 1j * rng.standard_normal(space.dim))
                 for A, x in W.terms.items()},
                space,
            )
            rt = _projection_ratio(trial, m)
            if rt > r:
                W, r = trial, rt
            else:
                step *= 0.85
        if r > best:
            best, witness = r, W
    return best, witness


def rademacher_projection_norm(space: NormedSpace, n: int, m: int, trials: int = 20, seed: int = 0) -> float:
    return rademacher_projection_search(space, n, m, trials, seed)[0]
