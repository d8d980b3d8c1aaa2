"""Finite-dimensional complex normed spaces.

Every inequality in the package is evaluated in one of these spaces. A space
is immutable; its norm is a pure function that also accepts stacked arrays of
shape ``(..., dim)`` so that estimators can evaluate whole grids at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DimensionMismatch, DomainError

INF = math.inf

NormFn = Callable[[np.ndarray], np.ndarray]


def conjugate_exponent(r: float) -> float:
    """Return r' with 1/r + 1/r' = 1 (1 and infinity are swapped)."""
    r = float(r)
    if math.isnan(r) or r < 1:
        raise DomainError(f"conjugate exponent needs r in [1, inf], got {r}")
    if r == 1:
        return INF
    if r == INF:
        return 1.0
    return r / (r - 1.0)


def _parse_p(p) -> float:
    if isinstance(p, str):
        if p.strip().lower() in ("inf", "infinity", "oo"):
            return INF
        if "/" in p:
            num, den = p.split("/")
            return float(num) / float(den)
    p = float(p)
    if math.isnan(p) or p < 1:
        raise DomainError(f"ellp needs p in [1, inf], got {p}")
    return p


@dataclass(frozen=True)
class NormedSpace:
    """A complex normed space of dimension ``dim``.

    ``family`` is ``"ellp"``, ``"euclidean"`` or ``"custom"``. Custom spaces
    carry a norm oracle; the oracle must accept arrays of shape ``(..., dim)``
    and reduce the last axis.
    """

    dim: int
    family: str = "ellp"
    p: float = 2.0
    oracle: Optional[NormFn] = field(default=None, compare=False, repr=False)
    label: str = ""

    def __post_init__(self):
        if int(self.dim) != self.dim or self.dim < 1:
            raise DomainError(f"dimension must be a positive integer, got {self.dim}")
        if self.family == "euclidean":
            object.__setattr__(self, "p", 2.0)
        elif self.family == "ellp":
            object.__setattr__(self, "p", _parse_p(self.p))
        elif self.family == "custom":
            if self.oracle is None:
                raise DomainError("custom space needs a norm oracle")
        else:
            raise DomainError(f"unknown space family {self.family!r}")

    @classmethod
    def ellp(cls, p, dim: int) -> "NormedSpace":
        return cls(dim=dim, family="ellp", p=_parse_p(p))

    @classmethod
    def euclidean(cls, dim: int) -> "NormedSpace":
        return cls(dim=dim, family="euclidean")

    @classmethod
    def custom(cls, dim: int, oracle: NormFn, label: str = "custom") -> "NormedSpace":
        return cls(dim=dim, family="custom", oracle=oracle, label=label)

    @property
    def is_hilbert(self) -> bool:
        return self.family == "euclidean" or (self.family == "ellp" and self.p == 2.0)

    def check(self, v) -> np.ndarray:
        v = np.asarray(v, dtype=complex)
        if v.shape[-1:] != (self.dim,):
            got = v.shape[-1] if v.ndim else 0
            raise DimensionMismatch(self.dim, got)
        return v

    def norms(self, v) -> np.ndarray:
        """Norm along the last axis; returns an array of shape ``v.shape[:-1]``."""
        v = self.check(v)
        if self.family == "custom":
            return np.asarray(self.oracle(v), dtype=float)
        a = np.abs(v)
        p = self.p
        if p == INF:
            return a.max(axis=-1)
        if p == 1.0:
            return a.sum(axis=-1)
        if p == 2.0:
            return np.sqrt(np.sum(a * a, axis=-1))
        # scale by the max modulus to avoid overflow in a**p
        scale = a.max(axis=-1, keepdims=True)
        safe = np.where(scale > 0, scale, 1.0)
        return (np.sum((a / safe) ** p, axis=-1) ** (1.0 / p)) * safe[..., 0]

    def norm(self, v) -> float:
        v = self.check(v)
        if v.ndim != 1:
            raise DimensionMismatch(1, v.ndim, what="vector rank")
        return float(self.norms(v))

    def zero(self) -> np.ndarray:
        return np.zeros(self.dim, dtype=complex)

    def to_json(self) -> dict:
        if self.family == "custom":
            return {"family": "custom", "dim": self.dim, "label": self.label}
        if self.family == "euclidean":
            return {"family": "euclidean", "dim": self.dim}
        return {"family": "ellp", "p": "inf" if self.p == INF else self.p, "dim": self.dim}

    @classmethod
    def from_json(cls, d: dict) -> "NormedSpace":
        try:
            family = d["family"]
            dim = int(d["dim"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"bad space descriptor {d!r}") from exc
        if family == "ellp":
            return cls.ellp(d.get("p", 2), dim)
        if family == "euclidean":
            return cls.euclidean(dim)
        raise DomainError(f"space family {family!r} cannot be built from JSON")

    def describe(self) -> str:
        if self.family == "ellp":
            p = "inf" if self.p == INF else f"{self.p:g}"
            return f"l{p}^{self.dim}"
        if self.family == "euclidean":
            return f"l2^{self.dim}"
        return self.label or "custom"


def norm(space: NormedSpace, v) -> float:
    return space.norm(v)


def scalar_space() -> NormedSpace:
    return NormedSpace.euclidean(1)


def hilbert_distance_bound(space: NormedSpace) -> float:
    """Upper bound for the Banach-Mazur distance from ``space`` to l2^dim.

    For l_p^d the identity map gives d^|1/p - 1/2|; otherwise John's bound
    sqrt(d). Since every cotype-2/type-2 constant of l2 is 1, this also bounds
    C_q(X) for q >= 2 and T_p(X) for p <= 2.
    """
    d = space.dim
    if space.is_hilbert:
        return 1.0
    if space.family == "ellp":
        inv = 0.0 if space.p == INF else 1.0 / space.p
        return float(d ** abs(inv - 0.5))
    return math.sqrt(d)
