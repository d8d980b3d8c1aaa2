"""Report types produced by the inequality checks."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Optional

from ..norms import NormEstimate

# relative slack for floating-point roundoff in "exact" comparisons
FLOAT_SLACK = 1e-9

PASS = "pass"
INCONCLUSIVE = "inconclusive"
FAIL = "fail"
RECORDED = "recorded"


def digest_of(obj) -> str:
    blob = json.dumps(obj, sort_keys=True, separators=(",", ":"), default=_json_default)
    return hashlib.sha256(blob.encode()).hexdigest()


def _json_default(o):
    if hasattr(o, "to_json"):
        return o.to_json()
    if isinstance(o, complex):
        return [o.real, o.imag]
    try:
        import numpy as np

        if isinstance(o, np.generic):
            return o.item()
    except ImportError:  # pragma: no cover
        pass
    raise TypeError(f"cannot serialise {type(o).__name__}")


def _finite(x):
    if x is None:
        return None
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return x


@dataclass
class InequalityReport:
    """One instance of ``lhs <= constant * rhs``.

    ``constant=None`` marks a measurement-only report: the ratio is recorded
    but nothing is asserted.
    """

    name: str
    lhs: NormEstimate
    rhs: NormEstimate
    constant: Optional[float]
    exponent_m: int = 0
    instance_digest: str = ""
    params: dict = field(default_factory=dict)
    status_override: Optional[str] = None
    note: str = ""

    @property
    def ratio(self) -> float:
        if self.rhs.value == 0:
            return 0.0 if self.lhs.value == 0 else math.inf
        return self.lhs.value / self.rhs.value

    @property
    def roundoff(self) -> float:
        c = self.constant or 0.0
        return FLOAT_SLACK * max(abs(self.lhs.value), abs(c * self.rhs.value))

    @property
    def combined_error(self) -> float:
        c = self.constant or 0.0
        return self.lhs.err + c * self.rhs.err + self.roundoff

    @property
    def margin(self) -> Optional[float]:
        if self.constant is None:
            return None
        return self.constant * self.rhs.value - self.lhs.value

    @property
    def status(self) -> str:
        if self.status_override:
            return self.status_override
        if self.constant is None:
            return RECORDED
        # floating-point roundoff is not estimator uncertainty
        if self.margin + self.roundoff >= 0:
            return PASS
        if self.margin + self.combined_error >= 0:
            return INCONCLUSIVE
        return FAIL

    @property
    def passed(self) -> bool:
        return self.status != FAIL

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "lhs": self.lhs.to_json(),
            "rhs": self.rhs.to_json(),
            "constant": _finite(self.constant),
            "exponent_m": self.exponent_m,
            "margin": _finite(self.margin),
            "combined_error": _finite(self.combined_error),
            "ratio": _finite(self.ratio),
            "status": self.status,
            "pass": self.passed,
            "instance_digest": self.instance_digest,
            "params": self.params,
            "note": self.note,
        }

    def csv_row(self) -> dict:
        return {
            "name": self.name,
            "lhs": repr(self.lhs.value),
            "rhs": repr(self.rhs.value),
            "constant": "" if self.constant is None else repr(self.constant),
            "margin": "" if self.margin is None else repr(self.margin),
            "pass": str(self.passed).lower(),
            "status": self.status,
        }


def skipped(name: str, reason: str, digest: str = "", **params) -> InequalityReport:
    """A check that could not be evaluated; shows up as inconclusive, never silently."""
    zero = NormEstimate(0.0, "skipped", error="grid_gap_unknown")
    return InequalityReport(name, zero, zero, None, 0, digest, params, INCONCLUSIVE, reason)


@dataclass
class ConstantEstimate:
    """Empirical value of a best constant with the instance that witnesses it."""

    name: str
    value: float
    direction: str
    search_budget: int
    seed: int
    witness: Optional[dict] = None
    params: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "value": _finite(self.value),
            "direction": self.direction,
            "search_budget": self.search_budget,
            "seed": self.seed,
            "witness": self.witness,
            "params": self.params,
        }
