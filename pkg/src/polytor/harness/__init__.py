"""Inequality checks, report types and the config-driven runner."""

from .reports import ConstantEstimate, InequalityReport
from .runner import run_experiment

__all__ = ["ConstantEstimate", "InequalityReport", "run_experiment"]
