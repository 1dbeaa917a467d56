"""Quasi-stationary analysis of spectrally one-sided Levy-driven queues."""

from ._core import (
    AnalyticModel,
    Kind,
    LevyModel,
    LevyQsdError,
    check_assumptions,
    critical_point,
    estimate_survival,
    phi,
    psi,
)

__all__ = [
    "AnalyticModel",
    "Kind",
    "LevyModel",
    "LevyQsdError",
    "check_assumptions",
    "critical_point",
    "estimate_survival",
    "phi",
    "psi",
]
