"""Truthful reverse auctions with a staged contextual bandit learner."""

from ._core import (
    CostDistribution,
    IoError,
    ValidationError,
    allocate_optimal,
    critical_payment,
    rev_gtm_payment,
    rosa_apply,
    run_audit,
    run_experiment,
    sherman_morrison_update,
)

__all__ = [
    "CostDistribution",
    "IoError",
    "ValidationError",
    "allocate_optimal",
    "critical_payment",
    "rev_gtm_payment",
    "rosa_apply",
    "run_audit",
    "run_experiment",
    "sherman_morrison_update",
]
