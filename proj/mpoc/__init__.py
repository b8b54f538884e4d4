"""Adaptive max-plus solver for finite-horizon deterministic optimal control."""

from ._mpoc import (
    matvec,
    oracle_optimal_value,
    oracle_trajectory,
    oracle_value,
    project,
    residuate,
    run,
    solve_lq,
    suggest_schedule,
)

__all__ = [
    "matvec",
    "residuate",
    "project",
    "suggest_schedule",
    "solve_lq",
    "run",
    "oracle_optimal_value",
    "oracle_trajectory",
    "oracle_value",
]
