"""Desk-scale experiment harness: trial grids, aggregate reports, Monte Carlo checks."""

from .config import OUTPUT_DIR_ENV, ExperimentConfig, load_config, parse_config
from .harness import MonteCarloResult, TrialRecord, monte_carlo_moments, run_trial_grid
from .reports import (
    ExperimentReport,
    bound_tightness_report,
    build_report,
    gap_distribution_report,
    normalized_lambda_report,
    run_experiment,
    run_ratio_report,
    write_report,
)

__all__ = [
    "OUTPUT_DIR_ENV",
    "ExperimentConfig",
    "ExperimentReport",
    "MonteCarloResult",
    "TrialRecord",
    "bound_tightness_report",
    "build_report",
    "gap_distribution_report",
    "load_config",
    "monte_carlo_moments",
    "normalized_lambda_report",
    "parse_config",
    "run_experiment",
    "run_ratio_report",
    "run_trial_grid",
    "write_report",
]
