"""Intensity telegraph process: multi-jump rates and Monte Carlo checks."""

from .formulas import analytic_djr, analytic_tjr, multijump_rate, printed_djr
from .simulation import (BACKEND, RNG_NAME, JumpStatistics, TelegraphTrajectory, count_multijumps,
                         run_statistics, simulate)

__all__ = ["BACKEND", "RNG_NAME", "JumpStatistics", "TelegraphTrajectory", "analytic_djr",
           "analytic_tjr", "count_multijumps", "multijump_rate", "printed_djr", "run_statistics",
           "simulate"]
