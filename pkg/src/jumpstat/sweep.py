"""Distance sweeps of rates and multi-jump rates for the equilateral preset."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from typing import Sequence

import numpy as np

from .coupling import Geometry, coupling_parameter_array
from .errors import ConfigurationError
from .model import EnsembleSpec, LevelScheme
from .rates import RateMatrix, RateProblem
from .rates.closed import closed_form_rates, downward_rates, upward_rates
from .telegraph import analytic_djr, analytic_tjr

SWEEP_COLUMNS = ("r", "n_DJ_exact", "n_DJ_first", "n_DJ_indep", "n_TJ_exact", "n_TJ_first", "n_TJ_indep",
                 "dev_DJ_exact", "dev_DJ_first", "dev_TJ_exact", "dev_TJ_first")


def independent_rates(scheme: LevelScheme, n_atoms: int) -> RateMatrix:
    """Rates of non-interacting atoms (the r -> infinity limit)."""
    exact, _ = closed_form_rates(EnsembleSpec(scheme, n_atoms), 0j)
    return replace(exact, method="independent")


def auto_window(p: RateMatrix, fraction: float = 0.01) -> float:
    """T_W with (largest rate) * T_W = ``fraction``."""
    q = max(p.up + p.down)
    if q <= 0:
        raise ConfigurationError("all rates vanish; give the window explicitly")
    return fraction / q


def rates_at(scheme: LevelScheme, n_atoms: int, r: float, methods: Sequence[str],
             coupled: Sequence[int] | None = None) -> dict[str, RateMatrix]:
    spec = EnsembleSpec(scheme, n_atoms, Geometry.equilateral(r, n_atoms) if n_atoms > 1 else None)
    return RateProblem(spec, coupled_transitions=coupled).rates(methods)


def _rates_task(args):
    return rates_at(*args)


def rates_over(scheme: LevelScheme, n_atoms: int, rs: Sequence[float], methods: Sequence[str],
               coupled: Sequence[int] | None = None, jobs: int = 1) -> list[dict[str, RateMatrix]]:
    """``rates_at`` for every r; results come back in input order."""
    tasks = [(scheme, n_atoms, float(r), tuple(methods), coupled) for r in rs]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            return list(ex.map(_rates_task, tasks))
    return [_rates_task(t) for t in tasks]


def sweep_table(scheme: LevelScheme, rs: Sequence[float], window: float | None = None):
    """Rows of :data:`SWEEP_COLUMNS` for three atoms on an equilateral triangle.

    Uses the closed-form rates; deviations are relative to the independent
    values. Returns (rows, window).
    """
    spec = EnsembleSpec(scheme, 3)
    rs = np.asarray(rs, dtype=float)
    base = independent_rates(scheme, 3)
    if window is None:
        window = auto_window(base)
    c3 = coupling_parameter_array(scheme.einstein[3], 2 * np.pi * rs / scheme.wavelengths[3])
    up = upward_rates(spec)
    exact = downward_rates(spec, c3, order="exact")
    first = downward_rates(spec, c3, order="first")
    dj0, tj0 = analytic_djr(base, window), analytic_tjr(base, window)
    rows = []
    for i, r in enumerate(rs):
        pe = RateMatrix(up, [float(d[i]) for d in exact])
        pf = RateMatrix(up, [float(d[i]) for d in first])
        dje, djf = analytic_djr(pe, window), analytic_djr(pf, window)
        tje, tjf = analytic_tjr(pe, window), analytic_tjr(pf, window)
        rows.append((float(r), dje, djf, dj0, tje, tjf, tj0,
                     dje / dj0 - 1, djf / dj0 - 1, tje / tj0 - 1, tjf / tj0 - 1))
    return np.array(rows), window
