"""Short-time evolution from a quasi-steady state to first order in L1."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..liouville import Superoperator, unvec, vec
from ..model import LevelScheme
from .steady import QuasiSteadyState, residual_solver


@dataclass(frozen=True)
class PerturbativeResult:
    rho: np.ndarray
    alpha: np.ndarray  # alpha_ij for the chosen start period i
    residual: np.ndarray  # -(L0 pseudo-inverse) applied to the non-null part of L1 rho_ss,i
    residual_norm: float
    rate_norm: float  # sum_j |alpha_ij| dt
    in_window: bool


def timescale_window_ok(scheme: LevelScheme, dt: float, strong_min: float = 10.0,
                        weak_max: float = 0.1) -> bool:
    """dt long against the strong time scales, short against the weak ones."""
    strong = min(scheme.einstein[3], scheme.rabi) if scheme.rabi > 0 else scheme.einstein[3]
    return dt * strong >= strong_min and dt * scheme.weak_scale <= weak_max


def perturbative_evolution(L0: Superoperator, L1: Superoperator, qss: Sequence[QuasiSteadyState],
                           start: int, dt: float, scheme: LevelScheme | None = None,
                           strong_min: float = 10.0, weak_max: float = 0.1) -> PerturbativeResult:
    """rho(t0 + dt) = rho_ss,i + sum_j alpha_ij rho_ss,j dt - L0^+ rho_tilde.

    rho_tilde is L1 rho_ss,i minus its null-space component; the last term
    is the long-time value of the transient integral.
    """
    qss = sorted(qss, key=lambda q: q.level)
    in_window = True
    if scheme is not None:
        in_window = timescale_window_ok(scheme, dt, strong_min, weak_max)
        if not in_window:
            warnings.warn(f"dt = {dt:g} is outside the perturbative time-scale window", stacklevel=2)
    x = L1.matrix @ vec(qss[start].rho_ss)
    alpha = np.array([q.dual_vector @ x for q in qss])
    if not np.any(x):
        zero = np.zeros_like(qss[start].rho_ss)
        return PerturbativeResult(qss[start].rho_ss.copy(), alpha, zero, 0.0, 0.0, in_window)
    solve = residual_solver(L0, qss)
    # null-space component of x, split per sector
    lefts = np.vstack([q.sector_duals for q in qss])
    R = np.column_stack([vec(r) for q in qss for r in q.sector_states])
    tilde = x - R @ (lefts @ x)
    residual = -solve(tilde)
    rho = qss[start].rho_ss + dt * unvec(R @ (lefts @ x), L0.dim) + unvec(residual, L0.dim)
    return PerturbativeResult(rho, alpha, unvec(residual, L0.dim), float(np.linalg.norm(residual)),
                              float(np.sum(np.abs(alpha)) * dt), in_window)
