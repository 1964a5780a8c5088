"""Rates from projecting L1 rho_ss,i onto the dual states of L0."""

from __future__ import annotations

import logging
from typing import Sequence

import numpy as np

from ..errors import ModelError
from ..liouville import Superoperator, vec
from .matrix import RateMatrix
from .steady import QuasiSteadyState

log = logging.getLogger(__name__)

NEGATIVE_TOL = 1e-10
OFF_CHAIN_TOL = 1e-10


def alpha_matrix(L1: Superoperator, qss: Sequence[QuasiSteadyState]) -> np.ndarray:
    """alpha_ij = Tr(rho^j dagger L1 rho_ss,i), indexed [i, j]."""
    duals = np.vstack([q.dual_vector for q in qss])
    cols = np.column_stack([L1.matrix @ vec(q.rho_ss) for q in qss])
    return (duals @ cols).T


def clamp_rate(value: complex, name: str) -> float:
    if abs(value.imag) > max(NEGATIVE_TOL, 1e-8 * abs(value.real)):
        log.warning("rate %s has imaginary part %.3e", name, value.imag)
    r = value.real
    if r < -NEGATIVE_TOL:
        raise ModelError(f"negative rate {name} = {r:.3e}")
    if r < 0:
        log.info("clamping rate %s = %.3e to zero", name, r)
        r = 0.0
    return r


def rates_by_projection(L1: Superoperator, qss: Sequence[QuasiSteadyState]) -> RateMatrix:
    qss = sorted(qss, key=lambda q: q.level)
    alpha = alpha_matrix(L1, qss)
    n = len(qss)
    off = 0.0
    for i in range(n):
        for j in range(n):
            if abs(i - j) > 1:
                off = max(off, abs(alpha[i, j]))
    if off > OFF_CHAIN_TOL:
        log.warning("non nearest-neighbour alpha up to %.3e", off)
    up = [clamp_rate(alpha[k, k + 1], f"p{k}{k + 1}") for k in range(n - 1)]
    down = [clamp_rate(alpha[k + 1, k], f"p{k + 1}{k}") for k in range(n - 1)]
    return RateMatrix(up, down, "projection", off_chain=off, meta={"alpha": alpha})
