"""Quasi-steady states of the strong dynamics and their dual functionals."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Sequence

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from ..errors import AmbiguityError
from ..liouville import Superoperator, restrict_to_subspace, unvec, vec
from ..model import IntensitySubspace

log = logging.getLogger(__name__)

NULL_TOL = 1e-10


@dataclass(frozen=True)
class QuasiSteadyState:
    """Quasi-steady state of intensity period ``level`` and its dual.

    ``rho_ss`` is the uniform mixture of the sector steady states;
    ``dual_vector`` is the left null vector of L0 with
    ``dual_vector @ vec(rho_ss_j) == delta_ij``.
    """

    level: int
    rho_ss: np.ndarray
    dual_vector: np.ndarray
    sector_states: tuple[np.ndarray, ...]
    sectors: tuple[tuple[int, ...], ...] = ()
    sector_duals: np.ndarray | None = None

    @property
    def label(self) -> str:
        return f"I{self.level}"

    @property
    def dual(self) -> np.ndarray:
        """Dual as an operator D with Tr(D^dagger rho) = dual_vector . vec(rho)."""
        n = self.rho_ss.shape[0]
        return unvec(np.conj(self.dual_vector), n)

    def project(self, rho: np.ndarray) -> complex:
        return complex(self.dual_vector @ vec(rho))


def block_null_vector(block: Superoperator, tol: float = NULL_TOL) -> np.ndarray:
    """Unique unit-trace null vector of a small block generator.

    Raises AmbiguityError when the zero eigenvalue is degenerate.
    """
    m = block.dense()
    n = block.dim
    if m.shape == (1, 1):
        return np.ones((1, 1), dtype=complex)
    ev = la.eigvals(m)
    scale = np.max(np.abs(ev))
    zero = np.abs(ev) <= tol * scale if scale > 0 else np.ones(len(ev), dtype=bool)
    if zero.sum() != 1:
        raise AmbiguityError(f"block of dim {n} has {zero.sum()} null eigenvalues "
                             f"(smallest |lambda| = {np.sort(np.abs(ev))[:3]})")
    _, _, vh = la.svd(m)
    rho = unvec(vh[-1].conj(), n)
    rho = rho / np.trace(rho)
    return 0.5 * (rho + rho.conj().T)


def sector_steady_state(L0: Superoperator, sector: Sequence[int]) -> np.ndarray:
    """Steady state of L0 on one invariant sector, embedded in the full space."""
    block = restrict_to_subspace(L0, sector)
    rho_b = block_null_vector(block)
    rho = np.zeros((L0.dim, L0.dim), dtype=complex)
    rho[np.ix_(sector, sector)] = rho_b
    return rho


def _trace_functional(sector: Sequence[int], dim: int) -> np.ndarray:
    g = np.zeros(dim * dim, dtype=complex)
    idx = np.asarray(sector, dtype=int)
    g[idx + dim * idx] = 1.0
    return g


def left_null_vectors(L0: Superoperator, right: Sequence[np.ndarray],
                      gauges: Sequence[np.ndarray]) -> np.ndarray:
    """Left null vectors of L0 biorthogonal to ``right`` (vectorized states).

    Solves the bordered system [[L0^T, G], [R^T, 0]] [l; mu] = [0; e_s],
    which is nonsingular when ``right`` spans the null space and G^T R is
    invertible; the solution has mu = 0 so l is an exact left null vector.
    """
    n2 = L0.matrix.shape[0]
    m = len(right)
    R = sp.csr_matrix(np.column_stack(right))
    G = sp.csr_matrix(np.column_stack(gauges))
    top = sp.hstack([L0.matrix.T, G])
    bottom = sp.hstack([R.T, sp.csr_matrix((m, m), dtype=complex)])
    k = sp.vstack([top, bottom]).tocsc()
    rhs = np.zeros((n2 + m, m), dtype=complex)
    rhs[n2:, :] = np.eye(m)
    sol = spla.splu(k).solve(rhs)
    mu = sol[n2:, :]
    if np.max(np.abs(mu)) > 1e-8:
        log.warning("bordered solve: multiplier %.2e, null space may be incomplete",
                    np.max(np.abs(mu)))
    return sol[:n2, :].T


def quasi_steady_states(L0: Superoperator, subspaces: Sequence[IntensitySubspace]) -> list[QuasiSteadyState]:
    """Quasi-steady states and duals for every intensity period."""
    dim = L0.dim
    sector_rhos: list[list[np.ndarray]] = []
    flat_right, flat_gauge, owner = [], [], []
    for sub in subspaces:
        rhos = [sector_steady_state(L0, sector) for sector in sub.sectors]
        sector_rhos.append(rhos)
        for sector, rho in zip(sub.sectors, rhos):
            flat_right.append(vec(rho))
            flat_gauge.append(_trace_functional(sector, dim))
            owner.append(sub.level)
    duals = left_null_vectors(L0, flat_right, flat_gauge)
    out = []
    owner = np.asarray(owner)
    for sub, rhos in zip(subspaces, sector_rhos):
        rho_ss = sum(rhos) / len(rhos)
        dual = duals[owner == sub.level].sum(axis=0)
        out.append(QuasiSteadyState(sub.level, rho_ss, dual, tuple(rhos), tuple(sub.sectors),
                                    duals[owner == sub.level]))
    return out


def residual_solver(L0: Superoperator, qss: Sequence[QuasiSteadyState]):
    """Pseudo-inverse of L0 on the complement of its null space.

    Returns ``solve`` with ``solve(x) = y`` such that L0 y = x - P0 x and
    P0 y = 0, where P0 is the spectral projector onto the null space.
    """
    n2 = L0.matrix.shape[0]
    R = np.column_stack([vec(r) for q in qss for r in q.sector_states])
    lefts = np.vstack([q.sector_duals for q in qss])
    m = R.shape[1]
    k = sp.vstack([sp.hstack([L0.matrix, sp.csr_matrix(R)]),
                   sp.hstack([sp.csr_matrix(lefts), sp.csr_matrix((m, m), dtype=complex)])]).tocsc()
    lu = spla.splu(k)

    def solve(x: np.ndarray) -> np.ndarray:
        rhs = np.concatenate([np.asarray(x, dtype=complex), np.zeros(m, dtype=complex)])
        return lu.solve(rhs)[:n2]

    return solve
