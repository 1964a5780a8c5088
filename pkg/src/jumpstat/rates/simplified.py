"""Rates as decay rate times quasi-steady population of the decaying state.

Weak processes between intensity periods are written as collective jump
maps R(rho) = sum_kl G_kl L_k rho L_l^dagger. In the symmetrized basis a
channel u -> v has rate <v|R(|u><u|)|v>; the transition rate between
periods is the sum of channel rates weighted with the populations of the
source states.

For three atoms the quasi-steady states can carry coherences between the
two copies of the mixed-symmetry states (b/c and d/e) which the jump map
connects, e.g. through the Re C^(1) terms. Those enter as interference
channels u, u' -> v with complex weight <v|R(|u><u'|)|v>, multiplied by
rho_{u u'}. They vanish for two atoms and for uncoupled weak transitions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ..coupling import CouplingSet
from ..errors import ConfigurationError
from ..liouville import lowering, raising
from ..model import DARK_LEVEL, BasisState, EnsembleSpec, SchemeKind, basis_matrix, product_levels, state_basis
from .matrix import RateMatrix
from .steady import QuasiSteadyState

DROP_TOL = 1e-14


@dataclass(frozen=True)
class DecayChannel:
    from_state: str
    to_state: str
    rate: float
    crossing: tuple[int, int]
    from_index: int
    to_index: int
    partner_index: int | None = None  # set for interference channels
    weight: complex = 0j

    @property
    def is_interference(self) -> bool:
        return self.partner_index is not None


def _level_of(state: BasisState, spec: EnsembleSpec) -> int:
    idx = state.coefficients[0][0]
    return sum(lv != DARK_LEVEL for lv in product_levels(idx, spec.scheme.d, spec.n_atoms))


def weak_processes(spec: EnsembleSpec, couplings: CouplingSet):
    """(jump operators, collective weight matrix) for each weak process."""
    s, n = spec.scheme, spec.n_atoms
    up_ops = [lowering(spec, 1, k) for k in range(n)]
    out = [(up_ops, couplings.damping_matrix(1, n, s.einstein[1]))]
    if s.kind is SchemeKind.D_THREE_LEVEL:
        ops = [lowering(spec, 2, k) for k in range(n)]
        out.append((ops, couplings.damping_matrix(2, n, s.einstein[2])))
    else:
        # 1 -> 4 by W, then 4 -> 2 with the branching ratio: |2><1| per atom
        ops = [raising(spec, 1, k) for k in range(n)]
        out.append((ops, np.eye(n) * s.incoherent_w * s.branching_ratio))
    return out


def channels_for(spec: EnsembleSpec, couplings: CouplingSet,
                 interference: bool = True) -> list[DecayChannel]:
    """Weak decay channels between symmetrized states of adjacent periods."""
    basis = state_basis(spec)
    U = basis_matrix(basis, spec.dim)
    levels = np.array([_level_of(b, spec) for b in basis])
    out = []
    for ops, weights in weak_processes(spec, couplings):
        m = [U.conj().T @ (op @ U) for op in ops]
        nk = len(ops)
        rate = np.real(sum(weights[k, l] * m[k] * m[l].conj() for k in range(nk) for l in range(nk)))
        for v, u in zip(*np.nonzero(np.abs(rate) > DROP_TOL)):
            out.append(DecayChannel(basis[u].name, basis[v].name, abs(float(rate[v, u])),
                                    (int(levels[u]), int(levels[v])), int(u), int(v),
                                    weight=complex(abs(rate[v, u]))))
        if not interference:
            continue
        # w[v, u, u'] = <v|R(|u><u'|)|v>
        w = sum(weights[k, l] * m[k][:, :, None] * m[l].conj()[:, None, :]
                for k in range(nk) for l in range(nk))
        for v, u, u2 in zip(*np.nonzero(np.abs(w) > DROP_TOL)):
            if u == u2 or levels[u] != levels[u2]:
                continue
            out.append(DecayChannel(basis[u].name, basis[v].name, 0.0, (int(levels[u]), int(levels[v])),
                                    int(u), int(v), partner_index=int(u2), weight=complex(w[v, u, u2])))
    return out


def populations(spec: EnsembleSpec, rho: np.ndarray) -> np.ndarray:
    """Populations of ``rho`` in the symmetrized (or single-atom) basis."""
    return np.real(np.diag(in_state_basis(spec, rho)))


def in_state_basis(spec: EnsembleSpec, rho: np.ndarray) -> np.ndarray:
    U = basis_matrix(state_basis(spec), spec.dim)
    return U.conj().T @ rho @ U


def rates_by_simplified_scheme(channels: Sequence[DecayChannel], qss: Sequence[QuasiSteadyState],
                               spec: EnsembleSpec) -> RateMatrix:
    qss = sorted(qss, key=lambda q: q.level)
    basis = state_basis(spec)
    levels = [_level_of(b, spec) for b in basis]
    rhos = [in_state_basis(spec, q.rho_ss) for q in qss]
    n = len(qss)
    p = np.zeros((n, n))
    coherent = np.zeros((n, n))
    for ch in channels:
        i, j = ch.crossing
        if not 0 <= ch.from_index < len(basis) or levels[ch.from_index] != i:
            raise ConfigurationError(f"channel {ch.from_state}->{ch.to_state} does not start in I{i}")
        if ch.is_interference:
            term = (ch.weight * rhos[i][ch.from_index, ch.partner_index]).real
            p[i, j] += term
            coherent[i, j] += term
        else:
            p[i, j] += ch.rate * rhos[i][ch.from_index, ch.from_index].real
    off = max((abs(p[i, j]) for i in range(n) for j in range(n) if abs(i - j) > 1), default=0.0)
    return RateMatrix([p[k, k + 1] for k in range(n - 1)], [p[k + 1, k] for k in range(n - 1)],
                      "simplified", off_chain=off, meta={"interference": coherent})
