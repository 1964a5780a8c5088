"""Transition rates between intensity periods by three independent routes."""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Sequence

from ..coupling import CouplingSet, build_coupling_set
from ..errors import UnsupportedConfigurationError
from ..liouville import SplitGenerator, split_generator
from ..model import EnsembleSpec, SchemeKind, intensity_subspaces
from .closed import closed_form_rates, mean_ground_count, rho_ss3_populations
from .matrix import RateMatrix, read_table
from .perturbative import PerturbativeResult, perturbative_evolution
from .projection import alpha_matrix, rates_by_projection
from .simplified import DecayChannel, channels_for, populations, rates_by_simplified_scheme
from .steady import QuasiSteadyState, quasi_steady_states

# Collective couplings kept when comparing methods. For the four-level
# scheme the C^(2), C^(4) terms would alter the |4> branching ratio, which
# the closed forms treat as A2/(A2+A4).
DEFAULT_COUPLED = {SchemeKind.D_THREE_LEVEL: (1, 2, 3), SchemeKind.FOUR_LEVEL: (1, 3)}

METHODS = ("projection", "simplified", "closed_exact", "closed_first_order")


class RateProblem:
    """Bundles a spec with its couplings and caches the expensive pieces."""

    def __init__(self, spec: EnsembleSpec, couplings: CouplingSet | None = None,
                 coupled_transitions: Sequence[int] | None = None, detuning: bool = True):
        self.spec = spec
        if couplings is None:
            js = DEFAULT_COUPLED[spec.scheme.kind] if coupled_transitions is None else coupled_transitions
            couplings = build_coupling_set(spec.geometry, spec.scheme, js) if spec.n_atoms > 1 else CouplingSet.empty()
        self.couplings = couplings
        self.detuning = detuning

    @cached_property
    def generator(self) -> SplitGenerator:
        return split_generator(self.spec, self.couplings, self.detuning)

    @cached_property
    def subspaces(self):
        return intensity_subspaces(self.spec)

    @cached_property
    def qss(self) -> list[QuasiSteadyState]:
        return quasi_steady_states(self.generator.L0, self.subspaces)

    def projection(self) -> RateMatrix:
        return rates_by_projection(self.generator.L1, self.qss)

    def channels(self) -> list[DecayChannel]:
        return channels_for(self.spec, self.couplings)

    def simplified(self) -> RateMatrix:
        return rates_by_simplified_scheme(self.channels(), self.qss, self.spec)

    def closed(self) -> tuple[RateMatrix, RateMatrix]:
        c3 = self.couplings.get(0, 1, 3) if self.spec.n_atoms > 1 else 0j
        if self.spec.n_atoms == 3:
            values = [self.couplings.get(k, l, 3) for k, l in ((0, 1), (0, 2), (1, 2))]
            if max(abs(v - c3) for v in values) > 1e-12 * max(1.0, abs(c3)):
                raise UnsupportedConfigurationError("closed forms need identical pair couplings")
        delta = self.spec.scheme.detuning if self.detuning else 0.0
        return closed_form_rates(self.spec, c3, delta)

    def rates(self, methods: Iterable[str] = METHODS) -> dict[str, RateMatrix]:
        methods = list(methods)
        out = {}
        for m in methods:
            if m == "projection":
                out[m] = self.projection()
            elif m == "simplified":
                out[m] = self.simplified()
            elif m in ("closed_exact", "closed_first_order"):
                exact, first = self.closed()
                out[m] = exact if m == "closed_exact" else first
            else:
                raise ValueError(f"unknown method {m!r}")
        return out


__all__ = [
    "DEFAULT_COUPLED", "METHODS", "DecayChannel", "PerturbativeResult", "QuasiSteadyState",
    "RateMatrix", "RateProblem", "alpha_matrix", "channels_for", "closed_form_rates",
    "mean_ground_count", "perturbative_evolution", "populations", "quasi_steady_states",
    "rates_by_projection", "rates_by_simplified_scheme", "read_table", "rho_ss3_populations",
]
