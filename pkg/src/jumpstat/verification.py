"""Cross-method oracle suite behind ``jumpstat verify`` and the acceptance tests.

Each check returns a :class:`CheckResult`; none of them raise on a
numerical mismatch, so a single run reports every failure.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .coupling import CouplingSet, Geometry, build_coupling_set
from .liouville import build_full
from .model import (EnsembleSpec, basis_matrix, build_symmetrized_basis, d_system,
                    four_level, intensity_subspaces)
from .rates import RateMatrix, RateProblem
from .rates.closed import POPULATION_KEYS, mean_ground_count, rho_ss3_populations
from .rates.steady import sector_steady_state
from .sweep import sweep_table
from .telegraph import analytic_djr, analytic_tjr, run_statistics
from .cli.config import OPTIMAL_RABI, PRESETS


@dataclass(frozen=True)
class CheckResult:
    key: str
    title: str
    passed: bool
    measured: float
    limit: float
    seconds: float
    detail: str = ""

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return (f"[{flag}] {self.key:<3} {self.title:<44} measured={self.measured:.3e} "
                f"limit={self.limit:.1e} time={self.seconds:.2f}s {self.detail}").rstrip()


def _rel(a, b) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    scale = np.maximum(np.abs(b), np.finfo(float).tiny)
    return float(np.max(np.abs(a - b) / scale))


def preset_scheme(detuning: float = 0.0):
    v = PRESETS["optimal-effect"]
    return four_level(v["a1"], v["a2"], v["a4"], v["w"], v["rabi"], v["a3"], detuning,
                      {1: v["lambda1"], 2: v["lambda2"], 4: v["lambda4"]})


# 1 ---------------------------------------------------------------------------

def check_single_d(tol: float = 1e-9, time_limit: float = 1.0) -> CheckResult:
    t0 = time.perf_counter()
    a1 = 1e-4
    worst = 0.0
    for rabi in (0.1, 0.3, 1.0, 3.0, 10.0):
        for a2 in (1e-5, 1e-4, 1e-3, 1e-2, 1e-1):
            spec = EnsembleSpec(d_system(a1, a2, rabi), 1)
            p = RateProblem(spec).projection()
            want = (a1, a2 * rabi ** 2 / (1 + 2 * rabi ** 2))
            worst = max(worst, _rel((p.up[0], p.down[0]), want))
    dt = time.perf_counter() - t0
    return CheckResult("1", "single D: projection vs analytic", worst <= tol and dt < time_limit,
                       worst, tol, dt, f"(runtime limit {time_limit:g}s)")


# 2 ---------------------------------------------------------------------------

def check_two_d_upward(tol: float = 1e-9) -> CheckResult:
    t0 = time.perf_counter()
    a1 = 2e-3
    scheme = d_system(a1, 1e-3, 0.7, wavelengths={1: 2.0, 2: 1.5})
    worst = 0.0
    for r in (0.5, 1.0, 2.0, 5.0):
        prob = RateProblem(EnsembleSpec(scheme, 2, Geometry.equilateral(r, 2)))
        for m in (prob.projection(), prob.simplified()):
            worst = max(worst, _rel(m.up[0], 2 * a1))
    return CheckResult("2", "two D: p01 = 2 A1 (projection, simplified)", worst <= tol, worst, tol,
                       time.perf_counter() - t0)


# 3 ---------------------------------------------------------------------------

def three_method_deviation(rs=None, detunings=(0.0, 0.5)) -> float:
    rs = np.linspace(0.5, 10.0, 10) if rs is None else rs
    worst = 0.0
    for delta in detunings:
        scheme = preset_scheme(delta)
        for r in rs:
            prob = RateProblem(EnsembleSpec(scheme, 3, Geometry.equilateral(float(r))))
            res = prob.rates(("projection", "simplified", "closed_exact"))
            vals = [np.array(m.up + m.down) for m in res.values()]
            for i in range(3):
                for j in range(i + 1, 3):
                    worst = max(worst, _rel(vals[i], vals[j]))
    return worst


def check_three_methods(tol: float = 1e-6, time_limit: float = 60.0) -> CheckResult:
    t0 = time.perf_counter()
    worst = three_method_deviation()
    dt = time.perf_counter() - t0
    return CheckResult("3", "three four-level atoms: three methods agree", worst <= tol and dt < time_limit,
                       worst, tol, dt, f"(runtime limit {time_limit:g}s)")


# 4 ---------------------------------------------------------------------------

def first_order_constants(magnitudes=None, phase: float = 0.7, detuning: float = 0.5):
    """K(|C|) = |<N1>_exact - <N1>_first| / |C|^2 for k = 2, 3 (rows)."""
    m = np.logspace(-4, -2, 9) if magnitudes is None else np.asarray(magnitudes)
    c3 = m * np.exp(1j * phase)
    out = []
    for k in (2, 3):
        ex = mean_ground_count(k, 1.0, OPTIMAL_RABI, detuning, c3, "exact")
        fi = mean_ground_count(k, 1.0, OPTIMAL_RABI, detuning, c3, "first")
        out.append(np.abs(ex - fi) / m ** 2)
    return m, np.array(out)


def check_first_order(slope_tol: float = 0.1, spread: float = 0.10) -> CheckResult:
    """Remainder exact - first order must scale as |C3|^2 over [1e-4, 1e-2].

    A wrong or missing linear term leaves a remainder ~ |C3|, i.e. slope 1.
    """
    t0 = time.perf_counter()
    worst_slope = worst_spread = 0.0
    for delta in (0.0, 0.5):
        for phase in (0.3, 0.7, 2.0):
            m, k = first_order_constants(phase=phase, detuning=delta)
            slopes = np.diff(np.log(k * m ** 2), axis=1) / np.diff(np.log(m))
            worst_slope = max(worst_slope, float(np.max(np.abs(slopes - 2))))
            worst_spread = max(worst_spread, float(np.max(k.max(axis=1) / k.min(axis=1) - 1)))
    ok = worst_slope <= slope_tol and worst_spread <= spread
    return CheckResult("4", "first order: remainder ~ K |C3|^2, K stable", ok, worst_slope, slope_tol,
                       time.perf_counter() - t0, f"(|slope - 2|; K spread {worst_spread:.1%} <= {spread:.0%})")


# 5 ---------------------------------------------------------------------------

_POP_LABELS = {"g": ("g",), "s113": ("s", 3, 1, 1), "b113": ("b", 3, 1, 1), "c113": ("c", 3, 1, 1),
               "s133": ("s", 1, 3, 3), "b133": ("b", 1, 3, 3), "c133": ("c", 1, 3, 3), "e3": ("e", 3)}


def numeric_rho_ss3(r: float, rabi: float = OPTIMAL_RABI) -> tuple[dict[str, float], complex]:
    """Symmetrized populations of the all-bright steady state from the null space."""
    scheme = four_level(1e-6, 0.3, 1.2, 1e-6, rabi, wavelengths={1: 3.574, 2: 1.2454, 4: 0.9229})
    spec = EnsembleSpec(scheme, 3, Geometry.equilateral(r))
    prob = RateProblem(spec, coupled_transitions=(3,))
    sector = intensity_subspaces(spec)[3].sectors[0]
    rho = sector_steady_state(prob.generator.L0, sector)
    basis = build_symmetrized_basis(spec)
    U = basis_matrix(basis, spec.dim)
    pops = np.real(np.diag(U.conj().T @ rho @ U))
    index = {b.label: i for i, b in enumerate(basis)}
    return {k: float(pops[index[lab]]) for k, lab in _POP_LABELS.items()}, prob.couplings.get(0, 1, 3)


def check_rho_ss3(tol: float = 1e-9, sum_tol: float = 1e-12) -> CheckResult:
    t0 = time.perf_counter()
    worst_sum = 0.0
    for rabi in (0.1, OPTIMAL_RABI, 1.0, 3.0):
        pops = rho_ss3_populations(1.0, rabi, 0j)
        worst_sum = max(worst_sum, abs(sum(float(pops[k]) for k in POPULATION_KEYS) - 1))
    worst = 0.0
    for r in (0.5, 1.0, 2.0, 5.0):
        num, c3 = numeric_rho_ss3(r)
        closed = rho_ss3_populations(1.0, OPTIMAL_RABI, c3)
        worst = max(worst, max(abs(float(closed[k]) - num[k]) for k in POPULATION_KEYS))
    ok = worst_sum <= sum_tol and worst <= tol
    return CheckResult("5", "rho_ss,3 closed form vs null space", ok, worst, tol, time.perf_counter() - t0,
                       f"(sum-to-one error {worst_sum:.1e})")


# 6 ---------------------------------------------------------------------------

def check_headline_bound(n_points: int = 200, time_limit: float = 30.0) -> CheckResult:
    t0 = time.perf_counter()
    rs = np.linspace(1.0, 10.0, n_points)
    rows, _ = sweep_table(preset_scheme(0.0), rs)
    dev = np.abs(rows[:, 9])
    near, far = float(dev.max()), float(dev[rs >= 3.0].max())
    dt = time.perf_counter() - t0
    ok = near <= 0.05 and far <= 0.01 and dt < time_limit
    return CheckResult("6", "n_TJ deviation <= 5% (r>=1), <= 1% (r>=3)", ok, near, 0.05, dt,
                       f"(r>=3: {far:.2e} <= 1e-2)")


# 7 ---------------------------------------------------------------------------

MC_FIXTURE = RateMatrix((1.0, 0.8, 0.6), (0.7, 0.9, 1.0), "fixture")
MC_WINDOW = 0.01


def monte_carlo_comparison(p: RateMatrix = MC_FIXTURE, window: float = MC_WINDOW,
                           transitions: int = 2_000_000, seed: int = 2024, streams: int = 4):
    """(statistics, analytic n_DJ, analytic n_TJ, z_DJ, z_TJ)."""
    pi = p.stationary()
    up, down = p.exit_rates()
    t_end = transitions / float(pi @ (up + down)) / streams
    st = run_statistics(p, t_end, window, seed=seed, n_streams=streams)
    dj, tj = analytic_djr(p, window), analytic_tjr(p, window)
    return st, dj, tj, (st.rate_double - dj) / st.se_double, (st.rate_triple - tj) / st.se_triple


def check_monte_carlo(time_limit: float = 120.0) -> CheckResult:
    t0 = time.perf_counter()
    st, dj, tj, zd, zt = monte_carlo_comparison()
    again = monte_carlo_comparison()[0]
    det = (again.n_double, again.n_triple, again.n_events) == (st.n_double, st.n_triple, st.n_events)
    small = max(MC_FIXTURE.up + MC_FIXTURE.down) * MC_WINDOW <= 0.01
    z = max(abs(zd), abs(zt))
    dt = time.perf_counter() - t0
    ok = z <= 3 and det and small and st.n_events >= 1_000_000 and dt < time_limit
    return CheckResult("7", "Monte Carlo vs analytic n_DJ, n_TJ", ok, z, 3.0, dt,
                       f"(sigmas; {st.n_events} transitions, deterministic={det})")


# 8 ---------------------------------------------------------------------------

def supported_specs(r: float = 0.5):
    lams = {1: 3.574, 2: 1.2454, 4: 0.9229}
    schemes = [d_system(1e-3, 2e-3, 0.8, detuning=0.3, wavelengths={1: 2.0, 2: 1.5}),
               four_level(1e-3, 0.3, 1.2, 1e-2, OPTIMAL_RABI, detuning=0.3, wavelengths=lams)]
    for s in schemes:
        for n in (1, 2, 3):
            yield EnsembleSpec(s, n, Geometry.equilateral(r, n) if n > 1 else None)


def trace_defect(spec: EnsembleSpec, n_samples: int = 1000, seed: int = 7) -> float:
    couplings = build_coupling_set(spec.geometry, spec.scheme) if spec.n_atoms > 1 else CouplingSet.empty()
    L = build_full(spec, couplings).matrix
    d = spec.dim
    trace_row = np.eye(d).reshape(-1, order="F")
    functional = L.T @ trace_row  # Tr(L rho) = functional . vec(rho)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(n_samples):
        x = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        rho = (x + x.conj().T) / 2
        worst = max(worst, abs(functional @ rho.reshape(-1, order="F")))
    return worst


def min_damping_eigenvalue(r_over_lambda=(0.05, 0.1, 0.3, 1.0, 3.0)) -> float:
    lams = {1: 3.574, 2: 1.2454, 4: 0.9229}
    worst = np.inf
    for scheme in (d_system(1e-3, 2e-3, 0.8, wavelengths={1: 2.0, 2: 1.5}),
                   four_level(1e-3, 0.3, 1.2, 1e-2, 0.6, wavelengths=lams)):
        for j, a_j in scheme.einstein.items():
            if a_j == 0:
                continue
            for x in r_over_lambda:
                for n in (2, 3):
                    geo = Geometry.equilateral(x * scheme.wavelengths[j], n)
                    m = build_coupling_set(geo, scheme, (j,)).damping_matrix(j, n, a_j)
                    worst = min(worst, float(np.linalg.eigvalsh(m).min() / a_j))
    return worst


def check_generator(tol: float = 1e-10) -> CheckResult:
    t0 = time.perf_counter()
    worst = max(trace_defect(s) for s in supported_specs())
    psd = min_damping_eigenvalue()
    ok = worst < tol and psd >= -1e-12
    return CheckResult("8", "trace preservation and PSD damping", ok, worst, tol, time.perf_counter() - t0,
                       f"(min damping eigenvalue / A_j {psd:.2e})")


CHECKS: dict[str, Callable[[], CheckResult]] = {
    "1": check_single_d, "2": check_two_d_upward, "3": check_three_methods, "4": check_first_order,
    "5": check_rho_ss3, "6": check_headline_bound, "7": check_monte_carlo, "8": check_generator,
}


def run_all(keys=None) -> list[CheckResult]:
    return [CHECKS[k]() for k in (keys or CHECKS)]
