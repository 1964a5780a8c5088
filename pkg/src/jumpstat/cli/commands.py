"""Subcommand implementations. Each returns (text, exit_status)."""

from __future__ import annotations

import warnings

import numpy as np

from .. import __version__
from ..errors import ConfigurationError
from ..rates import RateMatrix
from ..sweep import SWEEP_COLUMNS, auto_window, independent_rates, rates_over, sweep_table
from ..telegraph import RNG_NAME, analytic_djr, analytic_tjr, run_statistics, simulate
from .. import verification
from .config import SweepConfig


def header(cfg: SweepConfig | None, extra: list[str] = ()) -> list[str]:
    lines = [f"# jumpstat v{__version__}"]
    if cfg is not None:
        lines += [f"# {line}" for line in cfg.echo()]
    lines += [f"# {line}" for line in extra]
    return lines


def _rate_names(n_levels: int) -> list[str]:
    up = [f"p{k}{k + 1}" for k in range(n_levels - 1)]
    down = [f"p{k + 1}{k}" for k in range(n_levels - 1)]
    return up + down


def _num(x: float) -> str:
    return f"{x:.12e}"


def cmd_rates(cfg: SweepConfig, rs=None, independent: bool = False, jobs: int = 1):
    scheme = cfg.scheme()
    base = independent_rates(scheme, cfg.n_atoms)
    names = _rate_names(base.n_levels)
    lines = header(cfg, ["deviation = max relative deviation from independent atoms (r -> infinity)"])
    lines.append(",".join(["r", "method"] + names + ["deviation"]))
    if independent:
        lines.append(",".join(["inf", "independent"] + [_num(v) for v in base.up + base.down] + [_num(0.0)]))
        return "\n".join(lines) + "\n", 0
    rs = cfg.r_values() if rs is None else np.asarray(rs, dtype=float)
    if cfg.n_atoms == 1:
        raise ConfigurationError("a single atom has no distance dependence; use --independent")
    results = rates_over(scheme, cfg.n_atoms, rs, cfg.methods, cfg.coupled, jobs)
    for r, res in zip(rs, results):
        for method in cfg.methods:
            m = res[method]
            dev = float(m.relative_deviation(base).max())
            lines.append(",".join([repr(float(r)), method] + [_num(v) for v in m.up + m.down] + [_num(dev)]))
    return "\n".join(lines) + "\n", 0


def cmd_sweep(cfg: SweepConfig):
    if cfg.n_atoms != 3:
        raise ConfigurationError("multi-jump sweeps need three atoms (four intensity levels)")
    rows, window = sweep_table(cfg.scheme(), cfg.r_values(), cfg.window)
    lines = header(cfg, [f"T_W = {window!r}", "dev_* = relative deviation from independent atoms"])
    lines.append(",".join(SWEEP_COLUMNS))
    lines += [",".join([repr(float(row[0]))] + [_num(v) for v in row[1:]]) for row in rows]
    return "\n".join(lines) + "\n", 0


def gnuplot_stub(data_file: str) -> str:
    return f"""# gnuplot script for {data_file}
set datafile separator ","
set key autotitle columnhead
set xlabel "r [lambda3]"
set multiplot layout 2,1
set ylabel "n_DJ"
plot "{data_file}" using 1:2 with lines title "exact", \\
     "" using 1:3 with lines dt 2 title "first order", \\
     "" using 1:4 with lines dt 3 title "independent"
set ylabel "n_TJ"
plot "{data_file}" using 1:5 with lines title "exact", \\
     "" using 1:6 with lines dt 2 title "first order", \\
     "" using 1:7 with lines dt 3 title "independent"
unset multiplot
"""


def _simulation_rates(cfg: SweepConfig, r: float | None) -> tuple[RateMatrix, str]:
    mc = cfg.monte_carlo
    if mc.fixture == "unit":
        return verification.MC_FIXTURE, "fixture unit"
    if mc.fixture != "none":
        raise ConfigurationError(f"unknown fixture {mc.fixture!r}")
    if cfg.n_atoms != 3:
        raise ConfigurationError("multi-jump statistics need three atoms")
    r = cfg.r_min if r is None else r
    method = cfg.methods[0]
    p = rates_over(cfg.scheme(), 3, [r], [method], cfg.coupled)[0][method]
    return p, f"{method} at r = {r!r}"


def cmd_simulate(cfg: SweepConfig, r: float | None = None, trajectory_path: str | None = None, jobs: int = 1):
    mc = cfg.monte_carlo
    if mc is None:
        raise ConfigurationError("simulate needs a [monte_carlo] section or --transitions/--t-end")
    if mc.rule not in ("net", "any"):
        raise ConfigurationError(f"unknown counting rule {mc.rule!r}")
    if mc.streams < 1:
        raise ConfigurationError("streams must be at least 1")
    p, source = _simulation_rates(cfg, r)
    window = cfg.window if cfg.window is not None else auto_window(p)
    p_max = max(p.up + p.down)
    if p_max * window > 0.1:
        warnings.warn(f"p_max * T_W = {p_max * window:.3g} > 0.1; leading-order formulas are unreliable",
                      stacklevel=2)
    pi = p.stationary()
    up, down = p.exit_rates()
    t_end = mc.t_end if mc.t_end is not None else mc.transitions / float(pi @ (up + down))
    per_stream = t_end / mc.streams
    st = run_statistics(p, per_stream, window, mc.seed, mc.streams, jobs, mc.rule, mc.triple_span)
    if trajectory_path:
        traj = simulate(p, per_stream, np.random.SeedSequence(mc.seed).spawn(mc.streams)[0])
        with open(trajectory_path, "w") as fh:
            fh.write(traj.to_text())
    dj, tj = analytic_djr(p, window), analytic_tjr(p, window)
    lines = header(cfg, [f"rates = {source}", f"rng = {RNG_NAME}", f"T_W = {window!r}"])
    lines += [f"{k} = {_num(v)}" for k, v in zip(_rate_names(p.n_levels), p.up + p.down)]
    lines.append(st.to_text().rstrip())
    lines += [f"n_DJ_analytic = {dj!r}", f"n_TJ_analytic = {tj!r}",
              f"z_DJ = {(st.rate_double - dj) / st.se_double:.4f}",
              f"z_TJ = {(st.rate_triple - tj) / st.se_triple:.4f}"]
    return "\n".join(lines) + "\n", 0


def cmd_verify(keys=None):
    results = verification.run_all(keys)
    lines = [f"# jumpstat v{__version__} verification"] + [r.line() for r in results]
    failed = [r.key for r in results if not r.passed]
    lines.append(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return "\n".join(lines) + "\n", 1 if failed else 0
