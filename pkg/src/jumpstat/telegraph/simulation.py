"""Monte Carlo sampling of the intensity telegraph process.

The chain is sampled exactly: exponential holding times with the total
exit rate (inverse CDF) and a branch chosen by rate ratio. Uniforms come
from numpy's PCG64 generator in fixed-size blocks, so a given seed yields
the same event list whichever kernel backend is active.
"""

from __future__ import annotations

import logging
import math
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import ConfigurationError, InvariantViolationError
from ..rates.matrix import RateMatrix

log = logging.getLogger(__name__)

if os.environ.get("JUMPSTAT_PURE_PYTHON") == "1":
    from . import _pykernels as _k
    BACKEND = "python"
else:
    try:
        from . import _kernels as _k
        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _pykernels as _k
        BACKEND = "python"

RNG_NAME = "numpy.random.PCG64"
BLOCK = 65536  # uniform pairs drawn per refill
RULES = ("net", "any")


@dataclass(frozen=True)
class TelegraphTrajectory:
    """Jump times and the level entered at each time.

    ``start_level`` is the level occupied at t = 0.
    """

    times: np.ndarray
    levels: np.ndarray
    start_level: int
    t_end: float
    seed: int | None = None
    n_levels: int | None = None
    absorbed: bool = False

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        lv = np.asarray(self.levels, dtype=np.int64)
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "levels", lv)
        if t.shape != lv.shape:
            raise InvariantViolationError("times and levels differ in length")
        if t.size:
            if np.any(np.diff(t) <= 0) or t[0] < 0 or t[-1] > self.t_end:
                raise InvariantViolationError("event times must increase strictly within [0, t_end]")
            steps = np.diff(np.concatenate(([self.start_level], lv)))
            if np.any(np.abs(steps) != 1):
                raise InvariantViolationError("levels must change by one per event")
            top = self.n_levels - 1 if self.n_levels else np.inf
            if lv.min() < 0 or lv.max() > top:
                raise InvariantViolationError("level outside the chain")

    @property
    def events(self) -> list[tuple[float, int]]:
        return list(zip(self.times.tolist(), self.levels.tolist()))

    def __len__(self):
        return self.times.size

    def occupation(self) -> np.ndarray:
        """Fraction of [0, t_end] spent in each level."""
        n = self.n_levels or int(max(self.levels.max(initial=0), self.start_level)) + 1
        edges = np.concatenate(([0.0], self.times, [self.t_end]))
        lv = np.concatenate(([self.start_level], self.levels))
        return np.bincount(lv, weights=np.diff(edges), minlength=n) / self.t_end

    def to_text(self) -> str:
        """Two columns (time, level); the first row is the start level at t = 0."""
        lines = [f"# telegraph trajectory t_end={self.t_end!r} seed={self.seed} rng={RNG_NAME}",
                 "# time level", f"0.0 {self.start_level}"]
        lines += [f"{t!r} {lv}" for t, lv in zip(self.times.tolist(), self.levels.tolist())]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, n_levels: int | None = None) -> "TelegraphTrajectory":
        t_end, seed = None, None
        rows = []
        for line in text.splitlines():
            if line.startswith("#"):
                for tok in line[1:].split():
                    key, _, val = tok.partition("=")
                    if key == "t_end":
                        t_end = float(val)
                    elif key == "seed" and val != "None":
                        seed = int(val)
            elif line.strip():
                a, b = line.split()
                rows.append((float(a), int(b)))
        if t_end is None or not rows:
            raise ConfigurationError("not a trajectory file")
        times = np.array([r[0] for r in rows[1:]])
        levels = np.array([r[1] for r in rows[1:]], dtype=np.int64)
        return cls(times, levels, rows[0][1], t_end, seed, n_levels)


@dataclass(frozen=True)
class JumpStatistics:
    """Multi-jump counts for one or more trajectories.

    Standard errors treat the counts as compound Poisson: overlapping
    multi-jumps come in clusters, and the variance is the sum of squared
    cluster sizes.
    """

    n_double: int
    n_triple: int
    t_total: float
    window: float
    n_events: int = 0
    sumsq_double: int = 0
    sumsq_triple: int = 0
    rule: str = "net"
    triple_span: bool = False
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.rule == "net" and self.n_triple > self.n_double:
            raise InvariantViolationError("more triple than double jumps")

    @property
    def rate_double(self) -> float:
        return self.n_double / self.t_total

    @property
    def rate_triple(self) -> float:
        return self.n_triple / self.t_total

    @property
    def se_double(self) -> float:
        return math.sqrt(max(self.sumsq_double, 1)) / self.t_total

    @property
    def se_triple(self) -> float:
        return math.sqrt(max(self.sumsq_triple, 1)) / self.t_total

    @property
    def rates(self) -> dict[str, float]:
        return {"n_DJ": self.rate_double, "n_DJ_se": self.se_double,
                "n_TJ": self.rate_triple, "n_TJ_se": self.se_triple}

    def merge(self, other: "JumpStatistics") -> "JumpStatistics":
        if (other.window, other.rule, other.triple_span) != (self.window, self.rule, self.triple_span):
            raise ConfigurationError("cannot merge statistics with different counting settings")
        return JumpStatistics(self.n_double + other.n_double, self.n_triple + other.n_triple,
                              self.t_total + other.t_total, self.window, self.n_events + other.n_events,
                              self.sumsq_double + other.sumsq_double,
                              self.sumsq_triple + other.sumsq_triple, self.rule, self.triple_span)

    def to_text(self) -> str:
        rows = [("n_double", self.n_double), ("n_triple", self.n_triple), ("n_events", self.n_events),
                ("t_total", repr(self.t_total)), ("T_W", repr(self.window)), ("rule", self.rule),
                ("triple_span", self.triple_span)]
        rows += [(k, repr(v)) for k, v in self.rates.items()]
        rows += [(k, v) for k, v in self.extra.items()]
        return "".join(f"{k} = {v}\n" for k, v in rows)


def _check_rates(p: RateMatrix):
    if any(r < 0 for r in (*p.up, *p.down)):
        raise ConfigurationError("rates must be non-negative")


def simulate(p: RateMatrix, t_end: float, seed: int | np.random.SeedSequence | None = None,
             start: int | None = None) -> TelegraphTrajectory:
    """Sample one trajectory of the birth-death chain on [0, t_end].

    ``start`` defaults to a draw from the stationary distribution.
    """
    _check_rates(p)
    if not t_end > 0:
        raise ConfigurationError("t_end must be positive")
    rng = np.random.Generator(np.random.PCG64(seed))
    up = np.asarray(list(p.up) + [0.0], dtype=float)
    down = np.asarray([0.0] + list(p.down), dtype=float)
    n = p.n_levels
    if start is None:
        try:
            pi = p.stationary()
        except ZeroDivisionError:
            pi = np.full(n, 1.0 / n)
        start = int(np.searchsorted(np.cumsum(pi), rng.random() * pi.sum(), side="right"))
        start = min(start, n - 1)
    if not 0 <= start < n:
        raise ConfigurationError("start level outside the chain")
    # expected number of events sets the first buffer size
    q_mean = float(np.dot(p.stationary() if all(d > 0 for d in p.down) else np.full(n, 1 / n),
                          up[:n] + down[:n]))
    cap = max(1024, int(1.2 * q_mean * t_end) + 1024)
    times = np.empty(cap)
    levels = np.empty(cap, dtype=np.int64)
    n_out, level, t, absorbed = 0, start, 0.0, False
    while t < t_end:
        u = rng.random(2 * BLOCK)
        offset = 0
        while offset < BLOCK and t < t_end:
            if n_out == times.size:
                times = np.resize(times, 2 * times.size)
                levels = np.resize(levels, 2 * levels.size)
            k, level, t, used, absorbed = _k.advance(up, down, level, t, t_end, u[2 * offset:],
                                                     times, levels, n_out)
            n_out += k
            offset += used
            if absorbed:
                break
        if absorbed:
            warnings.warn(f"level {level} is absorbing (all exit rates zero)", stacklevel=2)
            break
    return TelegraphTrajectory(times[:n_out].copy(), levels[:n_out].copy(), start, float(t_end),
                               seed if isinstance(seed, (int, type(None))) else None, n, absorbed)


def count_multijumps(traj: TelegraphTrajectory, window: float, rule: str = "net",
                     triple_span: bool = False, max_exit_rate: float | None = None) -> JumpStatistics:
    """Count double and triple jumps with sliding windows.

    rule="net": consecutive same-direction steps (net change +-2 or +-3).
    rule="any": any consecutive steps.
    A triple needs both gaps shorter than ``window``; with ``triple_span``
    the first and third event must lie within ``window`` instead.
    """
    if rule not in RULES:
        raise ConfigurationError(f"unknown counting rule {rule!r}")
    if not window > 0:
        raise ConfigurationError("window must be positive")
    if max_exit_rate is None and len(traj) > 1:
        max_exit_rate = 1.0 / float(np.median(np.diff(traj.times)))
    if max_exit_rate and max_exit_rate * window > 0.1:
        warnings.warn(f"window {window:g} is not short against the holding times", stacklevel=2)
    n2, n3, s2, s3 = _k.count(np.ascontiguousarray(traj.times), np.ascontiguousarray(traj.levels),
                              int(traj.start_level), float(window), rule == "any", bool(triple_span))
    return JumpStatistics(int(n2), int(n3), traj.t_end, float(window), len(traj), int(s2), int(s3),
                          rule, bool(triple_span))


def _one_stream(args):
    p, t_end, seed_seq, window, rule, triple_span = args
    traj = simulate(p, t_end, seed_seq)
    return count_multijumps(traj, window, rule, triple_span, max_exit_rate=_max_exit(p))


def _max_exit(p: RateMatrix) -> float:
    up = list(p.up) + [0.0]
    down = [0.0] + list(p.down)
    return max(u + d for u, d in zip(up, down))


def run_statistics(p: RateMatrix, t_end: float, window: float, seed: int = 0, n_streams: int = 1,
                   jobs: int = 1, rule: str = "net", triple_span: bool = False) -> JumpStatistics:
    """Simulate ``n_streams`` independent trajectories of length ``t_end`` and merge the counts.

    Streams use spawned seed sequences, so the result depends on (seed,
    n_streams) but not on ``jobs``.
    """
    children = np.random.SeedSequence(seed).spawn(n_streams)
    tasks = [(p, t_end, c, window, rule, triple_span) for c in children]
    if jobs > 1 and n_streams > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_one_stream, tasks))
    else:
        parts = [_one_stream(t) for t in tasks]
    out = parts[0]
    for s in parts[1:]:
        out = out.merge(s)
    return out
