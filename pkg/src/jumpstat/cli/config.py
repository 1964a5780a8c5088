"""Run configuration: presets, INI files and flag overrides.

File format (all sections and keys optional)::

    [jumpstat]
    preset = optimal-effect        ; or custom

    [scheme]
    kind = four                    ; four | d
    a1 = 3e-10
    a2 = 0.3
    a3 = 1.0
    a4 = 1.2
    w = 1e-8
    rabi = 0.5559
    detuning = 0.0
    lambda1 = 3.574
    lambda2 = 1.2454
    lambda4 = 0.9229

    [geometry]
    preset = equilateral
    n_atoms = 3
    coupled = 1, 3                 ; transitions with collective terms, or "all"

    [sweep]
    r_min = 1.0
    r_max = 10.0
    n_points = 100
    window = auto                  ; T_W, or auto = 0.01 / largest rate
    methods = closed_exact, projection

    [monte_carlo]
    transitions = 1000000
    seed = 12345
    streams = 1
    rule = net                     ; net | any
    triple_span = false
    fixture = none                 ; none | unit

Rates are in units of A3, lengths in units of lambda3.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import asdict, dataclass, field, fields, replace
from typing import Any

import numpy as np

from ..errors import ConfigurationError
from ..model import LevelScheme, d_system, four_level
from ..rates import METHODS

OPTIMAL_RABI = 0.5 * math.sqrt(math.sqrt(5) - 1)

# Illustrative values only; they are not taken from any experiment.
PRESETS: dict[str, dict[str, Any]] = {
    "optimal-effect": dict(kind="four", a1=3e-10, a2=0.3, a3=1.0, a4=1.2, w=1e-8, rabi=OPTIMAL_RABI,
                           detuning=0.0, lambda1=3.574, lambda2=1.2454, lambda4=0.9229),
    "custom": {},
}


@dataclass(frozen=True)
class MonteCarloConfig:
    transitions: int = 1_000_000
    t_end: float | None = None
    seed: int = 12345
    streams: int = 1
    rule: str = "net"
    triple_span: bool = False
    fixture: str = "none"


@dataclass(frozen=True)
class SweepConfig:
    preset: str = "custom"
    kind: str | None = None
    a1: float | None = None
    a2: float | None = None
    a3: float = 1.0
    a4: float | None = None
    w: float | None = None
    rabi: float | None = None
    detuning: float = 0.0
    lambda1: float | None = None
    lambda2: float | None = None
    lambda4: float | None = None
    geometry: str = "equilateral"
    n_atoms: int = 3
    coupled: tuple[int, ...] | None = None
    r_min: float = 1.0
    r_max: float = 10.0
    n_points: int = 100
    window: float | None = None
    methods: tuple[str, ...] = ("closed_exact", "projection")
    monte_carlo: MonteCarloConfig | None = field(default=None)

    def __post_init__(self):
        if not self.r_min > 0:
            raise ConfigurationError("r_min must be positive")
        if self.r_max < self.r_min:
            raise ConfigurationError("r_max must not be below r_min")
        if self.n_points < 2:
            raise ConfigurationError("n_points must be at least 2")
        if self.window is not None and not self.window > 0:
            raise ConfigurationError("window must be positive")
        bad = [m for m in self.methods if m not in METHODS]
        if bad:
            raise ConfigurationError(f"unknown methods {bad}; choose from {', '.join(METHODS)}")
        if self.geometry != "equilateral":
            raise ConfigurationError("only the equilateral geometry preset is available")
        if self.n_atoms not in (1, 2, 3):
            raise ConfigurationError("n_atoms must be 1, 2 or 3")

    def scheme(self) -> LevelScheme:
        need = {"kind": self.kind, "rabi": self.rabi, "a1": self.a1, "a2": self.a2}
        if self.kind == "four":
            need.update(a4=self.a4, w=self.w)
        missing = [k for k, v in need.items() if v is None]
        if missing:
            raise ConfigurationError(f"missing scheme parameters: {', '.join(missing)}")
        lams = {j: v for j, v in ((1, self.lambda1), (2, self.lambda2), (4, self.lambda4)) if v is not None}
        if self.kind == "four":
            return four_level(self.a1, self.a2, self.a4, self.w, self.rabi, self.a3, self.detuning, lams)
        if self.kind == "d":
            return d_system(self.a1, self.a2, self.rabi, self.a3, self.detuning, lams)
        raise ConfigurationError(f"unknown scheme kind {self.kind!r}")

    def r_values(self) -> np.ndarray:
        return np.linspace(self.r_min, self.r_max, self.n_points)

    def echo(self) -> list[str]:
        """``key = value`` lines for output headers."""
        out = []
        for f in fields(self):
            v = getattr(self, f.name)
            if f.name == "monte_carlo" and v is None:
                out.append("monte_carlo = none")
            elif isinstance(v, MonteCarloConfig):
                out += [f"monte_carlo.{k} = {x}" for k, x in asdict(v).items()]
            else:
                out.append(f"{f.name} = {_fmt(v)}")
        return out


def _fmt(v) -> str:
    if v is None:
        return "auto"
    if isinstance(v, tuple):
        return ", ".join(map(str, v))
    if isinstance(v, float):
        return repr(v)
    return str(v)


_FLOAT = {"a1", "a2", "a3", "a4", "w", "rabi", "detuning", "lambda1", "lambda2", "lambda4",
          "r_min", "r_max"}
_INT = {"n_atoms", "n_points"}


def _convert(key: str, raw: str):
    raw = raw.strip()
    try:
        if key in _FLOAT:
            return float(raw)
        if key in _INT:
            return int(raw)
        if key == "window":
            return None if raw.lower() == "auto" else float(raw)
        if key == "methods":
            return tuple(m.strip() for m in raw.split(",") if m.strip())
        if key == "coupled":
            return None if raw.lower() in ("all", "default", "") else tuple(int(x) for x in raw.split(","))
    except ValueError as exc:
        raise ConfigurationError(f"bad value for {key}: {raw!r}") from exc
    return raw


def _mc_from(section) -> MonteCarloConfig:
    kw: dict[str, Any] = {}
    try:
        for key, raw in section.items():
            if key in ("transitions", "seed", "streams"):
                kw[key] = int(float(raw))
            elif key == "t_end":
                kw[key] = float(raw)
            elif key == "triple_span":
                kw[key] = section.getboolean(key)
            elif key in ("rule", "fixture"):
                kw[key] = raw.strip()
            else:
                raise ConfigurationError(f"unknown monte_carlo key {key!r}")
    except ValueError as exc:
        raise ConfigurationError(f"bad monte_carlo value: {exc}") from exc
    return MonteCarloConfig(**kw)


def load_config(text: str | None = None, preset: str | None = None,
                overrides: dict[str, Any] | None = None) -> SweepConfig:
    """Merge preset, INI text and overrides (highest priority last)."""
    values: dict[str, Any] = {}
    mc = None
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    if text:
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ConfigurationError(f"cannot parse config: {exc}") from exc
    file_preset = parser.get("jumpstat", "preset", fallback=None)
    name = preset or file_preset or "custom"
    if name not in PRESETS:
        raise ConfigurationError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}")
    values.update(PRESETS[name])
    values["preset"] = name
    known = {f.name for f in fields(SweepConfig)} - {"monte_carlo", "preset"}
    for sec in ("scheme", "geometry", "sweep"):
        if not parser.has_section(sec):
            continue
        for key, raw in parser.items(sec):
            key = "geometry" if (sec, key) == ("geometry", "preset") else key
            if key not in known:
                raise ConfigurationError(f"unknown key {key!r} in [{sec}]")
            values[key] = _convert(key, raw)
    extra = set(parser.sections()) - {"jumpstat", "scheme", "geometry", "sweep", "monte_carlo"}
    if extra:
        raise ConfigurationError(f"unknown sections {sorted(extra)}")
    if parser.has_section("monte_carlo"):
        mc = _mc_from(parser["monte_carlo"])
    for key, v in (overrides or {}).items():
        if v is None:
            continue
        if key.startswith("mc_"):
            mc = replace(mc or MonteCarloConfig(), **{key[3:]: v})
        else:
            values[key] = v
    return SweepConfig(monte_carlo=mc, **values)
