"""Dipole-dipole coupling parameters from atom geometry."""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import ConfigurationError
from .model import LevelScheme


def coupling_parameter(a_j: float, a: float, theta: float = math.pi / 2) -> complex:
    """Complex coupling C for two dipoles a distance a = 2 pi r / lambda apart.

    ``theta`` is the angle between the dipole moments and the line joining
    the atoms. The real part modifies collective decay rates, the imaginary
    part shifts levels.
    """
    if not a > 0:
        raise ConfigurationError(f"dimensionless distance must be positive, got {a}")
    c2 = math.cos(theta) ** 2
    ia = 1j * a
    bracket = (1 - c2) / ia + (1 / a**2 - 1 / (ia * a**2)) * (1 - 3 * c2)
    return 1.5 * a_j * cmath.exp(ia) * bracket


def coupling_parameter_array(a_j: float, a: np.ndarray, theta: float = math.pi / 2) -> np.ndarray:
    """Vectorized :func:`coupling_parameter`."""
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0):
        raise ConfigurationError("dimensionless distance must be positive")
    c2 = math.cos(theta) ** 2
    ia = 1j * a
    bracket = (1 - c2) / ia + (1 / a**2 - 1 / (ia * a**2)) * (1 - 3 * c2)
    return 1.5 * a_j * np.exp(ia) * bracket


class AnglePolicy(enum.Enum):
    PERPENDICULAR = "perpendicular"
    EXPLICIT = "explicit"
    DIPOLE = "dipole"


@dataclass(frozen=True)
class Geometry:
    """Atom positions (units of lambda3) and the dipole orientation rule.

    Use :meth:`equilateral` for the symmetric preset. With
    ``AnglePolicy.EXPLICIT`` the ``angles`` table maps pairs (k, l), k < l,
    to theta_kl; with ``AnglePolicy.DIPOLE`` the angle is computed from the
    common ``dipole`` direction.
    """

    positions: tuple[tuple[float, float, float], ...]
    policy: AnglePolicy = AnglePolicy.PERPENDICULAR
    angles: Mapping[tuple[int, int], float] = field(default_factory=dict)
    dipole: tuple[float, float, float] | None = None
    preset_r: float | None = None

    def __post_init__(self):
        pos = tuple(tuple(float(x) for x in p) for p in self.positions)
        object.__setattr__(self, "positions", pos)
        for k, l in self.pairs:
            if self.distance(k, l) <= 0:
                raise ConfigurationError(f"atoms {k} and {l} coincide")
        if self.policy is AnglePolicy.DIPOLE and self.dipole is None:
            raise ConfigurationError("dipole policy needs a dipole direction")
        if self.policy is AnglePolicy.EXPLICIT:
            missing = [p for p in self.pairs if p not in self.angles]
            if missing:
                raise ConfigurationError(f"missing angles for pairs {missing}")

    @classmethod
    def equilateral(cls, r: float, n_atoms: int = 3) -> "Geometry":
        if not r > 0:
            raise ConfigurationError("r must be positive")
        corners = [(0.0, 0.0, 0.0), (r, 0.0, 0.0), (r / 2, r * math.sqrt(3) / 2, 0.0)]
        return cls(tuple(corners[:n_atoms]), preset_r=r)

    @property
    def n_atoms(self) -> int:
        return len(self.positions)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        n = self.n_atoms
        return [(k, l) for k in range(n) for l in range(k + 1, n)]

    @property
    def is_equilateral(self) -> bool:
        if self.preset_r is not None:
            return True
        dists = [self.distance(k, l) for k, l in self.pairs]
        return len(dists) <= 1 or max(dists) - min(dists) <= 1e-12 * max(dists)

    def distance(self, k: int, l: int) -> float:
        return float(np.linalg.norm(np.subtract(self.positions[l], self.positions[k])))

    def angle(self, k: int, l: int) -> float:
        if self.policy is AnglePolicy.PERPENDICULAR:
            return math.pi / 2
        if self.policy is AnglePolicy.EXPLICIT:
            return float(self.angles[(k, l)])
        sep = np.subtract(self.positions[l], self.positions[k])
        dip = np.asarray(self.dipole, dtype=float)
        cos = np.dot(sep, dip) / (np.linalg.norm(sep) * np.linalg.norm(dip))
        return float(np.arccos(np.clip(cos, -1.0, 1.0)))


@dataclass(frozen=True)
class CouplingSet:
    """Couplings C_kl^(j) and distances a_kl^(j), keyed by ((k, l), j) with k < l."""

    c: Mapping[tuple[tuple[int, int], int], complex]
    a: Mapping[tuple[tuple[int, int], int], float]

    def get(self, k: int, l: int, j: int) -> complex:
        key = ((min(k, l), max(k, l)), j)
        return self.c.get(key, 0j)

    def restricted(self, transitions: Sequence[int]) -> "CouplingSet":
        keep = set(transitions)
        return CouplingSet({k: v for k, v in self.c.items() if k[1] in keep},
                           {k: v for k, v in self.a.items() if k[1] in keep})

    def damping_matrix(self, j: int, n_atoms: int, a_j: float) -> np.ndarray:
        """Collective damping matrix: A_j on the diagonal, Re C_kl^(j) off it."""
        m = np.eye(n_atoms) * a_j
        for k in range(n_atoms):
            for l in range(k + 1, n_atoms):
                m[k, l] = m[l, k] = self.get(k, l, j).real
        return m

    @classmethod
    def empty(cls) -> "CouplingSet":
        return cls({}, {})


def build_coupling_set(geometry: Geometry | None, scheme: LevelScheme,
                       transitions: Sequence[int] | None = None) -> CouplingSet:
    """Couplings for every atom pair and radiative transition."""
    if geometry is None or geometry.n_atoms < 2:
        return CouplingSet.empty()
    js = sorted(scheme.transitions) if transitions is None else sorted(transitions)
    c, a = {}, {}
    for j in js:
        a_j = scheme.einstein[j]
        if a_j == 0:
            continue
        lam = scheme.wavelengths.get(j)
        if lam is None or lam <= 0:
            raise ConfigurationError(f"no wavelength for transition {j}")
        for k, l in geometry.pairs:
            akl = 2 * math.pi * geometry.distance(k, l) / lam
            a[((k, l), j)] = akl
            c[((k, l), j)] = coupling_parameter(a_j, akl, geometry.angle(k, l))
    return CouplingSet(c, a)
