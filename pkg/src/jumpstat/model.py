"""Level schemes, multi-atom bases and intensity subspaces.

Rates are measured in units of the strong-transition Einstein coefficient
A3 and lengths in units of the strong-transition wavelength lambda3.

Level labels are 1-based as in the usual level diagrams; product-basis
indices are 0-based and lexicographic (atom 1 is the most significant
digit).
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import ConfigurationError


class SchemeKind(enum.Enum):
    D_THREE_LEVEL = "d"
    FOUR_LEVEL = "four"


# j -> (upper, lower): S_j^+ = |upper><lower|
TRANSITIONS = {
    SchemeKind.D_THREE_LEVEL: {1: (2, 1), 2: (3, 2), 3: (3, 1)},
    SchemeKind.FOUR_LEVEL: {1: (2, 1), 2: (4, 2), 3: (3, 1), 4: (4, 1)},
}

DARK_LEVEL = 2
N_LEVELS = {SchemeKind.D_THREE_LEVEL: 3, SchemeKind.FOUR_LEVEL: 4}


@dataclass(frozen=True)
class LevelScheme:
    """Single-atom parameters.

    Parameters
    ----------
    kind : SchemeKind
    einstein : mapping j -> A_j
        Einstein coefficients. Missing transitions default to zero.
    rabi : float
        Rabi frequency of the laser on the 1-3 transition.
    incoherent_w : float
        Incoherent pumping rate of the 1-4 transition (four-level only).
    detuning : float
        Laser detuning on the 1-3 transition.
    wavelengths : mapping j -> lambda_j
        Transition wavelengths in units of lambda3.
    """

    kind: SchemeKind
    einstein: Mapping[int, float]
    rabi: float
    incoherent_w: float = 0.0
    detuning: float = 0.0
    wavelengths: Mapping[int, float] = field(default_factory=dict)

    def __post_init__(self):
        allowed = TRANSITIONS[self.kind]
        einstein = {j: float(self.einstein.get(j, 0.0)) for j in allowed}
        extra = set(self.einstein) - set(allowed)
        if extra:
            raise ConfigurationError(f"unknown transitions {sorted(extra)} for {self.kind.name}")
        if any(a < 0 for a in einstein.values()):
            raise ConfigurationError("Einstein coefficients must be non-negative")
        if self.rabi < 0 or self.incoherent_w < 0:
            raise ConfigurationError("rabi and incoherent_w must be non-negative")
        if self.kind is SchemeKind.D_THREE_LEVEL and self.incoherent_w != 0:
            raise ConfigurationError("incoherent driving only exists in the four-level scheme")
        object.__setattr__(self, "einstein", einstein)
        lams = {int(j): float(v) for j, v in self.wavelengths.items()}
        lams.setdefault(3, 1.0)  # lengths are measured in units of lambda3
        object.__setattr__(self, "wavelengths", lams)

    @property
    def d(self) -> int:
        return N_LEVELS[self.kind]

    @property
    def transitions(self) -> dict[int, tuple[int, int]]:
        return TRANSITIONS[self.kind]

    @property
    def bright_levels(self) -> tuple[int, ...]:
        return tuple(lv for lv in range(1, self.d + 1) if lv != DARK_LEVEL)

    @property
    def weak_scale(self) -> float:
        """Largest rate driving transitions between intensity periods."""
        a = self.einstein
        if self.kind is SchemeKind.D_THREE_LEVEL:
            return max(a[1], a[2])
        return max(a[1], self.incoherent_w * self.branching_ratio)

    @property
    def branching_ratio(self) -> float:
        """Probability that level 4 decays into the dark level."""
        if self.kind is not SchemeKind.FOUR_LEVEL:
            return 0.0
        a2, a4 = self.einstein[2], self.einstein[4]
        return a2 / (a2 + a4) if a2 + a4 > 0 else 0.0

    def hierarchy_ratio(self) -> float:
        """min(strong) / max(weak); inf when the weak rates vanish."""
        strong = min(self.rabi, self.einstein[3])
        weak = self.weak_scale
        return math.inf if weak == 0 else strong / weak

    def hierarchy_ok(self, threshold: float = 100.0) -> bool:
        return self.hierarchy_ratio() >= threshold


def d_system(a1: float, a2: float, rabi: float, a3: float = 1.0, detuning: float = 0.0,
             wavelengths: Mapping[int, float] | None = None) -> LevelScheme:
    return LevelScheme(SchemeKind.D_THREE_LEVEL, {1: a1, 2: a2, 3: a3}, rabi,
                       detuning=detuning, wavelengths=wavelengths or {})


def four_level(a1: float, a2: float, a4: float, w: float, rabi: float, a3: float = 1.0,
               detuning: float = 0.0, wavelengths: Mapping[int, float] | None = None) -> LevelScheme:
    return LevelScheme(SchemeKind.FOUR_LEVEL, {1: a1, 2: a2, 3: a3, 4: a4}, rabi,
                       incoherent_w=w, detuning=detuning, wavelengths=wavelengths or {})


@dataclass(frozen=True)
class EnsembleSpec:
    scheme: LevelScheme
    n_atoms: int
    geometry: object = None  # coupling.Geometry; kept untyped to avoid a cycle

    def __post_init__(self):
        if self.n_atoms not in (1, 2, 3):
            raise ConfigurationError("n_atoms must be 1, 2 or 3")

    @property
    def dim(self) -> int:
        return self.scheme.d ** self.n_atoms


@dataclass(frozen=True)
class BasisState:
    """A basis vector given by its expansion in the product basis.

    ``label`` is a tuple such as ``("product", 1, 3)``, ``("s", 1, 2)`` or
    ``("b", 1, 3, 3)``; ``coefficients`` pairs product indices with
    amplitudes.
    """

    label: tuple
    coefficients: tuple[tuple[int, complex], ...]

    def vector(self, dim: int) -> np.ndarray:
        v = np.zeros(dim, dtype=complex)
        for idx, amp in self.coefficients:
            v[idx] += amp
        return v

    @property
    def name(self) -> str:
        kind, *idx = self.label
        if kind == "product":
            return "|" + "".join(map(str, idx)) + ">"
        return f"{kind}{''.join(map(str, idx))}" if idx else kind


def product_index(levels: Sequence[int], d: int) -> int:
    """Lexicographic index of the product state |l1 l2 ...> (1-based levels)."""
    idx = 0
    for lv in levels:
        idx = idx * d + (lv - 1)
    return idx


def product_levels(index: int, d: int, n: int) -> tuple[int, ...]:
    out = []
    for _ in range(n):
        index, r = divmod(index, d)
        out.append(r + 1)
    return tuple(reversed(out))


def build_product_basis(spec: EnsembleSpec) -> list[BasisState]:
    d, n = spec.scheme.d, spec.n_atoms
    return [BasisState(("product",) + levels, ((product_index(levels, d), 1.0 + 0j),))
            for levels in itertools.product(range(1, d + 1), repeat=n)]


def _state(label, terms, d):
    coeffs: dict[int, complex] = {}
    for amp, levels in terms:
        k = product_index(levels, d)
        coeffs[k] = coeffs.get(k, 0) + amp
    return BasisState(label, tuple((k, complex(v)) for k, v in coeffs.items() if v != 0))


def _two_atom_basis(d: int) -> list[BasisState]:
    out = [_state(("g",), [(1.0, (1, 1))], d)]
    out += [_state(("e", i), [(1.0, (i, i))], d) for i in range(2, d + 1)]
    r = 1 / math.sqrt(2)
    for i, j in itertools.combinations(range(1, d + 1), 2):
        out.append(_state(("s", i, j), [(r, (i, j)), (r, (j, i))], d))
        out.append(_state(("a", i, j), [(r, (i, j)), (-r, (j, i))], d))
    return out


def _three_atom_basis(d: int) -> list[BasisState]:
    out = [_state(("g",), [(1.0, (1, 1, 1))], d)]
    out += [_state(("e", i), [(1.0, (i, i, i))], d) for i in range(2, d + 1)]
    r3, r6, r2 = 1 / math.sqrt(3), 1 / math.sqrt(6), 1 / math.sqrt(2)
    for i, j in itertools.permutations(range(1, d + 1), 2):
        ijj, jji, jij = (i, j, j), (j, j, i), (j, i, j)
        out.append(_state(("s", i, j, j), [(r3, ijj), (r3, jji), (r3, jij)], d))
        out.append(_state(("b", i, j, j), [(2 * r6, ijj), (-r6, jji), (-r6, jij)], d))
        out.append(_state(("c", i, j, j), [(r2, jji), (-r2, jij)], d))
    r12 = 1 / math.sqrt(12)
    for i, j, k in itertools.combinations(range(1, d + 1), 3):
        p1, p2, p3 = (i, j, k), (j, k, i), (k, i, j)
        p4, p5, p6 = (i, k, j), (j, i, k), (k, j, i)
        out.append(_state(("s", i, j, k), [(r6, p) for p in (p1, p2, p3, p4, p5, p6)], d))
        out.append(_state(("a", i, j, k), [(r6, p1), (r6, p2), (r6, p3), (-r6, p4), (-r6, p5), (-r6, p6)], d))
        out.append(_state(("b", i, j, k), [(2 * r12, p1), (-r12, p2), (-r12, p3),
                                           (2 * r12, p4), (-r12, p5), (-r12, p6)], d))
        out.append(_state(("c", i, j, k), [(0.5, p2), (-0.5, p3), (-0.5, p5), (0.5, p6)], d))
        out.append(_state(("d", i, j, k), [(2 * r12, p1), (-r12, p2), (-r12, p3),
                                           (-2 * r12, p4), (r12, p5), (r12, p6)], d))
        out.append(_state(("e", i, j, k), [(0.5, p2), (-0.5, p3), (0.5, p5), (-0.5, p6)], d))
    return out


def build_symmetrized_basis(spec: EnsembleSpec) -> list[BasisState]:
    """Dicke-like basis for two or three atoms."""
    if spec.n_atoms == 2:
        return _two_atom_basis(spec.scheme.d)
    if spec.n_atoms == 3:
        return _three_atom_basis(spec.scheme.d)
    raise ConfigurationError("symmetrized basis needs 2 or 3 atoms")


def basis_matrix(states: Sequence[BasisState], dim: int) -> np.ndarray:
    """Columns are the basis states expanded in the product basis."""
    return np.column_stack([s.vector(dim) for s in states])


def state_basis(spec: EnsembleSpec) -> list[BasisState]:
    """Symmetrized basis when there is one, product basis otherwise."""
    return build_product_basis(spec) if spec.n_atoms == 1 else build_symmetrized_basis(spec)


@dataclass(frozen=True)
class IntensitySubspace:
    """Product states with exactly ``level`` bright atoms.

    ``sectors`` lists, for every choice of bright atoms, the product indices
    with those atoms in {1, 3} and the others in the dark level. These are
    the blocks left invariant by the strong dynamics.
    """

    level: int
    indices: tuple[int, ...]
    sectors: tuple[tuple[int, ...], ...]
    bright_sets: tuple[tuple[int, ...], ...]

    @property
    def label(self) -> str:
        return f"I{self.level}"

    @property
    def core(self) -> tuple[int, ...]:
        return tuple(sorted(itertools.chain.from_iterable(self.sectors)))


def intensity_subspaces(spec: EnsembleSpec) -> list[IntensitySubspace]:
    d, n = spec.scheme.d, spec.n_atoms
    by_level: dict[int, list[int]] = {k: [] for k in range(n + 1)}
    for idx in range(d ** n):
        levels = product_levels(idx, d, n)
        by_level[sum(lv != DARK_LEVEL for lv in levels)].append(idx)
    out = []
    for k in range(n + 1):
        sets = tuple(itertools.combinations(range(n), k))
        sectors = []
        for bright in sets:
            choices = [(1, 3) if a in bright else (DARK_LEVEL,) for a in range(n)]
            sectors.append(tuple(sorted(product_index(c, d) for c in itertools.product(*choices))))
        out.append(IntensitySubspace(k, tuple(by_level[k]), tuple(sectors), sets))
    return out
