"""Birth-death rate matrices between intensity periods."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import DegenerateChainError


@dataclass(frozen=True)
class RateMatrix:
    """Rates p_{k,k+1} (``up[k]``) and p_{k+1,k} (``down[k]``).

    ``n_levels`` is the number of intensity periods, i.e. atoms + 1.
    """

    up: tuple[float, ...]
    down: tuple[float, ...]
    method: str = ""
    off_chain: float = 0.0  # largest |alpha_ij| with |i-j| > 1, if computed
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        up = tuple(float(x) for x in self.up)
        down = tuple(float(x) for x in self.down)
        if len(up) != len(down):
            raise ValueError("up and down must have equal length")
        if any(x < 0 for x in up + down):
            raise ValueError("rates must be non-negative")
        object.__setattr__(self, "up", up)
        object.__setattr__(self, "down", down)

    @property
    def n_levels(self) -> int:
        return len(self.up) + 1

    def p(self, i: int, j: int) -> float:
        if j == i + 1:
            return self.up[i]
        if j == i - 1:
            return self.down[j]
        if 0 <= i < self.n_levels and 0 <= j < self.n_levels:
            return 0.0
        raise IndexError((i, j))

    def as_array(self) -> np.ndarray:
        """Dense matrix with p_ij at [i, j] (no diagonal)."""
        m = np.zeros((self.n_levels, self.n_levels))
        for k, (u, d) in enumerate(zip(self.up, self.down)):
            m[k, k + 1] = u
            m[k + 1, k] = d
        return m

    def exit_rates(self) -> tuple[np.ndarray, np.ndarray]:
        """Per-level (up, down) exit rates, zero-padded at the chain ends."""
        n = self.n_levels
        up = np.zeros(n)
        down = np.zeros(n)
        up[:-1] = self.up
        down[1:] = self.down
        return up, down

    def stationary(self) -> np.ndarray:
        """Stationary distribution of the birth-death chain."""
        w = [1.0]
        for u, d in zip(self.up, self.down):
            w.append(w[-1] * u / d if d > 0 else np.inf)
        w = np.asarray(w)
        if not np.all(np.isfinite(w)):
            raise DegenerateChainError("chain has an absorbing top level")
        return w / w.sum()

    def transitions(self):
        """(i, j, rate) for every nearest-neighbour transition."""
        for k in range(self.n_levels - 1):
            yield k, k + 1, self.up[k]
            yield k + 1, k, self.down[k]

    def to_table(self) -> str:
        lines = ["# i j rate method"]
        lines += [f"{i} {j} {r:.17g} {self.method}" for i, j, r in self.transitions()]
        return "\n".join(lines) + "\n"

    def relative_deviation(self, other: "RateMatrix") -> np.ndarray:
        a = np.asarray(self.up + self.down)
        b = np.asarray(other.up + other.down)
        scale = np.where(b != 0, np.abs(b), 1.0)
        return np.abs(a - b) / scale


def read_table(text: str) -> dict[str, RateMatrix]:
    """Parse :meth:`RateMatrix.to_table` output (possibly several methods)."""
    rows: dict[str, dict[tuple[int, int], float]] = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        i, j, r, *m = line.split()
        rows.setdefault(m[0] if m else "", {})[(int(i), int(j))] = float(r)
    out = {}
    for method, entries in rows.items():
        n = max(max(k) for k in entries) + 1
        out[method] = RateMatrix([entries[(k, k + 1)] for k in range(n - 1)],
                                 [entries[(k + 1, k)] for k in range(n - 1)], method)
    return out
