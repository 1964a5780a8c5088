"""Closed-form rates for up to three equidistant atoms.

All rates between intensity periods follow from the mean number of atoms
in the ground state of the k-bright quasi-steady state, <N1>_k:

* four-level scheme: p_{k,k-1} = W A2/(A2+A4) <N1>_k
* D scheme:          p_{k,k-1} = A2 (k - <N1>_k)
* both:              p_{k,k+1} = (n - k) A1

<N1>_k is known exactly (in C3 and the detuning) for k <= 3 when all
pairs share the same coupling C3.
"""

from __future__ import annotations

import numpy as np

from ..coupling import build_coupling_set
from ..errors import UnsupportedConfigurationError
from ..model import EnsembleSpec, SchemeKind
from .matrix import RateMatrix


def _aux(a3, rabi, detuning, c3):
    c3 = np.asarray(c3, dtype=complex)
    w2 = rabi ** 2
    a = a3 ** 2 + 4 * detuning ** 2
    d = a + 2 * w2
    x = a + w2
    b = np.abs(c3) ** 2 + 2 * a3 * c3.real - 4 * detuning * c3.imag
    return c3, w2, a, d, x, b


def mean_ground_count(k: int, a3: float, rabi: float, detuning: float, c3, order: str = "exact"):
    """<N1>_k, exact or to first order in C3. Vectorized over ``c3``."""
    c3, w2, a, d, x, b = _aux(a3, rabi, detuning, c3)
    if k == 0:
        return np.zeros(c3.shape)
    if k == 1:
        return np.full(c3.shape, x / d)
    lin = (2 * a3 * c3.real - 4 * detuning * c3.imag) * a * w2 / d ** 3
    if order == "first":
        if k == 2:
            return 2 * (x / d + lin)
        if k == 3:
            return 3 * (x / d + 2 * lin)
    elif order == "exact":
        if k == 2:
            return 2 * (x * d + a * b) / (d ** 2 + a * b)
        if k == 3:
            t = np.abs(c3) ** 2 * np.abs(a3 - 2j * detuning + c3) ** 2
            num = x * (d ** 2 + 3 * a * b) + 2 * a * (t + b * (w2 + b))
            den = d * (d ** 2 + 3 * a * b) + 2 * a * (t + b ** 2)
            return 3 * num / den
    else:
        raise ValueError(f"unknown order {order!r}")
    raise UnsupportedConfigurationError(f"no closed form for {k} bright atoms")


def downward_rates(spec: EnsembleSpec, c3, detuning: float | None = None, order: str = "exact"):
    """List of arrays [p10, p21, ...] (vectorized over ``c3``)."""
    s = spec.scheme
    delta = s.detuning if detuning is None else detuning
    out = []
    for k in range(1, spec.n_atoms + 1):
        n1 = mean_ground_count(k, s.einstein[3], s.rabi, delta, c3, order)
        if s.kind is SchemeKind.FOUR_LEVEL:
            out.append(s.incoherent_w * s.branching_ratio * n1)
        else:
            out.append(s.einstein[2] * (k - n1))
    return out


def upward_rates(spec: EnsembleSpec) -> list[float]:
    n, a1 = spec.n_atoms, spec.scheme.einstein[1]
    return [(n - k) * a1 for k in range(n)]


def equilateral_c3(spec: EnsembleSpec) -> complex:
    """Common strong-transition coupling; zero for one atom or no geometry."""
    geo = spec.geometry
    if spec.n_atoms == 1 or geo is None:
        return 0j
    cs = build_coupling_set(geo, spec.scheme, transitions=(3,))
    values = [cs.get(k, l, 3) for k, l in geo.pairs]
    if max(abs(v - values[0]) for v in values) > 1e-12 * max(1.0, abs(values[0])):
        raise UnsupportedConfigurationError("closed forms need identical pair couplings (equilateral preset)")
    return values[0]


def closed_form_rates(spec: EnsembleSpec, c3: complex | None = None,
                      detuning: float | None = None) -> tuple[RateMatrix, RateMatrix]:
    """(exact, first-order) rate matrices.

    ``c3`` defaults to the coupling implied by ``spec.geometry``, which
    must then be equilateral.
    """
    if c3 is None:
        c3 = equilateral_c3(spec)
    elif spec.geometry is not None and spec.n_atoms == 3 and not spec.geometry.is_equilateral:
        raise UnsupportedConfigurationError("closed forms need the equilateral preset")
    up = upward_rates(spec)
    exact = [float(v) for v in downward_rates(spec, c3, detuning, "exact")]
    first = [float(v) for v in downward_rates(spec, c3, detuning, "first")]
    return (RateMatrix(up, exact, "closed_exact"), RateMatrix(up, first, "closed_first_order"))


POPULATION_KEYS = ("g", "s113", "b113", "c113", "s133", "b133", "c133", "e3")


def rho_ss3_populations(a3: float, rabi: float, c3) -> dict[str, np.ndarray]:
    """Symmetrized-basis populations of the three-bright quasi-steady state (no detuning).

    The prefactor of the bracket [|C3|^2 |A3 + C3|^2 + B^2] is taken as
    2 A3^2, which keeps the expressions homogeneous; in units A3 = 1 it is
    the same number as the bare 2 A3.
    """
    c3 = np.asarray(c3, dtype=complex)
    w2 = rabi ** 2
    a2 = a3 ** 2
    b = np.abs(c3) ** 2 + 2 * a3 * c3.real
    t = np.abs(c3) ** 2 * np.abs(a3 + c3) ** 2 + b ** 2
    n = (a2 + 2 * w2) * ((a2 + 2 * w2) ** 2 + 3 * a2 * b) + 2 * a2 * t
    g = ((a2 + w2) * ((a2 + w2) ** 2 + 3 * a2 * b) + 2 * a2 * t) / n
    s113 = w2 * ((a2 + w2) * (3 * a2 + w2) + 3 * a2 * b) / n
    bc113 = w2 ** 2 * (a2 + w2) / n
    s133 = w2 ** 2 * (3 * a2 + w2) / n
    top = w2 ** 3 / n
    return {"g": g, "s113": s113, "b113": bc113, "c113": bc113,
            "s133": s133, "b133": top, "c133": top, "e3": top}
