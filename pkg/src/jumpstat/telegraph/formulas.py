"""Double- and triple-jump rates of a four-level intensity telegraph.

Both rates are leading-order in the window T_W. With the stationary
occupations pi of the birth-death chain, a double jump is a pair of
consecutive same-direction steps whose gap is shorter than T_W, so

    n_DJ = T_W * sum_i pi_i p_{i,i+-1} p_{i+-1,i+-2}

and likewise for n_TJ with T_W**2 (both gaps shorter than T_W).
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigurationError, DegenerateChainError
from ..rates.matrix import RateMatrix


def _rates(p: RateMatrix, window: float):
    if p.n_levels != 4:
        raise ConfigurationError("closed double/triple-jump rates need four intensity levels")
    if window <= 0:
        raise ConfigurationError("T_W must be positive")
    (p01, p12, p23), (p10, p21, p32) = p.up, p.down
    z = p21 * p32 * (p01 + p10) + p01 * p12 * (p23 + p32)
    if z == 0:
        raise DegenerateChainError("rate matrix has no stationary distribution")
    return p01, p12, p23, p10, p21, p32, z


def analytic_djr(p: RateMatrix, window: float) -> float:
    """n_DJ = 2 p01 p12 p21 p32 (p10 + p23) / Z * T_W.

    Z = p21 p32 (p01 + p10) + p01 p12 (p23 + p32) is the normalisation
    of the stationary distribution.
    """
    p01, p12, p23, p10, p21, p32, z = _rates(p, window)
    return 2 * p01 * p12 * p21 * p32 * (p10 + p23) / z * window


def printed_djr(p: RateMatrix, window: float) -> float:
    """The published double-jump expression, 2 p01 p21 p32 (p01 + p12) / Z * T_W.

    Kept for comparison only. It is not a rate dimensionally and agrees
    with :func:`analytic_djr` only for special rate sets (e.g. all equal).
    """
    p01, p12, p23, p10, p21, p32, z = _rates(p, window)
    return 2 * p01 * p21 * p32 * (p01 + p12) / z * window


def analytic_tjr(p: RateMatrix, window: float) -> float:
    """n_TJ = 2 p01 p10 p12 p21 p23 p32 / Z * T_W**2."""
    p01, p12, p23, p10, p21, p32, z = _rates(p, window)
    return 2 * p01 * p10 * p12 * p21 * p23 * p32 / z * window ** 2


def multijump_rate(p: RateMatrix, window: float, steps: int, span: bool = False) -> float:
    """Leading-order rate of ``steps`` same-direction consecutive jumps.

    Works for any chain length. With ``span`` the whole run must fit in
    the window, which divides the per-gap value by (steps - 1)!.
    """
    if steps < 2:
        raise ValueError("steps must be at least 2")
    pi = p.stationary()
    up, down = np.asarray(p.up), np.asarray(p.down)
    n = p.n_levels
    total = 0.0
    for i in range(n):
        for direction in (1, -1):
            prod, lv = pi[i], i
            for _ in range(steps):
                nxt = lv + direction
                if not 0 <= nxt < n:
                    prod = 0.0
                    break
                prod *= up[lv] if direction > 0 else down[nxt]
                lv = nxt
            total += prod
    rate = total * window ** (steps - 1)
    if span:
        rate /= float(np.prod(np.arange(1, steps)))
    return float(rate)
