"""Compiled vs pure-Python telegraph kernels.

Run with ``python3 benchmarks/bench_kernels.py [n_transitions]``.
"""

import sys
import time

import numpy as np

from jumpstat.rates import RateMatrix
from jumpstat.telegraph import _pykernels
from jumpstat.telegraph import simulation

try:
    from jumpstat.telegraph import _kernels
except ImportError:
    _kernels = None

P = RateMatrix((1.0, 0.8, 0.6), (0.7, 0.9, 1.0))


def timed(backend, n_transitions, window=0.01, seed=1):
    saved = simulation._k
    simulation._k = backend
    try:
        t_end = n_transitions / float(P.stationary() @ np.add(*P.exit_rates()))
        t0 = time.perf_counter()
        traj = simulation.simulate(P, t_end, seed)
        t1 = time.perf_counter()
        st = simulation.count_multijumps(traj, window)
        t2 = time.perf_counter()
    finally:
        simulation._k = saved
    return t1 - t0, t2 - t1, len(traj), (st.n_double, st.n_triple)


def main(n_transitions=300_000):
    rows = [("python", _pykernels)] + ([("cython", _kernels)] if _kernels else [])
    results = {}
    print(f"{'backend':<8} {'simulate[s]':>12} {'count[s]':>10} {'events':>9}  counts")
    for name, mod in rows:
        sim, cnt, n, counts = timed(mod, n_transitions)
        results[name] = (sim, cnt, counts)
        print(f"{name:<8} {sim:12.3f} {cnt:10.3f} {n:9d}  {counts}")
    if len(results) == 2:
        (ps, pc, a), (cs, cc, b) = results["python"], results["cython"]
        print(f"speed-up: simulate x{ps / cs:.1f}, count x{pc / cc:.1f}; identical counts: {a == b}")
    else:
        print("compiled kernel not built; only the fallback was timed")


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 300_000)
