"""Timings for the potential sweep kernels: compiled loops vs numpy fallback.

Usage: python benchmarks/bench_kernels.py [--nx 2000 8000 32000] [--repeat 5]
"""
import argparse
import time

import numpy as np

from strip_psg import kernels
from strip_psg.data_model import builtin_scenario, random_scenario
from strip_psg.fields import u_slice, m_slice
from strip_psg.potentials import tables


def bench(fn, repeat):
    fn()  # warm-up (jit compile, caches)
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nx", type=int, nargs="+", default=[2000, 8000, 32000])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(3)
    cases = [("s1 (constant data)", builtin_scenario("s1")),
             ("s3 (piecewise data)", builtin_scenario("s3")),
             ("random (4-piece)", random_scenario(rng))]
    t = 0.8

    print(f"numba available: {kernels.HAS_NUMBA}, enabled: {kernels.USE_NUMBA}")
    header = f"{'case':<22}{'nx':>8}{'sweep jit':>12}{'sweep numpy':>13}{'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, s in cases:
        tab = tables(s)
        for nx in args.nx:
            xs = np.linspace(0.0, 1.0, nx)

            def sweeps(use):
                kernels.sweep_F(tab, xs, t, use_numba=use)
                kernels.sweep_Gbl(tab, xs, t, use_numba=use)
                kernels.sweep_Gbr(tab, xs, t, use_numba=use)

            tj = bench(lambda: sweeps(kernels.HAS_NUMBA), args.repeat)
            tn = bench(lambda: sweeps(False), args.repeat)
            print(f"{name:<22}{nx:>8}{tj*1e3:>10.2f}ms{tn*1e3:>11.2f}ms"
                  f"{tn/tj:>8.1f}x")

    print()
    s = builtin_scenario("s1")
    for nx in args.nx:
        xs = np.linspace(0.0, 1.0, nx)
        tf = bench(lambda: (u_slice(s, xs, t), m_slice(s, xs, t)), args.repeat)
        print(f"full u+m slice         {nx:>8}{tf*1e3:>10.2f}ms")


if __name__ == "__main__":
    main()
