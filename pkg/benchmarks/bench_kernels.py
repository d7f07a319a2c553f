"""Compare the numba and numpy transport kernels, alone and inside full runs.

    python benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from overrelax import BoundaryClosure, ProblemSetup, SchemeConfig, _kernels
from overrelax.harness import run_simulation

BACKENDS = {
    "numpy": (_kernels.transport_interior_numpy, _kernels.transport_periodic_numpy),
    "numba": (_kernels.transport_interior_numba, _kernels.transport_periodic_numba),
}


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_kernel(n, repeat, calls=200):
    rng = np.random.default_rng(0)
    w, z = rng.normal(size=(2, n))
    out_w, out_z = np.empty(n), np.empty(n)
    row = {}
    for name, (interior, _) in BACKENDS.items():
        interior(w, z, 2.0, out_w, out_z)  # compile / warm up

        def loop():
            for _ in range(calls):
                interior(w, z, 2.0, out_w, out_z)
        row[name] = best_of(loop, repeat) / calls * 1e6
    return row


def bench_run(k, closure_name, repeat):
    setup = ProblemSetup()
    cfg = SchemeConfig.from_exponent(k)
    closure = BoundaryClosure.from_name(closure_name, setup)
    saved = (_kernels.transport_interior, _kernels.transport_periodic)
    row = {}
    try:
        for name, (interior, periodic) in BACKENDS.items():
            _kernels.transport_interior, _kernels.transport_periodic = interior, periodic
            run_simulation(setup, SchemeConfig.from_exponent(4), closure)
            row[name] = best_of(lambda: run_simulation(setup, cfg, closure), repeat)
    finally:
        _kernels.transport_interior, _kernels.transport_periodic = saved
    return row


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    if not _kernels.HAS_NUMBA:
        print("numba not available; nothing to compare")
        return
    print("kernel: transport_interior, microseconds per call")
    print(f"{'N+2':>8} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for n in (34, 130, 514, 2050, 8194, 32770):
        r = bench_kernel(n, args.repeat)
        print(f"{n:>8} {r['numpy']:>10.2f} {r['numba']:>10.2f} {r['numpy'] / r['numba']:>8.2f}")
    print("\nfull run to t=1 (neumann, S2), seconds")
    print(f"{'dx':>8} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for k in (7, 9, 11, 13):
        r = bench_run(k, "neumann", max(1, args.repeat // 2))
        print(f"{'2^-%d' % k:>8} {r['numpy']:>10.4f} {r['numba']:>10.4f} {r['numpy'] / r['numba']:>8.2f}")


if __name__ == "__main__":
    main()
