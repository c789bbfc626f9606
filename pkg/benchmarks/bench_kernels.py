"""Compare the compiled and pure-Python integration kernels.

    python benchmarks/bench_kernels.py [--repeat N]

Each case integrates the same problem with both backends, reports the best
wall time of ``--repeat`` runs, the speed-up and the largest difference
between the two solutions.
"""

import argparse
import time

import numpy as np

from rwa_rg import _kernels

TOL = (1e-10, 1e-12)


def cases():
    t20 = np.linspace(0.0, 20.0, 2000)
    t5 = np.linspace(0.0, 5.0, 500)
    rabi0 = np.array([1, 0], complex)
    jc0 = np.zeros(32, complex)
    jc0[1] = 1
    return [
        ("rabi  D=10 tau<=20", lambda k: k.solve_rabi(0.0, 10.0, rabi0, t20, *TOL, 0.01)),
        ("rabi  D=50 tau<=20", lambda k: k.solve_rabi(0.0, 50.0, rabi0, t20, *TOL, 0.002)),
        ("jc n=15 D=10 tau<=5", lambda k: k.solve_jc(0.0, 10.0, 15, jc0, t5, *TOL, 0.01)),
        ("riccati D=10 tau<=1.4", lambda k: k.solve_riccati(10.0, 0j, t20 * 0.07, *TOL, 0.01, 1e6)),
    ]


def best_time(fn, repeat):
    best = np.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    if _kernels.compiled_backend is None:
        raise SystemExit("compiled kernel not built; run `pip install -e . --no-build-isolation`")
    print(f"{'case':24s} {'compiled':>10s} {'python':>10s} {'speed-up':>9s} {'max diff':>9s} steps")
    for name, fn in cases():
        tc, rc = best_time(lambda: fn(_kernels.compiled_backend), args.repeat)
        tp, rp = best_time(lambda: fn(_kernels.python_backend), max(1, args.repeat // 3))
        diff = float(np.nanmax(np.abs(rc[0] - rp[0])))
        print(f"{name:24s} {tc * 1e3:8.2f}ms {tp * 1e3:8.1f}ms {tp / tc:8.0f}x {diff:9.1e} {rc[4]}")


if __name__ == "__main__":
    main()
