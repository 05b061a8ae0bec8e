"""Numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5] [--end-to-end]

Kernel timings call both implementations in one process.  ``--end-to-end``
also times one stationary-negativity point in two subprocesses, one with
RUBIN_DISABLE_NUMBA=1.
"""
import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from rubin import kernels
from rubin._accel import HAVE_NUMBA


def best(func, repeat, number):
    func()  # warm-up (and JIT compilation)
    return min(timeit.repeat(func, repeat=repeat, number=number)) / number


def kernel_cases(rng):
    n = 201
    a = rng.normal(size=(n, n))
    qq, pp, qp = a @ a.T, a.T @ a, rng.normal(size=(n, n))
    omega = rng.uniform(0.01, 12.0, n)
    z = 1.0 + rng.uniform(0, 50, 2000) + 1j * rng.uniform(-50, 50, 2000)
    xi = np.linspace(-15, 15, 1001)
    return [
        ("rotate_normal_modes n=201", lambda: kernels._rotate_numba(qq, qp, pp, omega, 3.7),
         lambda: kernels.rotate_numpy(qq, qp, pp, omega, 3.7), 20),
        ("digamma x2000", lambda: kernels._digamma_array_numba(z),
         lambda: kernels.digamma_numpy(z), 20),
        ("digamma scalar", lambda: kernels._digamma_numba(2.5 + 3j),
         lambda: kernels._digamma_scalar(2.5 + 3j), 2000),
        ("cubic_roots", lambda: kernels._cubic_roots_numba(-12.0, 32.2, -300.0),
         lambda: kernels.cubic_roots_numpy(-12.0, 32.2, -300.0), 2000),
        ("hermite n=40 x1001", lambda: kernels._hermite_numba(40, xi),
         lambda: kernels.hermite_numpy(40, xi), 20),
    ]


POINT = """
import time
from rubin.entanglement import ChainSimulation
from rubin.kernels import BACKEND
from rubin.model import params_from_gamma
sim = ChainSimulation(params_from_gamma(0.6, 10, 1, 5, 0.01, 200))
sim.negativity(1.0)
t = time.perf_counter()
res = sim.negativity(1.0)
print(BACKEND, time.perf_counter() - t, repr(res.negativity))
"""


def end_to_end():
    for flag in ("0", "1"):
        env = dict(os.environ, RUBIN_DISABLE_NUMBA=flag)
        out = subprocess.run([sys.executable, "-c", POINT], env=env, capture_output=True,
                             text=True, check=True).stdout.split()
        print(f"  chain point ({out[0]:5s}) {float(out[1]) * 1e3:9.1f} ms   N={out[2]}")


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--end-to-end", action="store_true")
    args = parser.parse_args(argv)
    if not HAVE_NUMBA:
        print("numba disabled or missing: nothing to compare", file=sys.stderr)
        return 1
    rng = np.random.default_rng(0)
    print(f"{'kernel':28s} {'numba':>12s} {'numpy':>12s} {'speedup':>8s}")
    for name, fast, slow, number in kernel_cases(rng):
        t_fast = best(fast, args.repeat, number)
        t_slow = best(slow, args.repeat, number)
        print(f"{name:28s} {t_fast * 1e6:10.1f}us {t_slow * 1e6:10.1f}us {t_slow / t_fast:7.2f}x")
    if args.end_to_end:
        end_to_end()
    return 0


if __name__ == "__main__":
    sys.exit(main())
