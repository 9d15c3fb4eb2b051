"""Compare the compiled and pure-Python RK4 kernels.

Times one sweep of ``integrate_linear2`` for each backend on the same
coefficients, then a full ``model_ball_lambda1`` solve (about 45 sweeps)
in a subprocess per backend, since the backend is chosen at import time.

    python3 benchmarks/bench_kernels.py [--N 4096] [--repeat 5]
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import timeit

import numpy as np

from tonelab import _pykernels, kernels

SOLVE_SNIPPET = (
    "import time; from tonelab.radial_eigen import model_ball_lambda1;"
    "from tonelab.spaceform import ModelBall; from tonelab import kernels;"
    "t=time.perf_counter(); lam=model_ball_lambda1(ModelBall(-1.0, 3, 2.0), N={N}).lambda1;"
    "print(kernels.BACKEND, lam, time.perf_counter()-t)"
)


def sweep_args(N: int):
    h = 1.0 / N
    th = np.arange(2 * N + 1) * (0.5 * h)
    a = np.zeros_like(th)
    a[1:] = 2.0 / th[1:]
    b = np.full_like(th, 9.0)
    g = np.zeros_like(th)
    return a, b, g, h


def time_sweep(fn, N: int, repeat: int) -> float:
    a, b, g, h = sweep_args(N)
    y, dy = np.zeros(N + 1), np.zeros(N + 1)
    # start one node off the singular pole, as the solver does after the series step
    call = lambda: fn(a, b, g, h, 1, h, 1.0, y, dy, False)
    return min(timeit.repeat(call, number=1, repeat=repeat))


def time_solve(N: int, pure: bool) -> tuple[str, float, float]:
    env = {**os.environ, "TONELAB_PURE": "1" if pure else "0"}
    out = subprocess.run([sys.executable, "-c", SOLVE_SNIPPET.format(N=N)], env=env,
                         capture_output=True, text=True, check=True).stdout.split()
    return out[0], float(out[1]), float(out[2])


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--N", type=int, default=4096)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    if kernels.BACKEND != "cython":
        print("compiled extension not built; only the pure-Python kernel is available")
    t_py = time_sweep(_pykernels.integrate_linear2, args.N, args.repeat)
    print(f"single sweep, N={args.N}")
    print(f"  python  {t_py * 1e3:9.3f} ms")
    if kernels.BACKEND == "cython":
        t_cy = time_sweep(kernels.integrate_linear2, args.N, args.repeat)
        print(f"  cython  {t_cy * 1e3:9.3f} ms   speedup x{t_py / t_cy:.0f}")

    print(f"full solve, c=-1 n=3 r=2, N={args.N}")
    for pure in (False, True):
        backend, lam, secs = time_solve(args.N, pure)
        print(f"  {backend:7s} {secs:9.3f} s   lambda1 = {lam:.12f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
