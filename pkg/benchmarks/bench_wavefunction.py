"""Benchmark the two angle-wavefunction evaluation kernels.

psi(theta) = sum_l a_l e^{i l theta} over the momentum window is the hot
loop behind angle distributions and angle sampling.  The package ships a
compiled kernel (numba, incremental phase rotation) and a pure-numpy
fallback (chunked outer-product matmul); ROTORCODE_DISABLE_NUMBA=1 forces
the fallback at import time.  This script times both in one process.

Run:  python benchmarks/bench_wavefunction.py [--sizes 1025,4097,16385]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from rotorcode import _kernels


def _time(fn, *args, repeats: int = 5) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--sizes",
        default="1025,4097,16385",
        help="comma list of momentum-window sizes",
    )
    parser.add_argument("--grid", type=int, default=8192, help="angle grid points")
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    sizes = [int(s) for s in args.sizes.split(",")]
    thetas = np.linspace(-np.pi, np.pi, args.grid, endpoint=False)
    rng = np.random.default_rng(0)

    print(f"numba available: {_kernels.HAS_NUMBA}; package dispatch uses "
          f"{'numba' if _kernels.USING_NUMBA else 'numpy'}")
    print(f"angle grid: {args.grid} points, best of {args.repeats}")
    header = f"{'window':>8} {'numpy [ms]':>12} {'numba [ms]':>12} {'speedup':>8}"
    print(header)
    print("-" * len(header))

    for size in sizes:
        amps = rng.normal(size=size) + 1j * rng.normal(size=size)
        amps = (amps / np.linalg.norm(amps)).astype(np.complex128)
        l_min = -(size // 2)

        t_np = _time(_kernels._evaluate_psi_numpy, amps, l_min, thetas,
                     repeats=args.repeats)
        if _kernels.HAS_NUMBA:
            _kernels._evaluate_psi_jit(amps, l_min, thetas)  # compile once
            t_nb = _time(_kernels._evaluate_psi_jit, amps, l_min, thetas,
                         repeats=args.repeats)
            ref = _kernels._evaluate_psi_numpy(amps, l_min, thetas)
            out = _kernels._evaluate_psi_jit(amps, l_min, thetas)
            err = float(np.max(np.abs(out - ref)))
            print(f"{size:>8} {1e3 * t_np:>12.3f} {1e3 * t_nb:>12.3f} "
                  f"{t_np / t_nb:>8.2f}  (max |diff| {err:.2e})")
        else:
            print(f"{size:>8} {1e3 * t_np:>12.3f} {'-':>12} {'-':>8}")


if __name__ == "__main__":
    main()
