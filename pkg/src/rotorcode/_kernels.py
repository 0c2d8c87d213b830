"""Hot numerical kernels with a numba fast path and a pure-numpy fallback.

The one genuinely hot operation in this package is evaluating an angular
wavefunction psi(theta) = sum_l a_l e^{i l theta} on a dense theta grid
(angle distributions, inverse-CDF samplers, density plots).  For a state
with a few thousand momentum components and a 10^5..10^6 point grid this
is ~10^8 complex multiply-adds, which is worth a compiled loop.

Path selection: the numba kernel is used when numba imports cleanly and
the environment variable ROTORCODE_DISABLE_NUMBA is not set to a truthy
value ("1", "true", "yes").  Both paths produce the same result up to
floating-point roundoff (the compiled loop uses an incremental phase
rotation, the numpy path evaluates each phase directly).
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        # identity decorator so the jitted source doubles as plain python
        if len(args) == 1 and callable(args[0]):
            return args[0]

        def wrap(func):
            return func

        return wrap


def _disabled_by_env() -> bool:
    return os.environ.get("ROTORCODE_DISABLE_NUMBA", "").strip().lower() in (
        "1",
        "true",
        "yes",
    )


@njit(cache=True)
def _evaluate_psi_jit(amplitudes, l_min, thetas):  # pragma: no cover - compiled
    out = np.empty(thetas.shape[0], dtype=np.complex128)
    n = amplitudes.shape[0]
    for i in range(thetas.shape[0]):
        th = thetas[i]
        # z = e^{i l_min th}, rotated by e^{i th} per momentum step
        z = complex(np.cos(l_min * th), np.sin(l_min * th))
        step = complex(np.cos(th), np.sin(th))
        acc = 0.0 + 0.0j
        for k in range(n):
            acc += amplitudes[k] * z
            z *= step
        out[i] = acc
    return out


def _evaluate_psi_numpy(
    amplitudes: np.ndarray, l_min: int, thetas: np.ndarray
) -> np.ndarray:
    """Direct dense evaluation, chunked to bound the phase-matrix allocation."""
    ls = l_min + np.arange(amplitudes.shape[0])
    out = np.empty(thetas.shape[0], dtype=np.complex128)
    # ~32 MB of complex128 per chunk
    chunk = max(1, (2 << 20) // max(1, ls.shape[0]))
    for start in range(0, thetas.shape[0], chunk):
        block = thetas[start : start + chunk]
        out[start : start + chunk] = np.exp(1j * np.outer(block, ls)) @ amplitudes
    return out


def evaluate_psi(amplitudes: np.ndarray, l_min: int, thetas: np.ndarray) -> np.ndarray:
    """psi(theta_i) = sum_l amplitudes[l - l_min] * e^{i l theta_i}."""
    amplitudes = np.ascontiguousarray(amplitudes, dtype=np.complex128)
    thetas = np.ascontiguousarray(thetas, dtype=np.float64)
    if USING_NUMBA:
        return _evaluate_psi_jit(amplitudes, np.int64(l_min), thetas)
    return _evaluate_psi_numpy(amplitudes, int(l_min), thetas)


USING_NUMBA = HAS_NUMBA and not _disabled_by_env()

__all__ = ["evaluate_psi", "HAS_NUMBA", "USING_NUMBA"]
