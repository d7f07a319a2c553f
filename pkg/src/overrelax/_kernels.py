"""Lattice transport kernels.

Each kernel exists twice: a numba ``@njit`` loop and a vectorised numpy
version doing the same arithmetic in the same order.  The numba path is used
unless numba is missing or ``OVERRELAX_DISABLE_NUMBA`` is set to a truthy
value before import.
"""
import os

import numpy as np

_DISABLED = os.environ.get("OVERRELAX_DISABLE_NUMBA", "").strip().lower() not in ("", "0", "false", "no")

try:
    from numba import njit
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and not _DISABLED


def transport_interior_numpy(w, z, lam, out_w, out_z):
    """One exact-shift quarter step on points 1..N; ends of ``out_*`` untouched."""
    wl, wr = w[:-2], w[2:]
    zl, zr = z[:-2], z[2:]
    out_w[1:-1] = 0.5 * (wl + wr) + (zl - zr) / (2.0 * lam)
    out_z[1:-1] = 0.5 * (zl + zr) + lam * (wl - wr) * 0.5


def transport_periodic_numpy(w, z, lam, out_w, out_z):
    wl, wr = np.roll(w, 1), np.roll(w, -1)
    zl, zr = np.roll(z, 1), np.roll(z, -1)
    out_w[:] = 0.5 * (wl + wr) + (zl - zr) / (2.0 * lam)
    out_z[:] = 0.5 * (zl + zr) + lam * (wl - wr) * 0.5


if HAS_NUMBA:

    @njit(cache=True)
    def transport_interior_numba(w, z, lam, out_w, out_z):
        n = w.shape[0]
        inv = 2.0 * lam
        for i in range(1, n - 1):
            wl = w[i - 1]
            wr = w[i + 1]
            zl = z[i - 1]
            zr = z[i + 1]
            out_w[i] = 0.5 * (wl + wr) + (zl - zr) / inv
            out_z[i] = 0.5 * (zl + zr) + lam * (wl - wr) * 0.5

    @njit(cache=True)
    def transport_periodic_numba(w, z, lam, out_w, out_z):
        n = w.shape[0]
        inv = 2.0 * lam
        for i in range(n):
            left = i - 1 if i > 0 else n - 1
            right = i + 1 if i < n - 1 else 0
            wl = w[left]
            wr = w[right]
            zl = z[left]
            zr = z[right]
            out_w[i] = 0.5 * (wl + wr) + (zl - zr) / inv
            out_z[i] = 0.5 * (zl + zr) + lam * (wl - wr) * 0.5

else:  # pragma: no cover
    transport_interior_numba = transport_interior_numpy
    transport_periodic_numba = transport_periodic_numpy


if USE_NUMBA:
    transport_interior = transport_interior_numba
    transport_periodic = transport_periodic_numba
else:
    transport_interior = transport_interior_numpy
    transport_periodic = transport_periodic_numpy


def backend() -> str:
    return "numba" if USE_NUMBA else "numpy"
