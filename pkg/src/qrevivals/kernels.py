"""Hot Monte-Carlo inner loops with numba-compiled and pure-numpy implementations.

The numba path is used when numba imports successfully; set the environment
variable ``QREVIVALS_DISABLE_NUMBA=1`` before import to force the numpy
fallback. Both paths consume identical pre-generated random arrays, so they
agree to floating-point roundoff; all random number generation stays outside
the kernels.
"""
from __future__ import annotations

import os

import numpy as np

_DISABLE = os.environ.get("QREVIVALS_DISABLE_NUMBA", "") not in ("", "0")

try:  # pragma: no cover - import probe
    if _DISABLE:
        raise ImportError("numba disabled by QREVIVALS_DISABLE_NUMBA")
    import numba

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False


def _rtn_integrals_loop(switch_cumsum, times):
    """Per-trajectory time integral of a +/-1 telegraph signal starting at +1.

    ``switch_cumsum[b, k]`` is the time of the k-th sign flip of trajectory b
    (strictly increasing, last entry beyond times[-1]); ``times`` is ascending.
    Returns the (B, T) array of integrals int_0^t xi(s) ds.
    """
    n_traj, n_switch = switch_cumsum.shape
    n_t = times.shape[0]
    out = np.empty((n_traj, n_t))
    for b in range(n_traj):
        k = 0
        prev = 0.0
        sign = 1.0
        acc = 0.0
        for j in range(n_t):
            t = times[j]
            while k < n_switch and switch_cumsum[b, k] < t:
                acc += sign * (switch_cumsum[b, k] - prev)
                prev = switch_cumsum[b, k]
                sign = -sign
                k += 1
            out[b, j] = acc + sign * (t - prev)
    return out


def _rtn_integrals_numpy(switch_cumsum, times):
    n_traj, n_switch = switch_cumsum.shape
    padded = np.concatenate([np.zeros((n_traj, 1)), switch_cumsum], axis=1)
    signs = (-1.0) ** np.arange(n_switch)
    out = np.empty((n_traj, times.shape[0]))
    for j, t in enumerate(times):
        clipped = np.minimum(padded, t)
        out[:, j] = np.diff(clipped, axis=1) @ signs
    return out


def _ou_phases_loop(normals, decay, diffuse, dur_sign, write_idx, n_out):
    """Accumulated dephasing phase along exact-update Ornstein-Uhlenbeck paths.

    The chain is sampled at fine-interval midpoints: at step k the value is
    eps <- eps * decay[k] + diffuse[k] * normals[b, k] (decay[0] = 0 encodes the
    stationary initial draw). The phase advances by dur_sign[k] * eps, where
    dur_sign carries the interval duration and the echo sign flip. Whenever
    write_idx[k] >= 0 the running phase is recorded in that output column.
    """
    n_traj, n_steps = normals.shape
    out = np.empty((n_traj, n_out))
    for b in range(n_traj):
        eps = 0.0
        theta = 0.0
        for k in range(n_steps):
            eps = eps * decay[k] + diffuse[k] * normals[b, k]
            theta += dur_sign[k] * eps
            j = write_idx[k]
            if j >= 0:
                out[b, j] = theta
    return out


def _ou_phases_numpy(normals, decay, diffuse, dur_sign, write_idx, n_out):
    n_traj, n_steps = normals.shape
    out = np.empty((n_traj, n_out))
    eps = np.zeros(n_traj)
    theta = np.zeros(n_traj)
    for k in range(n_steps):
        eps = eps * decay[k] + diffuse[k] * normals[:, k]
        theta = theta + dur_sign[k] * eps
        j = write_idx[k]
        if j >= 0:
            out[:, j] = theta
    return out


if _HAVE_NUMBA:
    _rtn_integrals_numba = numba.njit(cache=True, nogil=True)(_rtn_integrals_loop)
    _ou_phases_numba = numba.njit(cache=True, nogil=True)(_ou_phases_loop)
    rtn_integrals = _rtn_integrals_numba
    ou_phases = _ou_phases_numba
    BACKEND = "numba"
else:
    rtn_integrals = _rtn_integrals_numpy
    ou_phases = _ou_phases_numpy
    BACKEND = "numpy"


def backend_name() -> str:
    return BACKEND
