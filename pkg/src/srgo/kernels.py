"""Hot numerical kernels for the vertical momentum flow.

The fixed-step RK4 loop dominates runtime in scans and drift diagnostics,
so it is compiled with numba when available. Set SRGO_NO_NUMBA=1 to force
the pure-numpy path (same algorithm, same results); see
benchmarks/bench_vertical.py for the speed comparison.
"""

import os

import numpy as np

_DISABLED = os.environ.get("SRGO_NO_NUMBA", "").lower() in ("1", "true", "yes")

try:  # pragma: no cover - import guard
    if _DISABLED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(f):
            return f
        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True)
def _rhs(c, dmat, p, out):
    n = p.shape[0]
    for j in range(n):
        out[j] = 0.0
    for i in range(n):
        x = 0.0
        for a in range(n):
            x += dmat[i, a] * p[a]
        if x == 0.0:
            continue
        for j in range(n):
            acc = 0.0
            for k in range(n):
                acc += c[i, j, k] * p[k]
            out[j] += x * acc


@njit(cache=True)
def _rk4_jit(c, dmat, p0, dt, nsteps, out):
    n = p0.shape[0]
    p = p0.copy()
    k1 = np.empty(n)
    k2 = np.empty(n)
    k3 = np.empty(n)
    k4 = np.empty(n)
    tmp = np.empty(n)
    out[0] = p
    last = 0
    for step in range(nsteps):
        _rhs(c, dmat, p, k1)
        for j in range(n):
            tmp[j] = p[j] + 0.5 * dt * k1[j]
        _rhs(c, dmat, tmp, k2)
        for j in range(n):
            tmp[j] = p[j] + 0.5 * dt * k2[j]
        _rhs(c, dmat, tmp, k3)
        for j in range(n):
            tmp[j] = p[j] + dt * k3[j]
        _rhs(c, dmat, tmp, k4)
        finite = True
        for j in range(n):
            p[j] = p[j] + dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
            if not np.isfinite(p[j]):
                finite = False
        if not finite:
            return last
        out[step + 1] = p
        last = step + 1
    return last


def _rk4_numpy(c, dmat, p0, dt, nsteps, out):
    # Precontract: f_j = p^T q[j] p with q[j] = dmat^T c[:, j, :].
    q = np.einsum("ia,ijk->jak", dmat, c)

    def rhs(p):
        return np.einsum("jak,a,k->j", q, p, p)

    p = p0.copy()
    out[0] = p
    last = 0
    for step in range(nsteps):
        k1 = rhs(p)
        k2 = rhs(p + 0.5 * dt * k1)
        k3 = rhs(p + 0.5 * dt * k2)
        k4 = rhs(p + dt * k3)
        p = p + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not np.all(np.isfinite(p)):
            return last
        out[step + 1] = p
        last = step + 1
    return last


def vertical_rk4(c, dmat, p0, dt, nsteps):
    """Integrate the vertical system with classical RK4, fixed step.

    Returns (samples, last_index): samples has shape (nsteps + 1, n); on a
    non-finite state the loop stops and last_index points at the last
    valid sample (== nsteps on success).
    """
    c = np.ascontiguousarray(c, dtype=float)
    dmat = np.ascontiguousarray(dmat, dtype=float)
    p0 = np.ascontiguousarray(p0, dtype=float)
    out = np.zeros((nsteps + 1, p0.shape[0]))
    if HAVE_NUMBA:
        last = _rk4_jit(c, dmat, p0, float(dt), int(nsteps), out)
    else:
        last = _rk4_numpy(c, dmat, p0, float(dt), int(nsteps), out)
    return out, int(last)
