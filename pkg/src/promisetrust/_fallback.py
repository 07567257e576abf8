"""Reference power iteration in numpy; used when the compiled kernel is absent.

Same algorithm as ``_kernels.pyx``; results agree to rounding.
"""

import math

import numpy as np

WARMUP_CAP = 256


def _settled(delta, prev, tol):
    """Stop once the estimated distance to the fixed point, ``delta / (1 - r)``
    with ``r`` the observed contraction ratio, is below ``tol``."""
    r = delta / prev if prev > 0.0 else 0.0
    return r < 1.0 and delta < tol * (1.0 - r)


def power_iterate(m, tol, max_iter):
    """Max-normalised power iteration on a non-negative square matrix.

    A short unshifted warm-up (which leaves exact zeros wherever the
    iterate has no support, and detects nilpotent matrices) is followed by
    iteration on ``m + s*I`` with ``s`` the geometric-mean growth seen in the
    warm-up; the shift removes the oscillation of periodic matrices.  The
    run stops when the max-norm change, corrected for the observed rate of
    contraction, drops below ``tol``.

    Returns ``(vector, eigenvalue, iterations, converged)``.  A vector of
    zeros with eigenvalue 0 means the iterate collapsed.
    """
    m = np.ascontiguousarray(m, dtype=np.float64)
    n = m.shape[0]
    v = np.ones(n)
    if n == 0:
        return v, 0.0, 0, True
    if max_iter <= 0:
        return v, 0.0, 0, False
    warm = min(n, max_iter, WARMUP_CAP)
    logsum = 0.0
    it = 0
    delta = math.inf
    for _ in range(warm):
        y = m @ v
        g = y.max()
        it += 1
        if g <= 0.0:
            return np.zeros(n), 0.0, it, True
        y /= g
        prev, delta = delta, np.abs(y - v).max()
        v = y
        logsum += math.log(g)
        if _settled(delta, prev, tol):
            return v, float(g), it, True
    s = math.exp(logsum / warm)
    mu = s + g  # eigenvalue estimate if the budget ends in the warm-up
    while it < max_iter:
        y = m @ v
        y += s * v
        mu = y.max()
        y /= mu
        prev, delta = delta, np.abs(y - v).max()
        v = y
        it += 1
        if _settled(delta, prev, tol):
            return v, float(mu - s), it, True
    return v, float(mu - s), it, False
