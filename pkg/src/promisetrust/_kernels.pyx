# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled power iteration; mirrors ``_fallback.power_iterate``."""

import numpy as np

from libc.math cimport exp, fabs, log
from scipy.linalg.cython_blas cimport dgemv

cdef long WARMUP_CAP = 256


cdef void _matvec(const double[:, ::1] m, const double[::1] v, double[::1] y, double shift) noexcept nogil:
    """y = m v + shift v, with the product done by BLAS dgemv."""
    cdef int n = <int>m.shape[0]
    cdef int one = 1
    cdef double alpha = 1.0
    cdef double beta = 1.0
    cdef char trans = b"T"  # row-major m is column-major m.T
    cdef Py_ssize_t i
    for i in range(n):
        y[i] = shift * v[i]
    dgemv(&trans, &n, &n, &alpha, <double*>&m[0, 0], &n, <double*>&v[0], &one, &beta, &y[0], &one)


cdef double _normalise(double[::1] y, double[::1] v) noexcept nogil:
    """Divide y by its max, write into v, return the max-norm change."""
    cdef Py_ssize_t n = y.shape[0]
    cdef Py_ssize_t i
    cdef double g = y[0]
    cdef double delta = 0.0
    cdef double x
    for i in range(1, n):
        if y[i] > g:
            g = y[i]
    for i in range(n):
        x = y[i] / g
        if fabs(x - v[i]) > delta:
            delta = fabs(x - v[i])
        v[i] = x
    return delta


cdef double _vmax(double[::1] y) noexcept nogil:
    cdef Py_ssize_t i
    cdef double g = y[0]
    for i in range(1, y.shape[0]):
        if y[i] > g:
            g = y[i]
    return g


cdef inline bint _settled(double delta, double prev, double tol) noexcept nogil:
    cdef double r = delta / prev if prev > 0.0 else 0.0
    return r < 1.0 and delta < tol * (1.0 - r)


def power_iterate(m, double tol, long max_iter):
    cdef const double[:, ::1] mv = np.ascontiguousarray(m, dtype=np.float64)
    cdef Py_ssize_t n = mv.shape[0]
    out = np.ones(n)
    if n == 0:
        return out, 0.0, 0, True
    if max_iter <= 0:
        return out, 0.0, 0, False
    cdef double[::1] v = out
    cdef double[::1] y = np.empty(n)
    cdef long warm = min(<long>n, max_iter, WARMUP_CAP)
    cdef long it = 0
    cdef long k
    cdef double g = 1.0
    cdef double delta = 1e300
    cdef double prev = 0.0
    cdef bint done = False
    cdef double s, mu
    cdef double logsum = 0.0
    with nogil:
        for k in range(warm):
            _matvec(mv, v, y, 0.0)
            g = _vmax(y)
            it += 1
            if g <= 0.0:
                break
            prev = delta
            delta = _normalise(y, v)
            logsum += log(g)
            done = _settled(delta, prev, tol)
            if done:
                break
    if g <= 0.0:
        return np.zeros(n), 0.0, it, True
    if done:
        return out, g, it, True
    s = exp(logsum / warm)
    mu = s + g  # eigenvalue estimate if the budget ends in the warm-up
    with nogil:
        while it < max_iter:
            _matvec(mv, v, y, s)
            mu = _vmax(y)
            prev = delta
            delta = _normalise(y, v)
            it += 1
            done = _settled(delta, prev, tol)
            if done:
                break
    return out, mu - s, it, done
