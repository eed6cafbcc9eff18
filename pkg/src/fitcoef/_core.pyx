# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel sums; signature-compatible with fitcoef._core_py."""

import numpy as np

from libc.math cimport exp, sqrt, M_PI

KIND_GAUSSIAN = 0
KIND_EPANECHNIKOV = 1

cdef double _SQRT_2PI = sqrt(2.0 * M_PI)


cdef inline double _k(double u, int kind) nogil:
    if kind == 0:
        return exp(-0.5 * u * u) / _SQRT_2PI
    if u <= -1.0 or u >= 1.0:
        return 0.0
    return 0.75 * (1.0 - u * u)


def kde_1d(const double[::1] data, const double[::1] xs, double h, int kind):
    cdef Py_ssize_t n = data.shape[0], m = xs.shape[0]
    cdef Py_ssize_t i, j
    cdef double acc, inv = 1.0 / (n * h)
    out = np.empty(m)
    cdef double[::1] o = out
    with nogil:
        for i in range(m):
            acc = 0.0
            for j in range(n):
                acc += _k((xs[i] - data[j]) / h, kind)
            o[i] = acc * inv
    return out


def loo_1d(const double[::1] data, double h, int kind):
    cdef Py_ssize_t n = data.shape[0]
    cdef Py_ssize_t i, j
    cdef double acc, k0 = _k(0.0, kind), inv = 1.0 / ((n - 1) * h)
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc += _k((data[i] - data[j]) / h, kind)
            o[i] = (acc - k0) * inv
    return out


def kde_2d(const double[:, ::1] data, const double[::1] x1, const double[::1] x2, double h, int kind):
    cdef Py_ssize_t n = data.shape[0], m = x1.shape[0]
    cdef Py_ssize_t i, j
    cdef double acc, inv = 1.0 / (n * h * h)
    out = np.empty(m)
    cdef double[::1] o = out
    with nogil:
        for i in range(m):
            acc = 0.0
            for j in range(n):
                acc += _k((x1[i] - data[j, 0]) / h, kind) * _k((x2[i] - data[j, 1]) / h, kind)
            o[i] = acc * inv
    return out


def loo_2d(const double[:, ::1] data, double h, int kind):
    cdef Py_ssize_t n = data.shape[0]
    cdef Py_ssize_t i, j
    cdef double acc, k0 = _k(0.0, kind) ** 2, inv = 1.0 / ((n - 1) * h * h)
    out = np.empty(n)
    cdef double[::1] o = out
    with nogil:
        for i in range(n):
            acc = 0.0
            for j in range(n):
                acc += _k((data[i, 0] - data[j, 0]) / h, kind) * _k((data[i, 1] - data[j, 1]) / h, kind)
            o[i] = (acc - k0) * inv
    return out
