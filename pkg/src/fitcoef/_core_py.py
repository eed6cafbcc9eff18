"""Pure-numpy implementations of the hot kernel sums.

Mirrors the API of the compiled module ``fitcoef._core``.  Pairwise
evaluations are chunked so the temporary distance matrix stays bounded
regardless of sample and grid sizes.
"""

from __future__ import annotations

import numpy as np

_SQRT_2PI = float(np.sqrt(2.0 * np.pi))
KIND_GAUSSIAN = 0
KIND_EPANECHNIKOV = 1

_CHUNK_ELEMS = 4_000_000


def _kmat(u: np.ndarray, kind: int) -> np.ndarray:
    if kind == KIND_GAUSSIAN:
        return np.exp(-0.5 * u * u) / _SQRT_2PI
    return 0.75 * np.maximum(0.0, 1.0 - u * u)


def kde_1d(data: np.ndarray, xs: np.ndarray, h: float, kind: int) -> np.ndarray:
    """Kernel sums (1/(n*h)) * sum_j K((x - X_j)/h) at each point of xs."""
    n = data.shape[0]
    out = np.empty(xs.shape[0])
    step = max(1, _CHUNK_ELEMS // max(n, 1))
    for i0 in range(0, xs.shape[0], step):
        u = (xs[i0 : i0 + step, None] - data[None, :]) / h
        out[i0 : i0 + step] = _kmat(u, kind).sum(axis=1)
    out /= n * h
    return out

def loo_1d(data: np.ndarray, h: float, kind: int) -> np.ndarray:
    """Leave-one-out kernel sums (1/((n-1)*h)) * sum_{j != i} K((X_i - X_j)/h)."""
    n = data.shape[0]
    out = np.empty(n)
    k0 = _kmat(np.zeros(1), kind)[0]
    step = max(1, _CHUNK_ELEMS // max(n, 1))
    for i0 in range(0, n, step):
        u = (data[i0 : i0 + step, None] - data[None, :]) / h
        out[i0 : i0 + step] = _kmat(u, kind).sum(axis=1)
    out -= k0  # remove the diagonal self term
    out /= (n - 1) * h
    return out


def kde_2d(data: np.ndarray, x1: np.ndarray, x2: np.ndarray, h: float, kind: int) -> np.ndarray:
    """Product-kernel sums (1/(n*h^2)) * sum_j K(.)K(.) at paired points (x1, x2)."""
    n = data.shape[0]
    out = np.empty(x1.shape[0])
    step = max(1, _CHUNK_ELEMS // max(n, 1))
    for i0 in range(0, x1.shape[0], step):
        u1 = (x1[i0 : i0 + step, None] - data[None, :, 0]) / h
        u2 = (x2[i0 : i0 + step, None] - data[None, :, 1]) / h
        out[i0 : i0 + step] = (_kmat(u1, kind) * _kmat(u2, kind)).sum(axis=1)
    out /= n * h * h
    return out


def loo_2d(data: np.ndarray, h: float, kind: int) -> np.ndarray:
    """Leave-one-out product-kernel sums for a 2-D sample."""
    n = data.shape[0]
    out = np.empty(n)
    k0 = _kmat(np.zeros(1), kind)[0] ** 2
    step = max(1, _CHUNK_ELEMS // max(n, 1))
    for i0 in range(0, n, step):
        u1 = (data[i0 : i0 + step, None, 0] - data[None, :, 0]) / h
        u2 = (data[i0 : i0 + step, None, 1] - data[None, :, 1]) / h
        out[i0 : i0 + step] = (_kmat(u1, kind) * _kmat(u2, kind)).sum(axis=1)
    out -= k0
    out /= (n - 1) * h * h
    return out
