"""Kernel functions and data-driven bandwidth selection.

Two kernels are supported: the Gaussian kernel K(u) = exp(-u^2/2)/sqrt(2*pi)
and the Epanechnikov kernel K(u) = 0.75*(1 - u^2) on |u| <= 1.  Bandwidths
come from Silverman's rules of thumb,

    robust rule:           h = 0.9  * min(s, IQR/1.34) * n^(-1/5)
    normal reference rule: h = 1.06 * s               * n^(-1/5)

with s the sample standard deviation (ddof=1) and IQR the interquartile
range, or from a user-fixed value.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSample, InvalidParameter

GAUSSIAN = "gaussian"
EPANECHNIKOV = "epanechnikov"
KERNEL_KINDS = (GAUSSIAN, EPANECHNIKOV)

_SQRT_2PI = float(np.sqrt(2.0 * np.pi))


def kernel_eval(kind: str, u):
    """Evaluate the kernel at u (scalar or array)."""
    u = np.asarray(u, dtype=float)
    if kind == GAUSSIAN:
        out = np.exp(-0.5 * u * u) / _SQRT_2PI
    elif kind == EPANECHNIKOV:
        out = 0.75 * np.maximum(0.0, 1.0 - u * u)
    else:
        raise InvalidParameter(f"unknown kernel kind: {kind!r}")
    return float(out) if out.ndim == 0 else out


def kernel_at_zero(kind: str) -> float:
    """K(0), the kernel's peak value."""
    return float(kernel_eval(kind, 0.0))


SILVERMAN_ROBUST = "silverman_robust"
SILVERMAN_NORMAL = "silverman_normal"
FIXED = "fixed"


@dataclass(frozen=True)
class BandwidthRule:
    """A bandwidth selection rule; ``fixed`` carries the bandwidth itself
    (same units as the data)."""

    rule: str = SILVERMAN_ROBUST
    h: float | None = None

    def __post_init__(self):
        if self.rule not in (SILVERMAN_ROBUST, SILVERMAN_NORMAL, FIXED):
            raise InvalidParameter(f"unknown bandwidth rule: {self.rule!r}")
        if self.rule == FIXED:
            if self.h is None or not np.isfinite(self.h) or self.h <= 0:
                raise InvalidParameter("fixed bandwidth must be a positive real")

    @classmethod
    def fixed(cls, h: float) -> "BandwidthRule":
        return cls(rule=FIXED, h=float(h))


def select_bandwidth(rule: BandwidthRule, data) -> float:
    """Select a bandwidth for a 1-D sample according to ``rule``.

    Raises DegenerateSample when the sample has zero dispersion (Silverman
    rules only; a fixed rule just returns its stored value).
    """
    if rule.rule == FIXED:
        return float(rule.h)

    x = np.asarray(data, dtype=float).ravel()
    n = x.size
    if n < 2:
        raise DegenerateSample("bandwidth selection needs at least 2 observations")
    s = float(np.std(x, ddof=1))
    if s <= 0.0:
        raise DegenerateSample("sample has zero dispersion")

    if rule.rule == SILVERMAN_NORMAL:
        return 1.06 * s * n ** (-0.2)

    q75, q25 = np.percentile(x, [75.0, 25.0])  # linear-interpolation quantiles
    iqr = float(q75 - q25)
    a = min(s, iqr / 1.34)
    if a <= 0.0:
        # heavy ties can flatten the IQR while the sd stays positive
        a = s
    return 0.9 * a * n ** (-0.2)
