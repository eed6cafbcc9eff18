"""Nonparametric density estimates.

Three per-point quantities built from the same kernel sum:

* ``kde_eval``   -- the standard kernel density estimate at arbitrary points,
* ``loo_values`` -- the leave-one-out estimate at each observation,
* ``lr_values``  -- the leave-and-repair estimate, i.e. leave-one-out plus a
  repair term ``delta * q(X_i)`` that keeps every value strictly positive.

The repair density q defaults to a Student-t with 3 degrees of freedom,
centered at 0 and scaled by 100; spread out that much it is effectively
non-informative and only guards against vanishing leave-one-out values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import lgamma

import numpy as np

from ._backend import core
from .errors import DegenerateSample, DimensionMismatch, InvalidParameter
from .kernels import (
    GAUSSIAN,
    KERNEL_KINDS,
    BandwidthRule,
    kernel_at_zero,
    select_bandwidth,
)

_KIND_CODE = {"gaussian": 0, "epanechnikov": 1}


@dataclass(frozen=True)
class Sample:
    """An i.i.d. sample; rows shape (n,) for d=1 or (n, 2) for d=2."""

    rows: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.rows, dtype=float)
        if arr.ndim == 2 and arr.shape[1] == 1:
            arr = arr[:, 0]
        if arr.ndim not in (1, 2) or (arr.ndim == 2 and arr.shape[1] != 2):
            raise DimensionMismatch("sample must be 1-D or an (n, 2) array")
        if arr.shape[0] < 2:
            raise DegenerateSample("sample needs at least 2 observations")
        if not np.all(np.isfinite(arr)):
            raise InvalidParameter("sample contains non-finite values")
        arr = np.ascontiguousarray(arr)
        arr.flags.writeable = False
        object.__setattr__(self, "rows", arr)

    @property
    def n(self) -> int:
        return self.rows.shape[0]

    @property
    def dim(self) -> int:
        return 1 if self.rows.ndim == 1 else 2


SCALED_STUDENT_T = "scaled_student_t"
KERNEL_AT_ZERO = "kernel_at_zero"


@dataclass(frozen=True)
class RepairDensity:
    """Repair density q for the leave-and-repair estimator.

    ``scaled_student_t`` is the Student-t density with ``nu`` degrees of
    freedom, location ``mu`` and scale ``sigma``; ``kernel_at_zero`` is the
    constant K(0) of the kernel named in ``kernel``.  Either is multiplied
    by the constant ``scale``; since only the product delta * q enters the
    leave-and-repair values, rescaling q and dividing delta by the same
    constant changes nothing downstream.
    """

    kind: str = SCALED_STUDENT_T
    nu: int = 3
    mu: float = 0.0
    sigma: float = 100.0
    kernel: str = GAUSSIAN
    scale: float = 1.0

    def __post_init__(self):
        if self.kind not in (SCALED_STUDENT_T, KERNEL_AT_ZERO):
            raise InvalidParameter(f"unknown repair density kind: {self.kind!r}")
        if not self.scale > 0:
            raise InvalidParameter("repair density multiplier must be positive")
        if self.kind == SCALED_STUDENT_T:
            if self.nu < 1:
                raise InvalidParameter("degrees of freedom must be a positive integer")
            if not self.sigma > 0:
                raise InvalidParameter("repair density scale must be positive")
        elif self.kernel not in KERNEL_KINDS:
            raise InvalidParameter(f"unknown kernel kind: {self.kernel!r}")


def _student_t_pdf(z, nu: int):
    c = np.exp(lgamma((nu + 1) / 2.0) - lgamma(nu / 2.0)) / np.sqrt(nu * np.pi)
    return c * (1.0 + z * z / nu) ** (-(nu + 1) / 2.0)


def repair_density_eval(q: RepairDensity, x):
    """Evaluate q at x (scalar or array); strictly positive everywhere."""
    x = np.asarray(x, dtype=float)
    if q.kind == KERNEL_AT_ZERO:
        out = np.full(x.shape, kernel_at_zero(q.kernel))
    else:
        out = _student_t_pdf((x - q.mu) / q.sigma, q.nu) / q.sigma
    if q.scale != 1.0:
        out = q.scale * out
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class NPConfig:
    """Everything the nonparametric estimators need: kernel kind, bandwidth
    h, repair magnitude delta and repair density q."""

    h: float
    kernel: str = GAUSSIAN
    delta: float = 0.0
    q: RepairDensity = field(default_factory=RepairDensity)

    def __post_init__(self):
        if not (np.isfinite(self.h) and self.h > 0):
            raise InvalidParameter("bandwidth h must be a positive real")
        if not (np.isfinite(self.delta) and self.delta >= 0):
            raise InvalidParameter("delta must be non-negative")
        if self.kernel not in KERNEL_KINDS:
            raise InvalidParameter(f"unknown kernel kind: {self.kernel!r}")


def default_config(
    sample: Sample,
    kernel: str = GAUSSIAN,
    bandwidth: BandwidthRule | None = None,
    delta: float | None = None,
    q: RepairDensity | None = None,
) -> NPConfig:
    """NPConfig with the usual defaults: Silverman robust bandwidth,
    delta = 1/n, Student-t(3, 0, 100) repair density.

    For 2-D samples the bandwidth is selected on the first coordinate;
    the multivariate pipeline selects per-margin bandwidths itself.
    """
    data = sample.rows if sample.dim == 1 else sample.rows[:, 0]
    h = select_bandwidth(bandwidth or BandwidthRule(), data)
    return NPConfig(
        h=h,
        kernel=kernel,
        delta=(1.0 / sample.n) if delta is None else delta,
        q=q if q is not None else RepairDensity(kernel=kernel),
    )


def _check_point_shape(sample: Sample, x: np.ndarray) -> None:
    if sample.dim == 1:
        if x.ndim > 1:
            raise DimensionMismatch("1-D sample takes scalar or 1-D evaluation points")
    else:
        if x.ndim not in (1, 2) or x.shape[-1] != 2:
            raise DimensionMismatch("2-D sample takes points of shape (2,) or (m, 2)")


def _scalar_in(sample: Sample, x: np.ndarray) -> bool:
    return x.ndim < (1 if sample.dim == 1 else 2)


def kde_eval(sample: Sample, cfg: NPConfig, x):
    """Kernel density estimate at x.

    x may be a scalar / length-2 point or an array of points; the return
    value matches (scalar in, scalar out).  Uses the product kernel for
    2-D samples.
    """
    kind = _KIND_CODE[cfg.kernel]
    x = np.asarray(x, dtype=float)
    if sample.dim == 2 and x.ndim == 0:
        raise DimensionMismatch("2-D sample takes points of shape (2,) or (m, 2)")
    _check_point_shape(sample, x)
    if sample.dim == 1:
        xs = np.ascontiguousarray(np.atleast_1d(x))
        out = core.kde_1d(sample.rows, xs, cfg.h, kind)
    else:
        pts = x[None, :] if x.ndim == 1 else x
        out = core.kde_2d(
            sample.rows,
            np.ascontiguousarray(pts[:, 0]),
            np.ascontiguousarray(pts[:, 1]),
            cfg.h,
            kind,
        )
    return float(out[0]) if _scalar_in(sample, x) else out


def loo_values(sample: Sample, cfg: NPConfig) -> np.ndarray:
    """Leave-one-out kernel estimate at each observation."""
    kind = _KIND_CODE[cfg.kernel]
    if sample.dim == 1:
        return core.loo_1d(sample.rows, cfg.h, kind)
    return core.loo_2d(sample.rows, cfg.h, kind)


def lr_values(sample: Sample, cfg: NPConfig) -> np.ndarray:
    """Leave-and-repair values: leave-one-out plus delta * q at each point.

    With delta > 0 and the default repair density every entry is strictly
    positive, which is what makes the downstream mixture weight well
    defined for any bandwidth.
    """
    out = loo_values(sample, cfg)
    if cfg.delta > 0.0:
        if sample.dim == 1:
            out = out + cfg.delta * repair_density_eval(cfg.q, sample.rows)
        else:
            # product of per-coordinate repair densities keeps q > 0 in 2-D
            qv = repair_density_eval(cfg.q, sample.rows[:, 0]) * repair_density_eval(
                cfg.q, sample.rows[:, 1]
            )
            out = out + cfg.delta * qv
    return out
