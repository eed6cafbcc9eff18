"""The fitness coefficient: likelihood competition between a fitted
parametric density and a per-point nonparametric density estimate.

Given per-point parametric values p_i = f_theta_hat(X_i) and strictly
positive nonparametric values g_i, the mixture log-likelihood

    L(alpha) = sum_i log(alpha * p_i + (1 - alpha) * g_i)

is strictly concave on [0, 1] whenever p != g, so its derivative

    L'(alpha) = sum_i (p_i - g_i) / (alpha * p_i + (1 - alpha) * g_i)

is strictly decreasing and the maximizer is found by sign checks at the
endpoints plus bisection on L'.  The maximizing alpha is the fitness
coefficient: the proportion of data attributed to the parametric model.

Two choices of g_i are supported: the leave-and-repair values (coefficient
kind "lr") and the plain kernel density values at the observations
(coefficient kind "os", the Olkin-Spiegelman variant).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import models, npde
from .errors import (
    Indistinguishable,
    InvalidParameter,
    LengthMismatch,
    NonpositiveDensity,
)
from .kernels import EPANECHNIKOV, GAUSSIAN
from .npde import NPConfig, Sample

LR = "lr"
OS = "os"

_BISECT_MAX_ITER = 60


@dataclass(frozen=True)
class FitnessConfig:
    """Model family, nonparametric configuration and coefficient kind."""

    family: str
    np_config: NPConfig
    coefficient: str = LR
    tolerance: float = 1e-10

    def __post_init__(self):
        if self.coefficient not in (LR, OS):
            raise InvalidParameter(f"coefficient kind must be 'lr' or 'os', got {self.coefficient!r}")
        if not (np.isfinite(self.tolerance) and self.tolerance > 0):
            raise InvalidParameter("tolerance must be positive")


@dataclass(frozen=True)
class FitnessResult:
    alpha: float
    theta: np.ndarray
    h: float
    at_boundary: str  # "interior" | "zero" | "one"
    param_values: np.ndarray
    nonparam_values: np.ndarray
    loglik_at_alpha: float


def mixture_loglik(alpha: float, param_values, nonparam_values) -> float:
    """L(alpha); returns -inf exactly when some mixture term is zero."""
    p = np.asarray(param_values, dtype=float)
    g = np.asarray(nonparam_values, dtype=float)
    if p.shape != g.shape or p.ndim != 1:
        raise LengthMismatch("param and nonparam value vectors must have equal length")
    mix = alpha * p + (1.0 - alpha) * g
    if np.any(mix <= 0.0):
        return -np.inf
    return float(np.sum(np.log(mix)))


def _dloglik(alpha: float, p: np.ndarray, g: np.ndarray) -> float:
    with np.errstate(divide="ignore"):
        terms = (p - g) / (alpha * p + (1.0 - alpha) * g)
    return float(np.sum(terms))


def solve_alpha(param_values, nonparam_values, tolerance: float = 1e-10):
    """Unique maximizer of L over [0, 1] and its boundary flag.

    L' is strictly decreasing, so: L'(0) <= 0 means alpha = 0; L'(1) >= 0
    (with every p_i > 0) means alpha = 1; otherwise bisection brackets the
    interior root.  When some p_i = 0 the likelihood diverges to -inf as
    alpha -> 1, L' -> -inf there, and bisection stays inside [0, 1); the
    reported flag is then interior or zero, never one.
    """
    p = np.asarray(param_values, dtype=float)
    g = np.asarray(nonparam_values, dtype=float)
    if p.shape != g.shape or p.ndim != 1 or p.size == 0:
        raise LengthMismatch("param and nonparam value vectors must have equal length")
    if np.any(g <= 0.0) or not np.all(np.isfinite(g)):
        raise NonpositiveDensity("nonparametric values must be strictly positive and finite")
    if np.any(p < 0.0) or not np.all(np.isfinite(p)):
        raise InvalidParameter("parametric values must be non-negative and finite")
    if np.array_equal(p, g):
        raise Indistinguishable("parametric and nonparametric values coincide at every point")

    if _dloglik(0.0, p, g) <= 0.0:
        return 0.0, "zero"
    if np.all(p > 0.0) and _dloglik(1.0, p, g) >= 0.0:
        return 1.0, "one"

    lo, hi = 0.0, 1.0  # L' > 0 at lo, < 0 at hi (hi = 1 may be -inf)
    for _ in range(_BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if _dloglik(mid, p, g) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < tolerance:
            break
    return 0.5 * (lo + hi), "interior"


def fitness_coefficient(sample: Sample, cfg: FitnessConfig) -> FitnessResult:
    """Fit the model by maximum likelihood, build the per-point value
    vectors and maximize the mixture likelihood over alpha."""
    theta = models.fit_mle(cfg.family, sample)
    p = models.density_eval(cfg.family, theta, sample.rows)
    if cfg.coefficient == LR:
        g = npde.lr_values(sample, cfg.np_config)
    else:
        g = npde.kde_eval(sample, cfg.np_config, sample.rows)
    alpha, flag = solve_alpha(p, g, cfg.tolerance)
    return FitnessResult(
        alpha=alpha,
        theta=theta,
        h=cfg.np_config.h,
        at_boundary=flag,
        param_values=p,
        nonparam_values=g,
        loglik_at_alpha=mixture_loglik(alpha, p, g),
    )


@dataclass(frozen=True)
class SemiparametricDensity:
    """alpha * f_theta + (1 - alpha) * kde, the final density estimate."""

    alpha: float
    family: str
    theta: np.ndarray
    sample: Sample
    np_config: NPConfig

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise InvalidParameter("alpha must lie in [0, 1]")


def semiparametric_from_fit(sample: Sample, cfg: FitnessConfig, result: FitnessResult) -> SemiparametricDensity:
    return SemiparametricDensity(
        alpha=result.alpha,
        family=cfg.family,
        theta=result.theta,
        sample=sample,
        np_config=cfg.np_config,
    )


def semiparametric_eval(sp: SemiparametricDensity, x):
    """Density of the convex combination at x (scalar or array)."""
    par = models.density_eval(sp.family, sp.theta, x)
    ker = npde.kde_eval(sp.sample, sp.np_config, x)
    return sp.alpha * par + (1.0 - sp.alpha) * ker


def _epanechnikov_noise(rng: np.random.Generator, m: int) -> np.ndarray:
    # the median of three independent U(-1, 1) has the Epanechnikov density
    u = rng.random((m, 3)) * 2.0 - 1.0
    return np.median(u, axis=1)


def sample_semiparametric(sp: SemiparametricDensity, m: int, seed) -> np.ndarray:
    """Draw m points: with probability alpha from the fitted model, else a
    smoothed-bootstrap draw X_J + h * (kernel noise) matching the kde."""
    rng = models._as_rng(seed)
    take_param = rng.random(m) < sp.alpha
    k = int(np.count_nonzero(take_param))
    out = np.empty(m)
    if k:
        if k >= 2:
            out[take_param] = models.sample_from(sp.family, sp.theta, k, rng).rows
        else:
            out[take_param] = models.sample_from(sp.family, sp.theta, 2, rng).rows[:1]
    rest = m - k
    if rest:
        data = sp.sample.rows
        idx = rng.integers(0, data.shape[0], size=rest)
        if sp.np_config.kernel == GAUSSIAN:
            noise = rng.standard_normal(rest)
        elif sp.np_config.kernel == EPANECHNIKOV:
            noise = _epanechnikov_noise(rng, rest)
        else:  # pragma: no cover - guarded by NPConfig validation
            raise InvalidParameter(f"unknown kernel kind: {sp.np_config.kernel!r}")
        out[~take_param] = data[idx] + sp.np_config.h * noise
    return out
