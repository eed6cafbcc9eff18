"""Parametric density families and their maximum likelihood estimators.

Families
--------
normal        N(mu, sigma^2), theta = (mu, sigma)
normal_mean   N(mu, 1),       theta = (mu,)
normal_scale  N(0, sigma^2),  theta = (sigma,)
gumbel        min-type Gumbel, f(x) = exp(z - e^z)/sigma with z = (x-mu)/sigma,
              mean mu - sigma*gamma, variance pi^2 sigma^2 / 6
exponential   rate lambda (mean 1/lambda), theta = (lambda,)
weibull       shape a, scale b, f(x) = (a/b)(x/b)^(a-1) exp(-(x/b)^a) on x > 0

MLEs are closed form except for gumbel and weibull, which use a safeguarded
Newton iteration on the 1-D profile score (location resp. scale profiled
out); both profiles are strictly monotone, so the root is unique.
"""

from __future__ import annotations

import numpy as np
from scipy.special import erf, ndtri

from .errors import (
    DegenerateSample,
    InvalidParameter,
    NonConvergence,
    SupportViolation,
)
from .npde import Sample

EULER_GAMMA = 0.5772156649015329

FAMILIES = ("normal", "normal_mean", "normal_scale", "gumbel", "exponential", "weibull")

_N_PARAMS = {
    "normal": 2,
    "normal_mean": 1,
    "normal_scale": 1,
    "gumbel": 2,
    "exponential": 1,
    "weibull": 2,
}

_PARAM_NAMES = {
    "normal": ("mu", "sigma"),
    "normal_mean": ("mu",),
    "normal_scale": ("sigma",),
    "gumbel": ("mu", "sigma"),
    "exponential": ("rate",),
    "weibull": ("shape", "scale"),
}

_SQRT_2PI = float(np.sqrt(2.0 * np.pi))

_NEWTON_TOL = 1e-10
_NEWTON_MAX_ITER = 100


def param_names(family: str) -> tuple[str, ...]:
    _check_family(family)
    return _PARAM_NAMES[family]


def _check_family(family: str) -> None:
    if family not in FAMILIES:
        raise InvalidParameter(f"unknown family: {family!r}")


def _check_theta(family: str, theta: np.ndarray) -> np.ndarray:
    _check_family(family)
    theta = np.asarray(theta, dtype=float).ravel()
    if theta.size != _N_PARAMS[family]:
        raise InvalidParameter(
            f"{family} takes {_N_PARAMS[family]} parameter(s), got {theta.size}"
        )
    if not np.all(np.isfinite(theta)):
        raise InvalidParameter("parameters must be finite")
    # every scale/shape/rate component is strictly positive
    if family in ("normal", "gumbel") and theta[1] <= 0:
        raise InvalidParameter(f"{family} scale must be positive")
    if family in ("normal_scale", "exponential") and theta[0] <= 0:
        raise InvalidParameter(f"{family} parameter must be positive")
    if family == "weibull" and (theta[0] <= 0 or theta[1] <= 0):
        raise InvalidParameter("weibull shape and scale must be positive")
    return theta


def density_eval(family: str, theta, x):
    """f_theta(x) for scalar or array x; 0 outside the support."""
    theta = _check_theta(family, theta)
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)

    if family == "normal":
        mu, sig = theta
        out = np.exp(-0.5 * ((x - mu) / sig) ** 2) / (sig * _SQRT_2PI)
    elif family == "normal_mean":
        out = np.exp(-0.5 * (x - theta[0]) ** 2) / _SQRT_2PI
    elif family == "normal_scale":
        sig = theta[0]
        out = np.exp(-0.5 * (x / sig) ** 2) / (sig * _SQRT_2PI)
    elif family == "gumbel":
        mu, sig = theta
        z = (x - mu) / sig
        out = np.exp(z - np.exp(z)) / sig
    elif family == "exponential":
        lam = theta[0]
        out = np.where(x > 0, lam * np.exp(-lam * np.maximum(x, 0.0)), 0.0)
    else:  # weibull
        a, b = theta
        xp = np.maximum(x, 0.0) / b
        with np.errstate(divide="ignore"):
            out = np.where(x > 0, (a / b) * xp ** (a - 1.0) * np.exp(-(xp**a)), 0.0)
    return float(out[0]) if scalar else out


def cdf_eval(family: str, theta, x):
    """F_theta(x); all families here have closed-form cdfs."""
    theta = _check_theta(family, theta)
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 0
    x = np.atleast_1d(x)

    if family == "normal":
        mu, sig = theta
        out = 0.5 * (1.0 + erf((x - mu) / (sig * np.sqrt(2.0))))
    elif family == "normal_mean":
        out = 0.5 * (1.0 + erf((x - theta[0]) / np.sqrt(2.0)))
    elif family == "normal_scale":
        out = 0.5 * (1.0 + erf(x / (theta[0] * np.sqrt(2.0))))
    elif family == "gumbel":
        mu, sig = theta
        out = 1.0 - np.exp(-np.exp((x - mu) / sig))
    elif family == "exponential":
        out = np.where(x > 0, 1.0 - np.exp(-theta[0] * np.maximum(x, 0.0)), 0.0)
    else:  # weibull
        a, b = theta
        out = np.where(x > 0, 1.0 - np.exp(-((np.maximum(x, 0.0) / b) ** a)), 0.0)
    return float(out[0]) if scalar else out


def ppf(family: str, theta, u):
    """Quantile function F^{-1}(u) for u in (0, 1)."""
    theta = _check_theta(family, theta)
    u = np.asarray(u, dtype=float)
    scalar = u.ndim == 0
    u = np.atleast_1d(u)
    if np.any((u <= 0) | (u >= 1)):
        raise InvalidParameter("quantile levels must lie strictly inside (0, 1)")

    if family == "normal":
        out = theta[0] + theta[1] * ndtri(u)
    elif family == "normal_mean":
        out = theta[0] + ndtri(u)
    elif family == "normal_scale":
        out = theta[0] * ndtri(u)
    elif family == "gumbel":
        out = theta[0] + theta[1] * np.log(-np.log1p(-u))
    elif family == "exponential":
        out = -np.log1p(-u) / theta[0]
    else:  # weibull
        out = theta[1] * (-np.log1p(-u)) ** (1.0 / theta[0])
    return float(out[0]) if scalar else out


def log_likelihood(family: str, theta, data) -> float:
    """Sum of log f_theta over the data (-inf if any point has density 0)."""
    dens = density_eval(family, theta, np.asarray(data, dtype=float))
    with np.errstate(divide="ignore"):
        return float(np.sum(np.log(dens)))


def _require_positive_support(family: str, x: np.ndarray) -> None:
    if family in ("exponential", "weibull") and np.min(x) <= 0:
        raise SupportViolation(f"{family} requires strictly positive data")


def _require_dispersion(x: np.ndarray) -> None:
    if np.min(x) == np.max(x):
        raise DegenerateSample("constant sample: scale parameter is not estimable")


def fit_mle(family: str, sample: Sample) -> np.ndarray:
    """Maximum likelihood estimate of theta from a 1-D sample."""
    _check_family(family)
    if sample.dim != 1:
        raise InvalidParameter("fit_mle takes a 1-D sample")
    x = sample.rows
    _require_positive_support(family, x)

    if family == "normal_mean":
        return np.array([float(np.mean(x))])
    if family == "normal":
        _require_dispersion(x)
        return np.array([float(np.mean(x)), float(np.std(x))])
    if family == "normal_scale":
        sig = float(np.sqrt(np.mean(x * x)))
        if sig == 0.0:
            raise DegenerateSample("all observations are zero")
        return np.array([sig])
    if family == "exponential":
        return np.array([1.0 / float(np.mean(x))])
    if family == "gumbel":
        _require_dispersion(x)
        return _fit_gumbel(x)
    _require_dispersion(x)
    return _fit_weibull(x)


def _fit_gumbel(x: np.ndarray) -> np.ndarray:
    # profile score in sigma: phi(sigma) = A(sigma) - xbar - sigma with
    # A the softmax-weighted mean sum x_i e^{x_i/sigma} / sum e^{x_i/sigma};
    # phi'(sigma) = -Var_w(x)/sigma^2 - 1 < 0, so the root is unique
    xbar = float(np.mean(x))
    c = float(np.max(x))
    sigma = float(np.std(x)) * np.sqrt(6.0) / np.pi

    def phi_dphi(sig: float) -> tuple[float, float]:
        w = np.exp((x - c) / sig)
        w /= w.sum()
        a = float(np.sum(w * x))
        var_w = float(np.sum(w * (x - a) ** 2))
        return a - xbar - sig, -var_w / sig**2 - 1.0

    lo, hi = 0.0, np.inf  # phi > 0 left of the root, < 0 right of it
    for _ in range(_NEWTON_MAX_ITER):
        phi, dphi = phi_dphi(sigma)
        if phi > 0:
            lo = sigma
        else:
            hi = sigma
        step = phi / dphi
        nxt = sigma - step
        if not (lo < nxt < hi):
            nxt = 0.5 * (lo + hi) if np.isfinite(hi) else 2.0 * sigma
        if abs(nxt - sigma) <= _NEWTON_TOL * max(1.0, sigma):
            sigma = nxt
            break
        sigma = nxt
    else:
        raise NonConvergence("gumbel profile Newton did not converge")

    mu = sigma * (np.log(np.mean(np.exp((x - c) / sigma)))) + c
    return np.array([float(mu), float(sigma)])


def _fit_weibull(x: np.ndarray) -> np.ndarray:
    # profile score in the shape a:
    #   psi(a) = sum x^a log x / sum x^a - 1/a - mean(log x),
    # strictly increasing (psi'(a) = Var_w(log x) + 1/a^2 > 0)
    lx = np.log(x)
    mlx = float(np.mean(lx))
    sd_lx = float(np.std(lx))
    if sd_lx == 0.0:
        raise DegenerateSample("constant sample: weibull shape is not estimable")
    a = np.pi / (np.sqrt(6.0) * sd_lx)

    def psi_dpsi(a_: float) -> tuple[float, float]:
        # weights proportional to x^a, stabilized through log space
        t = a_ * lx
        t -= t.max()
        w = np.exp(t)
        w /= w.sum()
        m1 = float(np.sum(w * lx))
        var_w = float(np.sum(w * (lx - m1) ** 2))
        return m1 - 1.0 / a_ - mlx, var_w + 1.0 / a_**2

    lo, hi = 0.0, np.inf
    for _ in range(_NEWTON_MAX_ITER):
        psi, dpsi = psi_dpsi(a)
        if psi < 0:
            lo = a
        else:
            hi = a
        nxt = a - psi / dpsi
        if not (lo < nxt < hi):
            nxt = 0.5 * (lo + hi) if np.isfinite(hi) else 2.0 * a
        if abs(nxt - a) <= _NEWTON_TOL * max(1.0, a):
            a = nxt
            break
        a = nxt
    else:
        raise NonConvergence("weibull profile Newton did not converge")

    b = float(np.mean(x**a)) ** (1.0 / a)
    return np.array([float(a), float(b)])


def _as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def sample_from(family: str, theta, n: int, seed) -> Sample:
    """Draw n i.i.d. observations by inverse-cdf; deterministic given seed."""
    theta = _check_theta(family, theta)
    if n < 2:
        raise InvalidParameter("need n >= 2")
    rng = _as_rng(seed)
    u = rng.random(n)
    np.maximum(u, 2.0**-53, out=u)  # keep inverse cdfs finite at u = 0
    return Sample(ppf(family, theta, u))


def params_from_moments(family: str, mean: float, sd: float) -> np.ndarray:
    """Parameters matching a target mean and standard deviation
    (gumbel and normal only)."""
    if sd <= 0:
        raise InvalidParameter("sd must be positive")
    if family == "gumbel":
        sigma = sd * np.sqrt(6.0) / np.pi
        return np.array([mean + sigma * EULER_GAMMA, sigma])
    if family == "normal":
        return np.array([mean, sd])
    raise InvalidParameter(f"moment matching not supported for {family!r}")
