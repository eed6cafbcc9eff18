"""Bivariate Gumbel (logistic) copula machinery.

The copula is C(u1, u2) = exp(-((-log u1)^xi + (-log u2)^xi)^(1/xi)) with
xi >= 1; xi = 1 is independence and Kendall's tau equals 1 - 1/xi.  The
density is the mixed second partial of C; with s_k = (-log u_k)^xi and
t = s1 + s2 it has the closed form

    c(u1, u2) = C(u1, u2) * t^(2/xi - 2) * (s1 s2)^((xi-1)/xi)
                * (u1 u2)^(-1) * (1 + (xi - 1) t^(-1/xi)),

implemented in log space for stability near the corners of the square.

Sampling uses the Marshall-Olkin route: draw S positive stable with index
1/xi (Kanter's representation), independent unit exponentials E_k, and set
u_k = exp(-(E_k / S)^(1/xi)).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.stats import rankdata

from .errors import DomainError, InvalidParameter, NonConvergence
from .npde import Sample

XI_MAX = 50.0  # tau = 1 - 1/xi = 0.98 at the cap; beyond that data are comonotone

N_PLUS_1 = "n_plus_1"
N_CONVENTION = "n"

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class CopulaParam:
    xi: float
    at_upper_bound: bool = False

    def __post_init__(self):
        if not (np.isfinite(self.xi) and self.xi >= 1.0):
            raise InvalidParameter("copula parameter xi must be >= 1")


def copula_cdf(param: CopulaParam | float, u1, u2):
    """C(u1, u2); boundary conventions C(0, .) = 0 and C(1, v) = v."""
    xi = param.xi if isinstance(param, CopulaParam) else float(param)
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    scalar = u1.ndim == 0 and u2.ndim == 0
    u1, u2 = np.atleast_1d(u1), np.atleast_1d(u2)
    if np.any((u1 < 0) | (u1 > 1) | (u2 < 0) | (u2 > 1)):
        raise DomainError("copula arguments must lie in [0, 1]")
    out = np.zeros(np.broadcast_shapes(u1.shape, u2.shape))
    pos = (u1 > 0) & (u2 > 0)
    with np.errstate(divide="ignore"):
        l1 = np.where(pos, -np.log(np.where(pos, u1, 1.0)), np.inf)
        l2 = np.where(pos, -np.log(np.where(pos, u2, 1.0)), np.inf)
    t = l1**xi + l2**xi
    np.copyto(out, np.exp(-(t ** (1.0 / xi))), where=pos)
    return float(out[0]) if scalar else out


def log_copula_pdf(param: CopulaParam | float, u1, u2):
    """log c(u1, u2) on the open square (0, 1)^2."""
    xi = param.xi if isinstance(param, CopulaParam) else float(param)
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    scalar = u1.ndim == 0 and u2.ndim == 0
    u1, u2 = np.atleast_1d(u1), np.atleast_1d(u2)
    if np.any((u1 <= 0) | (u1 >= 1) | (u2 <= 0) | (u2 >= 1)):
        raise DomainError("copula density requires arguments strictly inside (0, 1)")
    if xi == 1.0:
        out = np.zeros(np.broadcast_shapes(u1.shape, u2.shape))
        return float(out[0]) if scalar else out
    l1 = -np.log(u1)  # > 0
    l2 = -np.log(u2)
    s1 = l1**xi
    s2 = l2**xi
    t = s1 + s2
    w = t ** (1.0 / xi)
    out = (
        -w
        + (2.0 / xi - 2.0) * np.log(t)
        + (xi - 1.0) * (np.log(l1) + np.log(l2))
        + l1
        + l2
        + np.log1p((xi - 1.0) / w)
    )
    return float(out[0]) if scalar else out


def copula_pdf(param: CopulaParam | float, u1, u2):
    """Copula density c(u1, u2) = d^2 C / du1 du2 on (0, 1)^2."""
    return np.exp(log_copula_pdf(param, u1, u2))


def pseudo_observations(sample: Sample, convention: str = N_PLUS_1) -> np.ndarray:
    """Per-column ranks scaled into (0, 1]; ties get their average rank.

    The default divides ranks by n + 1, which keeps every value strictly
    below 1.  The ``n`` convention divides by n and therefore puts the top
    rank exactly at 1, where the copula density is undefined; downstream
    users drop such rows.
    """
    if convention not in (N_PLUS_1, N_CONVENTION):
        raise InvalidParameter(f"unknown pseudo-observation convention: {convention!r}")
    if sample.dim != 2:
        raise InvalidParameter("pseudo-observations need a 2-D sample")
    ranks = np.column_stack(
        [rankdata(sample.rows[:, j], method="average") for j in range(2)]
    )
    denom = sample.n + 1 if convention == N_PLUS_1 else sample.n
    return ranks / denom


def _pseudo_loglik(xi: float, u: np.ndarray) -> float:
    return float(np.sum(log_copula_pdf(xi, u[:, 0], u[:, 1])))


def rank_pseudo_mle(sample: Sample, convention: str = N_PLUS_1) -> CopulaParam:
    """Maximize the rank-based pseudo-log-likelihood over xi in [1, 50].

    Golden-section search on the 1-D objective to an xi-tolerance of 1e-6.
    Under the ``n`` convention, rows containing a pseudo-observation equal
    to 1 are dropped before evaluating the likelihood.
    """
    if sample.n < 10:
        raise InvalidParameter("rank pseudo-MLE needs at least 10 observations")
    u = pseudo_observations(sample, convention)
    u = u[np.all(u < 1.0, axis=1)]
    if u.shape[0] < 10:
        raise NonConvergence("too few usable rows after dropping boundary ranks")

    lo, hi = 1.0, XI_MAX
    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1 = _pseudo_loglik(x1, u)
    f2 = _pseudo_loglik(x2, u)
    if not (np.isfinite(f1) and np.isfinite(f2)):
        raise NonConvergence("pseudo-likelihood is not finite on the search interval")
    while hi - lo > 1e-6:
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = _pseudo_loglik(x1, u)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = _pseudo_loglik(x2, u)
    xi_hat = 0.5 * (lo + hi)
    # compare with the endpoints, where the maximum may sit
    candidates = [(xi_hat, _pseudo_loglik(xi_hat, u)), (1.0, _pseudo_loglik(1.0, u))]
    xi_hat, _ = max(candidates, key=lambda c: c[1])
    return CopulaParam(xi=xi_hat, at_upper_bound=bool(XI_MAX - xi_hat < 1e-3))


def sample_copula(param: CopulaParam | float, n: int, seed) -> np.ndarray:
    """n pairs from the copula via the Marshall-Olkin construction."""
    xi = param.xi if isinstance(param, CopulaParam) else float(param)
    if xi < 1.0:
        raise InvalidParameter("copula parameter xi must be >= 1")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if xi == 1.0:
        return rng.random((n, 2))
    alpha = 1.0 / xi
    # Kanter's representation of the positive stable law with index alpha
    theta = np.pi * rng.random(n)
    w = rng.exponential(1.0, n)
    s = (
        np.sin(alpha * theta) ** alpha
        * np.sin((1.0 - alpha) * theta) ** (1.0 - alpha)
        / np.sin(theta)
    ) ** (1.0 / alpha) * w ** (-(1.0 - alpha) / alpha)
    e = rng.exponential(1.0, (n, 2))
    return np.exp(-((e / s[:, None]) ** alpha))


@dataclass(frozen=True)
class Marginal:
    """A marginal density estimate together with its cdf.

    ``from_pdf`` integrates the density on a cached grid (cumulative
    trapezoid) and interpolates; exact cdfs can be supplied directly.
    """

    pdf: object  # vectorized callable
    cdf: object  # vectorized callable

    @classmethod
    def from_pdf(cls, pdf, lo: float, hi: float, m: int = 2001) -> "Marginal":
        xs = np.linspace(lo, hi, m)
        dens = np.asarray(pdf(xs), dtype=float)
        steps = np.diff(xs)
        cums = np.concatenate([[0.0], np.cumsum(0.5 * (dens[1:] + dens[:-1]) * steps)])

        def cdf(x, _xs=xs, _c=cums):
            return np.interp(np.asarray(x, dtype=float), _xs, _c, left=0.0, right=_c[-1])

        return cls(pdf=pdf, cdf=cdf)


@dataclass(frozen=True)
class JointDensityEstimate:
    """Sklar factorization: copula density at the marginal cdf values times
    the product of marginal densities."""

    param: CopulaParam
    margin1: Marginal
    margin2: Marginal
    eps: float = 1e-10


def joint_density_eval(est: JointDensityEstimate, x1, x2):
    """Joint density at (x1, x2); cdf values are clamped inside (eps, 1-eps)
    so the copula density stays evaluable at the edges."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    scalar = x1.ndim == 0 and x2.ndim == 0
    u1 = np.clip(est.margin1.cdf(x1), est.eps, 1.0 - est.eps)
    u2 = np.clip(est.margin2.cdf(x2), est.eps, 1.0 - est.eps)
    c = copula_pdf(est.param, u1, u2)
    out = c * est.margin1.pdf(x1) * est.margin2.pdf(x2)
    return float(out) if scalar else out


def kendall_tau(param: CopulaParam | float) -> float:
    """Population Kendall's tau, 1 - 1/xi."""
    xi = param.xi if isinstance(param, CopulaParam) else float(param)
    return 1.0 - 1.0 / xi
