"""fitcoef: fitness-coefficient density estimation.

The fitness coefficient is the weight alpha in [0, 1] maximizing the
mixture likelihood sum_i log(alpha * f_theta_hat(X_i) + (1 - alpha) * g_i),
where f_theta_hat is a maximum likelihood fit and g_i is a per-point
nonparametric density value (leave-and-repair by default).  It measures
model quality -- near 1 when the model fits, near 0 when it does not --
and yields the robust semiparametric estimate
alpha * f_theta_hat + (1 - alpha) * kde.
"""

from ._backend import backend_name
from .errors import (
    DegenerateSample,
    DimensionMismatch,
    DomainError,
    FitcoefError,
    Indistinguishable,
    InvalidParameter,
    LengthMismatch,
    NonConvergence,
    NonpositiveDensity,
    ParseError,
    SupportViolation,
)
from .fitness import (
    FitnessConfig,
    FitnessResult,
    SemiparametricDensity,
    fitness_coefficient,
    mixture_loglik,
    sample_semiparametric,
    semiparametric_eval,
    semiparametric_from_fit,
    solve_alpha,
)
from .gof import Grid, GofReport, bootstrap_pvalue, cvm_statistic, l2_distance, l2_distance_squared
from .kernels import BandwidthRule, kernel_eval, select_bandwidth
from .models import density_eval, cdf_eval, fit_mle, params_from_moments, ppf, sample_from
from .npde import (
    NPConfig,
    RepairDensity,
    Sample,
    default_config,
    kde_eval,
    loo_values,
    lr_values,
    repair_density_eval,
)

__version__ = "0.1.0"

__all__ = [
    "BandwidthRule",
    "DegenerateSample",
    "DimensionMismatch",
    "DomainError",
    "FitcoefError",
    "FitnessConfig",
    "FitnessResult",
    "GofReport",
    "Grid",
    "Indistinguishable",
    "InvalidParameter",
    "LengthMismatch",
    "NPConfig",
    "NonConvergence",
    "NonpositiveDensity",
    "ParseError",
    "RepairDensity",
    "Sample",
    "SemiparametricDensity",
    "SupportViolation",
    "backend_name",
    "bootstrap_pvalue",
    "cdf_eval",
    "cvm_statistic",
    "default_config",
    "density_eval",
    "fit_mle",
    "fitness_coefficient",
    "kde_eval",
    "kernel_eval",
    "l2_distance",
    "l2_distance_squared",
    "loo_values",
    "lr_values",
    "mixture_loglik",
    "params_from_moments",
    "ppf",
    "repair_density_eval",
    "sample_from",
    "sample_semiparametric",
    "select_bandwidth",
    "semiparametric_eval",
    "semiparametric_from_fit",
    "solve_alpha",
    "__version__",
]
