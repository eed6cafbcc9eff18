"""Parametric families, maximum likelihood fitting and sampling."""

import numpy as np
import pytest
from numpy.testing import assert_allclose
from scipy.integrate import quad

from fitcoef.errors import (
    DegenerateSample,
    InvalidParameter,
    SupportViolation,
)
from fitcoef.models import (
    EULER_GAMMA,
    FAMILIES,
    cdf_eval,
    density_eval,
    fit_mle,
    log_likelihood,
    param_names,
    params_from_moments,
    ppf,
    sample_from,
)
from fitcoef.npde import Sample

# one valid parameter vector per family, used by the generic invariants
CASES = {
    "normal": (1.0, 2.0),
    "normal_mean": (0.7,),
    "normal_scale": (1.3,),
    "gumbel": (0.0, 1.0),
    "exponential": (2.0,),
    "weibull": (2.0, 0.5),
}

INTEGRATION_RANGES = {
    "normal": (-40.0, 40.0),
    "normal_mean": (-40.0, 40.0),
    "normal_scale": (-40.0, 40.0),
    "gumbel": (-60.0, 10.0),
    "exponential": (0.0, 60.0),
    "weibull": (0.0, 30.0),
}


class TestDensities:
    def test_gumbel_normalized(self):
        mass, _ = quad(lambda x: density_eval("gumbel", (0.0, 1.0), x), -20.0, 5.0)
        assert abs(mass - 1.0) < 1e-6

    def test_exponential_value(self):
        assert_allclose(density_eval("exponential", (2.0,), 0.5), 2.0 * np.exp(-1.0), rtol=1e-14)

    def test_positive_support_families_vanish_left_of_zero(self):
        assert density_eval("weibull", (2.0, 0.5), 0.0) == 0.0
        assert density_eval("weibull", (2.0, 0.5), -1.0) == 0.0
        assert density_eval("exponential", (1.0,), -0.5) == 0.0

    @pytest.mark.parametrize("family", FAMILIES)
    def test_unit_mass(self, family):
        lo, hi = INTEGRATION_RANGES[family]
        mass, _ = quad(lambda x: density_eval(family, CASES[family], x), lo, hi, limit=200)
        assert abs(mass - 1.0) < 1e-6

    @pytest.mark.parametrize("family", FAMILIES)
    def test_cdf_matches_density_quadrature(self, family):
        lo, _ = INTEGRATION_RANGES[family]
        theta = CASES[family]
        for x in (0.3, 1.1):
            mass, _ = quad(lambda t: density_eval(family, theta, t), lo, x, limit=200)
            assert_allclose(cdf_eval(family, theta, x), mass, atol=1e-8)

    @pytest.mark.parametrize("family", FAMILIES)
    def test_ppf_inverts_cdf(self, family):
        theta = CASES[family]
        for u in (0.05, 0.5, 0.93):
            assert_allclose(cdf_eval(family, theta, ppf(family, theta, u)), u, rtol=1e-10)

    def test_parameter_validation(self):
        with pytest.raises(InvalidParameter):
            density_eval("gumbel", (0.0, -1.0), 0.0)
        with pytest.raises(InvalidParameter):
            density_eval("weibull", (2.0,), 0.0)
        with pytest.raises(InvalidParameter):
            density_eval("poisson", (1.0,), 0.0)


class TestFitMle:
    def test_wind_gumbel(self, wind):
        theta = fit_mle("gumbel", wind)
        assert abs(theta[0] - 62.1) < 0.1
        assert abs(theta[1] - 5.4) < 0.1

    def test_normal_mean_closed_form(self, rng):
        x = rng.standard_normal(50) + 3.0
        theta = fit_mle("normal_mean", Sample(x))
        assert_allclose(theta[0], x.mean(), rtol=1e-14)

    def test_normal_closed_form(self, rng):
        x = rng.standard_normal(50)
        theta = fit_mle("normal", Sample(x))
        assert_allclose(theta, [x.mean(), x.std()], rtol=1e-14)

    def test_exponential_rate_is_inverse_mean(self):
        theta = fit_mle("exponential", Sample(np.array([1.0, 1.0, 1.0])))
        assert_allclose(theta[0], 1.0, rtol=1e-14)

    def test_support_violation(self, rng):
        x = rng.standard_normal(20)
        for family in ("exponential", "weibull"):
            with pytest.raises(SupportViolation):
                fit_mle(family, Sample(x))

    def test_constant_sample(self):
        s = Sample(np.full(10, 4.2))
        with pytest.raises(DegenerateSample):
            fit_mle("gumbel", s)
        with pytest.raises(DegenerateSample):
            fit_mle("normal", s)
        with pytest.raises(DegenerateSample):
            fit_mle("weibull", s)

    @pytest.mark.parametrize("family", ["gumbel", "weibull", "normal", "exponential"])
    def test_stationary_point(self, family, rng):
        # central-difference gradient of the log-likelihood vanishes at the
        # MLE; step 1e-5 keeps cancellation noise well below the bound
        truth = {"gumbel": (1.0, 2.0), "weibull": (1.7, 1.2), "normal": (0.0, 1.0), "exponential": (0.8,)}[family]
        x = sample_from(family, truth, 120, rng)
        theta = fit_mle(family, x)
        step = 1e-5
        grad = []
        for i in range(theta.size):
            up, dn = theta.copy(), theta.copy()
            up[i] += step
            dn[i] -= step
            grad.append((log_likelihood(family, up, x.rows) - log_likelihood(family, dn, x.rows)) / (2 * step))
        assert np.linalg.norm(grad) < 1e-6

    def test_weibull_agrees_with_scipy(self, rng):
        from scipy.stats import weibull_min

        x = sample_from("weibull", (2.0, 0.5), 300, rng)
        theta = fit_mle("weibull", x)
        a_sp, _, b_sp = weibull_min.fit(x.rows, floc=0.0)
        assert_allclose(theta, [a_sp, b_sp], rtol=1e-4)

    def test_gumbel_agrees_with_grid_search(self, rng):
        # lattice oracle around the moment estimator, five random samples
        for seed in range(5):
            x = sample_from("gumbel", (2.0, 1.5), 150, np.random.default_rng(seed)).rows
            sig0 = np.std(x) * np.sqrt(6.0) / np.pi
            mu0 = x.mean() + EULER_GAMMA * sig0
            mus = np.linspace(mu0 - 1.0, mu0 + 1.0, 81)
            sigs = np.linspace(0.5 * sig0, 1.8 * sig0, 81)
            ll = np.array([[log_likelihood("gumbel", (m, s), x) for s in sigs] for m in mus])
            i, j = np.unravel_index(np.argmax(ll), ll.shape)
            theta = fit_mle("gumbel", Sample(x))
            assert log_likelihood("gumbel", theta, x) >= ll[i, j] - 1e-9
            assert abs(theta[0] - mus[i]) <= mus[1] - mus[0]
            assert abs(theta[1] - sigs[j]) <= sigs[1] - sigs[0]

    def test_gumbel_affine_equivariance(self, rng):
        x = sample_from("gumbel", (0.5, 2.0), 80, rng).rows
        theta = fit_mle("gumbel", Sample(x))
        a, b = -3.0, 2.5
        theta2 = fit_mle("gumbel", Sample(a + b * x))
        assert_allclose(theta2, [a + b * theta[0], b * theta[1]], rtol=1e-6, atol=1e-6)

    def test_weibull_profile_matches_dense_scan(self, rng):
        x = sample_from("weibull", (2.0, 0.5), 200, rng).rows
        theta = fit_mle("weibull", Sample(x))
        shapes = np.linspace(0.5 * theta[0], 1.5 * theta[0], 2001)
        scales = (np.array([np.mean(x**a) for a in shapes])) ** (1.0 / shapes)
        ll = np.array([log_likelihood("weibull", (a, b), x) for a, b in zip(shapes, scales)])
        assert log_likelihood("weibull", theta, x) >= ll.max() - 1e-9


class TestSampleFrom:
    def test_gumbel_moment_match(self):
        theta = params_from_moments("gumbel", 59.1, 6.55)
        x = sample_from("gumbel", theta, 100_000, 7).rows
        assert abs(x.mean() - 59.1) < 0.1
        assert abs(x.std(ddof=1) - 6.55) < 0.1

    def test_exponential_mean(self):
        x = sample_from("exponential", (2.0,), 100_000, 11).rows
        assert abs(x.mean() - 0.5) < 0.01

    def test_deterministic_given_seed(self):
        a = sample_from("weibull", (2.0, 0.5), 100, 13).rows
        b = sample_from("weibull", (2.0, 0.5), 100, 13).rows
        assert np.array_equal(a, b)

    @pytest.mark.parametrize("family", FAMILIES)
    def test_draws_inside_support(self, family, rng):
        x = sample_from(family, CASES[family], 500, rng).rows
        assert np.all(np.isfinite(x))
        if family in ("exponential", "weibull"):
            assert np.all(x > 0.0)

    def test_param_names_cover_families(self):
        for family in FAMILIES:
            assert len(param_names(family)) == len(CASES[family])
