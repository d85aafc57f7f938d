import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from ptgfit.baselines import Exponential, Weibull
from ptgfit.distributions import (
    PtgParams,
    pte_params,
    ptg_cdf,
    ptg_hrf,
    ptg_log_pdf,
    ptg_pdf,
    ptg_quantile,
    ptg_sample,
    ptw_params,
    tg_cdf,
    tg_pdf,
    tg_quantile,
)
from ptgfit.gof import ks_test

EXP1 = Exponential(1.0)

# admissible corners and interior points of the (alpha, beta) domain
PARAM_GRID = [
    PtgParams(a, b, base)
    for a in (-1.0, -0.5, 0.0, 0.5, 1.0)
    for b in (-6.6, -0.5, 2.0)
    for base in (Exponential(1.0), Weibull(1.2, 1.6))
]


def _bisect_quantile(cdf, u, lo=0.0, hi=1e3, iters=200):
    """Independent inversion oracle: plain bisection on a monotone cdf."""
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if cdf(mid) < u:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# transmuted layer
# ---------------------------------------------------------------------------


class TestTransmutedLayer:
    def test_alpha_zero_reduces_to_baseline(self):
        x = 0.35667494393873245  # G(x) = 0.3 for Exp(1)
        assert tg_cdf(x, 0.0, EXP1) == pytest.approx(0.3, abs=1e-12)
        assert tg_pdf(x, 0.0, EXP1) == pytest.approx(EXP1.pdf(x), abs=1e-15)

    def test_alpha_one_at_half(self):
        x = math.log(2.0)  # G = 0.5
        assert tg_cdf(x, 1.0, EXP1) == pytest.approx(0.5 * (2 - 0.5), abs=1e-12)
        assert tg_pdf(x, 1.0, EXP1) == pytest.approx(EXP1.pdf(x), abs=1e-12)

    def test_limits(self):
        for a in (-1.0, -0.3, 0.7, 1.0):
            assert tg_cdf(0.0, a, EXP1) == 0.0
            assert tg_cdf(800.0, a, EXP1) == pytest.approx(1.0, abs=1e-12)

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            tg_cdf(1.0, 1.5, EXP1)
        with pytest.raises(ValueError):
            tg_cdf(-0.1, 0.5, EXP1)
        with pytest.raises(ValueError):
            tg_quantile(0.0, 0.5, EXP1)
        with pytest.raises(ValueError):
            tg_quantile(1.0, 0.5, EXP1)

    def test_pdf_integrates_to_cdf(self):
        # adaptive-quadrature oracle for the derivative relationship
        for a in (-0.9, 0.4, 1.0):
            for x_hi in (0.7, 2.3):
                val = quad(lambda t: tg_pdf(t, a, EXP1), 0, x_hi)[0]
                assert val == pytest.approx(tg_cdf(x_hi, a, EXP1), abs=1e-8)

    def test_quantile_alpha_zero_is_baseline_median(self):
        assert tg_quantile(0.5, 0.0, EXP1) == pytest.approx(math.log(2.0), rel=1e-12)

    def test_quantile_alpha_one_three_quarters(self):
        # F = 0.75 at alpha = 1 happens exactly where G = 0.5
        x = tg_quantile(0.75, 1.0, EXP1)
        assert EXP1.cdf(x) == pytest.approx(0.5, abs=1e-12)

    def test_roundtrip_against_bisection_oracle(self):
        for a in (-1.0, -0.6, -1e-7, 0.0, 1e-7, 0.6, 1.0):
            for u in np.arange(0.01, 1.0, 0.09):
                x = tg_quantile(u, a, EXP1)
                assert tg_cdf(x, a, EXP1) == pytest.approx(u, abs=1e-9)
                x_oracle = _bisect_quantile(lambda t: tg_cdf(t, a, EXP1), u, hi=60.0)
                assert x == pytest.approx(x_oracle, abs=1e-7)

    @given(
        a=st.floats(-1.0, 1.0),
        u=st.floats(0.001, 0.999),
        lam=st.floats(0.2, 5.0),
    )
    def test_roundtrip_property(self, a, u, lam):
        base = Exponential(lam)
        assert tg_cdf(tg_quantile(u, a, base), a, base) == pytest.approx(u, abs=1e-9)


# ---------------------------------------------------------------------------
# Poisson-compounded layer
# ---------------------------------------------------------------------------


class TestCompoundedCdf:
    def test_value_from_exponential_series_oracle(self):
        # alpha=0, beta=1, lam=1 at x = ln 2: (1 - e^-0.5) / (1 - e^-1)
        p = pte_params(0.0, 1.0, 1.0)
        expected = -math.expm1(-0.5) / -math.expm1(-1.0)
        assert ptg_cdf(math.log(2.0), p) == pytest.approx(expected, abs=1e-14)
        assert expected == pytest.approx(0.6225, abs=2e-4)

    def test_boundary_limits(self):
        for p in PARAM_GRID:
            assert ptg_cdf(0.0, p) == 0.0
            assert ptg_cdf(900.0, p) == pytest.approx(1.0, abs=1e-12)

    def test_monotone_on_sorted_grid(self):
        xs = np.geomspace(1e-3, 40.0, 300)
        for p in PARAM_GRID:
            diffs = np.diff(ptg_cdf(xs, p))
            assert np.all(diffs >= -1e-14)

    def test_poisson_reduction_at_alpha_zero(self):
        # algebraic identity with the plain compounded-exponential cdf
        xs = np.linspace(0.05, 8.0, 60)
        for beta in (-6.6, -0.5, 0.5, 6.6):
            p = pte_params(0.0, beta, 0.7)
            g = Exponential(0.7).cdf(xs)
            reference = np.expm1(-beta * g) / np.expm1(-beta)
            assert np.max(np.abs(ptg_cdf(xs, p) - reference)) <= 1e-15

    def test_beta_to_zero_limit_is_transmuted_cdf(self):
        xs = np.linspace(0.05, 6.0, 50)
        for beta in (1e-7, -1e-7):
            p = pte_params(0.3, beta, 1.0)
            assert np.max(np.abs(ptg_cdf(xs, p) - tg_cdf(xs, 0.3, EXP1))) <= 1e-6

    def test_weibull_shape_one_equals_pte(self):
        xs = np.linspace(0.01, 5.0, 40)
        pw = ptw_params(0.5, -2.0, 1.3, 1.0)
        pe = pte_params(0.5, -2.0, 1.3)
        assert np.max(np.abs(ptg_cdf(xs, pw) - ptg_cdf(xs, pe))) <= 1e-15
        assert np.max(np.abs(ptg_pdf(xs, pw) - ptg_pdf(xs, pe))) <= 1e-15


class TestCompoundedPdf:
    def test_alpha_zero_poisson_density(self):
        xs = np.linspace(0.05, 5.0, 40)
        beta, lam = 2.0, 1.0
        p = pte_params(0.0, beta, lam)
        f = Exponential(lam).pdf(xs)
        big_f = Exponential(lam).cdf(xs)
        reference = beta * f * np.exp(-beta * big_f) / -np.expm1(-beta)
        assert np.allclose(ptg_pdf(xs, p), reference, atol=1e-15)

    def test_normalization_grid(self):
        for p in PARAM_GRID:
            total = quad(lambda x: ptg_pdf(x, p), 0, np.inf, limit=200)[0]
            assert total == pytest.approx(1.0, abs=1e-8)

    def test_golden_value_from_cdf_central_difference(self):
        # frozen via the h=1e-6 central-difference oracle on the cdf
        p = pte_params(0.5, 2.0, 1.0)
        assert ptg_pdf(1.0, p) == pytest.approx(0.16531093832308205, abs=1e-12)
        h = 1e-6
        oracle = (ptg_cdf(1.0 + h, p) - ptg_cdf(1.0 - h, p)) / (2 * h)
        assert ptg_pdf(1.0, p) == pytest.approx(oracle, abs=1e-6)

    def test_matches_cdf_derivative_on_log_grid(self):
        xs = np.geomspace(0.05, 10.0, 25)
        h = 1e-6
        for p in PARAM_GRID:
            fd = (ptg_cdf(xs + h, p) - ptg_cdf(xs - h, p)) / (2 * h)
            assert np.max(np.abs(fd - ptg_pdf(xs, p))) <= 1e-6


class TestLogPdf:
    def test_exp_of_log_pdf_is_pdf(self):
        xs = np.geomspace(0.05, 12.0, 30)
        for p in PARAM_GRID:
            lp = ptg_log_pdf(xs, p)
            pdf = ptg_pdf(xs, p)
            mask = pdf > 0
            assert np.allclose(np.exp(lp[mask]), pdf[mask], rtol=1e-12)

    def test_sentinel_where_density_vanishes(self):
        # the transmuted factor hits zero only at support endpoints
        assert ptg_log_pdf(0.0, pte_params(-1.0, 1.0, 1.0)) == -np.inf
        assert ptg_log_pdf(800.0, pte_params(1.0, 1.0, 1.0)) == -np.inf

    def test_dataset_I_loglik_matches_published_criteria(self, data_I):
        # back-solved from the published AIC/BIC of the PT-E fit
        p = pte_params(0.813, -6.587, 0.841)
        total = float(np.sum(ptg_log_pdf(data_I, p)))
        assert total == pytest.approx(-98.045, abs=0.01)


class TestHazard:
    def test_identity_on_grid(self):
        for p in PARAM_GRID:
            xs = ptg_quantile(np.linspace(0.05, 0.95, 19), p)
            lhs = ptg_hrf(xs, p) * (1.0 - ptg_cdf(xs, p))
            assert np.max(np.abs(lhs - ptg_pdf(xs, p))) <= 1e-10

    def test_closed_form_pte(self):
        # independent evaluation of the exponential-baseline hazard formula
        a, b, lam, x = 0.5, 1.0, 1.0, 1.0
        g_x = 1 - math.exp(-lam * x)
        t = g_x * (1 + a - a * g_x)
        num = b * lam * math.exp(-lam * x) * (1 + a - 2 * a * g_x) * math.exp(-b * t)
        den = math.exp(-b * t) - math.exp(-b)
        assert ptg_hrf(x, pte_params(a, b, lam)) == pytest.approx(num / den, rel=1e-10)

    def test_beta_to_zero_alpha_zero_is_constant_baseline_hazard(self):
        p = pte_params(0.0, 1e-6, 2.0)
        for x in (0.1, 0.7, 2.0, 4.0):
            assert ptg_hrf(x, p) == pytest.approx(2.0, abs=1e-4)

    def test_domain_error_at_saturated_cdf(self):
        with pytest.raises(ValueError):
            ptg_hrf(4000.0, pte_params(0.0, 1.0, 1.0))


class TestQuantile:
    def test_roundtrip_grid(self):
        u = np.linspace(0.001, 0.999, 101)
        for p in PARAM_GRID:
            x = ptg_quantile(u, p)
            assert np.max(np.abs(ptg_cdf(x, p) - u)) <= 1e-9

    def test_inverse_of_cdf_example(self):
        p = pte_params(0.0, 1.0, 1.0)
        u0 = -math.expm1(-0.5) / -math.expm1(-1.0)
        assert ptg_quantile(u0, p) == pytest.approx(math.log(2.0), abs=1e-6)

    def test_bisection_oracle(self):
        p = pte_params(0.7, -3.0, 0.8)
        for u in (0.05, 0.4, 0.9):
            x_oracle = _bisect_quantile(lambda t: ptg_cdf(t, p), u, hi=80.0)
            assert ptg_quantile(u, p) == pytest.approx(x_oracle, abs=1e-7)

    def test_small_u_goes_to_zero(self):
        assert 0.0 < ptg_quantile(1e-12, pte_params(0.5, 2.0, 1.0)) < 1e-5

    def test_domain_errors(self):
        p = pte_params(0.5, 2.0, 1.0)
        for u in (0.0, 1.0, -0.2, 1.3):
            with pytest.raises(ValueError):
                ptg_quantile(u, p)


class TestSampling:
    def test_determinism(self):
        p = pte_params(0.5, 2.0, 1.0)
        assert np.array_equal(ptg_sample(500, p, 42), ptg_sample(500, p, 42))
        assert not np.array_equal(ptg_sample(500, p, 42), ptg_sample(500, p, 43))

    def test_ks_band_at_fitted_parameters(self):
        # 99% Kolmogorov band for n = 1e5 is ~0.0051; the gate is 0.006
        p = pte_params(0.813, -6.587, 0.841)
        x = ptg_sample(100_000, p, 2024)
        d, _ = ks_test(x, lambda v: ptg_cdf(v, p))
        assert d < 0.006

    def test_exponential_limit_mean(self):
        # beta -> 0, alpha = 0 degenerates to Exponential(2), mean 0.5
        p = pte_params(0.0, 1e-6, 2.0)
        x = ptg_sample(100_000, p, 7)
        se = x.std(ddof=1) / math.sqrt(x.size)
        assert abs(x.mean() - 0.5) < 3 * se

    def test_positive_and_validated(self):
        assert np.all(ptg_sample(1000, pte_params(-1.0, -6.6, 1.0), 5) > 0)
        with pytest.raises(ValueError):
            ptg_sample(0, pte_params(0.5, 2.0, 1.0), 1)


class TestParamsValidation:
    @pytest.mark.parametrize("alpha", [-1.2, 1.01, math.nan])
    def test_alpha_domain(self, alpha):
        with pytest.raises(ValueError):
            PtgParams(alpha, 1.0, EXP1)

    @pytest.mark.parametrize("beta", [0.0, 1e-9, -1e-12, math.nan])
    def test_beta_floor(self, beta):
        with pytest.raises(ValueError):
            PtgParams(0.5, beta, EXP1)

    def test_beta_floor_configurable(self):
        p = PtgParams(0.5, 1e-10, EXP1, beta_floor=1e-12)
        assert p.beta == 1e-10

    def test_names_and_values(self):
        p = ptw_params(0.1, 2.0, 1.5, 0.9)
        assert p.names == ("alpha", "beta", "lam", "theta")
        assert p.values == (0.1, 2.0, 1.5, 0.9)
