"""Reference models fitted alongside the PT-G family in comparisons.

Three lightweight lifetime models: exponential (closed-form MLE),
moment exponential (length-biased exponential, f(x) = x exp(-x/sigma)/sigma^2,
closed-form sigma_hat = xbar/2) and Marshall-Olkin exponential (tilted
survival S(x) = a exp(-lx) / (1 - (1-a) exp(-lx)), fitted numerically).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .mle import multistart_maximize

__all__ = [
    "ExponentialModel",
    "MomentExponential",
    "MarshallOlkinExponential",
    "fit_exponential",
    "fit_moment_exponential",
    "fit_mo_exponential",
    "fit_competitor",
    "CompetitorFit",
    "COMPETITOR_TAGS",
]

COMPETITOR_TAGS = ("exp", "me", "moe")


@dataclass(frozen=True)
class ExponentialModel:
    lam: float

    tag = "exp"
    param_names = ("lam",)

    def pdf(self, x):
        return self.lam * np.exp(-self.lam * np.asarray(x, dtype=float))

    def cdf(self, x):
        return -np.expm1(-self.lam * np.asarray(x, dtype=float))

    def loglik(self, data):
        data = np.asarray(data, dtype=float)
        return float(data.size * math.log(self.lam) - self.lam * data.sum())

    def quantile(self, u):
        return -np.log1p(-np.asarray(u, dtype=float)) / self.lam

    @property
    def params(self):
        return (self.lam,)


@dataclass(frozen=True)
class MomentExponential:
    sigma: float

    tag = "me"
    param_names = ("sigma",)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return x * np.exp(-x / self.sigma) / self.sigma**2

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        # Gamma(shape 2, scale sigma): 1 - (1 + x/sigma) exp(-x/sigma)
        return 1.0 - (1.0 + x / self.sigma) * np.exp(-x / self.sigma)

    def loglik(self, data):
        data = np.asarray(data, dtype=float)
        return float(
            np.sum(np.log(data)) - data.sum() / self.sigma
            - 2.0 * data.size * math.log(self.sigma)
        )

    def quantile(self, u):
        from scipy.stats import gamma

        return gamma.ppf(np.asarray(u, dtype=float), a=2, scale=self.sigma)

    @property
    def params(self):
        return (self.sigma,)


@dataclass(frozen=True)
class MarshallOlkinExponential:
    tilt: float
    lam: float

    tag = "moe"
    param_names = ("tilt", "lam")

    def _denom(self, x):
        return 1.0 - (1.0 - self.tilt) * np.exp(-self.lam * np.asarray(x, dtype=float))

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        return self.tilt * self.lam * np.exp(-self.lam * x) / self._denom(x) ** 2

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return -np.expm1(-self.lam * x) / self._denom(x)

    def loglik(self, data):
        data = np.asarray(data, dtype=float)
        n = data.size
        return float(
            n * math.log(self.tilt) + n * math.log(self.lam)
            - self.lam * data.sum() - 2.0 * np.sum(np.log(self._denom(data)))
        )

    def quantile(self, u):
        # invert S(x) = a*y / (1 - (1-a)*y) with y = exp(-lam*x)
        s = 1.0 - np.asarray(u, dtype=float)
        y = s / (self.tilt + s * (1.0 - self.tilt))
        return -np.log(y) / self.lam

    @property
    def params(self):
        return (self.tilt, self.lam)


def _check_data(data):
    data = np.asarray(data, dtype=float)
    if data.size == 0 or np.any(data <= 0):
        raise ValueError("data must be nonempty and strictly positive")
    return data


def fit_exponential(data):
    """Closed-form exponential MLE: lambda_hat = 1/xbar."""
    data = _check_data(data)
    lam = 1.0 / data.mean()
    return lam, ExponentialModel(lam).loglik(data)


def fit_moment_exponential(data):
    """Closed-form moment-exponential MLE: sigma_hat = xbar/2."""
    data = _check_data(data)
    sigma = data.mean() / 2.0
    return sigma, MomentExponential(sigma).loglik(data)


def fit_mo_exponential(data, seed=0, n_starts=20):
    """Numerical Marshall-Olkin exponential MLE via the multistart engine."""
    data = _check_data(data)
    if data.size < 3:
        raise ValueError("need at least three observations")
    xbar = data.mean()

    def loglik_z(z):
        return MarshallOlkinExponential(math.exp(z[0]), math.exp(z[1])).loglik(data)

    rng = np.random.default_rng(seed)
    starts = np.column_stack(
        [
            rng.uniform(math.log(0.01), math.log(100.0), n_starts),
            rng.uniform(math.log(0.1 / xbar), math.log(10.0 / xbar), n_starts),
        ]
    )
    z, ll, _, converged = multistart_maximize(loglik_z, starts)
    if not converged:
        warnings.warn("Marshall-Olkin fit did not fully converge", stacklevel=2)
    return math.exp(z[0]), math.exp(z[1]), ll


@dataclass(frozen=True)
class CompetitorFit:
    """Rich fit record used by the CLI and the reproduction report."""

    model: ExponentialModel | MomentExponential | MarshallOlkinExponential
    loglik: float
    std_errors: np.ndarray
    converged: bool
    n_obs: int

    @property
    def k(self):
        return len(self.model.params)


def fit_competitor(data, tag, seed=0):
    """Fit one competitor by tag and return the full record with standard errors.

    Closed-form information is used for the exponential (SE = lam/sqrt(n))
    and moment exponential (SE = sigma/sqrt(2n)); the Marshall-Olkin SEs
    come from a finite-difference observed information.
    """
    data = _check_data(data)
    n = data.size
    if tag == "exp":
        lam, ll = fit_exponential(data)
        return CompetitorFit(
            ExponentialModel(lam), ll, np.array([lam / math.sqrt(n)]), True, n
        )
    if tag == "me":
        sigma, ll = fit_moment_exponential(data)
        return CompetitorFit(
            MomentExponential(sigma), ll, np.array([sigma / math.sqrt(2 * n)]), True, n
        )
    if tag == "moe":
        tilt, lam, ll = fit_mo_exponential(data, seed=seed)
        from .mle import _fd_hessian

        def f(th):
            if np.any(th <= 0):
                return -np.inf
            return MarshallOlkinExponential(th[0], th[1]).loglik(data)

        info = -_fd_hessian(f, np.array([tilt, lam]), 1e-4)
        try:
            var = np.diag(np.linalg.inv(info))
            se = np.sqrt(np.where(var > 0, var, np.nan))
        except np.linalg.LinAlgError:
            se = np.full(2, np.nan)
        return CompetitorFit(MarshallOlkinExponential(tilt, lam), ll, se, True, n)
    raise ValueError(f"unknown competitor tag {tag!r}; expected {COMPETITOR_TAGS}")
