"""Baseline lifetime distributions used as the parent G of the transmuted layers.

Each baseline exposes the same small contract: ``pdf``, ``cdf``, ``log_pdf``,
``quantile``, plus parameter metadata.  Both shipped families live on
(0, inf); the ``support`` attribute carries that so future baselines on the
whole real line can declare otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


def _check_positive(name, value):
    if not np.isfinite(value) or value <= 0.0:
        raise ValueError(f"{name} must be a positive finite real, got {value!r}")


@dataclass(frozen=True)
class Exponential:
    """Exponential baseline with rate ``lam``: g(x) = lam * exp(-lam*x)."""

    lam: float

    family_tag = "exponential"
    param_names = ("lam",)
    support = (0.0, np.inf)

    def __post_init__(self):
        _check_positive("lam", self.lam)

    @property
    def params(self):
        return (self.lam,)

    def pdf(self, x):
        return self.lam * np.exp(-self.lam * np.asarray(x, dtype=float))

    def log_pdf(self, x):
        return np.log(self.lam) - self.lam * np.asarray(x, dtype=float)

    def cdf(self, x):
        return -np.expm1(-self.lam * np.asarray(x, dtype=float))

    def quantile(self, u):
        return -np.log1p(-np.asarray(u, dtype=float)) / self.lam

    def mgf_sup(self):
        # E[exp(sX)] is finite exactly for s < lam.
        return self.lam

    def with_params(self, params):
        return Exponential(*params)


@dataclass(frozen=True)
class Weibull:
    """Weibull baseline, g(x) = lam * theta * x**(theta-1) * exp(-lam * x**theta).

    ``lam`` is a rate-like scale factor and ``theta`` the shape; ``theta = 1``
    reduces exactly to :class:`Exponential` with the same ``lam``.
    """

    lam: float
    theta: float

    family_tag = "weibull"
    param_names = ("lam", "theta")
    support = (0.0, np.inf)

    def __post_init__(self):
        _check_positive("lam", self.lam)
        _check_positive("theta", self.theta)

    @property
    def params(self):
        return (self.lam, self.theta)

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.lam * self.theta * x ** (self.theta - 1.0) * np.exp(
                -self.lam * x**self.theta
            )
        if self.theta > 1.0:
            out = np.where(x == 0.0, 0.0, out)
        return out

    def log_pdf(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore"):
            return (
                np.log(self.lam)
                + np.log(self.theta)
                + (self.theta - 1.0) * np.log(x)
                - self.lam * x**self.theta
            )

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        return -np.expm1(-self.lam * x**self.theta)

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        return (-np.log1p(-u) / self.lam) ** (1.0 / self.theta)

    def mgf_sup(self):
        if self.theta > 1.0:
            return np.inf
        if self.theta == 1.0:
            return self.lam
        return 0.0  # sub-exponential tail: no positive exponential moment

    def with_params(self, params):
        return Weibull(*params)


BASELINE_FAMILIES = {
    "exponential": Exponential,
    "weibull": Weibull,
}


def make_baseline(family_tag, params):
    """Construct a baseline from its family tag and positional parameters."""
    try:
        cls = BASELINE_FAMILIES[family_tag]
    except KeyError:
        raise ValueError(
            f"unknown baseline family {family_tag!r}; "
            f"expected one of {sorted(BASELINE_FAMILIES)}"
        ) from None
    return cls(*params)
