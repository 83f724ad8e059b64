"""Core probability distributions for counting processes.

Gamma densities and summaries, Poisson/binomial masses, the distribution of
the difference of two Poisson counts, ratio-of-Gamma densities (Beta prime as
the unit-rate special case), the ratio law implied by independent uniform
rates, and seeded samplers.  All densities are evaluated in log domain via
log-Gamma / log-Beta and exponentiated at the boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np
from scipy import special


__all__ = [
    "GammaParams",
    "SummaryStats",
    "DiscreteDist",
    "poisson_pmf",
    "poisson_cdf",
    "skellam_pmf",
    "skellam_dist",
    "gamma_pdf",
    "gamma_logpdf",
    "gamma_cdf",
    "gamma_summaries",
    "gamma_sample",
    "binomial_pmf",
    "gamma_ratio_pdf",
    "gamma_ratio_summaries",
    "beta_prime_pdf",
    "uniform_ratio_pdf",
    "uniform_ratio_cdf",
    "poisson_process_waiting_times",
]


@dataclass(frozen=True)
class GammaParams:
    """Shape/rate pair (alpha, beta) of a Gamma distribution.

    beta carries units 1/time when the variable is a rate.  beta == 0 is
    permitted as the improper flat-prior limit: it may enter conjugate
    update rules, but density, CDF, sampling and summaries require a
    proper distribution and reject it.
    """

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (self.alpha > 0):
            raise ValueError(f"alpha must be > 0, got {self.alpha}")
        if not (self.beta >= 0):
            raise ValueError(f"beta must be >= 0, got {self.beta}")

    @property
    def is_proper(self) -> bool:
        return self.beta > 0

    def require_proper(self) -> None:
        if not self.is_proper:
            raise ValueError(
                "improper Gamma (beta == 0) is only valid as a prior in "
                "update rules, not as a distribution"
            )


@dataclass(frozen=True)
class SummaryStats:
    """Mode / mean / variance / sd, each either a float or None.

    A None entry is a legitimate regime, not an error; `undefined` maps the
    field name to the violated condition (e.g. "requires x2 > 1").
    sd is defined iff variance is defined, and equals sqrt(variance).
    """

    mode: float | None
    mean: float | None
    variance: float | None
    sd: float | None
    undefined: Mapping[str, str] = field(default_factory=dict)

    @classmethod
    def from_parts(
        cls,
        mode: float | None,
        mean: float | None,
        variance: float | None,
        undefined: Mapping[str, str] | None = None,
    ) -> "SummaryStats":
        undefined = dict(undefined or {})
        sd = math.sqrt(variance) if variance is not None else None
        if variance is None and "variance" in undefined:
            undefined.setdefault("sd", undefined["variance"])
        return cls(mode=mode, mean=mean, variance=variance, sd=sd, undefined=undefined)

    def as_dict(self) -> dict:
        """JSON-ready form: undefined entries are null plus a reason."""
        return {
            "mode": self.mode,
            "mean": self.mean,
            "variance": self.variance,
            "sd": self.sd,
            "undefined": dict(self.undefined),
        }


@dataclass(frozen=True)
class DiscreteDist:
    """A probability mass function over a contiguous integer support."""

    values: np.ndarray
    probs: np.ndarray

    def __post_init__(self) -> None:
        if self.values.shape != self.probs.shape:
            raise ValueError("values and probs must have the same shape")
        # Tail truncation must leave < 1e-9 of mass outside the support.
        if abs(float(self.probs.sum()) - 1.0) > 1e-9:
            raise ValueError("probabilities must sum to 1 within 1e-9")

    def prob(self, value: int) -> float:
        hit = np.nonzero(self.values == value)[0]
        return float(self.probs[hit[0]]) if hit.size else 0.0

    def mean(self) -> float:
        return float(np.sum(self.values * self.probs))

    def sd(self) -> float:
        m = self.mean()
        return math.sqrt(float(np.sum((self.values - m) ** 2 * self.probs)))


def _check_positive(name: str, value: float) -> None:
    if not (value > 0):
        raise ValueError(f"{name} must be > 0, got {value}")


def poisson_pmf(x, lam: float):
    """P(X = x) for X ~ Poisson(lam), computed in log domain.

    Arguments:
        x: non-negative integer count, scalar or array.
        lam: positive Poisson parameter.
    """
    _check_positive("lambda", lam)
    x_arr = np.asarray(x)
    if np.any(x_arr != np.floor(x_arr)) or np.any(x_arr < 0):
        raise ValueError("x must be a non-negative integer")
    logp = special.xlogy(x_arr, lam) - lam - special.gammaln(x_arr + 1.0)
    out = np.exp(logp)
    return float(out) if np.isscalar(x) or x_arr.ndim == 0 else out


def poisson_cdf(x, lam: float):
    """P(X <= x) for X ~ Poisson(lam): the sum of the pmf from 0 to x.

    Evaluated through the regularized upper incomplete Gamma function,
    which equals that sum exactly.
    """
    _check_positive("lambda", lam)
    x_arr = np.asarray(x)
    if np.any(x_arr != np.floor(x_arr)) or np.any(x_arr < 0):
        raise ValueError("x must be a non-negative integer")
    out = special.gammaincc(x_arr + 1.0, lam)
    return float(out) if np.isscalar(x) or x_arr.ndim == 0 else out


def _skellam_xmax(lambda1: float, lambda2: float) -> int:
    lam = max(lambda1, lambda2)
    # round(max) + 20*sqrt(max), truncated to the last integer step
    return int(math.floor(round(lam) + 20.0 * math.sqrt(lam)))


def skellam_pmf(d: int, lambda1: float, lambda2: float) -> float:
    """P(X1 - X2 = d) for independent X1 ~ Pois(lambda1), X2 ~ Pois(lambda2).

    Direct truncated summation over pairs (x1, x2 = x1 - d) with both counts
    capped at xmax = round(max(lambda1, lambda2)) + 20*sqrt(max(...)), which
    leaves < 1e-12 of tail mass for lambda <= 100.  Capping both counts keeps
    the (d, l1, l2) -> (-d, l2, l1) symmetry exact.
    """
    _check_positive("lambda1", lambda1)
    _check_positive("lambda2", lambda2)
    d = int(d)
    xmax = _skellam_xmax(lambda1, lambda2)
    x1 = np.arange(max(0, d), min(xmax, xmax + d) + 1)
    if x1.size == 0:
        return 0.0
    x2 = x1 - d
    logp = (
        special.xlogy(x1, lambda1)
        - lambda1
        - special.gammaln(x1 + 1.0)
        + special.xlogy(x2, lambda2)
        - lambda2
        - special.gammaln(x2 + 1.0)
    )
    return float(np.exp(logp).sum())


def skellam_dist(lambda1: float, lambda2: float) -> DiscreteDist:
    """Tabulate the count-difference pmf of D = X1 - X2.

    The support covers mean +- 8 sd of D, which keeps the truncated tail
    mass far below the DiscreteDist 1e-9 contract.
    """
    _check_positive("lambda1", lambda1)
    _check_positive("lambda2", lambda2)
    center = lambda1 - lambda2
    half = 8.0 * math.sqrt(lambda1 + lambda2) + 1.0
    d_min = int(math.floor(center - half))
    d_max = int(math.ceil(center + half))
    values = np.arange(d_min, d_max + 1)
    probs = np.array([skellam_pmf(int(d), lambda1, lambda2) for d in values])
    return DiscreteDist(values=values, probs=probs)


def gamma_logpdf(x, p: GammaParams):
    """log f(x | alpha, beta) with f(x) = beta^alpha / Gamma(alpha) * x^(alpha-1) * exp(-beta x)."""
    p.require_proper()
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0):
        raise ValueError("x must be >= 0")
    with np.errstate(divide="ignore", invalid="ignore"):
        logp = (
            p.alpha * math.log(p.beta)
            - special.gammaln(p.alpha)
            + (p.alpha - 1.0) * np.log(x_arr)
            - p.beta * x_arr
        )
    if p.alpha == 1.0:
        # 0 * log(0) above is nan; the exponential density is beta at x = 0
        logp = np.where(x_arr == 0.0, math.log(p.beta), logp)
    return float(logp) if np.isscalar(x) or x_arr.ndim == 0 else logp


def gamma_pdf(x, p: GammaParams):
    """Gamma density; at x = 0 it is 0 for alpha > 1, beta for alpha = 1, +inf for alpha < 1."""
    logp = gamma_logpdf(x, p)
    out = np.exp(logp)
    return float(out) if np.isscalar(x) else out


def gamma_cdf(x, p: GammaParams):
    """P(X <= x) for X ~ Gamma(alpha, beta) via the regularized lower incomplete Gamma."""
    p.require_proper()
    x_arr = np.asarray(x, dtype=float)
    if np.any(x_arr < 0):
        raise ValueError("x must be >= 0")
    out = special.gammainc(p.alpha, p.beta * x_arr)
    return float(out) if np.isscalar(x) or x_arr.ndim == 0 else out


def gamma_summaries(p: GammaParams) -> SummaryStats:
    """Mean alpha/beta, sd sqrt(alpha)/beta, mode (alpha-1)/beta for alpha >= 1 else 0."""
    p.require_proper()
    mode = (p.alpha - 1.0) / p.beta if p.alpha >= 1.0 else 0.0
    mean = p.alpha / p.beta
    variance = p.alpha / p.beta**2
    return SummaryStats.from_parts(mode=mode, mean=mean, variance=variance)


def gamma_sample(p: GammaParams, n: int, seed) -> np.ndarray:
    """Draw n Gamma(alpha, beta) variates.

    Arguments:
        p: proper Gamma parameters.
        n: number of draws, >= 1.
        seed: integer seed or numpy Generator; the caller owns the RNG state.
    """
    p.require_proper()
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = np.random.default_rng(seed)
    return rng.gamma(shape=p.alpha, scale=1.0 / p.beta, size=int(n))


def binomial_pmf(x, n: int, prob: float):
    """P(X = x) for X ~ Binom(n, prob); 0 outside [0, n] rather than an error."""
    if not (0.0 <= prob <= 1.0):
        raise ValueError(f"prob must be in [0, 1], got {prob}")
    if n < 0 or n != int(n):
        raise ValueError(f"n must be a non-negative integer, got {n}")
    x_arr = np.asarray(x)
    if np.any(x_arr != np.floor(x_arr)):
        raise ValueError("x must be an integer")
    inside = (x_arr >= 0) & (x_arr <= n)
    xs = np.where(inside, x_arr, 0)
    logp = (
        special.gammaln(n + 1.0)
        - special.gammaln(xs + 1.0)
        - special.gammaln(n - xs + 1.0)
        + special.xlogy(xs, prob)
        + special.xlog1py(n - xs, -prob)
    )
    out = np.where(inside, np.exp(logp), 0.0)
    return float(out) if np.isscalar(x) or x_arr.ndim == 0 else out


def gamma_ratio_logpdf(rho, p1: GammaParams, p2: GammaParams):
    """log density of Z1/Z2 for independent Z1 ~ Gamma(p1), Z2 ~ Gamma(p2)."""
    p1.require_proper()
    p2.require_proper()
    rho_arr = np.asarray(rho, dtype=float)
    if np.any(rho_arr < 0):
        raise ValueError("rho must be >= 0")
    a1, b1, a2, b2 = p1.alpha, p1.beta, p2.alpha, p2.beta
    with np.errstate(divide="ignore", invalid="ignore"):
        logp = (
            a1 * math.log(b1)
            + a2 * math.log(b2)
            - special.betaln(a1, a2)
            + (a1 - 1.0) * np.log(rho_arr)
            - (a1 + a2) * np.log(b2 + rho_arr * b1)
        )
    if a1 == 1.0:
        logp = np.where(
            rho_arr == 0.0,
            math.log(b1) + a2 * math.log(b2) - special.betaln(1.0, a2) - (1.0 + a2) * math.log(b2),
            logp,
        )
    return float(logp) if np.isscalar(rho) or rho_arr.ndim == 0 else logp


def gamma_ratio_pdf(rho, p1: GammaParams, p2: GammaParams):
    """Density of the ratio of two independent Gamma variables.

    f(rho) = b1^a1 b2^a2 / B(a1, a2) * rho^(a1-1) * (b2 + rho*b1)^-(a1+a2),
    evaluated through the log-Beta function.
    """
    out = np.exp(gamma_ratio_logpdf(rho, p1, p2))
    return float(out) if np.isscalar(rho) else out


def _ratio_moments(
    a1: float, b1: float, a2: float, b2: float
) -> tuple[float, float | None, float | None]:
    """(mode, mean or None, variance or None) of a Gamma ratio.

    Mean requires a2 > 1, variance a2 > 2; mode uses the 0-at-the-boundary
    convention when a1 < 1 (the density is unbounded at 0 there).
    """
    scale = b2 / b1
    mode = scale * (a1 - 1.0) / (a2 + 1.0) if a1 >= 1.0 else 0.0
    mean = scale * a1 / (a2 - 1.0) if a2 > 1.0 else None
    variance = (
        scale**2 * (a1 / (a2 - 1.0)) * ((a1 + 1.0) / (a2 - 2.0) - a1 / (a2 - 1.0))
        if a2 > 2.0
        else None
    )
    return mode, mean, variance


def gamma_ratio_summaries(p1: GammaParams, p2: GammaParams) -> SummaryStats:
    """Mode / mean / sd of Z1/Z2; mean needs alpha2 > 1, variance alpha2 > 2."""
    p1.require_proper()
    p2.require_proper()
    mode, mean, variance = _ratio_moments(p1.alpha, p1.beta, p2.alpha, p2.beta)
    undefined = {}
    if mean is None:
        undefined["mean"] = "requires alpha2 > 1"
    if variance is None:
        undefined["variance"] = "requires alpha2 > 2"
    return SummaryStats.from_parts(mode=mode, mean=mean, variance=variance, undefined=undefined)


def beta_prime_pdf(x, alpha: float, beta: float):
    """Beta prime density x^(alpha-1) (1+x)^-(alpha+beta) / B(alpha, beta).

    Identical to gamma_ratio_pdf with both rate parameters equal to 1.
    """
    _check_positive("alpha", alpha)
    _check_positive("beta", beta)
    return gamma_ratio_pdf(x, GammaParams(alpha, 1.0), GammaParams(beta, 1.0))


def uniform_ratio_pdf(rho):
    """Density of U1/U2 with both uniform on (0, r_max); independent of r_max.

    1/2 on 0 <= rho <= 1 and 1/(2 rho^2) beyond.
    """
    rho_arr = np.asarray(rho, dtype=float)
    if np.any(rho_arr < 0):
        raise ValueError("rho must be >= 0")
    out = np.where(rho_arr <= 1.0, 0.5, 0.5 / np.maximum(rho_arr, 1.0) ** 2)
    return float(out) if np.isscalar(rho) or rho_arr.ndim == 0 else out


def uniform_ratio_cdf(rho):
    """P(U1/U2 <= rho): rho/2 up to 1, then 1 - 1/(2 rho)."""
    rho_arr = np.asarray(rho, dtype=float)
    if np.any(rho_arr < 0):
        raise ValueError("rho must be >= 0")
    out = np.where(rho_arr <= 1.0, rho_arr / 2.0, 1.0 - 0.5 / np.maximum(rho_arr, 1.0))
    return float(out) if np.isscalar(rho) or rho_arr.ndim == 0 else out


def poisson_process_waiting_times(rate: float, k: int, seed, n_paths: int | None = None):
    """Arrival times of the first k events of a Poisson process.

    Cumulative sums of i.i.d. exponential(rate) waiting times; the k-th
    arrival is Gamma(k, rate) distributed.  Returns shape (k,) for a single
    path, or (n_paths, k) when n_paths is given.
    """
    _check_positive("rate", rate)
    if k < 1:
        raise ValueError("k must be >= 1")
    rng = np.random.default_rng(seed)
    size = (int(n_paths), int(k)) if n_paths is not None else int(k)
    if n_paths is not None and n_paths < 1:
        raise ValueError("n_paths must be >= 1")
    gaps = rng.exponential(scale=1.0 / rate, size=size)
    return np.cumsum(gaps, axis=-1)
