"""Closed-form posteriors of the rate ratio rho = r1/r2.

Two causal structures are covered.  Model A infers each rate from its own
counts under flat priors and deduces the ratio, giving a Gamma-ratio
posterior with parameters (x1+1, T1) and (x2+1, T2).  Model B places the
ratio itself at the top of the model (flat prior on rho, Gamma prior on r2),
and its marginal posterior is again a Gamma ratio, now with denominator
parameters (alpha0 + x2 - 1, beta0 + T2): one power of r2 is spent
integrating the deterministic link r1 = rho * r2.

Also here: the lambda-ratio special case T1 = T2 = 1, the density of a ratio
of two i.i.d. uniform rates, and the prior on r1 implied by uniform priors
on rho and r2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Literal

import numpy as np

from .distributions import (
    GammaParams,
    SummaryStats,
    _ratio_moments,
    gamma_ratio_logpdf,
    gamma_ratio_pdf,
)
from .inference import FLAT_PRIOR, CountObservation


__all__ = [
    "RatioPosteriorSpec",
    "RatioPosterior",
    "lambda_ratio_pdf",
    "lambda_ratio_summaries",
    "model_a_pdf",
    "model_a_summaries",
    "model_b_pdf",
    "model_b_summaries",
    "model_b_rate_posteriors",
    "model_b_reweighted_pdf",
    "implied_r1_pdf",
    "ratio_posterior",
    "combine_ratio_instances",
]


def lambda_ratio_pdf(rho, x1: int, x2: int):
    """Posterior density of lambda1/lambda2 under flat priors.

    f(rho) = (x1+x2+1)! / (x1! x2!) * rho^x1 * (1+rho)^-(x1+x2+2),
    i.e. the Gamma ratio with parameters (x1+1, 1) and (x2+1, 1).
    """
    _check_counts(x1, x2)
    return gamma_ratio_pdf(rho, GammaParams(x1 + 1.0, 1.0), GammaParams(x2 + 1.0, 1.0))


def lambda_ratio_summaries(x1: int, x2: int) -> SummaryStats:
    """Mode x1/(x2+2); mean (x1+1)/x2 needs x2 > 0; sd needs x2 > 1."""
    _check_counts(x1, x2)
    mode, mean, variance = _ratio_moments(x1 + 1.0, 1.0, x2 + 1.0, 1.0)
    undefined = {}
    if mean is None:
        undefined["mean"] = "requires x2 > 0"
    if variance is None:
        undefined["variance"] = "requires x2 > 1"
    return SummaryStats.from_parts(mode=mode, mean=mean, variance=variance, undefined=undefined)


def model_a_pdf(rho, d1: CountObservation, d2: CountObservation):
    """Ratio posterior when r1 and r2 are inferred independently (flat priors).

    f(rho) = (x1+x2+1)!/(x1! x2!) * T1^(x1+1) T2^(x2+1)
             * rho^x1 * (T2 + T1 rho)^-(x1+x2+2)
    """
    return gamma_ratio_pdf(rho, _model_a_num(d1), _model_a_den(d2))


def model_a_summaries(d1: CountObservation, d2: CountObservation) -> SummaryStats:
    """Mode (x1/T1)/((x2+2)/T2); mean needs x2 > 0; sd needs x2 > 1."""
    mode, mean, variance = _ratio_moments(d1.x + 1.0, d1.T, d2.x + 1.0, d2.T)
    undefined = {}
    if mean is None:
        undefined["mean"] = "requires x2 > 0"
    if variance is None:
        undefined["variance"] = "requires x2 > 1"
    return SummaryStats.from_parts(mode=mode, mean=mean, variance=variance, undefined=undefined)


def model_b_pdf(
    rho,
    d1: CountObservation,
    d2: CountObservation,
    prior_r2: GammaParams = FLAT_PRIOR,
):
    """Ratio posterior when rho is inferred directly (flat prior on rho).

    f(rho) = T1^(x1+1) (beta0+T2)^(alpha0+x2-1) / B(x1+1, alpha0+x2-1)
             * rho^x1 * (beta0 + T2 + T1 rho)^-(alpha0+x1+x2)

    With a flat prior on r2 this equals the Model A density with x2
    replaced by x2 - 1, which is why it needs alpha0 + x2 > 1.
    """
    num, den = _model_b_params(d1, d2, prior_r2)
    return gamma_ratio_pdf(rho, num, den)


def model_b_summaries(
    d1: CountObservation,
    d2: CountObservation,
    prior_r2: GammaParams = FLAT_PRIOR,
) -> SummaryStats:
    """Summaries of the direct-ratio posterior.

    Flat prior on r2: mode (x1/T1)/((x2+1)/T2), mean ((x1+1)/T1)/((x2-1)/T2)
    for x2 > 1, sd for x2 > 2.  A proper Gamma(alpha0, beta0) prior shifts
    the conditions to alpha0 + x2 - 1 > 1 (mean) and > 2 (variance).
    """
    num, den = _model_b_params(d1, d2, prior_r2)
    mode, mean, variance = _ratio_moments(num.alpha, num.beta, den.alpha, den.beta)
    flat = prior_r2.alpha == 1.0 and prior_r2.beta == 0.0
    undefined = {}
    if mean is None:
        undefined["mean"] = "requires x2 > 1" if flat else "requires alpha0 + x2 - 1 > 1"
    if variance is None:
        undefined["variance"] = "requires x2 > 2" if flat else "requires alpha0 + x2 - 1 > 2"
    return SummaryStats.from_parts(mode=mode, mean=mean, variance=variance, undefined=undefined)


def model_b_rate_posteriors(
    d1: CountObservation, d2: CountObservation
) -> tuple[GammaParams, GammaParams]:
    """Marginal rate posteriors under the direct-ratio model with flat priors.

    r1 ~ Gamma(x1+1, T1) exactly as in Model A; r2 ~ Gamma(x2, T2) — one
    power of x2 is spent on the ratio, so x2 >= 1 is required for a proper
    posterior.
    """
    if d2.x < 1:
        raise ValueError("r2 posterior is improper for x2 = 0 (requires x2 >= 1)")
    return GammaParams(d1.x + 1.0, d1.T), GammaParams(float(d2.x), d2.T)


def model_b_reweighted_pdf(
    rho,
    d1: CountObservation,
    d2: CountObservation,
    prior_r2: GammaParams,
    rho_prior_pdf: Callable[[float], float],
):
    """Unnormalized posterior for a non-flat prior f0(rho).

    The flat-prior closed form is proportional to the effective likelihood
    of rho, so reweighting it by f0 gives the shape of the general
    posterior; normalize numerically if needed.
    """
    rho_arr = np.asarray(rho, dtype=float)
    prior = np.vectorize(rho_prior_pdf, otypes=[float])(rho_arr)
    out = model_b_pdf(rho_arr, d1, d2, prior_r2) * prior
    return float(out) if np.isscalar(rho) else out


def implied_r1_pdf(r1, rho_max: float, r2_max: float):
    """Density of r1 = rho * r2 under independent uniform priors.

    rho ~ U(0, rho_max), r2 ~ U(0, r2_max) imply
    f(r1) = log(rho_max * r2_max / r1) / (rho_max * r2_max)
    on 0 < r1 <= rho_max * r2_max, and 0 outside (not an error).
    """
    if not (rho_max > 0) or not (r2_max > 0):
        raise ValueError("rho_max and r2_max must be > 0")
    top = rho_max * r2_max
    r1_arr = np.asarray(r1, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        inside = (r1_arr > 0) & (r1_arr <= top)
        out = np.where(inside, np.log(top / np.where(inside, r1_arr, 1.0)) / top, 0.0)
    return float(out) if np.isscalar(r1) or r1_arr.ndim == 0 else out


@dataclass(frozen=True)
class RatioPosteriorSpec:
    """Everything defining a closed-form rho posterior.

    Model A uses flat priors on both rates (the only closed-form case);
    model B permits a Gamma prior on r2 under a flat prior on rho.
    """

    model: Literal["A", "B"]
    data1: CountObservation
    data2: CountObservation
    prior_r2: GammaParams = field(default=FLAT_PRIOR)

    def __post_init__(self) -> None:
        if self.model not in ("A", "B"):
            raise ValueError(f"model must be 'A' or 'B', got {self.model!r}")
        if self.model == "A" and self.prior_r2 != FLAT_PRIOR:
            raise ValueError("model A is closed-form only for flat priors on both rates")


@dataclass(frozen=True)
class RatioPosterior:
    """A closed-form rho posterior bundled with its summaries."""

    spec: RatioPosteriorSpec
    summaries: SummaryStats

    def pdf(self, rho):
        if self.spec.model == "A":
            return model_a_pdf(rho, self.spec.data1, self.spec.data2)
        return model_b_pdf(rho, self.spec.data1, self.spec.data2, self.spec.prior_r2)

    def logpdf(self, rho):
        if self.spec.model == "A":
            num, den = _model_a_num(self.spec.data1), _model_a_den(self.spec.data2)
        else:
            num, den = _model_b_params(self.spec.data1, self.spec.data2, self.spec.prior_r2)
        return gamma_ratio_logpdf(rho, num, den)


def ratio_posterior(spec: RatioPosteriorSpec) -> RatioPosterior:
    """Bundle the closed-form posterior and its summaries for one spec."""
    if spec.model == "A":
        summaries = model_a_summaries(spec.data1, spec.data2)
    else:
        summaries = model_b_summaries(spec.data1, spec.data2, spec.prior_r2)
    return RatioPosterior(spec=spec, summaries=summaries)


def combine_ratio_instances(
    instances: list[tuple[CountObservation, CountObservation]],
    prior_r2: GammaParams = FLAT_PRIOR,
) -> RatioPosterior:
    """Combine N instances of (x1, T1, x2, T2) into one direct-ratio posterior.

    When rho and r2 are assumed constant across instances, the joint
    posterior has exactly the single-measurement form with each channel's
    counts and times summed, so combination reduces to pooling totals.
    """
    if not instances:
        raise ValueError("instances must be non-empty")
    x1 = sum(d1.x for d1, _ in instances)
    t1 = sum(d1.T for d1, _ in instances)
    x2 = sum(d2.x for _, d2 in instances)
    t2 = sum(d2.T for _, d2 in instances)
    spec = RatioPosteriorSpec(
        model="B",
        data1=CountObservation(x1, t1),
        data2=CountObservation(x2, t2),
        prior_r2=prior_r2,
    )
    return ratio_posterior(spec)


def _check_counts(x1: int, x2: int) -> None:
    for name, x in (("x1", x1), ("x2", x2)):
        if x < 0 or x != int(x):
            raise ValueError(f"{name} must be a non-negative integer, got {x}")


def _model_a_num(d1: CountObservation) -> GammaParams:
    return GammaParams(d1.x + 1.0, d1.T)


def _model_a_den(d2: CountObservation) -> GammaParams:
    return GammaParams(d2.x + 1.0, d2.T)


def _model_b_params(
    d1: CountObservation, d2: CountObservation, prior_r2: GammaParams
) -> tuple[GammaParams, GammaParams]:
    den_shape = prior_r2.alpha + d2.x - 1.0
    if den_shape <= 0:
        raise ValueError(
            f"normalization undefined: alpha0 + x2 - 1 = {den_shape} must be > 0"
        )
    return GammaParams(d1.x + 1.0, d1.T), GammaParams(den_shape, prior_r2.beta + d2.T)
