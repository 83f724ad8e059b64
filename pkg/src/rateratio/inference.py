"""Conjugate Bayesian updating for Poisson intensities.

A Poisson likelihood with a Gamma prior stays Gamma: observing x counts
updates the shape by x, and the rate by the observation time (or by 1 when
inferring the expected count lambda directly).  The flat prior is the
improper limit Gamma(1, 0), kept exact here; samplers elsewhere use a tiny
positive rate instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .distributions import GammaParams, SummaryStats, gamma_summaries


__all__ = [
    "FLAT_PRIOR",
    "CountObservation",
    "RateEstimate",
    "update_lambda",
    "update_rate",
    "combine_observations",
    "elicit_gamma",
    "relative_belief_ratio",
    "rate_posterior",
]


FLAT_PRIOR = GammaParams(1.0, 0.0)


@dataclass(frozen=True)
class CountObservation:
    """One measurement: x counts observed over live time T."""

    x: int
    T: float

    def __post_init__(self) -> None:
        if self.x < 0 or self.x != int(self.x):
            raise ValueError(f"x must be a non-negative integer, got {self.x}")
        if not (self.T > 0):
            raise ValueError(f"T must be > 0, got {self.T}")


@dataclass(frozen=True)
class RateEstimate:
    """A rate posterior and its summaries."""

    posterior: GammaParams
    summaries: SummaryStats


def update_lambda(prior: GammaParams, x: int) -> GammaParams:
    """Posterior of the expected count lambda after observing x counts."""
    if x < 0 or x != int(x):
        raise ValueError(f"x must be a non-negative integer, got {x}")
    return GammaParams(prior.alpha + x, prior.beta + 1.0)


def update_rate(prior: GammaParams, obs: CountObservation) -> GammaParams:
    """Posterior of the rate r after observing x counts in time T."""
    return GammaParams(prior.alpha + obs.x, prior.beta + obs.T)


def combine_observations(
    prior: GammaParams, observations: Sequence[CountObservation] | Iterable[CountObservation]
) -> GammaParams:
    """Pool independent count observations of one rate into a single posterior.

    Equivalent to folding update_rate over the list in any order:
    (alpha0 + sum of x, beta0 + sum of T).
    """
    observations = list(observations)
    if not observations:
        raise ValueError("observations must be non-empty")
    total_x = sum(o.x for o in observations)
    total_t = sum(o.T for o in observations)
    return GammaParams(prior.alpha + total_x, prior.beta + total_t)


def elicit_gamma(mu0: float, sigma0: float) -> GammaParams:
    """Gamma parameters with mean mu0 and standard deviation sigma0.

    alpha0 = mu0^2 / sigma0^2, beta0 = mu0 / sigma0^2.
    """
    if not (mu0 > 0):
        raise ValueError(f"mu0 must be > 0, got {mu0}")
    if not (sigma0 > 0):
        raise ValueError(f"sigma0 must be > 0, got {sigma0}")
    return GammaParams(mu0**2 / sigma0**2, mu0 / sigma0**2)


def relative_belief_ratio(r: float, obs: CountObservation, r_ref: float) -> float:
    """Likelihood ratio L(r; x, T) / L(r_ref; x, T) with L(r) proportional to r^x exp(-rT).

    Expresses how the data reshape beliefs relative to the reference rate,
    independently of the prior.  r_ref = 0 is admissible only when x = 0
    (there L(0) = 1 and the ratio is exp(-rT)).
    """
    if r < 0 or r_ref < 0:
        raise ValueError("rates must be >= 0")

    def loglik(rate: float) -> float:
        if rate == 0.0:
            return 0.0 if obs.x == 0 else -math.inf
        return obs.x * math.log(rate) - rate * obs.T

    ref = loglik(r_ref)
    if ref == -math.inf:
        raise ValueError(f"likelihood vanishes at r_ref={r_ref} (x={obs.x} > 0)")
    return math.exp(loglik(r) - ref)


def rate_posterior(obs: CountObservation, prior: GammaParams = FLAT_PRIOR) -> RateEstimate:
    """Convenience wrapper: posterior and summaries for one observation.

    With the flat prior the posterior is Gamma(x+1, T): mode x/T, mean
    (x+1)/T, sd sqrt(x+1)/T.
    """
    posterior = update_rate(prior, obs)
    return RateEstimate(posterior=posterior, summaries=gamma_summaries(posterior))
