"""Shared oracles for statistical comparisons.

Monte Carlo checks use a binomial error model per histogram bin: a bin with
exact probability p collects about n*p draws with standard deviation
sqrt(n*p*(1-p)).  All sampling tests run on fixed seeds, so a passing run is
deterministic, not merely probable.
"""

from __future__ import annotations

import numpy as np
from scipy import integrate


def bin_probabilities(pdf, edges: np.ndarray) -> np.ndarray:
    """Exact probability in each [edges[i], edges[i+1]) by adaptive quadrature."""
    probs = np.empty(edges.size - 1)
    for i in range(probs.size):
        probs[i], _ = integrate.quad(pdf, edges[i], edges[i + 1], limit=200)
    return probs


def bin_zscores(counts: np.ndarray, probs: np.ndarray, n: int) -> np.ndarray:
    """(observed - expected) / binomial sd, for bins with nonzero variance."""
    expected = n * probs
    sd = np.sqrt(n * probs * (1.0 - probs))
    with np.errstate(divide="ignore", invalid="ignore"):
        z = (counts - expected) / sd
    return z


def fraction_within(counts, probs, n, z_max=3.0, min_expected=10.0) -> float:
    """Fraction of well-populated bins whose z-score is within z_max.

    Bins with expected count below min_expected are excluded: the normal
    approximation to the binomial is poor there.
    """
    z = bin_zscores(np.asarray(counts, dtype=float), probs, n)
    keep = n * probs >= min_expected
    if not keep.any():
        raise AssertionError("no bin has enough expected mass to test")
    return float(np.mean(np.abs(z[keep]) <= z_max))


def assert_all_bins_within(counts, probs, n, z_max=3.0, min_expected=10.0) -> None:
    frac = fraction_within(counts, probs, n, z_max, min_expected)
    assert frac == 1.0, f"only {frac:.3f} of bins within {z_max} sigma"
