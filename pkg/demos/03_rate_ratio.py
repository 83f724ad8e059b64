"""
The ratio of two Poisson rates, in closed form
==============================================

Channel 1 sees x1 = 3 counts in T1 = 3; channel 2 sees x2 = 6 in T2 = 6.
What is rho = r1/r2?  The answer depends on the causal story:

* infer r1 and r2 independently, then form rho ("two independent rates"),
* or put rho itself at the top of the model and infer it directly.

Same data, same flat priors, different posteriors -- a genuine modelling
choice, not a numerical artifact.
"""

import numpy as np

from rateratio import (
    CountObservation,
    RatioPosteriorSpec,
    implied_r1_pdf,
    lambda_ratio_summaries,
    model_a_pdf,
    model_b_pdf,
    ratio_posterior,
    uniform_ratio_cdf,
)

d1 = CountObservation(3, 3.0)
d2 = CountObservation(6, 6.0)

# --- the two models side by side --------------------------------------------
for model in ("A", "B"):
    post = ratio_posterior(RatioPosteriorSpec(model, d1, d2))
    s = post.summaries
    print("model %s: mode = %.4f, mean = %.4f, sd = %.4f" % (model, s.mode, s.mean, s.sd))

# The direct-ratio posterior with flat priors is exactly the independent-rates
# posterior with one count removed from the denominator channel.
grid = np.linspace(0.1, 6.0, 5)
shift = model_a_pdf(grid, d1, CountObservation(5, 6.0))
direct = model_b_pdf(grid, d1, d2)
print("max |direct - shifted| on a grid:", float(np.max(np.abs(direct - shift))))

# --- expected-count ratios and their spread ----------------------------------
# For equal counts x in both channels the ratio posterior peaks below 1
# and its sd shrinks roughly like sqrt(2/x).
print("\nx1 = x2 = x, T1 = T2:")
for x in (2, 3, 10, 30, 100):
    s = lambda_ratio_summaries(x, x)
    print("  x = %3d: mode = %.4f, sd = %.4f" % (x, s.mode, s.sd))

# With a single count in each channel the posterior is strongly skewed:
s = lambda_ratio_summaries(1, 1)
print("  x = 1: mode = %.6g but mean = %.6g -- the tail carries the mass" % (s.mode, s.mean))

# --- what a 'flat' prior on two rates says about their ratio ------------------
# Independent uniform priors on r1 and r2 imply a fixed, informative law
# on rho: half the mass below 1, and P(0.1 <= rho <= 10) = 0.9.
print("\nuniform priors on both rates imply for rho:")
print("  P(rho <= 1)        =", uniform_ratio_cdf(1.0))
print("  P(0.1 <= rho <= 10) =", uniform_ratio_cdf(10.0) - uniform_ratio_cdf(0.1))

# And uniform priors on (rho, r2) imply a logarithmic, non-uniform density
# on r1 = rho * r2 -- priors compose in ways worth checking explicitly.
print("  implied density of r1 at 0.1, 0.5, 0.9 (rho_max = r2_max = 1):",
      [round(float(implied_r1_pdf(v, 1.0, 1.0)), 4) for v in (0.1, 0.5, 0.9)])
