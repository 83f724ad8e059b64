"""
Inferring one Poisson rate
==========================

Counting x events in time T updates a Gamma prior on the rate r by
simple addition: Gamma(alpha0, beta0) -> Gamma(alpha0 + x, beta0 + T).
The flat prior Gamma(1, 0) makes the posterior depend on the data alone.
"""

from rateratio import (
    FLAT_PRIOR,
    CountObservation,
    combine_observations,
    elicit_gamma,
    gamma_summaries,
    rate_posterior,
    relative_belief_ratio,
    update_rate,
)

# --- flat-prior posterior from one observation ------------------------------
obs = CountObservation(x=3, T=3.0)
post = update_rate(FLAT_PRIOR, obs)
s = gamma_summaries(post)
print("x = 3 in T = 3  ->  r ~ Gamma(%g, %g)" % (post.alpha, post.beta))
print("  mode = %.4f, mean = %.4f, sd = %.4f" % (s.mode, s.mean, s.sd))

# Zero counts are still informative: the posterior is a proper
# exponential whose scale shrinks with T.
for T in (1.0, 5.0, 25.0):
    s0 = gamma_summaries(update_rate(FLAT_PRIOR, CountObservation(0, T)))
    print("x = 0 in T = %4.0f ->  mean = %.4f, sd = %.4f" % (T, s0.mean, s0.sd))

# --- encoding expert knowledge ----------------------------------------------
# "The rate is about 5, give or take 2" becomes a Gamma prior by moment
# matching; the posterior then blends it with the data.
prior = elicit_gamma(5.0, 2.0)
print("\nprior mean 5, sd 2 -> Gamma(%g, %g)" % (prior.alpha, prior.beta))
est = rate_posterior(CountObservation(5, 1.2), prior=prior)
print("after x = 5 in T = 1.2: Gamma(%g, %g), mean %.3f" % (
    est.posterior.alpha, est.posterior.beta, gamma_summaries(est.posterior).mean,
))

# --- pooling several runs ----------------------------------------------------
# Independent observations of the same rate combine by summing counts and
# times; order does not matter.
runs = [CountObservation(3, 3.0), CountObservation(6, 6.0), CountObservation(0, 0.5)]
pooled = combine_observations(FLAT_PRIOR, runs)
print("\npooled over %d runs: Gamma(%g, %g)" % (len(runs), pooled.alpha, pooled.beta))

# --- how strongly does the data speak? ---------------------------------------
# The belief-updating ratio L(r)/L(r_ref) compares how much the data favor
# r over a reference rate -- usable even where the posterior never vanishes.
obs = CountObservation(0, 2.0)
print("\nx = 0 in T = 2: evidence for r relative to r = 0")
for r in (0.1, 0.5, 1.0, 3.0):
    print("  RB(%.1f) = %.4f" % (r, relative_belief_ratio(r, obs, 0.0)))
