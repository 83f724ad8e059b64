"""
Predicting counts before seeing data
====================================

Two detectors watch independent Poisson processes.  Knowing only the
expected counts lambda1 and lambda2, what difference X1 - X2 and what
ratio X1/X2 should we expect?  The difference has an exact closed form;
the ratio does not (X2 = 0 happens), so we simulate it and account for
every draw.
"""

import numpy as np

from rateratio import simulate_count_ratio, skellam_dist, skellam_pmf

# --- the difference of two Poisson counts ---------------------------------
# Both detectors expect a single count.  The exact probability that they
# report the same number is about 31% -- far from a sure thing.
print("P(X1 == X2 | lambda1 = lambda2 = 1) =", skellam_pmf(0, 1.0, 1.0))

# The full distribution of the difference, with mean and standard deviation.
dist = skellam_dist(1.0, 1.0)
print("mean(D) = %.3f, sd(D) = %.3f" % (dist.mean(), dist.sd()))
window = [(d, p) for d, p in zip(dist.values, dist.probs) if -3 <= d <= 3]
for d, p in window:
    print("  P(D = %+d) = %.6f  %s" % (d, p, "#" * int(round(p * 80))))

# --- the ratio of two Poisson counts ---------------------------------------
# With lambda2 small, X2 = 0 is common: the ratio is then Inf (X1 > 0) or
# NaN (0/0).  The report keeps those fractions explicit instead of
# silently dropping them.
report = simulate_count_ratio(2.0, 1.0, n=1_000_000, seed=42)
print("\nratio X1/X2 with lambda1 = 2, lambda2 = 1 (1e6 draws):")
print("  P(NaN: 0/0)    = %.4f" % report.frac_nan)
print("  P(Inf: k/0)    = %.4f" % report.frac_inf)
print("  P(beyond %g)   = %.4f" % (report.cutoff, report.frac_overflow))
print("  P(in histogram) = %.4f" % report.hist_mass)

# The four fractions are a partition of all draws.
total = report.frac_nan + report.frac_inf + report.frac_overflow + report.hist_mass
print("  total           = %.12f" % total)

# A crude text histogram of the in-range mass.  The spikes are real:
# a ratio of small counts piles up on simple fractions (1/2, 1, 2, 3...).
edges, dens = report.bin_edges, report.density
step = len(dens) // 25
for i in range(0, len(dens), step):
    bar = "#" * int(round(np.mean(dens[i : i + step]) * 60))
    print("  %5.2f..%5.2f %s" % (edges[i], edges[min(i + step, len(dens))], bar))
