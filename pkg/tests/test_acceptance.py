"""End-to-end acceptance checks: one test per shipped guarantee.

Run with ``pytest -v tests/test_acceptance.py`` to get one pass/fail line
per guarantee.  Each test states its tolerance inline and prints the
measured values, so a failure report shows how far off the build is.
Every Monte Carlo check runs on a fixed seed.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest
from helpers import bin_probabilities, fraction_within
from scipy import integrate, stats

from rateratio import (
    FLAT_PRIOR,
    MCMC_FLAT_PRIOR,
    CountObservation,
    GammaParams,
    ModelSpec,
    beta_prime_pdf,
    build_model,
    elicit_gamma,
    gamma_pdf,
    gamma_ratio_pdf,
    gamma_summaries,
    implied_r1_pdf,
    lambda_ratio_summaries,
    model_a_pdf,
    model_a_summaries,
    model_b_pdf,
    model_b_rate_posteriors,
    model_b_summaries,
    run_chain,
    simulate_uniform_ratio,
    skellam_pmf,
    summarize_chain,
    uniform_ratio_cdf,
    uniform_ratio_pdf,
    update_rate,
)
from rateratio.cli import main as cli_main

D1 = CountObservation(3, 3.0)
D2 = CountObservation(6, 6.0)


def test_c01_skellam_exactness():
    # P(X1 - X2 = 0) for two unit-mean Poissons, against a brute-force
    # summation written out here: e^-2 * sum_k 1/(k!)^2.  Tolerance 5e-4
    # against the documented 0.308508; 1e-12 against the brute force; < 1 ms.
    brute = math.exp(-2.0) * sum(1.0 / math.factorial(k) ** 2 for k in range(40))
    best = math.inf
    for _ in range(5):
        t0 = time.perf_counter()
        p = skellam_pmf(0, 1.0, 1.0)
        best = min(best, time.perf_counter() - t0)
    print(f"pmf={p!r} brute={brute!r} best_call={best * 1e6:.0f}us")
    assert abs(p - 0.308508) <= 5e-4
    assert abs(p - brute) <= 1e-12
    assert best < 1e-3


def test_c02_two_independent_rates_golden():
    # (x1=3, T1=3), (x2=6, T2=6) with flat priors on both rates:
    # r1 = 1.333/0.667, r2 = 1.167/0.441, rho = 1.333/0.943, each +-0.001.
    r1 = gamma_summaries(update_rate(FLAT_PRIOR, D1))
    r2 = gamma_summaries(update_rate(FLAT_PRIOR, D2))
    rho = model_a_summaries(D1, D2)
    print(
        f"r1={r1.mean:.4f}/{r1.sd:.4f} r2={r2.mean:.4f}/{r2.sd:.4f} "
        f"rho={rho.mean:.4f}/{rho.sd:.4f}"
    )
    assert r1.mean == pytest.approx(1.333, abs=1e-3)
    assert r1.sd == pytest.approx(0.667, abs=1e-3)
    assert r2.mean == pytest.approx(1.167, abs=1e-3)
    assert r2.sd == pytest.approx(0.441, abs=1e-3)
    assert rho.mean == pytest.approx(1.333, abs=1e-3)
    assert rho.sd == pytest.approx(0.943, abs=1e-3)


def test_c03_direct_ratio_golden():
    # Same data, rho inferred directly (flat priors on rho and r2):
    # rho = 1.600/1.200, r2 = 1.000/0.408, r1 = 1.333/0.667, each +-0.001.
    rho = model_b_summaries(D1, D2)
    p1, p2 = model_b_rate_posteriors(D1, D2)
    r1, r2 = gamma_summaries(p1), gamma_summaries(p2)
    print(
        f"rho={rho.mean:.4f}/{rho.sd:.4f} r2={r2.mean:.4f}/{r2.sd:.4f} "
        f"r1={r1.mean:.4f}/{r1.sd:.4f}"
    )
    assert rho.mean == pytest.approx(1.600, abs=1e-3)
    assert rho.sd == pytest.approx(1.200, abs=1e-3)
    assert r2.mean == pytest.approx(1.000, abs=1e-3)
    assert r2.sd == pytest.approx(0.408, abs=1e-3)
    assert r1.mean == pytest.approx(1.333, abs=1e-3)
    assert r1.sd == pytest.approx(0.667, abs=1e-3)


def test_c04_count_ratio_sd_series():
    # sd of the ratio of two expected-count posteriors at x1 = x2 = x,
    # checked two ways: the library summaries and the closed-form variance
    # written out directly here.  Both must hit the reference value +-5e-4.
    reference = {2: 1.936, 3: 1.247, 10: 0.507, 30: 0.269, 100: 0.143}
    for x, want in reference.items():
        lib = lambda_ratio_summaries(x, x).sd
        direct = math.sqrt((x + 1) / x * ((x + 2) / (x - 1) - (x + 1) / x))
        print(f"x={x}: lib={lib:.6f} direct={direct:.6f} reference={want}")
        assert abs(lib - want) <= 5e-4
        assert abs(direct - want) <= 5e-4
        assert lib == pytest.approx(direct, rel=1e-12)


def test_c05_single_count_mode_and_mean():
    # x1 = x2 = 1: mode 1/3 and mean 2, exact to machine precision.
    s = lambda_ratio_summaries(1, 1)
    print(f"mode={s.mode!r} mean={s.mean!r}")
    assert s.mode == 1.0 / 3.0
    assert s.mean == 2.0


def test_c06_prior_elicitation():
    # mean 5, sd 2 -> Gamma(6.25, 1.25), exact.
    got = elicit_gamma(5.0, 2.0)
    print(f"elicit_gamma(5, 2) = Gamma({got.alpha!r}, {got.beta!r})")
    assert got == GammaParams(6.25, 1.25)


def test_c07_uniform_ratio_law():
    # Ratio of two same-scale uniforms: exact P(0.1 <= rho <= 10) = 0.9,
    # and a 1e7-draw simulation agrees within 3 binomial sigma in < 10 s.
    exact = uniform_ratio_cdf(10.0) - uniform_ratio_cdf(0.1)
    assert abs(exact - 0.9) <= 1e-14
    n = 10_000_000
    t0 = time.perf_counter()
    # 1500 bins over [0, 10] put bin edges exactly at 0.1 and 10.
    report = simulate_uniform_ratio(1.0, n, cutoff=10.0, bins=1500, seed=2026, workers=2)
    elapsed = time.perf_counter() - t0
    inside = report.counts[15:].sum() / n
    sigma = math.sqrt(0.9 * 0.1 / n)
    print(f"exact={exact!r} mc={inside:.6f} ({abs(inside - 0.9) / sigma:.2f} sigma) {elapsed:.1f}s")
    assert abs(inside - 0.9) <= 3 * sigma
    assert elapsed < 10.0


def test_c08_normalization_suite():
    # Every closed-form density integrates to 1 +- 1e-6 over its support,
    # on the parameter grid spelled out below.  Total runtime < 5 s.
    t0 = time.perf_counter()
    cases: list[tuple[str, object, float]] = []

    def add(label, pdf, split):
        # two-piece adaptive quadrature: [0, split] + [split, inf)
        head, _ = integrate.quad(pdf, 0.0, split, limit=200)
        tail, _ = integrate.quad(pdf, split, np.inf, limit=200)
        cases.append((label, pdf, head + tail))

    for a, b in [(1.0, 1.0), (0.5, 2.0), (2.0, 0.5), (6.25, 1.25), (11.25, 2.45)]:
        add(f"gamma({a},{b})", lambda r, a=a, b=b: gamma_pdf(r, GammaParams(a, b)), 2 * a / b)
    for p1, p2 in [
        (GammaParams(2, 1), GammaParams(3, 2)),
        (GammaParams(4, 3), GammaParams(7, 6)),
        (GammaParams(1, 1), GammaParams(1, 1)),
        (GammaParams(0.5, 1), GammaParams(3, 1)),
    ]:
        add(
            f"gamma_ratio({p1.alpha:g},{p1.beta:g};{p2.alpha:g},{p2.beta:g})",
            lambda r, p1=p1, p2=p2: gamma_ratio_pdf(r, p1, p2),
            2 * (p2.beta / p1.beta) * max(p1.alpha / max(p2.alpha - 1, 0.5), 1.0),
        )
    for a1, a2 in [(2.0, 3.0), (0.5, 4.0), (6.0, 1.5), (1.0, 1.0)]:
        add(f"beta_prime({a1},{a2})", lambda w, a1=a1, a2=a2: beta_prime_pdf(w, a1, a2), 3.0)
    for x1, t1, x2, t2 in [(3, 3.0, 6, 6.0), (1, 2.0, 2, 5.0), (0, 1.0, 0, 1.0)]:
        d1, d2 = CountObservation(x1, t1), CountObservation(x2, t2)
        add(f"model_a({x1},{t1:g};{x2},{t2:g})", lambda r, d1=d1, d2=d2: model_a_pdf(r, d1, d2), 5.0)
    for x1, t1, x2, t2 in [(3, 3.0, 6, 6.0), (1, 2.0, 2, 5.0)]:
        d1, d2 = CountObservation(x1, t1), CountObservation(x2, t2)
        add(f"model_b({x1},{t1:g};{x2},{t2:g})", lambda r, d1=d1, d2=d2: model_b_pdf(r, d1, d2), 5.0)
    d1, d2 = CountObservation(5, 1.0), CountObservation(0, 2.0)
    prior = GammaParams(2.0, 1.0)
    add(
        "model_b(5,1;0,2;prior 2,1)",
        lambda r: model_b_pdf(r, d1, d2, prior),
        8.0,
    )
    add("uniform_ratio", uniform_ratio_pdf, 1.0)
    for rho_max, r2_max in [(1.0, 1.0), (2.5, 4.0)]:
        add(
            f"implied_r1({rho_max:g},{r2_max:g})",
            lambda r, m=rho_max, v=r2_max: implied_r1_pdf(r, m, v),
            rho_max * r2_max,
        )

    elapsed = time.perf_counter() - t0
    worst = max(abs(total - 1.0) for _, _, total in cases)
    print(f"{len(cases)} densities, worst |integral - 1| = {worst:.2e}, {elapsed:.2f}s")
    for label, _, total in cases:
        assert abs(total - 1.0) <= 1e-6, f"{label} integrates to {total!r}"
    assert elapsed < 5.0


def test_c09_closed_form_vs_sampling():
    # Ten random (x1, T1, x2, T2) configurations with counts <= 20: the
    # closed-form ratio density against a 1e6-draw Gamma-ratio simulation,
    # >= 95% of well-populated bins within 3 binomial sigma.
    from rateratio import simulate_gamma_ratio

    rng = np.random.default_rng(20260816)
    n = 1_000_000
    for case in range(10):
        x1, x2 = int(rng.integers(0, 21)), int(rng.integers(0, 21))
        t1, t2 = float(rng.uniform(0.5, 6.0)), float(rng.uniform(0.5, 6.0))
        d1, d2 = CountObservation(x1, t1), CountObservation(x2, t2)
        num, den = GammaParams(x1 + 1.0, t1), GammaParams(x2 + 1.0, t2)
        # display range: 99.5% point of the scaled beta-prime law (scipy)
        cutoff = float(stats.betaprime.ppf(0.995, num.alpha, den.alpha)) * t2 / t1
        report = simulate_gamma_ratio(num, den, n, cutoff=cutoff, bins=150, seed=100 + case)
        probs = bin_probabilities(lambda r: model_a_pdf(r, d1, d2), report.bin_edges)
        frac = fraction_within(report.counts, probs, n)
        print(f"case {case}: x=({x1},{x2}) T=({t1:.2f},{t2:.2f}) bins_ok={frac:.3f}")
        assert frac >= 0.95


def test_c10_mcmc_agreement():
    # 1e5-iteration chains reproduce the closed-form means within 4
    # batch-means standard errors; the thinned variant at efficiency 1
    # matches the direct-ratio model.  < 60 s per chain.
    runs = [
        (
            "A",
            ModelSpec("A", D1, D2, priors={"r1": MCMC_FLAT_PRIOR, "r2": MCMC_FLAT_PRIOR}),
            {"r1": 4 / 3, "r2": 7 / 6, "rho": 4 / 3},
        ),
        (
            "B",
            ModelSpec("B", D1, D2, priors={"rho": MCMC_FLAT_PRIOR, "r2": MCMC_FLAT_PRIOR}),
            {"rho": 1.6, "r2": 1.0, "r1": 4 / 3},
        ),
        (
            "B_EFF eps=1",
            ModelSpec(
                "B_EFF",
                D1,
                D2,
                priors={"rho": MCMC_FLAT_PRIOR, "r2": MCMC_FLAT_PRIOR},
                efficiencies=(1.0, 1.0),
            ),
            {"rho": 1.6, "r2": 1.0, "r1": 4 / 3},
        ),
    ]
    for label, spec, targets in runs:
        t0 = time.perf_counter()
        chain = run_chain(build_model(spec), n_iter=100_000, seed=314)
        elapsed = time.perf_counter() - t0
        summary = summarize_chain(chain).variables
        for name, target in targets.items():
            v = summary[name]
            pulls = abs(v.mean - target) / v.batch_se
            print(f"{label} {name}: mean={v.mean:.4f} target={target:.4f} ({pulls:.2f} SE)")
            assert v.batch_se > 0
            assert abs(v.mean - target) <= 4 * v.batch_se
        print(f"{label}: {elapsed:.1f}s")
        assert elapsed < 60.0


def test_c11_model_shift_identity():
    # The direct-ratio flat-prior density equals the two-independent-rates
    # density with x2 -> x2 - 1, pointwise to 1e-10 relative error on a
    # 100-point grid.
    grid = np.linspace(0.05, 10.0, 100)
    for x1, x2 in [(1, 2), (3, 6), (10, 10)]:
        d1 = CountObservation(x1, 2.0)
        a = model_a_pdf(grid, d1, CountObservation(x2 - 1, 5.0))
        b = model_b_pdf(grid, d1, CountObservation(x2, 5.0))
        rel = np.max(np.abs(b / a - 1.0))
        print(f"(x1,x2)=({x1},{x2}): max rel diff {rel:.2e}")
        assert rel <= 1e-10


def test_c12_full_scale_histograms(tmp_path, capsys):
    # The CLI simulation commands produce 1e7-sample histogram CSVs in
    # under a few minutes each; the CSV files are the deliverable.
    runs = [
        (
            tmp_path / "gamma_ratio.csv",
            151,
            # fmt: off
            [
                "mc", "gamma-ratio", "--alpha1", "4", "--beta1", "3",
                "--alpha2", "7", "--beta2", "6", "--n", "10000000",
                "--seed", "7", "--workers", "2", "--format", "csv",
            ],
            # fmt: on
        ),
        (
            tmp_path / "uniform_ratio.csv",
            1501,
            # fmt: off
            [
                "mc", "uniform-ratio", "--rmax", "1", "--n", "10000000",
                "--cutoff", "10", "--bins", "1500",
                "--seed", "7", "--workers", "2", "--format", "csv",
            ],
            # fmt: on
        ),
        (
            tmp_path / "count_ratio.csv",
            151,
            # fmt: off
            [
                "predict", "ratio", "--l1", "2", "--l2", "3", "--n", "10000000",
                "--seed", "7", "--workers", "2", "--format", "csv",
            ],
            # fmt: on
        ),
    ]
    for path, n_lines, argv in runs:
        t0 = time.perf_counter()
        rc = cli_main(argv + ["--out", str(path)])
        elapsed = time.perf_counter() - t0
        capsys.readouterr()
        assert rc == 0
        lines = path.read_text().splitlines()
        print(f"{path.name}: {len(lines)} lines, {elapsed:.1f}s")
        assert lines[0] == "bin_left,bin_right,density"
        assert len(lines) == n_lines
        # histogram mass = sum of density * bin width, must stay within [0, 1]
        rows = np.array([[float(v) for v in line.split(",")] for line in lines[1:]])
        mass = float(np.sum(rows[:, 2] * (rows[:, 1] - rows[:, 0])))
        assert 0.0 < mass <= 1.0 + 1e-9
        assert elapsed < 180.0
