import numpy as np
import pytest
from scipy import stats

from rateratio import numeric
from rateratio.distributions import GammaParams, gamma_pdf


class TestPdfQuantile:
    @pytest.mark.parametrize("q", [0.025, 0.25, 0.5, 0.75, 0.975, 0.999])
    def test_gamma_inversion(self, q):
        p = GammaParams(4.0, 3.0)
        got = numeric.pdf_quantile(lambda x: gamma_pdf(x, p), q)
        # tolerance contract is in probability space
        assert stats.gamma.cdf(got, 4.0, scale=1 / 3.0) == pytest.approx(q, abs=1e-6)

    def test_rejects_bad_level(self):
        with pytest.raises(ValueError):
            numeric.pdf_quantile(lambda x: gamma_pdf(x, GammaParams(1.0, 1.0)), 1.5)


class TestPdfCdf:
    def test_matches_reference(self):
        p = GammaParams(6.25, 1.25)
        for x in (0.5, 3.0, 8.0):
            assert numeric.pdf_cdf(lambda t: gamma_pdf(t, p), x) == pytest.approx(
                stats.gamma.cdf(x, 6.25, scale=0.8), abs=1e-9
            )


class TestPdfCurve:
    def test_shape_and_span(self):
        p = GammaParams(4.0, 3.0)
        xs, ys = numeric.pdf_curve(lambda x: gamma_pdf(x, p))
        assert xs.shape == (512,) and ys.shape == (512,)
        assert xs[0] == 0.0
        q999 = stats.gamma.ppf(0.999, 4.0, scale=1 / 3.0)
        assert xs[-1] == pytest.approx(q999, rel=1e-3)
        assert np.all(np.isfinite(ys))

    def test_singular_origin_nudged(self):
        # alpha < 1 diverges at 0; the first grid point moves off the origin
        p = GammaParams(0.5, 1.0)
        xs, ys = numeric.pdf_curve(lambda x: gamma_pdf(x, p))
        assert xs[0] > 0.0
        assert np.all(np.isfinite(ys))
