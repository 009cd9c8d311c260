import math

import numpy as np
import pytest

from frmod.errors import DomainError
from frmod.model import acvf_frmod0, acvf_oracle, frmod_spec, _coeff_arrays
from frmod.params import QPair
from frmod.simulate import (apply_arma, arma_burn_in, gaussian_wn,
                            modulated_coefficients, modulated_noise,
                            simulate_exact, simulate_exact_many,
                            simulate_modulated, simulate_truncated,
                            _cholesky_factor)

SPEC = frmod_spec(0.3, math.pi / 3, 1.0, 2.0)
# this one has a nonnegative circulant embedding at the sizes used below
EMBED_SPEC = frmod_spec(0.25, 2.0 * math.pi / 3, 1.0, 1.0)


class TestWhiteNoise:
    def test_determinism(self):
        a = gaussian_wn(11, 256)
        b = gaussian_wn(11, 256)
        np.testing.assert_array_equal(a, b)

    def test_mean_within_clt_band(self):
        n = 1_000_000
        x = gaussian_wn(5, n)
        assert abs(x.mean()) <= 4.0 / math.sqrt(n)

    def test_streams_uncorrelated(self):
        n = 1_000_000
        a, b = gaussian_wn(5, n, streams=2)
        assert abs(np.dot(a, b) / n) <= 4.0 / math.sqrt(n)

    def test_rejects_bad_args(self):
        with pytest.raises(DomainError):
            gaussian_wn(1, 0)
        with pytest.raises(DomainError):
            gaussian_wn(1, 8, streams=3)


class TestExact:
    def test_determinism(self):
        a = simulate_exact(SPEC, 128, 7)
        b = simulate_exact(SPEC, 128, 7)
        np.testing.assert_array_equal(a.values, b.values)
        assert a.method == b.method
        assert len(a.values) == 128

    def test_pair_covariance_monte_carlo(self):
        # covariance of 1e5 replicate pairs reproduces the 2x2 Toeplitz block
        g = acvf_frmod0(SPEC, np.arange(2))
        X, _ = simulate_exact_many(SPEC, 2, 123, 100_000)
        R = len(X)
        c00, c11 = np.mean(X[:, 0] ** 2), np.mean(X[:, 1] ** 2)
        c01 = np.mean(X[:, 0] * X[:, 1])
        se_d = g[0] * math.sqrt(2.0 / R)
        se_o = math.sqrt((g[0] ** 2 + g[1] ** 2) / R)
        assert abs(c00 - g[0]) <= 3 * se_d
        assert abs(c11 - g[0]) <= 3 * se_d
        assert abs(c01 - g[1]) <= 3 * se_o

    def test_embedding_and_cholesky_agree(self):
        # replicate covariances of the two methods agree within 4 SE
        n, R = 64, 2000
        Xe, meta = simulate_exact_many(EMBED_SPEC, n, 1, R)
        assert meta["method"] == "exact-embedding"
        chol = _cholesky_factor(EMBED_SPEC, n)
        Z = np.empty((R, n))
        for r in range(R):
            rng = np.random.default_rng(np.random.SeedSequence((2, r)))
            Z[r] = rng.standard_normal(n)
        Xc = Z @ chol.T
        ce = Xe.T @ Xe / R
        cc = Xc.T @ Xc / R
        # SE of the difference of two independent covariance estimates
        se = np.sqrt(2.0 * (np.outer(np.diag(ce), np.diag(ce)) + ce ** 2) / R)
        assert np.max(np.abs(ce - cc) / se) <= 4.0

    def test_stationarity_across_halves(self):
        n = 2 ** 15
        x = simulate_exact(EMBED_SPEC, n, 99).values
        from frmod.estimate import sample_acvf
        a = sample_acvf(x[: n // 2], 20).values
        b = sample_acvf(x[n // 2:], 20).values
        # the two halves are draws of the same law; band from a replicate run
        X, _ = simulate_exact_many(EMBED_SPEC, n // 2, 12345, 64)
        sd = np.std([sample_acvf(p, 20).values for p in X], axis=0, ddof=1)
        assert np.all(np.abs(a - b) <= 6.0 * sd)

    def test_method_recorded(self):
        s = simulate_exact(SPEC, 64, 3)
        assert s.method in ("exact-embedding", "cholesky")
        assert s.seed == 3
        assert s.spec is SPEC

    def test_small_n_rejected(self):
        with pytest.raises(DomainError):
            simulate_exact(SPEC, 1, 0)


class TestTruncated:
    def test_determinism(self):
        a = simulate_truncated(SPEC, 128, 5, 500)
        b = simulate_truncated(SPEC, 128, 5, 500)
        np.testing.assert_array_equal(a.values, b.values)
        assert a.method == "truncated-linear"

    def test_lag0_matches_oracle_at_same_truncation(self):
        K, R, n = 2000, 400, 256
        samples = np.array([
            simulate_truncated(SPEC, n, (77, r), K).values for r in range(R)])
        v0 = np.mean(samples ** 2)
        target = acvf_oracle(SPEC.d, SPEC.q, SPEC.lambda0, 0, K=K)
        se = np.std(np.mean(samples ** 2, axis=1), ddof=1) / math.sqrt(R)
        assert abs(v0 - target) <= 3 * se
        # distinguishable from the untruncated value at this K
        assert target < acvf_frmod0(SPEC, 0)

    def test_no_cross_covariance_when_q1_zero(self):
        spec = frmod_spec(0.3, math.pi / 3, 1.0, 0.0)
        s = simulate_truncated(spec, 512, 4, 800)
        assert len(s.values) == 512
        assert np.all(np.isfinite(s.values))


class TestModulated:
    def test_j0_coefficients(self):
        b1, b2 = modulated_coefficients(SPEC, 0)
        assert b1 == 2.0 * SPEC.q.q0
        assert b2 == 0.0

    def test_rotation_preserves_norm(self):
        js = np.arange(-300, 301)
        b1, b2 = modulated_coefficients(SPEC, js)
        a0, a1, off = _coeff_arrays(SPEC.d, SPEC.q, 300, 0)
        np.testing.assert_allclose(b1 ** 2 + b2 ** 2, a0 ** 2 + a1 ** 2,
                                   rtol=0, atol=1e-14)

    def test_partial_sums_reproduce_oracle(self):
        K = 200
        js = np.arange(-K, K + 1)
        b1, b2 = modulated_coefficients(SPEC, js)
        for h in (0, 1, 5, 17, 50):
            c1, c2 = modulated_coefficients(SPEC, js + h)
            lhs = np.dot(c1, b1) + np.dot(c2, b2)
            rhs = acvf_oracle(SPEC.d, SPEC.q, SPEC.lambda0, h, K=K)
            assert abs(lhs - rhs) <= 1e-10

    def test_transformed_noise_whiteness(self, rng):
        R = 10_000
        band = 4.0 / math.sqrt(R)
        for n in (1, 2, 7, -3, 100):
            eps = rng.standard_normal((2, R))
            te = modulated_noise(eps, n, SPEC.lambda0)
            emp = te @ te.T / R
            assert abs(emp[0, 0] - 1.0) <= band
            assert abs(emp[1, 1] - 1.0) <= band
            assert abs(emp[0, 1]) <= band

    def test_modulated_route_lag0(self):
        K, R, n = 1500, 300, 256
        samples = np.array([
            simulate_modulated(SPEC, n, (31, r), K).values for r in range(R)])
        v0 = np.mean(samples ** 2)
        target = acvf_oracle(SPEC.d, SPEC.q, SPEC.lambda0, 0, K=K)
        se = np.std(np.mean(samples ** 2, axis=1), ddof=1) / math.sqrt(R)
        assert abs(v0 - target) <= 3 * se


class TestApplyArma:
    def test_identity(self):
        x = np.arange(8.0)
        np.testing.assert_array_equal(apply_arma(x, (), ()), x)

    def test_ma_impulse(self):
        imp = np.zeros(6)
        imp[0] = 1.0
        np.testing.assert_allclose(apply_arma(imp, (), (0.7,)),
                                   [1.0, 0.7, 0.0, 0.0, 0.0, 0.0], atol=0)

    def test_ar_impulse(self):
        imp = np.zeros(6)
        imp[0] = 1.0
        np.testing.assert_allclose(apply_arma(imp, (0.5,), ()),
                                   0.5 ** np.arange(6), rtol=1e-14)

    def test_burn_in_rule(self):
        assert arma_burn_in(()) == 100
        assert arma_burn_in((0.5, 0.1) * 20) == 400
