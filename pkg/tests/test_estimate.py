import math

import numpy as np
import pytest

from frmod.errors import DomainError
from frmod.estimate import (hilbert_transform, lemma_d1_remainder,
                            periodogram, phase_surrogate, remodulate,
                            rice_demodulate, sample_acvf, sample_cross_acvf)
from frmod.model import frmod_spec
from frmod.params import (q_to_r, r_to_timelimit, timelimit_to_speclimit)
from frmod.simulate import simulate_exact, simulate_exact_many


class TestSampleAcvf:
    def test_zero_series(self):
        out = sample_acvf(np.zeros(32), 5)
        np.testing.assert_array_equal(out.values, 0.0)

    def test_alternating_series(self):
        n = 64
        x = np.array([1.0, -1.0] * (n // 2))
        out = sample_acvf(x, 1)
        assert out.values[1] == pytest.approx(-out.values[0] * (n - 1) / n, rel=1e-12)

    def test_positive_semidefinite(self):
        rng = np.random.default_rng(3)
        x = rng.standard_normal(500)
        out = sample_acvf(x, 256)
        assert out.min_toeplitz_eig() >= -1e-8 * out.values[0]

    def test_matches_direct_computation(self):
        rng = np.random.default_rng(4)
        x = rng.standard_normal(100)
        xd = x - x.mean()
        out = sample_acvf(x, 10)
        direct = [np.dot(xd[h:], xd[: 100 - h]) / 100 for h in range(11)]
        np.testing.assert_allclose(out.values, direct, atol=1e-12)

    def test_hmax_bound(self):
        with pytest.raises(DomainError):
            sample_acvf(np.zeros(8), 8)


class TestPeriodogram:
    def test_zero_series(self):
        out = periodogram(np.zeros(64))
        np.testing.assert_array_equal(out.ordinates, 0.0)
        assert len(out.ordinates) == 32

    def test_pure_cosine_concentrates(self):
        n, j = 256, 17
        t = np.arange(n)
        x = np.cos(2.0 * math.pi * j * t / n)
        out = periodogram(x)
        assert np.argmax(out.ordinates) == j - 1
        others = np.delete(out.ordinates, j - 1)
        assert np.max(others) <= 1e-20 * out.ordinates[j - 1]

    def test_parseval_identity(self):
        rng = np.random.default_rng(9)
        for n in (128, 129):
            x = rng.standard_normal(n)
            out = periodogram(x)
            gamma0 = sample_acvf(x, 0).values[0]
            weights = np.full(len(out.ordinates), 2.0)
            if n % 2 == 0:
                weights[-1] = 1.0  # Nyquist bin appears once
            total = np.sum(weights * out.ordinates) * 2.0 * math.pi / n
            assert total == pytest.approx(gamma0, abs=1e-8 * max(gamma0, 1.0))


class TestHilbert:
    def test_cosine_maps_to_sine(self):
        n, j = 256, 12
        t = np.arange(n)
        lam = 2.0 * math.pi * j / n
        np.testing.assert_allclose(hilbert_transform(np.cos(lam * t)),
                                   np.sin(lam * t), atol=1e-12)

    def test_double_application_negates(self):
        rng = np.random.default_rng(2)
        x = rng.standard_normal(128)
        f = np.fft.fft(x)
        f[0] = 0.0
        f[64] = 0.0
        x0 = np.fft.ifft(f).real  # mean and Nyquist bins removed
        np.testing.assert_allclose(hilbert_transform(hilbert_transform(x0)),
                                   -x0, atol=1e-12)

    def test_cross_spectrum_purely_imaginary(self):
        rng = np.random.default_rng(7)
        x = rng.standard_normal(512)
        h = hilbert_transform(x)
        fx, fh = np.fft.fft(x), np.fft.fft(h)
        cross = fx[1:256] * np.conj(fh[1:256])
        assert np.max(np.abs(cross.real)) <= 1e-10 * np.max(np.abs(cross))

    def test_short_series_rejected(self):
        with pytest.raises(DomainError):
            hilbert_transform(np.zeros(3))


class TestRice:
    SPEC = frmod_spec(0.3, math.pi / 3, 1.0, 2.0)

    def test_remodulate_inverts_exactly(self):
        x = simulate_exact(self.SPEC, 512, 5).values
        for companion in ("hilbert", "independent"):
            y1, y2 = rice_demodulate(x, self.SPEC.lambda0, companion, seed=11)
            back = remodulate(y1, y2, self.SPEC.lambda0)
            assert np.max(np.abs(back - x)) <= 1e-12 * np.max(np.abs(x))

    def test_remodulate_special_cases(self):
        n = 16
        y1 = np.arange(1.0, n + 1.0)
        x = remodulate(y1, np.zeros(n), 0.7)
        np.testing.assert_allclose(x, np.cos(0.7 * np.arange(n)) * y1, rtol=1e-15)
        x = remodulate(y1, np.zeros(n), math.pi / 2)
        pattern = np.cos(math.pi / 2 * np.arange(n))
        np.testing.assert_allclose(x, pattern * y1, atol=1e-12)

    def test_independent_companion_symmetry_probe(self):
        # sample cross-ACVF of the demodulated pair satisfies the covariance
        # symmetry within Monte Carlo bands
        n, R = 2048, 40
        X, _ = simulate_exact_many(self.SPEC, n, 17, R)
        hmax = 8
        diag_gap, cross_gap, scales = [], [], []
        for r, x in enumerate(X):
            y1, y2 = rice_demodulate(x, self.SPEC.lambda0, "independent",
                                     seed=(1000, r))
            g11 = sample_cross_acvf(y1, y1, hmax)
            g22 = sample_cross_acvf(y2, y2, hmax)
            g12 = sample_cross_acvf(y1, y2, hmax)
            g21 = sample_cross_acvf(y2, y1, hmax)
            diag_gap.append(g11 - g22)
            cross_gap.append(g12 + g21)
            scales.append(g11[0])
        scale = np.mean(scales)
        for gap in (np.asarray(diag_gap), np.asarray(cross_gap)):
            mean = gap.mean(axis=0)
            se = gap.std(axis=0, ddof=1) / math.sqrt(R)
            assert np.all(np.abs(mean) <= np.maximum(4.0 * se, 0.02 * scale))

    def test_hilbert_companion_low_frequency_level(self):
        # the demodulated (y1, y1) spectrum tracks (cf+ + cf-) lam^(-2d)
        spec = self.SPEC
        t = r_to_timelimit(q_to_r(spec.q, spec.d))
        s = timelimit_to_speclimit(t, spec.d)
        g0 = s.cf_plus + s.cf_minus
        n, R = 2 ** 13, 60
        X, _ = simulate_exact_many(spec, n, 23, R)
        ords = []
        for x in X:
            y1, _ = rice_demodulate(x, spec.lambda0, "hilbert")
            ords.append(periodogram(y1).ordinates)
        mean_ord = np.mean(ords, axis=0)
        lams = periodogram(X[0]).frequencies
        decade = slice(3, 30)
        level = np.exp(np.mean(np.log(mean_ord[decade])
                               + 2 * spec.d * np.log(lams[decade])))
        assert level == pytest.approx(g0, rel=0.25)


class TestPhaseSurrogate:
    def test_preserves_periodogram(self):
        rng = np.random.default_rng(6)
        x = rng.standard_normal(256)
        y = phase_surrogate(x, 3)
        np.testing.assert_allclose(periodogram(y).ordinates,
                                   periodogram(x).ordinates, rtol=1e-9)

    def test_deterministic(self):
        x = np.sin(np.arange(64) * 0.3)
        np.testing.assert_array_equal(phase_surrogate(x, 5), phase_surrogate(x, 5))


class TestLemmaRemainders:
    def test_against_zeta_expansion_oracle(self):
        # independent oracle: sum_k e^{ikw} k^{2d-1} = Gamma(2d) w^{-2d} e^{i pi d}
        #   + sum_{m>=0} zeta(1-2d-m) (iw)^m / m!   (|w| < 2 pi)
        import mpmath as mp
        mp.mp.dps = 30
        for d in (0.1, 0.25, 0.4):
            for m in (4, 8, 12):
                w = 2.0 ** -m
                acc = mp.mpc(0)
                for k in range(40):
                    acc += mp.zeta(1 - 2 * d - k) * (1j * mp.mpf(w)) ** k / mp.factorial(k)
                r1, r2 = lemma_d1_remainder(d, w)
                assert r1 == pytest.approx(float(acc.imag), abs=1e-9)
                assert r2 == pytest.approx(float(acc.real), abs=1e-9)

    def test_cauchy_stabilisation(self):
        for d in (0.1, 0.25, 0.4):
            r1s, r2s = zip(*[lemma_d1_remainder(d, 2.0 ** -m) for m in range(4, 13)])
            d1 = np.abs(np.diff(r1s))
            d2 = np.abs(np.diff(r2s))
            assert np.all(np.diff(d1) < 0)
            assert np.all(np.diff(d2) < 0)
            assert d1[-1] < 1e-3 and d2[-1] < 1e-3

    def test_large_d_still_stabilises(self):
        r1s, r2s = zip(*[lemma_d1_remainder(0.49, 2.0 ** -m) for m in range(4, 11)])
        assert np.all(np.diff(np.abs(np.diff(r2s))) < 0)

    def test_leading_term_dominates(self):
        # the w^(-2d) term alone reproduces the sum to relative o(1)
        d = 0.3
        lead = lambda w: w ** (-2 * d) * math.gamma(2 * d)
        rel = []
        for w in (2.0 ** -6, 2.0 ** -12):
            r1, r2 = lemma_d1_remainder(d, w)
            total_sin = lead(w) * math.sin(math.pi * d) + r1
            rel.append(abs(r1) / abs(total_sin))
        assert rel[1] < rel[0] < 0.05

    def test_domain(self):
        with pytest.raises(DomainError):
            lemma_d1_remainder(0.3, 1.0)
        with pytest.raises(DomainError):
            lemma_d1_remainder(0.6, 0.01)
