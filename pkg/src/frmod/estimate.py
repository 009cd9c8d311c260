"""Verification-side estimators and demodulation.

Sample ACVF and periodogram (FFT-based), the discrete Hilbert transform,
the rotation that recovers the bivariate driver pair from a cyclical series
and a companion, and the numeric remainder check for the power-law Fourier
sums

    sum_k sin(k w) k^(2d-1) = w^(-2d) Gamma(2d) sin(pi d) + R1(w),
    sum_k cos(k w) k^(2d-1) = w^(-2d) Gamma(2d) cos(pi d) + R2(w),

whose remainders R1, R2 tend to constants as w -> 0+.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .model import ScalarAcvf
from .specfun import log_gamma

__all__ = [
    "Periodogram", "sample_acvf", "sample_cross_acvf", "periodogram",
    "hilbert_transform", "rice_demodulate", "remodulate", "phase_surrogate",
    "lemma_d1_remainder",
]


@dataclass(frozen=True)
class Periodogram:
    """Ordinates I(2 pi j / n) = |sum_t x_t e^(-i t 2 pi j / n)|^2 / (2 pi n),
    j = 1..floor(n/2)."""

    frequencies: np.ndarray = field(repr=False)
    ordinates: np.ndarray = field(repr=False)


def sample_acvf(x, hmax):
    """Biased sample ACVF, divisor n (keeps the estimate positive semidefinite).

    gamma_hat(h) = n^-1 sum_{t=1}^{n-h} (x_{t+h} - xbar)(x_t - xbar).
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    if not 0 <= hmax < n:
        raise DomainError(f"need 0 <= hmax < n, got hmax={hmax}, n={n}")
    xd = x - x.mean()
    # FFT convolution gives all lags at O(n log n)
    nfft = 1 << int(math.ceil(math.log2(2 * n)))
    f = np.fft.rfft(xd, nfft)
    full = np.fft.irfft(f * np.conj(f), nfft)[: hmax + 1] / n
    return ScalarAcvf(values=full)


def sample_cross_acvf(x, y, hmax):
    """Biased sample cross-covariances n^-1 sum (x_{t+h} - xbar)(y_t - ybar),
    h = 0..hmax. Swap the arguments for negative lags."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(x)
    if y.shape != x.shape:
        raise DomainError("series must have equal length")
    if not 0 <= hmax < n:
        raise DomainError(f"need 0 <= hmax < n, got hmax={hmax}, n={n}")
    xd, yd = x - x.mean(), y - y.mean()
    return np.array([np.dot(xd[h:], yd[: n - h]) / n for h in range(hmax + 1)])


def periodogram(x):
    """Periodogram at the positive Fourier frequencies, computed by FFT."""
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n < 2:
        raise DomainError(f"need n >= 2, got {n}")
    f = np.fft.rfft(x)
    j = np.arange(1, n // 2 + 1)
    ords = (np.abs(f[j]) ** 2) / (2.0 * math.pi * n)
    return Periodogram(frequencies=2.0 * math.pi * j / n, ordinates=ords)


def hilbert_transform(x):
    """Discrete Hilbert transform: multiplier -i sign(lambda) in the frequency
    domain, with the mean and Nyquist bins zeroed.

    The cross-spectrum of (x, Hx) is then i f_xx(lambda) sign(lambda) at the
    interior Fourier frequencies.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    if n < 4:
        raise DomainError(f"need n >= 4, got {n}")
    f = np.fft.fft(x)
    mult = np.zeros(n, dtype=complex)
    mult[1:(n + 1) // 2] = -1j
    mult[n // 2 + 1 if n % 2 == 0 else (n + 1) // 2:] = 1j
    return np.fft.ifft(f * mult).real


def phase_surrogate(x, seed):
    """Independent draw with the same periodogram as x (random Fourier phases).

    Serves as the uncorrelated companion: it shares the sample second-order
    law of x while being independent of it given the amplitudes.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    rng = np.random.default_rng(seed)
    f = np.fft.rfft(x)
    amp = np.abs(f)
    phase = rng.uniform(0.0, 2.0 * math.pi, len(f))
    g = amp * np.exp(1j * phase)
    g[0] = 0.0
    if n % 2 == 0:
        g[-1] = amp[-1] * rng.choice([-1.0, 1.0])
    return np.fft.irfft(g, n)


def rice_demodulate(x, lambda0, companion="hilbert", seed=None):
    """Recover a driver pair (y1, y2) from a cyclical series and a companion.

        y1_n = cos(lambda0 n) x_n - sin(lambda0 n) x2_n
        y2_n = sin(lambda0 n) x_n + cos(lambda0 n) x2_n

    companion may be "hilbert" (the quadrature series -H(x), the sign under
    which this rotation inverts the forward modulation and shifts the
    spectral peak down to frequency zero; +H(x) would shift it up to
    2 lambda0 instead), "independent" (a seeded phase surrogate of x), or an
    explicit array.
    """
    x = np.asarray(x, dtype=float)
    if isinstance(companion, str):
        if companion == "hilbert":
            x2 = -hilbert_transform(x)
        elif companion == "independent":
            x2 = phase_surrogate(x, seed)
        else:
            raise DomainError(f"companion must be 'hilbert', 'independent' or an array,"
                              f" got {companion!r}")
    else:
        x2 = np.asarray(companion, dtype=float)
        if x2.shape != x.shape:
            raise DomainError("companion series must match x in length")
    t = np.arange(len(x))
    c, s = np.cos(lambda0 * t), np.sin(lambda0 * t)
    return c * x - s * x2, s * x + c * x2


def remodulate(y1, y2, lambda0):
    """Exact inverse of the demodulation rotation:
    x_n = cos(lambda0 n) y1_n + sin(lambda0 n) y2_n."""
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    if y1.shape != y2.shape:
        raise DomainError("y1 and y2 must have equal length")
    t = np.arange(len(y1))
    return np.cos(lambda0 * t) * y1 + np.sin(lambda0 * t) * y2


def _incomplete_osc_integral(d, c):
    """int_c^inf e^{iu} u^(2d-1) du, via the full integral Gamma(2d) e^{i pi d}
    minus int_0^c: a power series on [0, min(c, 1)] (integrable singularity)
    and adaptive quadrature on [1, c]."""
    import warnings

    from scipy.integrate import IntegrationWarning, quad

    s = 2.0 * d
    full = math.exp(log_gamma(s)) * complex(math.cos(math.pi * d), math.sin(math.pi * d))
    eps = min(c, 1.0)
    term, series = complex(eps ** s / s), complex(eps ** s / s)
    m = 0
    while abs(term) > 1e-18 and m < 60:
        m += 1
        term = (1j ** m) * eps ** (s + m) / (math.factorial(m) * (s + m))
        series += term
    head = series
    if c > 1.0:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            re = quad(lambda u: math.cos(u) * u ** (s - 1.0), 1.0, c,
                      epsabs=1e-12, epsrel=0.0, limit=400)[0]
            im = quad(lambda u: math.sin(u) * u ** (s - 1.0), 1.0, c,
                      epsabs=1e-12, epsrel=0.0, limit=400)[0]
        head += complex(re, im)
    return full - head


def _power_trig_sums(d, omega, K):
    """(sum sin(k w) k^(2d-1), sum cos(k w) k^(2d-1)) over k >= 1.

    The first K terms are summed directly (pairwise-compensated); the tail
    from a = K+1 is the Euler-Maclaurin correction

        int_a^inf f + f(a)/2 - f'(a)/12 + f'''(a)/720,  f(x) = e^{iwx} x^(2d-1),

    whose neglected term is O(w^5 a^(2d-1)), far below 1e-9 here.
    """
    s = 2.0 * d
    k = np.arange(1, K + 1, dtype=float)
    pw = k ** (s - 1.0)
    head = complex(float(np.sum(np.cos(k * omega) * pw)),
                   float(np.sum(np.sin(k * omega) * pw)))
    a = float(K + 1)
    iw = 1j * omega
    e = complex(math.cos(omega * a), math.sin(omega * a))
    f = e * a ** (s - 1.0)
    f1 = e * (iw * a ** (s - 1.0) + (s - 1.0) * a ** (s - 2.0))
    f3 = e * (iw ** 3 * a ** (s - 1.0) + 3.0 * iw ** 2 * (s - 1.0) * a ** (s - 2.0)
              + 3.0 * iw * (s - 1.0) * (s - 2.0) * a ** (s - 3.0)
              + (s - 1.0) * (s - 2.0) * (s - 3.0) * a ** (s - 4.0))
    integral = omega ** (-s) * _incomplete_osc_integral(d, a * omega)
    tail = integral + 0.5 * f - f1 / 12.0 + f3 / 720.0
    total = head + tail
    return total.imag, total.real


def lemma_d1_remainder(d, omega, K=None):
    """Remainders (R1, R2) of the power-law Fourier sums at frequency omega.

    The sums are evaluated by direct summation over K terms (default: ten
    half-periods) plus an Euler-Maclaurin tail correction, and the leading
    w^(-2d) Gamma(2d) term is subtracted. Both remainders stabilise as
    omega -> 0+.
    """
    if not (0.0 < d < 0.5):
        raise DomainError(f"memory parameter d must lie in (0, 1/2), got {d}")
    if not (0.0 < omega <= math.pi / 4):
        raise DomainError(f"omega must lie in (0, pi/4], got {omega}")
    if K is None:
        K = int(math.ceil(10.0 * math.pi / omega))
    lead = omega ** (-2.0 * d) * math.exp(log_gamma(2.0 * d))
    ssin, scos = _power_trig_sums(d, omega, K)
    r1 = ssin - lead * math.sin(math.pi * d)
    r2 = scos - lead * math.cos(math.pi * d)
    return r1, r2
