"""Model definitions and exact autocovariance evaluation.

The core object is the randomly modulated series

    X_n = cos(lambda0 n) Y_{1,n} + sin(lambda0 n) Y_{2,n},

where Y is a bivariate fractionally integrated filter of white noise with
driving matrices built from (q0, q1). Its matrix ACVF has the symmetry
gamma11 = gamma22, gamma12 = -gamma21, which makes X stationary with

    gamma_X(h) = cos(lambda0 h) gamma11(h) - sin(lambda0 h) gamma12(h).

This module evaluates gamma11, gamma12, gamma_X in closed form, handles the
ARMA-filtered, asymmetric-memory and multi-factor variants, and provides a
brute-force truncated-sum oracle used to validate every closed form.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import toeplitz

from .errors import DomainError, InvalidPolynomialError
from .params import MemoryFrequency, QPair, RPair, TimeLimit, boundary_q0, r_to_timelimit
from .specfun import frac_coeff_seq, log_gamma

__all__ = [
    "FrmodSpec", "AsymSpec", "MultiFactorSpec", "ScalarAcvf", "frmod_spec",
    "acvf_Y", "acvf_frmod0", "acvf_frmod", "acvf_asym", "acvf_multifactor",
    "acvf_oracle", "acvf_oracle_y", "asymptotic_envelope", "min_root_modulus",
]

ORACLE_K = 200_000  # default truncation; tail error is O(K^(2d-1))


def min_root_modulus(coeffs):
    """Smallest root modulus of 1 + c1 z + ... + cp z^p (inf for empty c)."""
    c = np.atleast_1d(np.asarray(coeffs, dtype=float))
    if c.size == 0 or not np.any(c):
        return math.inf
    roots = np.roots(np.concatenate([c[::-1], [1.0]]))
    return float(np.min(np.abs(roots))) if roots.size else math.inf


@dataclass(frozen=True)
class FrmodSpec:
    """Fractionally integrated random-modulation model of orders (p, d, q).

    ar holds the AR coefficients phi_1..phi_p of Phi(z) = 1 - phi_1 z - ...,
    ma the MA coefficients theta_1..theta_q of Theta(z) = 1 + theta_1 z + ...;
    both polynomials must have all roots strictly outside the unit disc.
    """

    mf: MemoryFrequency
    q: QPair
    ar: tuple = ()
    ma: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "ar", tuple(float(v) for v in self.ar))
        object.__setattr__(self, "ma", tuple(float(v) for v in self.ma))
        ar_min = min_root_modulus([-v for v in self.ar])
        ma_min = min_root_modulus(self.ma)
        if ar_min <= 1.0 + 1e-8:
            raise InvalidPolynomialError(
                f"AR polynomial has a root of modulus {ar_min} <= 1 + 1e-8")
        if ma_min <= 1.0 + 1e-8:
            raise InvalidPolynomialError(
                f"MA polynomial has a root of modulus {ma_min} <= 1 + 1e-8")

    @property
    def d(self):
        return self.mf.d

    @property
    def lambda0(self):
        return self.mf.lambda0

    @property
    def is_pure(self):
        return not self.ar and not self.ma


def frmod_spec(d, lambda0, q0, q1, ar=(), ma=()):
    """Convenience constructor from bare floats."""
    return FrmodSpec(MemoryFrequency(d, lambda0), QPair(q0, q1), tuple(ar), tuple(ma))


@dataclass(frozen=True)
class AsymSpec:
    """Sum of two uncorrelated boundary components with distinct memory.

    The '+' component diverges on the lambda > lambda0 side with exponent
    2 d_plus, the '-' component on the other side with exponent 2 d_minus.
    The q0 of each component is pinned by its boundary condition and not
    stored.
    """

    lambda0: float
    d_plus: float
    d_minus: float
    q1_plus: float
    q1_minus: float

    def __post_init__(self):
        if not (0.0 < self.lambda0 < math.pi):
            raise DomainError(f"lambda0 must lie in (0, pi), got {self.lambda0}")
        for name in ("d_plus", "d_minus"):
            v = getattr(self, name)
            if not (0.0 < v < 0.5):
                raise DomainError(f"{name} must lie in (0, 1/2), got {v}")
        if self.q1_plus == 0.0 and self.q1_minus == 0.0:
            raise DomainError("at least one of q1_plus, q1_minus must be nonzero")

    def components(self):
        """The boundary FrmodSpec summands with nonzero amplitude (+ side first)."""
        out = []
        for d, q1, sign in ((self.d_plus, self.q1_plus, +1),
                            (self.d_minus, self.q1_minus, -1)):
            if q1 != 0.0:
                out.append(frmod_spec(d, self.lambda0, boundary_q0(d, q1, sign), q1))
        return tuple(out)


@dataclass(frozen=True)
class MultiFactorSpec:
    """Independent sum of cyclical components at pairwise distinct frequencies."""

    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if not self.components:
            raise DomainError("MultiFactorSpec needs at least one component")
        lams = [c.lambda0 for c in self.components]
        if len(set(lams)) != len(lams):
            raise DomainError(f"component frequencies must be pairwise distinct, got {lams}")


@dataclass(frozen=True)
class ScalarAcvf:
    """Autocovariances gamma(0..H); extended to negative lags by evenness."""

    values: np.ndarray = field(repr=False)
    tail_bound: float = 0.0

    @property
    def H(self):
        return len(self.values) - 1

    def at(self, h):
        return self.values[np.abs(np.asarray(h))]

    def min_toeplitz_eig(self, size=256):
        n = min(self.H + 1, size)
        return float(np.linalg.eigvalsh(toeplitz(self.values[:n])).min())


def _gamma_ratio_terms(d, habs):
    """F(h) = Gamma(1-2d) Gamma(h+d) sin(pi d) / (Gamma(h+1-d) pi) and
    C(h) = Gamma(2d+h) / (Gamma(2d) Gamma(1+h)), both at integer h >= 0."""
    lg = log_gamma
    f = math.exp(lg(1.0 - 2.0 * d)) * math.sin(math.pi * d) / math.pi \
        * np.exp(np.asarray(lg(habs + d)) - np.asarray(lg(habs + 1.0 - d)))
    c = np.exp(np.asarray(lg(habs + 2.0 * d)) - lg(2.0 * d) - np.asarray(lg(habs + 1.0)))
    return f, c


def acvf_Y(d, q, h):
    """Closed-form (gamma11, gamma12) of the bivariate driver at lag h.

    gamma11 is even in h; gamma12 is odd, given by
    sign(h) (2 q0 q1 / Gamma(2d)) Gamma(|h|+2d)/Gamma(1+|h|). All gamma-ratio
    arguments are evaluated at |h| (the negative-h values follow from
    stationarity and the covariance symmetry, not from the raw formula, whose
    1/Gamma(1+h) factor degenerates there). At h = 0 both one-sided indicator
    terms contribute, so the cross term enters gamma11 with weight 2.
    """
    if not (0.0 < d < 0.5):
        raise DomainError(f"memory parameter d must lie in (0, 1/2), got {d}")
    harr = np.asarray(h)
    scalar = harr.ndim == 0
    habs = np.abs(harr).astype(float)
    f, c = _gamma_ratio_terms(d, habs)
    ind = np.where(harr == 0, 2.0, 1.0)
    g11 = q.q0 ** 2 * (2.0 * f + ind * c) + q.q1 ** 2 * (2.0 * f - ind * c)
    g12 = np.sign(harr) * (2.0 * q.q0 * q.q1) \
        * np.exp(np.asarray(log_gamma(habs + 2.0 * d))
                 - log_gamma(2.0 * d) - np.asarray(log_gamma(1.0 + habs)))
    if scalar:
        return float(g11), float(g12)
    return g11, g12


def acvf_frmod0(spec, h):
    """gamma_X(h) = cos(lambda0 h) gamma11(h) - sin(lambda0 h) gamma12(h)."""
    if not spec.is_pure:
        raise DomainError("acvf_frmod0 requires empty AR/MA; use acvf_frmod")
    g11, g12 = acvf_Y(spec.d, spec.q, h)
    harr = np.asarray(h, dtype=float)
    out = np.cos(spec.lambda0 * harr) * g11 - np.sin(spec.lambda0 * harr) * g12
    return float(out) if np.ndim(h) == 0 else out


def psi_weights(ar, ma, K):
    """First K+1 impulse-response weights of Theta(B)/Phi(B)."""
    psi = np.zeros(K + 1)
    psi[0] = 1.0
    for j in range(1, K + 1):
        v = ma[j - 1] if j <= len(ma) else 0.0
        for i in range(1, min(j, len(ar)) + 1):
            v += ar[i - 1] * psi[j - i]
        psi[j] = v
    return psi


def acvf_frmod(spec, H, K=None):
    """ACVF of the ARMA-filtered model at lags 0..H.

    With p = 0 the finite MA expansion is exact. With p > 0 the filter is
    expanded into K impulse-response weights (default: enough for the
    geometric tail rho^K to fall below 1e-12, rho = 1/min root modulus of
    the AR polynomial) and a bound on the neglected tail is reported.
    """
    if H < 0:
        raise DomainError(f"H must be >= 0, got {H}")
    if spec.is_pure:
        return ScalarAcvf(values=acvf_frmod0(spec, np.arange(H + 1)))
    base = frmod_spec(spec.d, spec.lambda0, spec.q.q0, spec.q.q1)
    if not spec.ar:
        psi = np.concatenate([[1.0], np.asarray(spec.ma, dtype=float)])
        tail = 0.0
    else:
        rho = 1.0 / min_root_modulus([-v for v in spec.ar])
        if K is None:
            K = max(len(spec.ma) + 1, int(math.ceil(math.log(1e-12) / math.log(rho))))
        psi = psi_weights(spec.ar, spec.ma, K)
        # neglected weights continue the geometric decay of the last few computed
        tailsum = float(np.max(np.abs(psi[max(0, K - 10):]))) * rho / (1.0 - rho)
        tail = 2.0 * float(np.sum(np.abs(psi))) * tailsum + tailsum ** 2
    L = len(psi)
    gamma0 = acvf_frmod0(base, np.arange(H + L))
    w = np.convolve(psi, psi[::-1])  # w[L-1+m] = sum_j psi_j psi_{j+m}
    m = np.arange(-(L - 1), L)
    vals = np.empty(H + 1)
    for h in range(H + 1):
        vals[h] = float(np.dot(w, gamma0[np.abs(h + m)]))
    return ScalarAcvf(values=vals, tail_bound=tail * float(gamma0[0]))


def _boundary_pieces(d, habs, ind):
    """(A - B - C, D) of the boundary-component ACVF display, at |h|."""
    c = math.cos(math.pi * d)
    f, cc = _gamma_ratio_terms(d, habs)
    a_term = 4.0 * f / (1.0 + c)
    bc_term = 2.0 * c / (1.0 + c) * ind * cc
    d_term = math.sqrt((1.0 - c) / (1.0 + c)) * 2.0 \
        * np.exp(np.asarray(log_gamma(habs + 2.0 * d))
                 - log_gamma(2.0 * d) - np.asarray(log_gamma(1.0 + habs)))
    return a_term - bc_term, d_term


def acvf_asym(spec, h):
    """ACVF of the asymmetric-memory sum, evaluated from the explicit display.

    Identical (up to rounding) to summing acvf_frmod0 over the two boundary
    components; the large-h envelope decays like h^(2 max(d+, d-) - 1).
    """
    harr = np.asarray(h)
    scalar = harr.ndim == 0
    habs = np.abs(harr).astype(float)
    ind = np.where(harr == 0, 2.0, 1.0)
    abc_p, d_p = _boundary_pieces(spec.d_plus, habs, ind)
    abc_m, d_m = _boundary_pieces(spec.d_minus, habs, ind)
    qp2, qm2 = spec.q1_plus ** 2, spec.q1_minus ** 2
    hf = harr.astype(float)
    out = np.cos(spec.lambda0 * hf) * (qp2 * abc_p + qm2 * abc_m) \
        - np.sin(spec.lambda0 * hf) * np.sign(harr) * (qp2 * d_p - qm2 * d_m)
    return float(out) if scalar else out


def model_acvf(spec, h):
    """Dispatch gamma_X(h) over the three model kinds (pure specs only for ARMA)."""
    if isinstance(spec, FrmodSpec):
        return acvf_frmod0(spec, h) if spec.is_pure else acvf_frmod(spec, int(np.max(np.abs(h)))).at(h)
    if isinstance(spec, AsymSpec):
        return acvf_asym(spec, h)
    if isinstance(spec, MultiFactorSpec):
        return acvf_multifactor(spec, h)
    raise DomainError(f"unknown spec type {type(spec).__name__}")


def acvf_multifactor(spec, h):
    """Sum of the component ACVFs."""
    return sum(model_acvf(c, h) for c in spec.components)


def _coeff_arrays(d, q, K, pad):
    """Two-sided filter coefficients a0, a1 on the index range [-K-pad, K+pad].

    a0[0] = 2 q0 (both one-sided filters contribute at the center), otherwise
    a0[k] = c_{d,|k|} q0 and a1[k] = sign(k) c_{d,|k|} q1.
    """
    c = frac_coeff_seq(d, K + pad).values
    full = np.concatenate([c[:0:-1], c])  # index -K-pad .. K+pad
    a0 = q.q0 * full.copy()
    a1 = q.q1 * full.copy()
    off = K + pad
    a0[off] = 2.0 * q.q0
    a1[off] = 0.0
    a1[:off] *= -1.0
    return a0, a1, off


def acvf_oracle_y(d, q, h, K=ORACLE_K):
    """Brute-force 2x2 matrix ACVF of Y from truncated coefficient sums.

    Sums sum_{l=-K..K} A_{l+h} A_l^T with the exact filter coefficients; the
    neglected tail is O(K^(2d-1)). All four entries are accumulated
    independently so the covariance symmetry can be checked rather than
    assumed.
    """
    hs = np.atleast_1d(np.asarray(h, dtype=int))
    if K < int(np.max(np.abs(hs))) + 1:
        raise DomainError("oracle truncation K must exceed |h|")
    pad = int(np.max(np.abs(hs)))
    a0, a1, off = _coeff_arrays(d, q, K, pad)
    n = 2 * K + 1
    base = off - K
    out = np.empty((len(hs), 2, 2))
    for i, hh in enumerate(hs):
        s0 = slice(base + hh, base + hh + n)
        s1 = slice(base, base + n)
        g11 = np.dot(a0[s0], a0[s1]) + np.dot(a1[s0], a1[s1])
        g22 = np.dot(a0[s0], a0[s1]) + np.dot(a1[s0], a1[s1])
        g12 = np.dot(a1[s0], a0[s1]) - np.dot(a0[s0], a1[s1])
        g21 = np.dot(a0[s0], a1[s1]) - np.dot(a1[s0], a0[s1])
        out[i] = [[g11, g12], [g21, g22]]
    return out[0] if np.ndim(h) == 0 else out


def acvf_oracle(d, q, lambda0, h, K=ORACLE_K):
    """Brute-force gamma_X(h) = cos(lambda0 h) gamma11 - sin(lambda0 h) gamma12."""
    g = acvf_oracle_y(d, q, h, K)
    hf = np.asarray(h, dtype=float)
    if np.ndim(h) == 0:
        return float(math.cos(lambda0 * hf) * g[0, 0] - math.sin(lambda0 * hf) * g[0, 1])
    return np.cos(lambda0 * hf) * g[:, 0, 0] - np.sin(lambda0 * hf) * g[:, 0, 1]


def asymptotic_envelope(d, limit, lambda0, h):
    """Large-lag envelope c_gamma cos(lambda0 h + phi) h^(2d-1), h >= 1.

    `limit` may be an RPair or a TimeLimit.
    """
    if np.any(np.asarray(h) < 1):
        raise DomainError("envelope is defined for h >= 1 only")
    t = r_to_timelimit(limit) if isinstance(limit, RPair) else limit
    if not isinstance(t, TimeLimit):
        raise DomainError(f"limit must be RPair or TimeLimit, got {type(limit).__name__}")
    hf = np.asarray(h, dtype=float)
    out = t.c_gamma * np.cos(lambda0 * hf + t.phi) * hf ** (2.0 * d - 1.0)
    return float(out) if np.ndim(h) == 0 else out
