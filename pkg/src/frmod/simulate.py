"""Seeded Gaussian sample-path generation.

Three routes:

  * exact circulant embedding of the closed-form ACVF (Davies-Harte), with
    a Cholesky fallback when the embedding is not nonnegative definite;
  * the truncated two-sided linear representation of the driver (samples the
    truncated model, whose ACVF is the truncated-sum oracle at the same K);
  * the modulated one-sided-in-noise representation, with rotation-mixed
    coefficients and plain white noise.

All randomness flows through numpy SeedSequence: a seed may be an int or a
tuple of ints, stream s of gaussian_wn uses spawn child s, and batch
replicate r of simulate_exact_many uses SeedSequence((*seed, r)).
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cholesky, toeplitz
from scipy.signal import fftconvolve, lfilter

from .errors import DomainError, NotPositiveDefiniteError
from .model import (AsymSpec, FrmodSpec, MultiFactorSpec, _coeff_arrays,
                    acvf_frmod, acvf_asym, acvf_frmod0, acvf_multifactor)

__all__ = [
    "SeriesSample", "gaussian_wn", "simulate_exact", "simulate_exact_many",
    "simulate_truncated", "simulate_modulated", "modulated_coefficients",
    "modulated_noise", "apply_arma", "arma_burn_in",
]

EIG_CLIP_REL = 1e-8     # embedding eigenvalues below -EIG_CLIP_REL*max trigger fallback
CHOL_JITTER_REL = 1e-10


@dataclass(frozen=True)
class SeriesSample:
    """A simulated path plus everything needed to regenerate it bit-for-bit."""

    values: np.ndarray = field(repr=False)
    seed: object
    method: str
    spec: object
    meta: dict = field(default_factory=dict)

    @property
    def n(self):
        return len(self.values)


def _seedseq(seed):
    return seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)


def gaussian_wn(seed, n, streams=1):
    """IID standard normal draws, deterministic in the seed.

    Returns one array for streams=1, else a tuple of independent arrays;
    stream s is generated from SeedSequence(seed).spawn()[s].
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if streams not in (1, 2):
        raise DomainError(f"streams must be 1 or 2, got {streams}")
    children = _seedseq(seed).spawn(streams)
    outs = tuple(np.random.default_rng(c).standard_normal(n) for c in children)
    return outs[0] if streams == 1 else outs


def model_acvf_vector(spec, nlags):
    """gamma(0..nlags-1) for any of the three model kinds (exact closed form)."""
    h = np.arange(nlags)
    if isinstance(spec, FrmodSpec):
        if spec.is_pure:
            return acvf_frmod0(spec, h)
        return acvf_frmod(spec, nlags - 1).values
    if isinstance(spec, AsymSpec):
        return acvf_asym(spec, h)
    if isinstance(spec, MultiFactorSpec):
        return acvf_multifactor(spec, h)
    raise DomainError(f"unknown spec type {type(spec).__name__}")


def _embedding_eigs(spec, n, embed):
    """Eigenvalues of the circulant embedding of size `embed` (even)."""
    gamma = model_acvf_vector(spec, embed // 2 + 1)
    circ = np.concatenate([gamma, gamma[-2:0:-1]])
    return np.fft.rfft(circ).real, gamma


def _draw_embedding(eigs, m, n, rng):
    """One exact Gaussian path of length n from nonnegative embedding eigenvalues.

    eigs holds the m/2+1 distinct circulant eigenvalues (rfft layout).
    """
    half = m // 2
    z = rng.standard_normal(m)
    w = np.empty(half + 1, dtype=complex)
    w[0] = math.sqrt(eigs[0] / m) * z[0]
    w[half] = math.sqrt(eigs[half] / m) * z[half]
    k = np.arange(1, half)
    w[k] = np.sqrt(eigs[k] / (2.0 * m)) * (z[k] + 1j * z[m - k])
    x = np.fft.irfft(w * m, n=m)  # irfft scales by 1/m; w already carries 1/sqrt scaling
    return x[:n]


def _plan_embedding(spec, n):
    """Find an embedding size whose eigenvalue floor is acceptable.

    Tries the minimal power of two >= 2(n-1), then up to three doublings.
    Returns (eigs, m, meta) or None if every attempt fails the floor test.
    """
    m0 = 1 << max(3, int(math.ceil(math.log2(max(2 * (n - 1), 4)))))
    for attempt in range(4):
        m = m0 << attempt
        eigs, _ = _embedding_eigs(spec, n, m)
        floor = -EIG_CLIP_REL * eigs.max()
        if eigs.min() >= floor:
            meta = {"embed_size": m, "min_eig": float(eigs.min()),
                    "clipped": int(np.sum(eigs < 0.0))}
            return np.maximum(eigs, 0.0), m, meta
    return None


def _cholesky_factor(spec, n):
    gamma = model_acvf_vector(spec, n)
    jitter = CHOL_JITTER_REL * gamma[0]
    mat = toeplitz(gamma)
    mat[np.diag_indices_from(mat)] += jitter
    try:
        return cholesky(mat, lower=True, overwrite_a=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefiniteError(
            f"Toeplitz covariance not positive definite after jitter {jitter}") from exc


def simulate_exact(spec, n, seed):
    """Stationary Gaussian path whose ACVF is the model's, exactly.

    Prefers circulant embedding (O(n log n)); falls back to Cholesky with
    diagonal jitter when the embedding has a materially negative eigenvalue.
    The method actually used, the embedding size, and any eigenvalue
    clipping are recorded in the sample metadata.
    """
    if n < 2:
        raise DomainError(f"n must be >= 2, got {n}")
    rng = np.random.default_rng(_seedseq(seed))
    plan = _plan_embedding(spec, n)
    if plan is not None:
        eigs, m, meta = plan
        x = _draw_embedding(eigs, m, n, rng)
        return SeriesSample(values=x, seed=seed, method="exact-embedding",
                            spec=spec, meta=meta)
    chol = _cholesky_factor(spec, n)
    x = chol @ rng.standard_normal(n)
    return SeriesSample(values=x, seed=seed, method="cholesky", spec=spec,
                        meta={"fallback": True, "jitter_rel": CHOL_JITTER_REL})


def simulate_exact_many(spec, n, seed, replicates):
    """Replicated exact paths as a (replicates, n) array.

    The embedding (or Cholesky factor) is planned once; replicate r draws
    from SeedSequence((*seed, r)) so any subset is reproducible in isolation.
    """
    base = (seed,) if np.ndim(seed) == 0 else tuple(seed)
    plan = _plan_embedding(spec, n)
    out = np.empty((replicates, n))
    if plan is not None:
        eigs, m, meta = plan
        for r in range(replicates):
            rng = np.random.default_rng(np.random.SeedSequence(base + (r,)))
            out[r] = _draw_embedding(eigs, m, n, rng)
        return out, {"method": "exact-embedding", **meta}
    chol = _cholesky_factor(spec, n)
    for r in range(replicates):
        rng = np.random.default_rng(np.random.SeedSequence(base + (r,)))
        out[r] = rng.standard_normal(n)
    return out @ chol.T, {"method": "cholesky", "fallback": True}


def simulate_truncated(spec, n, seed, K):
    """Path of the K-truncated two-sided representation (pure model only).

    The driver pair is built by convolving two independent noise streams
    with the coefficients restricted to |l| <= K, then modulated. Replicate
    statistics converge to the truncated-sum oracle ACVF at the same K, not
    to the untruncated closed form.
    """
    _require_pure(spec, "simulate_truncated")
    if K < 1:
        raise DomainError(f"K must be >= 1, got {K}")
    a0, a1, off = _coeff_arrays(spec.d, spec.q, K, 0)
    e1, e2 = gaussian_wn(seed, n + 2 * K, streams=2)
    y1 = fftconvolve(a0, e1)[2 * K: 2 * K + n] + fftconvolve(a1, e2)[2 * K: 2 * K + n]
    y2 = fftconvolve(-a1, e1)[2 * K: 2 * K + n] + fftconvolve(a0, e2)[2 * K: 2 * K + n]
    t = np.arange(n)
    x = np.cos(spec.lambda0 * t) * y1 + np.sin(spec.lambda0 * t) * y2
    return SeriesSample(values=x, seed=seed, method="truncated-linear",
                        spec=spec, meta={"K": K})


def modulated_coefficients(spec, j):
    """Row coefficients of the modulated linear representation at index j.

    Returns (cos(l0 j) a0_j - sin(l0 j) a1_j, cos(l0 j) a1_j + sin(l0 j) a0_j);
    the rotation preserves a0_j^2 + a1_j^2, and partial sums of outer
    products reproduce the truncated-sum ACVF exactly.
    """
    _require_pure(spec, "modulated_coefficients")
    jarr = np.atleast_1d(np.asarray(j, dtype=int))
    jmax = int(np.max(np.abs(jarr))) if jarr.size else 0
    a0, a1, off = _coeff_arrays(spec.d, spec.q, jmax, 0)
    a0j, a1j = a0[off + jarr], a1[off + jarr]
    c, s = np.cos(spec.lambda0 * jarr), np.sin(spec.lambda0 * jarr)
    first, second = c * a0j - s * a1j, c * a1j + s * a0j
    if np.ndim(j) == 0:
        return float(first[0]), float(second[0])
    return first, second


def modulated_noise(eps, n, lambda0):
    """Rotate a noise pair by the index-n modulation angle.

    eps is a length-2 vector (or (2, m) array); the rotation matrix
    [[cos(l0 n), sin(l0 n)], [-sin(l0 n), cos(l0 n)]] is orthogonal for
    every integer n, so the transformed noise stays white.
    """
    c, s = math.cos(lambda0 * n), math.sin(lambda0 * n)
    m = np.array([[c, s], [-s, c]])
    return m @ np.asarray(eps)


def simulate_modulated(spec, n, seed, K):
    """Path built from the modulated coefficients and plain white noise.

    Same truncated second-order law as simulate_truncated at equal K; the
    modulation lives in the coefficients instead of a deterministic
    envelope on the driver pair.
    """
    _require_pure(spec, "simulate_modulated")
    if K < 1:
        raise DomainError(f"K must be >= 1, got {K}")
    j = np.arange(-K, K + 1)
    b1, b2 = modulated_coefficients(spec, j)
    e1, e2 = gaussian_wn(seed, n + 2 * K, streams=2)
    x = fftconvolve(b1, e1)[2 * K: 2 * K + n] + fftconvolve(b2, e2)[2 * K: 2 * K + n]
    return SeriesSample(values=x, seed=seed, method="modulated-linear",
                        spec=spec, meta={"K": K})


def _require_pure(spec, name):
    if not isinstance(spec, FrmodSpec) or not spec.is_pure:
        raise DomainError(f"{name} requires a pure (p = q = 0) model spec")


def arma_burn_in(ar):
    """Samples to discard after zero-initialised ARMA filtering."""
    return max(10 * len(ar), 100)


def apply_arma(x, ar, ma):
    """Filter x by Theta(B)/Phi(B) with zero initial conditions.

    The output has the same length as x; the first arma_burn_in(ar) samples
    carry the transient of the zero initialisation (the root condition makes
    it decay geometrically).
    """
    from .errors import InvalidPolynomialError
    from .model import min_root_modulus

    if min_root_modulus([-v for v in ar]) <= 1.0 + 1e-8:
        raise InvalidPolynomialError("AR polynomial has a root inside the unit disc")
    if min_root_modulus(tuple(ma)) <= 1.0 + 1e-8:
        raise InvalidPolynomialError("MA polynomial has a root inside the unit disc")
    b = np.concatenate([[1.0], np.asarray(ma, dtype=float)])
    a = np.concatenate([[1.0], -np.asarray(ar, dtype=float)])
    return lfilter(b, a, np.asarray(x, dtype=float))
