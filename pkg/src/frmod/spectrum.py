"""Closed-form spectral densities and the quadrature oracle.

The bivariate driver has, for 0 < l <= pi,

    f11(l) = 2^(-2d) sin^(-2d)(l/2) [ (q0^2 - q1^2) cos((l - pi) d)
                                      + (q0^2 + q1^2) ] / pi
    f12(l) = i g(l),  g(l) = q0 q1 2^(1-2d) sin^(-2d)(l/2) sin((l - pi) d) / pi

extended to negative l by f11 even, g odd. f12 is purely imaginary, so it is
represented throughout by the real number g. The modulated-series spectrum is

    f_X(l) = 1/2 [ f11(l - l0) + f11(l + l0) ] - 1/2 [ g(l - l0) - g(l + l0) ],

arguments wrapped into (-pi, pi]; an ARMA filter multiplies by
|Theta(e^{-il})|^2 / |Phi(e^{-il})|^2. f_X diverges like cf_pm |l - l0|^(-2d)
on the two sides of l0 with (cf_plus, cf_minus) = ((g0 - g1)/2, (g0 + g1)/2).
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from .errors import DomainError, QuadratureFailureError, SingularityError
from .model import AsymSpec, FrmodSpec, MultiFactorSpec
from .specfun import log_gamma

__all__ = [
    "SpectrumValue", "SpectrumGrid", "spec_Y", "spec_X", "spec_asym",
    "model_spectrum", "spec_boundary_constants", "spectrum_grid",
    "acvf_from_spectrum", "singularities",
]

SINGULARITY_TOL = 1e-12


@dataclass(frozen=True)
class SpectrumValue:
    """Spectral evaluation at one frequency; f12 = i * f12_imag."""

    lam: float
    f11: float
    f12_imag: float
    fx: float


@dataclass(frozen=True)
class SpectrumGrid:
    """Model spectrum on a grid that avoids the singular frequencies."""

    lambdas: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    singular_points: tuple = ()


def _wrap(lam):
    """Map frequencies into (-pi, pi]."""
    out = np.mod(np.asarray(lam, dtype=float) + math.pi, 2.0 * math.pi) - math.pi
    return np.where(out == -math.pi, math.pi, out)


def _spec_Y_raw(d, q, arr):
    """Driver spectrum without the singularity guard (arr != 0 elementwise)."""
    a = np.abs(arr)
    base = np.power(2.0 * np.sin(a / 2.0), -2.0 * d) / math.pi
    f11 = base * ((q.q0 ** 2 - q.q1 ** 2) * np.cos((a - math.pi) * d)
                  + (q.q0 ** 2 + q.q1 ** 2))
    g = np.sign(arr) * 2.0 * q.q0 * q.q1 * base * np.sin((a - math.pi) * d)
    return f11, g


def spec_Y(d, q, lam):
    """(f11, f12_imag) of the bivariate driver at lam in (-pi, pi], lam != 0."""
    if not (0.0 < d < 0.5):
        raise DomainError(f"memory parameter d must lie in (0, 1/2), got {d}")
    arr = np.asarray(lam, dtype=float)
    if np.any(arr <= -math.pi) or np.any(arr > math.pi):
        raise DomainError("spec_Y expects frequencies in (-pi, pi]")
    if np.any(np.abs(arr) < SINGULARITY_TOL):
        raise SingularityError("spectral density of the driver diverges at 0")
    f11, g = _spec_Y_raw(d, q, arr)
    if np.ndim(lam) == 0:
        return float(f11), float(g)
    return f11, g


def _arma_gain(ar, ma, lam):
    """|Theta(e^{-il})|^2 / |Phi(e^{-il})|^2."""
    z = np.exp(-1j * np.asarray(lam, dtype=float))
    theta = np.ones_like(z)
    for k, t in enumerate(ma, start=1):
        theta = theta + t * z ** k
    phi = np.ones_like(z)
    for k, p in enumerate(ar, start=1):
        phi = phi - p * z ** k
    return (np.abs(theta) / np.abs(phi)) ** 2


def _fx_pure(d, q, lambda0, lam):
    lm = _wrap(np.asarray(lam, dtype=float) - lambda0)
    lp = _wrap(np.asarray(lam, dtype=float) + lambda0)
    f11m, gm = spec_Y(d, q, lm)
    f11p, gp = spec_Y(d, q, lp)
    return 0.5 * (f11m + f11p) - 0.5 * (gm - gp)


def spec_X(spec, lam):
    """Spectral density of the modulated (optionally ARMA-filtered) series.

    Raises SingularityError if any frequency wraps to within 1e-12 of
    +-lambda0.
    """
    arr = np.asarray(lam, dtype=float)
    out = _fx_pure(spec.d, spec.q, spec.lambda0, arr)
    if spec.ar or spec.ma:
        out = out * _arma_gain(spec.ar, spec.ma, arr)
    if np.ndim(lam) == 0:
        return float(out)
    return out


def spec_asym(spec, lam):
    """Spectrum of the asymmetric-memory sum: the boundary components added.

    Near lambda0 it behaves like cf_plus (lam - lambda0)^(-2 d_plus) from the
    right and cf_minus (lambda0 - lam)^(-2 d_minus) from the left.
    """
    return sum(spec_X(c, lam) for c in spec.components())


def model_spectrum(spec, lam):
    """Dispatch f_X over the three model kinds."""
    if isinstance(spec, FrmodSpec):
        return spec_X(spec, lam)
    if isinstance(spec, AsymSpec):
        return spec_asym(spec, lam)
    if isinstance(spec, MultiFactorSpec):
        return sum(model_spectrum(c, lam) for c in spec.components)
    raise DomainError(f"unknown spec type {type(spec).__name__}")


def spec_value(spec, lam):
    """Full SpectrumValue (driver components plus model spectrum) at lam."""
    f11, g = spec_Y(spec.d, spec.q, _wrap(lam))
    return SpectrumValue(lam=float(lam), f11=f11, f12_imag=g, fx=spec_X(spec, lam))


def spec_boundary_constants(d, q1, sign, lambda0):
    """Limiting constants of the boundary-case spectrum around lambda0.

    Returns (cf_divergent, f_bounded): the coefficient of the one-sided
    divergence |l - lambda0|^(-2d) on the `sign` side, and the finite limit
    approached on the opposite side,

      cf_divergent = q1^2 (1 - cos(2 pi d)) / (pi (1 + cos(pi d)))
      f_bounded    = 2^(-2d) sin^(-2d)(lambda0) (1 - cos(2 (pi - lambda0) d))
                     q1^2 / (pi (1 + cos(pi d))).
    """
    if not (0.0 < d < 0.5):
        raise DomainError(f"memory parameter d must lie in (0, 1/2), got {d}")
    if sign not in (1, -1):
        raise DomainError(f"sign must be +1 or -1, got {sign!r}")
    if not (0.0 < lambda0 < math.pi):
        raise DomainError(f"lambda0 must lie in (0, pi), got {lambda0}")
    denom = math.pi * (1.0 + math.cos(math.pi * d))
    cf_div = q1 ** 2 * (1.0 - math.cos(2.0 * math.pi * d)) / denom
    f_bnd = (2.0 * math.sin(lambda0)) ** (-2.0 * d) \
        * (1.0 - math.cos(2.0 * (math.pi - lambda0) * d)) * q1 ** 2 / denom
    return cf_div, f_bnd


def singularities(spec):
    """Singular frequencies with one-sided exponents: list of (lam0, d_left, d_right)."""
    if isinstance(spec, FrmodSpec):
        return [(spec.lambda0, spec.d, spec.d)]
    if isinstance(spec, AsymSpec):
        return [(spec.lambda0, spec.d_minus, spec.d_plus)]
    if isinstance(spec, MultiFactorSpec):
        out = []
        for c in spec.components:
            out.extend(singularities(c))
        return sorted(out)
    raise DomainError(f"unknown spec type {type(spec).__name__}")


def spectrum_grid(spec, points=4096, exclusion=1e-4):
    """Model spectrum on an equispaced grid over (0, pi) minus exclusion zones."""
    if points < 16:
        raise DomainError(f"need at least 16 grid points, got {points}")
    lams = np.linspace(0.0, math.pi, points + 2)[1:-1]
    sing = [s[0] for s in singularities(spec)]
    keep = np.ones_like(lams, dtype=bool)
    for s in sing:
        keep &= np.abs(lams - s) > exclusion
    lams = lams[keep]
    return SpectrumGrid(lambdas=lams, values=model_spectrum(spec, lams),
                        singular_points=tuple(sing) + (0.0,))


def _spectrum_near(spec, lam0, side, delta):
    """f_X(lam0 + side*delta) evaluated from the offset delta directly,
    so that offsets far below float spacing around lam0 stay exact."""
    if isinstance(spec, FrmodSpec):
        if abs(lam0 - spec.lambda0) < SINGULARITY_TOL:
            lm = np.float64(side * delta)          # argument lam - lambda0
            lp = _wrap(2.0 * spec.lambda0 + side * delta)
            f11m, gm = _spec_Y_raw(spec.d, spec.q, lm)
            f11p, gp = _spec_Y_raw(spec.d, spec.q, lp)
            out = float(0.5 * (f11m + f11p) - 0.5 * (gm - gp))
            if spec.ar or spec.ma:
                out *= float(_arma_gain(spec.ar, spec.ma, lam0 + side * delta))
            return out
        return spec_X(spec, lam0 + side * delta)
    if isinstance(spec, AsymSpec):
        return sum(_spectrum_near(c, lam0, side, delta) for c in spec.components())
    if isinstance(spec, MultiFactorSpec):
        return sum(_spectrum_near(c, lam0, side, delta) for c in spec.components)
    raise DomainError(f"unknown spec type {type(spec).__name__}")


def _quad_flank(spec, h, lam0, side, width, dexp, epsabs):
    """Integrate cos(h l) f_X(l) over the flank of width `width` on the
    `side` of lam0, with the substitution u = |l - lam0|^(1 - 2d) removing
    the edge singularity."""
    p = 1.0 - 2.0 * dexp
    umax = width ** p

    def integrand(u):
        delta = u ** (1.0 / p)
        return math.cos(h * (lam0 + side * delta)) \
            * _spectrum_near(spec, lam0, side, delta) \
            * (1.0 / p) * u ** (2.0 * dexp / p)

    return quad(integrand, 0.0, umax, epsabs=epsabs, epsrel=0.0, limit=400)


def acvf_from_spectrum(spec, h, tol=1e-8):
    """gamma_X(h) = 2 int_0^pi cos(h l) f_X(l) dl by adaptive quadrature.

    The integral is split at each singular frequency (midpoints between
    neighbouring singularities) and the substitution u = |l - lam0|^(1-2d)
    applied on both flanks, after which the integrand is bounded. Returns
    (value, error_estimate); raises QuadratureFailureError if the
    accumulated estimate exceeds tol.
    """
    sing = singularities(spec)
    lams = [s[0] for s in sing]
    if sorted(lams) != lams:
        sing = sorted(sing)
        lams = [s[0] for s in sing]
    bounds = [0.0] + [0.5 * (a + b) for a, b in zip(lams, lams[1:])] + [math.pi]
    total, errsum = 0.0, 0.0
    npieces = 2 * len(sing)
    for (lam0, d_left, d_right), lo, hi in zip(sing, bounds[:-1], bounds[1:]):
        for side, width, dexp in ((-1.0, lam0 - lo, d_left), (+1.0, hi - lam0, d_right)):
            v, e = _quad_flank(spec, h, lam0, side, width, dexp, 0.25 * tol / npieces)
            total += v
            errsum += e
    if errsum > tol:
        raise QuadratureFailureError(
            f"quadrature error estimate {errsum} exceeds tol {tol}")
    return 2.0 * total, 2.0 * errsum
