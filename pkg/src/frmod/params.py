"""Parameter algebra for the limiting behavior of the cyclical model.

Five equivalent parameterizations describe the large-lag / near-singularity
limits of the randomly modulated model:

  q-pair  (q0, q1)       driving-matrix entries of the bivariate filter
  a-pair  (a0, a1)       coefficient-asymptote entries, a_i = q_i / Gamma(d)
  r-pair  (r0, r1)       ACVF limit:    gamma_Y(h) ~ [[r0, -r1], [r1, r0]] h^(2d-1)
  g-pair  (g0, g1)       spectral limit: f_Y(l) ~ [[g0, i g1], [-i g1, g0]] l^(-2d)
  (c_gamma, phi)         scalar ACVF envelope c_gamma cos(lambda0 h + phi) h^(2d-1)
  (cf_plus, cf_minus)    one-sided spectral divergence constants at lambda0

This module provides the exact conversion maps between them, the
admissibility interval for the cyclical phase, and the boundary-case
constructions where one of cf_plus, cf_minus vanishes.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InadmissiblePhaseError, InfeasibleLimitError
from .specfun import gamma_ratio, log_gamma

__all__ = [
    "MemoryFrequency", "QPair", "APair", "RPair", "GPair", "TimeLimit", "SpecLimit",
    "admissible_interval", "q_to_a", "a_to_r", "r_to_a", "q_to_r", "r_to_g",
    "r_to_timelimit", "timelimit_to_speclimit", "speclimit_to_timelimit",
    "target_phase_to_q", "boundary_q0", "phi_curve",
]

# arcsin near +-1 loses precision; boundary-phase comparisons use this slack
PHASE_TOL = 1e-9


def _check_d(d):
    if not (0.0 < d < 0.5):
        raise DomainError(f"memory parameter d must lie in (0, 1/2), got {d}")


@dataclass(frozen=True)
class MemoryFrequency:
    """Memory parameter d in (0, 1/2) and cyclical frequency lambda0 in (0, pi)."""

    d: float
    lambda0: float

    def __post_init__(self):
        _check_d(self.d)
        if not (0.0 < self.lambda0 < math.pi):
            raise DomainError(f"lambda0 must lie in (0, pi), got {self.lambda0}")


@dataclass(frozen=True)
class QPair:
    q0: float
    q1: float

    def __post_init__(self):
        if self.q0 == 0.0 and self.q1 == 0.0:
            raise DomainError("(q0, q1) must not both be zero")


@dataclass(frozen=True)
class APair:
    a0: float
    a1: float

    def __post_init__(self):
        if self.a0 == 0.0 and self.a1 == 0.0:
            raise DomainError("(a0, a1) must not both be zero")


@dataclass(frozen=True)
class RPair:
    r0: float
    r1: float

    def __post_init__(self):
        if not self.r0 > 0.0:
            raise DomainError(f"r0 must be positive, got {self.r0}")


@dataclass(frozen=True)
class GPair:
    g0: float
    g1: float

    def __post_init__(self):
        if not self.g0 > 0.0:
            raise DomainError(f"g0 must be positive, got {self.g0}")
        if abs(self.g1) > self.g0 * (1.0 + 1e-12):
            raise DomainError(f"spectral validity requires |g1| <= g0, got {self}")


@dataclass(frozen=True)
class TimeLimit:
    """ACVF envelope amplitude c_gamma > 0 and cyclical phase phi (radians)."""

    c_gamma: float
    phi: float

    def __post_init__(self):
        if not self.c_gamma > 0.0:
            raise DomainError(f"c_gamma must be positive, got {self.c_gamma}")
        if abs(self.phi) > math.pi / 2:
            raise DomainError(f"phi must lie in (-pi/2, pi/2), got {self.phi}")


@dataclass(frozen=True)
class SpecLimit:
    """One-sided divergence constants of the spectral density at lambda0."""

    cf_plus: float
    cf_minus: float

    def __post_init__(self):
        if self.cf_plus < 0.0 or self.cf_minus < 0.0:
            raise DomainError("cf_plus and cf_minus must be nonnegative")
        if self.cf_plus + self.cf_minus <= 0.0:
            raise DomainError("cf_plus + cf_minus must be positive")


def admissible_interval(d):
    """Closed interval [(d - 1/2) pi, (1/2 - d) pi] of admissible phases."""
    _check_d(d)
    half = (0.5 - d) * math.pi
    return (-half, half)


def _check_phase(phi, d):
    lo, hi = admissible_interval(d)
    if phi < lo - PHASE_TOL or phi > hi + PHASE_TOL:
        raise InadmissiblePhaseError(
            f"phi={phi} outside admissible interval [{lo}, {hi}] for d={d}")


def q_to_a(q, d):
    """a_i = q_i / Gamma(d)."""
    _check_d(d)
    gd = math.exp(log_gamma(d))
    return APair(q.q0 / gd, q.q1 / gd)


def a_to_r(a, d):
    """ACVF limit pair from the coefficient-asymptote pair.

    r0 = (Gamma(d)^2 / Gamma(2d)) [ (a0^2 + a1^2)/cos(pi d) + (a0^2 - a1^2) ]
    r1 = -2 a0 a1 Gamma(d)^2 / Gamma(2d)
    """
    _check_d(d)
    c = math.exp(2.0 * log_gamma(d) - log_gamma(2.0 * d))
    sum2, dif2 = a.a0 ** 2 + a.a1 ** 2, a.a0 ** 2 - a.a1 ** 2
    r0 = c * (sum2 / math.cos(math.pi * d) + dif2)
    r1 = -2.0 * a.a0 * a.a1 * c
    return RPair(r0, r1)


def _alpha(d):
    # quadratic coefficient in the a1^2 inversion: alpha nu^2 - r0 nu + gamma r1^2 = 0
    return math.exp(2.0 * log_gamma(d) - log_gamma(2.0 * d)) * (1.0 / math.cos(math.pi * d) - 1.0)


def r_to_a(r, d, branch="plus"):
    """Invert a_to_r. Two solutions exist when the discriminant is positive.

    The discriminant is Delta = r0^2 - tan^2(pi d) r1^2; Delta < 0 means no
    model with the required covariance symmetry attains this (r0, r1).
    The default "plus" branch takes the larger root nu_+ = a1^2.
    """
    _check_d(d)
    if branch not in ("plus", "minus"):
        raise DomainError(f"branch must be 'plus' or 'minus', got {branch!r}")
    tanpd = math.tan(math.pi * d)
    delta = r.r0 ** 2 - (tanpd * r.r1) ** 2
    if delta < 0.0:
        # exact-boundary inputs can land at -eps; genuine infeasibility raises
        scale = r.r0 ** 2 + (tanpd * r.r1) ** 2
        if delta < -1e-12 * scale:
            raise InfeasibleLimitError(
                f"r0^2 - tan^2(pi d) r1^2 = {delta} < 0: no admissible model attains {r}")
        delta = 0.0
    alpha = _alpha(d)
    root = math.sqrt(max(delta, 0.0))
    nu = (r.r0 + root) / (2.0 * alpha) if branch == "plus" else (r.r0 - root) / (2.0 * alpha)
    a1 = math.sqrt(max(nu, 0.0))
    c = math.exp(log_gamma(2.0 * d) - 2.0 * log_gamma(d))
    if a1 > 0.0:
        a0 = -r.r1 * c / (2.0 * a1)
    else:
        # nu_- = 0 happens only when r1 = 0; then a0 carries all of r0
        a0 = math.sqrt(r.r0 * c / (1.0 / math.cos(math.pi * d) + 1.0))
    return APair(a0, a1)


def q_to_r(q, d):
    """ACVF limit pair directly from (q0, q1).

    r0 = [ q0^2 (1/cos(pi d) + 1) + q1^2 (1/cos(pi d) - 1) ] / Gamma(2d)
    r1 = -2 q0 q1 / Gamma(2d)
    """
    _check_d(d)
    g2d = math.exp(log_gamma(2.0 * d))
    sec = 1.0 / math.cos(math.pi * d)
    r0 = (q.q0 ** 2 * (sec + 1.0) + q.q1 ** 2 * (sec - 1.0)) / g2d
    r1 = -2.0 * q.q0 * q.q1 / g2d
    return RPair(r0, r1)


def r_to_g(r, d):
    """Spectral limit pair: g0 = Gamma(2d) cos(pi d) r0 / pi, g1 = Gamma(2d) sin(pi d) r1 / pi."""
    _check_d(d)
    g2d = math.exp(log_gamma(2.0 * d))
    return GPair(g2d * math.cos(math.pi * d) * r.r0 / math.pi,
                 g2d * math.sin(math.pi * d) * r.r1 / math.pi)


def r_to_timelimit(r):
    """Envelope amplitude and phase: c_gamma = sqrt(r0^2 + r1^2), phi = arcsin(-r1/c_gamma)."""
    c_gamma = math.hypot(r.r0, r.r1)
    phi = math.asin(-r.r1 / c_gamma)
    return TimeLimit(c_gamma, phi)


def timelimit_to_speclimit(t, d):
    """One-sided spectral constants cf_pm = (c_gamma / 2 pi) Gamma(2d) cos(pi d -+ phi)."""
    _check_d(d)
    _check_phase(t.phi, d)
    scale = t.c_gamma * math.exp(log_gamma(2.0 * d)) / (2.0 * math.pi)
    cf_plus = scale * math.cos(math.pi * d - t.phi)
    cf_minus = scale * math.cos(math.pi * d + t.phi)
    # cos(pi d -+ phi) >= 0 on the admissible interval; clip arcsin-level dust
    return SpecLimit(max(cf_plus, 0.0), max(cf_minus, 0.0))


def speclimit_to_timelimit(s, d):
    """Inverse of timelimit_to_speclimit.

    c_gamma = 2 Gamma(1-2d) sqrt(cf+^2 + cf-^2 - 2 cf+ cf- cos(2 pi d))
    phi     = arcsin( (cf+ - cf-) cos(pi d) / sqrt(...) )

    The radical is exactly (c_gamma Gamma(2d) sin(2 pi d) / 2 pi) under the
    forward map, which the reflection formula collapses back to c_gamma; the
    two maps are mutual inverses.
    """
    _check_d(d)
    rad = math.sqrt(s.cf_plus ** 2 + s.cf_minus ** 2
                    - 2.0 * s.cf_plus * s.cf_minus * math.cos(2.0 * math.pi * d))
    c_gamma = 2.0 * math.exp(log_gamma(1.0 - 2.0 * d)) * rad
    arg = (s.cf_plus - s.cf_minus) * math.cos(math.pi * d) / rad
    phi = math.asin(min(1.0, max(-1.0, arg)))
    return TimeLimit(c_gamma, phi)


def target_phase_to_q(t, d):
    """A (q0, q1) pair whose limiting envelope is the requested (c_gamma, phi).

    Solves through the r-pair and the plus-branch a-pair, then scales by
    Gamma(d); composing q_to_r and r_to_timelimit recovers the input.
    """
    _check_d(d)
    _check_phase(t.phi, d)
    phi = min(max(t.phi, admissible_interval(d)[0]), admissible_interval(d)[1])
    r = RPair(t.c_gamma * math.cos(phi), -t.c_gamma * math.sin(phi))
    a = r_to_a(r, d, branch="plus")
    gd = math.exp(log_gamma(d))
    return QPair(gd * a.a0, gd * a.a1)


def boundary_q0(d, q1, sign):
    """q0 putting the model exactly on the phase boundary phi = sign (1/2 - d) pi.

    q0 = sign * sin(pi d) / (1 + cos(pi d)) * q1, i.e. sign * tan(pi d / 2) * q1.
    With sign = +1 the spectral divergence sits on the lambda > lambda0 side
    (cf_minus = 0); with sign = -1 on the lambda < lambda0 side (cf_plus = 0).
    """
    _check_d(d)
    if sign not in (1, -1, 1.0, -1.0):
        raise DomainError(f"sign must be +1 or -1, got {sign!r}")
    return sign * math.sin(math.pi * d) / (1.0 + math.cos(math.pi * d)) * q1


def phi_curve(d, q0, q1_grid):
    """Cyclical phase as a function of q1 at fixed q0.

    Returns an array of (q1, phi) rows. phi is odd in q1 for fixed q0 and
    attains the boundary values +-(1/2 - d) pi at q1 = +-q0 (1+cos(pi d))/sin(pi d).
    """
    _check_d(d)
    g2d = math.exp(log_gamma(2.0 * d))
    sec = 1.0 / math.cos(math.pi * d)
    q1s = np.asarray(q1_grid, dtype=float)
    r0 = (q0 ** 2 * (sec + 1.0) + q1s ** 2 * (sec - 1.0)) / g2d
    r1 = -2.0 * q0 * q1s / g2d
    denom = np.hypot(r0, r1)
    phi = np.arcsin(np.where(denom > 0.0, -r1, 0.0) / np.where(denom > 0.0, denom, 1.0))
    return np.column_stack([q1s, phi])
