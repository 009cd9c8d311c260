"""Cyclical long-memory time series built by random modulation of a
bivariate fractionally integrated model: exact parameter algebra,
closed-form autocovariances and spectral densities, exact Gaussian
simulation, demodulation, and the oracles that verify the closed forms.
"""

from .errors import (ConfigError, DomainError, InadmissiblePhaseError,
                     InfeasibleLimitError, InvalidPolynomialError,
                     NotPositiveDefiniteError, QuadratureFailureError,
                     SingularityError)
from .estimate import (Periodogram, hilbert_transform, lemma_d1_remainder,
                       periodogram, phase_surrogate, remodulate,
                       rice_demodulate, sample_acvf)
from .model import (AsymSpec, FrmodSpec, MultiFactorSpec, ScalarAcvf,
                    acvf_Y, acvf_asym, acvf_frmod, acvf_frmod0,
                    acvf_multifactor, acvf_oracle, acvf_oracle_y,
                    asymptotic_envelope, frmod_spec)
from .params import (APair, GPair, MemoryFrequency, QPair, RPair, SpecLimit,
                     TimeLimit, a_to_r, admissible_interval, boundary_q0,
                     phi_curve, q_to_a, q_to_r, r_to_a, r_to_g,
                     r_to_timelimit, speclimit_to_timelimit,
                     target_phase_to_q, timelimit_to_speclimit)
from .simulate import (SeriesSample, apply_arma, arma_burn_in, gaussian_wn,
                       modulated_coefficients, modulated_noise,
                       simulate_exact, simulate_exact_many,
                       simulate_modulated, simulate_truncated)
from .spectrum import (SpectrumGrid, SpectrumValue, acvf_from_spectrum,
                       model_spectrum, spec_asym, spec_boundary_constants,
                       spec_X, spec_Y, spectrum_grid)
from .specfun import FracCoeffSeq, frac_coeff_seq, gamma_ratio, log_gamma

__version__ = "0.1.0"
