"""Numerical toolkit for anisotropic Gelfand-Shilov wave front sets of sampled signals."""

__version__ = "0.1.0"

from .chirp import WFPrediction, compare_wf, is_elliptic, predict_chirp_wf
from .errors import (AliasingError, ConfigError, CurveRangeError, DomainError,
                     GraphConditionError, ResolutionError, ToolkitError,
                     TruncationError, UnsupportedRegimeError)
from .estimator import (DecayProfile, RateFit, WFEntry, WFEstimate,
                        check_graph_condition, cone_constant, decay_profile,
                        estimate_kernel_wf, estimate_wf, fit_rate)
from .evolution import (EvolutionSpec, hamiltonian_flow, kernel_signal,
                        predict_transport, propagate)
from .geometry import (AnisoIndex, PhasePoint, SphereDirection,
                       dist_to_conic_set, in_gamma_nbhd, in_gamma_tilde_nbhd,
                       lambda_solve, project, scale_point)
from .poly import PolynomialData, eval_grad, eval_poly, poly_1d, principal_part
from .relation import (PointSet, compose, compose_via_projection, proj_13,
                       proj_2neg4, sconic_closure_check)
from .signals import (AnalyticSignal, SampledSignal, apply_gaussian_envelope,
                      chirp_signal, delta_signal, fourier, gaussian_signal,
                      make_chirp, make_gaussian, make_windowed_chirp,
                      one_signal, tensor, tensor_signal)
from .stft import (StftGrid, WindowSpec, classical_seminorm, istft,
                   moyal_error, stft_grid, stft_point, stft_seminorm)
