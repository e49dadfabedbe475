"""Gridless two-dimensional line-spectrum estimation from one snapshot.

Decoupled atomic-norm SDP over a pair of one-level Toeplitz blocks, plus the
vectorized two-level baseline, frequency decomposition, automatic pairing,
dual-certificate checks, and benchmark harness.
"""

__version__ = "0.1.0"

from .bench import (MseRecord, RuntimeRecord, pair_mse, run_mc_mse,
                    run_recovery_scatter, run_runtime_sweep)
from .decompose import (VandermondeFactorization, estimate_order,
                        music2d_peaks, music2d_spectrum, vandermonde_decompose)
from .dualcert import CertificateReport, certify, dual_poly_eval, dual_poly_grid
from .exceptions import (Anm2dError, CapacityError,
                         CertificateUnavailableError, DegenerateApertureError,
                         OrderError, RankDeficiencyError, ScenarioError)
from .model import (ArrayGeometry, ObservationModel, Source, SourceSet,
                    add_noise, angle_to_frequency, apply_observation,
                    min_separations, noise_sigma, separation_ok,
                    separation_threshold, steering_matrix, steering_vector,
                    synthesize, wrap_distance)
from .pairing import PairedEstimate, pair_angles, resolve_collisions
from .pipeline import (EstimateOutcome, estimate, estimate_decoupled,
                       estimate_vectorized)
from .scenario import (Scenario, default_min_separation, load_scenario,
                       random_scenario, realize, save_scenario,
                       scenario_from_dict, scenario_to_dict,
                       separated_frequencies)
from .solvers import (SdpSolution, SolverSettings, VectorizedSolution,
                      lambda_heuristic, psd_project, solve_decoupled_exact,
                      solve_decoupled_regularized, solve_vectorized,
                      solve_vectorized_regularized)
from .toeplitz import (HermToeplitz, TwoLevelToeplitz, toeplitz_adjoint_project,
                       toeplitz_materialize, toeplitz_trace,
                       two_level_adjoint_project, two_level_from_sources,
                       two_level_materialize, two_level_trace)
