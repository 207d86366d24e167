"""Damped two-mode condensate model with power-law nonlinearity.

Stationary states, bifurcation structure, and hysteresis under slow
coupling ramps, with a CLI front end (`dimer-hysteresis`).
"""

from .bifurcation import (R_THRESHOLD, BifurcationDiagram, Branch,
                          FixedPoint, asymmetric_states_below_star,
                          classify_pitchfork, classify_stability,
                          eta_star_numeric, find_eta_plus, find_eta_star,
                          find_fixed_points, find_r_threshold, jacobian_at,
                          pitchfork_cubic_coefficient, stationary_residual,
                          trace_branches)
from .dynamics import METHODS, IntegratorConfig, integrate, vector_field
from .errors import (ConfigError, DomainError, GridCoverageError,
                     NoConvergenceError, SingularityError, StepFailureError,
                     ThresholdProximityError)
from .hysteresis import (AREA_THRESHOLD, Z_GAP_THRESHOLD, HysteresisReport,
                         predict_window, run_sweep)
from .model import (RHS_MODES, SCHEDULE_KINDS, EtaSchedule, ModelParams,
                    PhaseState, PhysicalContext, Sample, Trajectory,
                    amplitudes_from_state, effective_eta, energy_functional,
                    eval_schedule, grad_hamiltonian, hamiltonian,
                    power_difference, wrap_angle)
from .serialize import (diagram_to_csv, diagram_to_json, report_to_json,
                        threshold_to_json, trajectory_from_csv,
                        trajectory_to_csv)

__version__ = "0.1.0"

__all__ = [
    "AREA_THRESHOLD", "BifurcationDiagram", "Branch", "ConfigError",
    "DomainError", "EtaSchedule", "FixedPoint", "GridCoverageError",
    "HysteresisReport", "IntegratorConfig", "METHODS", "ModelParams",
    "NoConvergenceError", "PhaseState", "PhysicalContext", "R_THRESHOLD",
    "RHS_MODES", "SCHEDULE_KINDS", "Sample", "SingularityError",
    "StepFailureError", "ThresholdProximityError", "Trajectory",
    "Z_GAP_THRESHOLD", "amplitudes_from_state",
    "asymmetric_states_below_star", "classify_pitchfork",
    "classify_stability", "diagram_to_csv", "diagram_to_json",
    "effective_eta", "energy_functional", "eta_star_numeric",
    "eval_schedule", "find_eta_plus", "find_eta_star", "find_fixed_points",
    "find_r_threshold", "grad_hamiltonian", "hamiltonian", "integrate",
    "jacobian_at", "pitchfork_cubic_coefficient", "power_difference",
    "predict_window", "report_to_json", "run_sweep", "stationary_residual",
    "threshold_to_json", "trace_branches", "trajectory_from_csv",
    "trajectory_to_csv", "vector_field", "wrap_angle",
]
