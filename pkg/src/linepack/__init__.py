"""Transient single-pipe gas flow: reduced adiabatic models vs a reference solver."""

from .adiabatic import (
    adiabatic_residual,
    boundary_from_schedule,
    calibrate,
    delta_p,
    delta_phi_pp,
    delta_phi_pphi,
    schedule_drive,
    ua_base,
    ua_frame,
    ua_solution,
)
from .balanced import ba_base, ba_corrections, ba_drive_from_schedule, ba_solution
from .core import (
    BC_KINDS,
    BC_PP,
    BC_PPHI,
    BoundarySpec,
    FieldSnapshot,
    ParameterSchedule,
    PipeModel,
    ScalingUnits,
    frozen_schedule,
    make_scaling,
    paper_schedule,
)
from .errors import (
    BranchError,
    CalibrationError,
    DegenerateWeightError,
    FlowReversalError,
    GridAlignmentError,
    InvalidParameterError,
    LinepackError,
    ProfileDegenerateError,
    ProfileSingularError,
    QuadratureError,
    StateInvalidError,
    StepError,
)
from .harness import (
    Scenario,
    ScenarioResult,
    compute_scenario,
    convergence_study,
    error_metrics,
    load_config,
    run,
    validate_scenario,
    write_result,
)
from .linearized import linearized_solve, steady_correction
from .pde import ReferenceSolver, solve_scenario
from .profile import exact_fields, f_antiderivative, g_from_inverse, g_profile_ode, g_sensitivities

__version__ = "0.1.0"

__all__ = [
    "BC_KINDS",
    "BC_PP",
    "BC_PPHI",
    "BoundarySpec",
    "BranchError",
    "CalibrationError",
    "DegenerateWeightError",
    "FieldSnapshot",
    "FlowReversalError",
    "GridAlignmentError",
    "InvalidParameterError",
    "LinepackError",
    "ParameterSchedule",
    "PipeModel",
    "ProfileDegenerateError",
    "ProfileSingularError",
    "QuadratureError",
    "ReferenceSolver",
    "ScalingUnits",
    "Scenario",
    "ScenarioResult",
    "StateInvalidError",
    "StepError",
    "adiabatic_residual",
    "ba_base",
    "ba_corrections",
    "ba_drive_from_schedule",
    "ba_solution",
    "boundary_from_schedule",
    "calibrate",
    "compute_scenario",
    "convergence_study",
    "delta_p",
    "delta_phi_pp",
    "delta_phi_pphi",
    "error_metrics",
    "exact_fields",
    "f_antiderivative",
    "frozen_schedule",
    "g_from_inverse",
    "g_profile_ode",
    "g_sensitivities",
    "linearized_solve",
    "load_config",
    "make_scaling",
    "paper_schedule",
    "run",
    "schedule_drive",
    "solve_scenario",
    "steady_correction",
    "ua_base",
    "ua_frame",
    "ua_solution",
    "validate_scenario",
    "write_result",
]
