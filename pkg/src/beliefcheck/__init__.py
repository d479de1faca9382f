"""beliefcheck: decide whether an observed belief dynamic is consistent
with Bayesian rationality, construct an explicit rationalizing model when
it is, and verify the construction independently."""

from .dist import (
    TOL,
    Dist,
    Observation,
    RnDerivative,
    RnEntry,
    RnReport,
    WeightedPosteriors,
    condition,
    martingale_check,
    pushforward,
    rn_derivative,
)
from .errors import (
    AbsoluteContinuityViolation,
    FormatError,
    InvalidMixError,
    NotRationalizableError,
    PreconditionError,
    ResourceBoundError,
    StructuralError,
    UndefinedUpdateError,
    ZeroProbabilityCell,
)
from .io import (
    load_model,
    load_observation,
    save_model,
    save_observation,
)
from .known_omega import (
    Prop1Report,
    brute_force_known_omega,
    check_proposition1,
    construct_known_omega_model,
    set_partitions,
)
from .rationalize import (
    Model,
    VerifyReport,
    check_condition1,
    construct_rationalization,
    induced_observables,
    target_mix,
    uniform_mix,
    verify_model,
)
from .simulate import PanelSample, simulate_panel, tv_distance

__all__ = [
    "TOL",
    "Dist",
    "Observation",
    "RnDerivative",
    "RnEntry",
    "RnReport",
    "WeightedPosteriors",
    "condition",
    "martingale_check",
    "pushforward",
    "rn_derivative",
    "AbsoluteContinuityViolation",
    "FormatError",
    "InvalidMixError",
    "NotRationalizableError",
    "PreconditionError",
    "ResourceBoundError",
    "StructuralError",
    "UndefinedUpdateError",
    "ZeroProbabilityCell",
    "load_model",
    "load_observation",
    "save_model",
    "save_observation",
    "Prop1Report",
    "brute_force_known_omega",
    "check_proposition1",
    "construct_known_omega_model",
    "set_partitions",
    "Model",
    "VerifyReport",
    "check_condition1",
    "construct_rationalization",
    "induced_observables",
    "target_mix",
    "uniform_mix",
    "verify_model",
    "PanelSample",
    "simulate_panel",
    "tv_distance",
]

__version__ = "0.1.0"
