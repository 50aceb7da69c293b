"""Quantum channel capacities, projective direct sums and zero-error certificates."""

from .capacity import (
    CapacityEstimate,
    amplitude_damping_capacity,
    coherent_information,
    one_shot_capacity,
    regularized_probe,
    subnorm_entropy_identity,
)
from .channels import (
    KrausChannel,
    amplitude_damping,
    apply,
    choi,
    choi_distance,
    complement,
    compose,
    dephasing,
    identity_channel,
    stinespring,
    tensor,
    validate,
)
from .circuits import (
    CircuitDesc,
    build_reduction,
    compile_circuit,
    evaluate_reduction,
    parse_circuit,
    toy_verifier,
)
from .directsum import Povm, ProjectiveDirectSum, additivity_formula_check, complement_identity_check
from .errors import CapqError
from .linmath import herm_eig, partial_trace, von_neumann_entropy
from .zeroerr import (
    Graph,
    PvmStrategy,
    capacity_bounds,
    check_pvm_strategy,
    distinguishability_certificate,
    gram_system,
    independence_number,
)

__all__ = [
    "additivity_formula_check",
    "amplitude_damping",
    "amplitude_damping_capacity",
    "apply",
    "build_reduction",
    "capacity_bounds",
    "CapacityEstimate",
    "CapqError",
    "check_pvm_strategy",
    "choi",
    "choi_distance",
    "CircuitDesc",
    "coherent_information",
    "compile_circuit",
    "complement",
    "complement_identity_check",
    "compose",
    "dephasing",
    "distinguishability_certificate",
    "evaluate_reduction",
    "gram_system",
    "Graph",
    "herm_eig",
    "identity_channel",
    "independence_number",
    "KrausChannel",
    "one_shot_capacity",
    "parse_circuit",
    "partial_trace",
    "Povm",
    "ProjectiveDirectSum",
    "PvmStrategy",
    "regularized_probe",
    "stinespring",
    "subnorm_entropy_identity",
    "tensor",
    "toy_verifier",
    "validate",
    "von_neumann_entropy",
]

__version__ = "0.1.0"
