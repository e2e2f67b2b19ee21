"""Observables, noise content, and compatibility certification.

The package models observables on three kinds of state spaces (polytopes,
quantum systems, quantum channels), quantifies the trivial component that
can be split off each observable, and turns that quantity into
compatibility certificates, including an exact linear-programming decision
on polytope spaces.
"""

from .core import (
    Effect,
    Observable,
    PolytopeEffect,
    PolytopeSpace,
    ProcessEffect,
    ProcessSpace,
    QuantumEffect,
    QuantumSpace,
    StateSpace,
    TrivialObservable,
    effect_deviation,
    embed_trivial,
    evaluate,
    mix,
    observable_from_dict,
    observable_to_dict,
    polytope_effect_from_affine,
    polytope_effect_from_vertex_values,
    regular_polygon_space,
    squit_space,
    unit_effect,
    validate_observable,
    zero_effect,
)
from .channels import (
    ClassicalChannel,
    compose,
    copy_channel,
    copy_grid,
    doubly_reverse,
    doubly_reverse_weight,
    post_process,
    relabel_channel,
    reverse_channel,
    reverse_observable,
    trivializing_channel,
)
from .compat import (
    CompatibilityVerdict,
    JointObservable,
    Status,
    build_joint,
    is_joint_of,
    joint_from_postprocessings,
    lp_compatible_polytope,
    marginal,
    sufficient_compatible,
)
from .grid import OutcomeGrid
from .noise import (
    EffectInfimum,
    NoiseDecomposition,
    concavity_check,
    effect_infimum,
    noise_content,
    noise_content_exact_trivial_ppovm,
)
from .processes import (
    ChoiState,
    PPOVM,
    evaluate_ppovm,
    ppovm_eigen_condition_report,
    ppovm_noise_lower_bound,
)
from .quantum import (
    Basis,
    RegularRank1POVM,
    eigen_condition_report,
    fourier_mub_pair,
    mub_reverse_steering_state,
    random_povm,
    reverse_triple_witness,
    reversed_threshold,
    sharp_povm,
)

__version__ = "0.1.0"

__all__ = [
    "Basis",
    "ChoiState",
    "ClassicalChannel",
    "CompatibilityVerdict",
    "Effect",
    "EffectInfimum",
    "JointObservable",
    "NoiseDecomposition",
    "Observable",
    "OutcomeGrid",
    "PPOVM",
    "PolytopeEffect",
    "PolytopeSpace",
    "ProcessEffect",
    "ProcessSpace",
    "QuantumEffect",
    "QuantumSpace",
    "RegularRank1POVM",
    "StateSpace",
    "Status",
    "TrivialObservable",
    "build_joint",
    "compose",
    "concavity_check",
    "copy_channel",
    "copy_grid",
    "doubly_reverse",
    "doubly_reverse_weight",
    "effect_deviation",
    "effect_infimum",
    "eigen_condition_report",
    "embed_trivial",
    "evaluate",
    "evaluate_ppovm",
    "fourier_mub_pair",
    "is_joint_of",
    "joint_from_postprocessings",
    "lp_compatible_polytope",
    "marginal",
    "mix",
    "mub_reverse_steering_state",
    "noise_content",
    "noise_content_exact_trivial_ppovm",
    "observable_from_dict",
    "observable_to_dict",
    "polytope_effect_from_affine",
    "polytope_effect_from_vertex_values",
    "post_process",
    "ppovm_eigen_condition_report",
    "ppovm_noise_lower_bound",
    "random_povm",
    "regular_polygon_space",
    "relabel_channel",
    "reverse_channel",
    "reverse_observable",
    "reverse_triple_witness",
    "reversed_threshold",
    "sharp_povm",
    "squit_space",
    "sufficient_compatible",
    "trivializing_channel",
    "unit_effect",
    "validate_observable",
    "zero_effect",
]
