"""Verification harness: thresholds, strip maps, assumption constants, atoms and operator norms."""

from .assumptions import (AssumptionStability, SuiteMember, assumption_lhs, assumption_stability,
                          band_suite, dyadic_suite, verify_assumption, zero_suite)
from .atoms import (Atom, BmoNorm, H1Bound, HormanderConstants, atom_invariants, atom_suite,
                    bmo_norm, h1_atomwise_bound, hormander_constants, local_kernel, make_atom)
from .multipliers import (MultiplierSpec, StripTraces, custom, gaussian, identity, imaginary_power,
                          in_parabola, parabola_map, resolvent_power, strip_width)
from .operator_norm import (OperatorNormEstimate, ScalingStudy, empirical_operator_norm,
                            operator_norm_scaling)
from .report import CaseResult, VerificationReport
from .thresholds import AssumptionParams, ThresholdResult, smoothness_threshold

__all__ = [
    "AssumptionParams", "ThresholdResult", "smoothness_threshold",
    "MultiplierSpec", "StripTraces", "custom", "gaussian", "identity", "imaginary_power",
    "resolvent_power", "in_parabola", "parabola_map", "strip_width",
    "SuiteMember", "dyadic_suite", "band_suite", "zero_suite", "assumption_lhs",
    "verify_assumption", "assumption_stability", "AssumptionStability",
    "Atom", "make_atom", "atom_suite", "atom_invariants", "bmo_norm", "BmoNorm",
    "local_kernel", "hormander_constants", "HormanderConstants", "h1_atomwise_bound", "H1Bound",
    "OperatorNormEstimate", "ScalingStudy", "empirical_operator_norm", "operator_norm_scaling",
    "CaseResult", "VerificationReport",
]
