"""Inconsistency reduction for pairwise comparison matrices.

Multiplicative (reciprocal, positive) and additive (antisymmetric) PC
matrices, a one-parameter family of triad-based inconsistency indicators,
their instant and forward-difference priority directions, and a
constant-step descent that drives a matrix toward consistency.
"""

from .core import (
    AdditivePCMatrix,
    MultiplicativePCMatrix,
    all_defects,
    consistent_from_weights,
    enumerate_triads,
    gmm_priority_vector,
    is_consistent,
    to_additive,
    to_multiplicative,
    triad_defect,
    upper_index,
    upper_pairs,
    upper_size,
    validate_additive,
    validate_multiplicative,
)
from .descent import (
    ClampEvent,
    DescentConfig,
    DescentResult,
    IterationTrace,
    TraceRecord,
    run,
    select_direction,
    step_additive,
    step_multiplicative,
)
from .errors import (
    AntisymmetryViolation,
    BadDiagonal,
    DegenerateDefect,
    EvaluationError,
    IndicatorUndefined,
    InvalidExponent,
    MatrixFileError,
    NonPositiveEntry,
    NonSmoothExponent,
    OnConsistentLocus,
    OrderTooSmall,
    PCReduceError,
    PositivityFailure,
    ReciprocityViolation,
    ValidationError,
    ZeroWithNegativeExponent,
)
from .gradients import (
    DirectionVector,
    difference_gradient,
    difference_priority_vector,
    instant_pv3_add,
    instant_pv3_mult,
    instant_pv_np,
)
from .indicators import kii, kii3, kii3_min_form, p_average
from .matrixio import (
    format_matrix,
    format_trace,
    parse_matrix_text,
    parse_trace_text,
    read_matrix_file,
    read_trace_file,
    write_matrix_file,
    write_trace_file,
)
from .repro import REFERENCE_RUNS, run_all, run_row

__version__ = "0.1.0"

__all__ = [
    "AdditivePCMatrix",
    "AntisymmetryViolation",
    "BadDiagonal",
    "ClampEvent",
    "DegenerateDefect",
    "DescentConfig",
    "DescentResult",
    "DirectionVector",
    "EvaluationError",
    "IndicatorUndefined",
    "InvalidExponent",
    "IterationTrace",
    "MatrixFileError",
    "MultiplicativePCMatrix",
    "NonPositiveEntry",
    "NonSmoothExponent",
    "OnConsistentLocus",
    "OrderTooSmall",
    "PCReduceError",
    "PositivityFailure",
    "REFERENCE_RUNS",
    "ReciprocityViolation",
    "TraceRecord",
    "ValidationError",
    "ZeroWithNegativeExponent",
    "all_defects",
    "consistent_from_weights",
    "difference_gradient",
    "difference_priority_vector",
    "enumerate_triads",
    "format_matrix",
    "format_trace",
    "gmm_priority_vector",
    "instant_pv3_add",
    "instant_pv3_mult",
    "instant_pv_np",
    "is_consistent",
    "kii",
    "kii3",
    "kii3_min_form",
    "p_average",
    "parse_matrix_text",
    "parse_trace_text",
    "read_matrix_file",
    "read_trace_file",
    "run",
    "run_all",
    "run_row",
    "select_direction",
    "step_additive",
    "step_multiplicative",
    "to_additive",
    "to_multiplicative",
    "triad_defect",
    "upper_index",
    "upper_pairs",
    "upper_size",
    "validate_additive",
    "validate_multiplicative",
    "write_matrix_file",
    "write_trace_file",
]
