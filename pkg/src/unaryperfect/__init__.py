"""Perfect unary quadratic forms over real quadratic fields.

Exact enumeration of the perfect forms of Q(sqrt(d)) up to scaling and
squared-unit equivalence, via a neighbour walk along the lower envelope
of trace support lines, plus closed-form families with known class
counts and the machinery to verify them.
"""

from .family import (
    DClass,
    FamilyParams,
    FamilyScan,
    HypothesisError,
    InvariantError,
    NRDecomp,
    RejectedCandidate,
    classify,
    classify_T,
    classify_unit_congruence,
    candidate_params,
    construct_a1_a2,
    construct_a3,
    generate_family,
    nr_decompose,
    predicted_a3_minimum,
    predicted_minimal_set,
)
from .quadfield import (
    FieldDesc,
    FieldElem,
    PrimitivePair,
    QuadFieldError,
    is_squarefree,
    primitive_normalize,
    slope,
)
from .traceform import (
    BinaryQF,
    MinData,
    NotPositiveDefiniteError,
    ReductionCapError,
    UnimodularMap,
    brute_force_min,
    certified_box,
    gauss_reduce,
    min_data,
    trace_form,
)
from .units import (
    CFExpansion,
    FundamentalUnit,
    PeriodError,
    SearchExhaustedError,
    cf_sqrt,
    fundamental_unit,
    unit_brute_oracle,
    unit_square,
)
from .voronoi import (
    PerfectForm,
    SupportLine,
    WalkError,
    WalkResult,
    classes_equal,
    initial_perfect,
    is_perfect,
    neighbor_step,
    support_line,
    vertex_at,
    walk_classes,
)

__version__ = "0.1.0"

__all__ = [
    "BinaryQF",
    "CFExpansion",
    "DClass",
    "FamilyParams",
    "FamilyScan",
    "FieldDesc",
    "FieldElem",
    "FundamentalUnit",
    "HypothesisError",
    "InvariantError",
    "MinData",
    "NRDecomp",
    "NotPositiveDefiniteError",
    "PerfectForm",
    "PeriodError",
    "PrimitivePair",
    "QuadFieldError",
    "ReductionCapError",
    "RejectedCandidate",
    "SearchExhaustedError",
    "SupportLine",
    "UnimodularMap",
    "WalkError",
    "WalkResult",
    "brute_force_min",
    "candidate_params",
    "certified_box",
    "cf_sqrt",
    "classes_equal",
    "classify",
    "classify_T",
    "classify_unit_congruence",
    "construct_a1_a2",
    "construct_a3",
    "fundamental_unit",
    "gauss_reduce",
    "generate_family",
    "initial_perfect",
    "is_perfect",
    "is_squarefree",
    "min_data",
    "neighbor_step",
    "nr_decompose",
    "predicted_a3_minimum",
    "predicted_minimal_set",
    "primitive_normalize",
    "slope",
    "support_line",
    "trace_form",
    "unit_brute_oracle",
    "unit_square",
    "vertex_at",
    "walk_classes",
]
