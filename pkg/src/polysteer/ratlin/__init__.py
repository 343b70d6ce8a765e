"""Exact rational linear algebra and linear programming."""

from .qarith import (
    Vector,
    Matrix,
    as_vector,
    as_matrix,
    parse_rational,
    format_rational,
    vec_add,
    vec_sub,
    vec_scale,
    vec_dot,
    vec_zero,
    is_zero_vector,
    mat_vec,
    mat_mul,
    mat_transpose,
    mat_identity,
    primitive,
)
from .gauss import solve_linear, rank, nullspace, invert
from .simplex import (
    LinearProgram,
    LPOutcome,
    lp_feasible,
    lp_optimize,
)

__all__ = [
    "Vector",
    "Matrix",
    "as_vector",
    "as_matrix",
    "parse_rational",
    "format_rational",
    "vec_add",
    "vec_sub",
    "vec_scale",
    "vec_dot",
    "vec_zero",
    "is_zero_vector",
    "mat_vec",
    "mat_mul",
    "mat_transpose",
    "mat_identity",
    "primitive",
    "solve_linear",
    "rank",
    "nullspace",
    "invert",
    "LinearProgram",
    "LPOutcome",
    "lp_feasible",
    "lp_optimize",
]
