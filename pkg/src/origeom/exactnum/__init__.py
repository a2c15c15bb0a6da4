"""Exact arithmetic for constructible reals."""

from .cubic import cubic_root_by_index, real_roots_cubic
from .nodes import (
    Add,
    ClosureClass,
    ConstructibleReal,
    CubicRoot,
    Div,
    Mul,
    Rat,
    Sqrt,
    Sub,
    arith,
    cmp_value,
    degree_bound,
    eq_value,
    from_sexpr,
    is_zero,
    one,
    pyth_hyp,
    rational,
    sign_of,
    sqrt_nonneg,
    to_decimal,
    to_sexpr,
    zero,
)
from .interval import refine
from .tower import canonical_value, real_embedding_signs, totally_positive, zero_status

__all__ = [
    "Add",
    "ClosureClass",
    "ConstructibleReal",
    "CubicRoot",
    "Div",
    "Mul",
    "Rat",
    "Sqrt",
    "Sub",
    "arith",
    "canonical_value",
    "cmp_value",
    "cubic_root_by_index",
    "degree_bound",
    "eq_value",
    "from_sexpr",
    "is_zero",
    "one",
    "pyth_hyp",
    "rational",
    "real_embedding_signs",
    "real_roots_cubic",
    "refine",
    "sign_of",
    "sqrt_nonneg",
    "to_decimal",
    "to_sexpr",
    "totally_positive",
    "zero",
    "zero_status",
]
