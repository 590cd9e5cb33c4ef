"""Exact scalar fields, dense linear algebra, polynomials, structured functions."""

from .matrix import (
    Matrix,
    char_poly,
    eval_poly_at_matrix,
    from_columns,
    mat_kernel,
    solve_linear,
    sym_signature,
)
from .multipoly import MultiPoly, poly_diff, poly_ring, split_linear
from .scalars import (
    SQRT10,
    QuadraticNumber,
    Rational,
    fraction_str,
    is_zero,
    rat,
    scalar_json,
)
from .structured import (
    XY1,
    StructuredFunction,
    divide_by_xy1,
    sf_coordinates,
    sf_diff,
    xy_const,
    xy_poly,
)

__all__ = [
    "Matrix",
    "MultiPoly",
    "QuadraticNumber",
    "Rational",
    "SQRT10",
    "StructuredFunction",
    "XY1",
    "char_poly",
    "divide_by_xy1",
    "eval_poly_at_matrix",
    "fraction_str",
    "from_columns",
    "is_zero",
    "mat_kernel",
    "poly_diff",
    "poly_ring",
    "rat",
    "scalar_json",
    "sf_coordinates",
    "sf_diff",
    "solve_linear",
    "split_linear",
    "sym_signature",
    "xy_const",
    "xy_poly",
]
