"""Exact arithmetic kernel: rationals, polynomials, rational functions and matrices over Q(z)."""

from .linalg import (
    Spectrum,
    canonical_basis,
    char_poly,
    eigenspace,
    in_span,
    normalize_vector,
    rank,
    rational_roots,
    rational_spectrum,
    rref,
    solve_kernel,
)
from .matrix import RatMatrix, as_constant_rows, constant_matrix
from .parse import format_polynomial, format_rational_function, parse_rational, parse_rational_function
from .points import INF, as_point, format_point, is_infinite, parse_point, point_key, sort_points
from .poly import Polynomial
from .ratfunc import RationalFunction, as_ratfunc, laurent_coefficients, order_at, residue_at

__all__ = [
    "INF", "Polynomial", "RatMatrix", "RationalFunction", "Spectrum",
    "as_constant_rows", "as_point", "as_ratfunc", "canonical_basis", "char_poly",
    "constant_matrix", "eigenspace", "format_point", "format_polynomial",
    "format_rational_function", "in_span", "is_infinite", "laurent_coefficients",
    "normalize_vector", "order_at", "parse_point", "parse_rational",
    "parse_rational_function", "point_key", "rank", "rational_roots",
    "rational_spectrum", "residue_at", "rref", "solve_kernel", "sort_points",
]
