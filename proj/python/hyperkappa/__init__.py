"""Period matrices, theta constants and the kappa matrix of hyperelliptic curves."""

from ._hyperkappa import (
    Curve,
    NumericError,
    ValidationError,
    __version__,
    antidiagonal_sum_coefficient,
    baker_numerator,
    first_row_coefficient,
    first_row_sum,
    kappa,
    kappa_single,
    lambda_table,
    nonsingular_even_count,
    periods,
    polar,
    theta,
)

__all__ = [
    "Curve",
    "NumericError",
    "ValidationError",
    "__version__",
    "antidiagonal_sum_coefficient",
    "baker_numerator",
    "first_row_coefficient",
    "first_row_sum",
    "kappa",
    "kappa_single",
    "lambda_table",
    "nonsingular_even_count",
    "periods",
    "polar",
    "theta",
]
