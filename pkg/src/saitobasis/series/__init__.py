"""Exact truncated power series, parsing and division."""

from .core import (
    INF,
    BiSeries,
    TSeries,
    exact_divide,
    format_bivariate,
    format_univariate,
    pullback,
    rational_root,
    weierstrass_divide,
    y_general_shear,
)
from .kernels import BACKEND
from .parse import parse_biseries, parse_expr, parse_tseries, to_polynomial

__all__ = [
    "BACKEND",
    "INF",
    "BiSeries",
    "TSeries",
    "exact_divide",
    "format_bivariate",
    "format_univariate",
    "parse_biseries",
    "parse_expr",
    "parse_tseries",
    "pullback",
    "rational_root",
    "to_polynomial",
    "weierstrass_divide",
    "y_general_shear",
]
