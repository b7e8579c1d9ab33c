"""Numeric substrate: precision contexts, special functions, polynomials, roots, Pade."""

from .numbers import (
    BigComplex,
    BigReal,
    GaussianRational,
    abs_digits,
    bits_to_digits,
    digits_to_bits,
    format_big,
    format_exact,
    is_exact,
    maybe_workprec,
    parse_number,
    pi,
    rel_digits,
    to_mpc,
    to_mpfr,
    workprec,
)
from .pade import PadeApproximant, cos_series, exp_series, pade_from_series, series_of_quotient
from .poly import Polynomial
from .roots import Root, factor_roots, poly_roots
from .special import (
    bernoulli_number,
    complex_gamma,
    complex_loggamma,
    euler_gamma_const,
    gamma_real,
    loggamma_real,
    zeta_int,
)

__all__ = [
    "BigComplex", "BigReal", "GaussianRational", "abs_digits", "bits_to_digits",
    "digits_to_bits", "format_big", "format_exact", "is_exact", "maybe_workprec",
    "parse_number", "pi", "rel_digits", "to_mpc", "to_mpfr", "workprec",
    "PadeApproximant", "cos_series", "exp_series", "pade_from_series", "series_of_quotient",
    "Polynomial", "Root", "factor_roots", "poly_roots",
    "bernoulli_number", "complex_gamma", "complex_loggamma", "euler_gamma_const",
    "gamma_real", "loggamma_real", "zeta_int",
]
