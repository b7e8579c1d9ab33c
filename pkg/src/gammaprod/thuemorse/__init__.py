from .core import (TMProductReport, block_product_lhs_gamma, block_product_rhs, block_product_spec,
                   duplication_check, extension_check, factorial_route, fm_eval, limit_f, prouhet_check,
                   q_estimate, tm_sign, tm_signs)

__all__ = [
    "TMProductReport", "block_product_lhs_gamma", "block_product_rhs", "block_product_spec", "duplication_check",
    "extension_check", "factorial_route", "fm_eval", "limit_f", "prouhet_check", "q_estimate", "tm_sign",
    "tm_signs",
]
