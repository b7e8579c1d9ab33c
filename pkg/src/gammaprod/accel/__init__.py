from .products import (KB_PUBLISHED, TABLE1_COLUMNS, TABLE1_N, TABLE1_PUBLISHED, AccelResult, FactorSpec,
                       accelerate_product, digits_table, kb_reference, kepler_bouwkamp, parse_scale)
from .series import (TABLE2_N, TABLE2_PUBLISHED, SeriesTerm, accelerate_sum, exp_pade_poly, zeta_approx,
                     zeta_direct_bounds, zeta_limit, zeta_reference, zeta_table)

__all__ = [
    "AccelResult", "FactorSpec", "SeriesTerm", "accelerate_product", "accelerate_sum", "digits_table",
    "exp_pade_poly", "kb_reference", "kepler_bouwkamp", "parse_scale", "zeta_approx", "zeta_direct_bounds",
    "zeta_limit", "zeta_reference", "zeta_table",
    "KB_PUBLISHED", "TABLE1_COLUMNS", "TABLE1_N", "TABLE1_PUBLISHED", "TABLE2_N", "TABLE2_PUBLISHED",
]
