from .chowla import (EtaValue, QuadraticForm, chowla_selberg_check, class_number, dedekind_eta, is_fundamental,
                     kronecker_symbol, reduced_forms, roots_of_unity_count)
from .totient import (CoprimeSet, coset_product_report, coset_to_rational_product, nijenhuis_coset, prime_factors,
                      prime_power_base, psi_brute, psi_power_sum, totient_gamma_product, zetasumphi_check,
                      zetasumphi_independence)

__all__ = [
    "CoprimeSet", "EtaValue", "QuadraticForm", "chowla_selberg_check", "class_number", "coset_product_report",
    "coset_to_rational_product", "dedekind_eta", "is_fundamental", "kronecker_symbol", "nijenhuis_coset",
    "prime_factors", "prime_power_base", "psi_brute", "psi_power_sum", "reduced_forms", "roots_of_unity_count",
    "totient_gamma_product", "zetasumphi_check", "zetasumphi_independence",
]
