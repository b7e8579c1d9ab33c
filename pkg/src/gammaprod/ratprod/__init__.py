"""Convergence test and gamma-quotient evaluation of rational infinite products."""

from .engine import EvaluationReport, evaluate, evaluate_partial, evaluate_quotient, to_gamma_quotient
from .quotient import GammaQuotient
from .spec import (
    ConvergenceVerdict,
    RationalFunctionSpec,
    check_convergence,
    spec_from_dict,
    spec_from_json,
    spec_to_dict,
    spec_to_json,
)

__all__ = [
    "EvaluationReport", "evaluate", "evaluate_partial", "evaluate_quotient", "to_gamma_quotient",
    "GammaQuotient", "ConvergenceVerdict", "RationalFunctionSpec", "check_convergence",
    "spec_from_dict", "spec_from_json", "spec_to_dict", "spec_to_json",
]
