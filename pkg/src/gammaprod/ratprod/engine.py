"""Closed-form evaluation of convergent rational products.

A convergent product of ``a(k) = c * prod (k - r_i) / prod (k - s_j)`` over
``k >= s`` equals ``prod Gamma(s - s_j) / prod Gamma(s - r_i)``. The start
index and any excluded indices are turned into an exact finite head, so the
gamma quotient always describes a product over ``k >= 0`` of the shifted
function.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpc, mpfr

from ..errors import DivergentProduct, PrecisionError, ZeroFactor
from ..mpcore import bits_to_digits, digits_to_bits, format_big, is_exact, rel_digits, to_mpc, workprec
from ..mpcore.numbers import simplify_exact
from ..reports import Check
from .quotient import GammaQuotient
from .spec import RationalFunctionSpec, check_convergence, index_roots

__all__ = ["EvaluationReport", "to_gamma_quotient", "evaluate", "evaluate_quotient", "evaluate_partial"]


@dataclass
class EvaluationReport:
    value: object
    closed_form: GammaQuotient
    digits_requested: int
    digits_certified: int
    head_count: int = 0
    exclusions: tuple = ()
    timing: float = 0.0
    checks: list[Check] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def real(self):
        return self.value.real if isinstance(self.value, type(mpc(0))) else self.value

    def value_string(self, digits: int | None = None) -> str:
        return format_big(self.value, digits or self.digits_requested)

    def to_dict(self, digits: int | None = None) -> dict:
        d = digits or self.digits_requested
        v = to_mpc(self.value, 64 + digits_to_bits(d))
        return {
            "value": {"re": format_big(v.real, d), "im": format_big(v.imag, d), "digits": self.digits_certified},
            "closed_form": self.closed_form.to_dict(max(d, 20)) if self.closed_form else None,
            "digits_requested": self.digits_requested,
            "head_count": self.head_count,
            "exclusions": list(self.exclusions),
            "checks": [c.to_dict() for c in self.checks],
        }


@dataclass(frozen=True)
class _Fold:
    quotient: GammaQuotient
    start: int
    head_count: int


def _shift(s: int, r, prec: int):
    if is_exact(r):
        return simplify_exact(s - r)
    with workprec(prec):
        return s - r


def _fold(spec: RationalFunctionSpec, prec: int) -> _Fold:
    verdict = check_convergence(spec)
    if not verdict:
        raise DivergentProduct(verdict.detail)
    hits = index_roots(spec)
    excl = spec.excluded
    start = max(excl) + 1 if any(m in excl for m in hits) else spec.start_index
    exact_head = spec.exact
    head = Fraction(1) if exact_head else to_mpc(1, prec)
    count = 0
    with workprec(prec):
        for k in range(spec.start_index, start):
            if k in excl:
                continue
            head = head * spec.factor(k, None if exact_head else prec)
            count += 1
        for m in sorted(excl):
            if m >= start:
                head = head / spec.factor(m, None if exact_head else prec)
    if head == 0:
        raise ZeroFactor(spec.start_index, "zero")
    num_r, den_r = spec.roots(prec)
    num_args = [_shift(start, r, prec) for r in den_r]
    den_args = [_shift(start, r, prec) for r in num_r]
    q = GammaQuotient.build(num_args, den_args, head if exact_head else to_mpc(head, prec))
    return _Fold(q, start, count)


def to_gamma_quotient(spec: RationalFunctionSpec, prec: int) -> GammaQuotient:
    """Closed form of a convergent product; roots are located at ``prec`` bits.

    Raises :class:`DivergentProduct` or :class:`ZeroFactor` when the product
    has no finite nonzero value.
    """
    return _fold(spec, prec).quotient


def _certify(compute, digits: int, retries: int = 3):
    """Run ``compute(prec)`` at two precisions until they agree to ``digits``."""
    prec = digits_to_bits(digits) + 16
    for _ in range(retries + 1):
        lo = compute(prec)
        hi = compute(prec + 32)
        agree = rel_digits(lo[0], hi[0])
        cert = int(math.floor(min(agree, bits_to_digits(prec))))
        if cert >= digits:
            return hi, cert
        prec += 64
    raise PrecisionError(f"could only certify {cert} of {digits} digits")


def evaluate(spec: RationalFunctionSpec, digits: int) -> EvaluationReport:
    """Value of the product with ``digits`` certified decimal digits."""
    t0 = time.perf_counter()

    def compute(prec):
        f = _fold(spec, prec)
        return f.quotient.value(prec), f

    (value, fold), cert = _certify(compute, digits)
    return EvaluationReport(value, fold.quotient, digits, cert, fold.head_count,
                            tuple(sorted(spec.excluded)), time.perf_counter() - t0)


def evaluate_quotient(build, digits: int) -> EvaluationReport:
    """Certified value of a quotient produced by ``build(prec)``."""
    t0 = time.perf_counter()

    def compute(prec):
        q = build(prec)
        return q.value(prec), q

    (value, q), cert = _certify(compute, digits)
    return EvaluationReport(value, q, digits, cert, timing=time.perf_counter() - t0)


def evaluate_partial(spec: RationalFunctionSpec, M: int, prec: int):
    """Brute-force ``prod_{k=k0}^{M} a(k)`` skipping excluded indices."""
    num, den = spec.numerator, spec.denominator
    real = num.is_real() and den.is_real()
    wp = prec + 16 + int(math.log2(M + 2))
    with workprec(wp):
        if real:
            nc = [to_mpc(c, wp).real for c in num.coeffs]
            dc = [to_mpc(c, wp).real for c in den.coeffs]
            one = mpfr(1)
        else:
            nc = [to_mpc(c, wp) for c in num.coeffs]
            dc = [to_mpc(c, wp) for c in den.coeffs]
            one = mpc(1)
        top = one
        bot = one
        nrev = nc[::-1]
        drev = dc[::-1]
        for k in range(spec.start_index, M + 1):
            if k in spec.excluded:
                continue
            p = nrev[0]
            for c in nrev[1:]:
                p = p * k + c
            q = drev[0]
            for c in drev[1:]:
                q = q * k + c
            if p == 0 or q == 0:
                raise ZeroFactor(k, "zero" if p == 0 else "pole")
            top *= p
            bot *= q
        val = top / bot
    with workprec(prec):
        return mpc(val)
