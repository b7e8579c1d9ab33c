"""Series acceleration through ``sum a(k) = log prod exp(a(k))``.

``exp`` is replaced by its [n, n] Pade approximant ``f_n(x) / f_n(-x)`` for
``k >= N``; the tail product is then rational in ``k``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Iterable, Sequence

import gmpy2
from gmpy2 import mpc, mpfr

from ..errors import PreconditionError, SummabilityError, ZeroFactor
from ..mpcore import Polynomial, abs_digits, factor_roots, is_exact, poly_roots, to_mpc, to_mpfr, workprec
from ..mpcore.numbers import simplify_exact
from ..ratprod import RationalFunctionSpec, to_gamma_quotient
from ..ratprod.engine import _certify
from .products import AccelResult

__all__ = ["SeriesTerm", "exp_pade_poly", "accelerate_sum", "zeta_approx", "zeta_limit", "zeta_reference",
           "zeta_table", "zeta_direct_bounds", "TABLE2_N", "TABLE2_PUBLISHED"]

TABLE2_N = (2, 3, 4, 5, 6, 7, 8, 9, 10)
TABLE2_PUBLISHED = (2.83, 4.99, 7.39, 9.99, 12.8, 15.6, 18.7, 21.8, 25.0)


def exp_pade_poly(n: int) -> Polynomial:
    """``f_n(x) = sum_j (2n-j)! n! / ((2n)! j! (n-j)!) x^j``, exact."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    return Polynomial([Fraction(factorial(2 * n - j) * factorial(n),
                                factorial(2 * n) * factorial(j) * factorial(n - j)) for j in range(n + 1)])


@dataclass(frozen=True)
class SeriesTerm:
    """Rational summand ``a(k) = numerator(k) / denominator(k)`` for ``k >= start_index``."""

    numerator: Polynomial
    denominator: Polynomial
    start_index: int = 1
    excluded: frozenset = frozenset()

    def __post_init__(self):
        if self.denominator.is_zero():
            raise PreconditionError("denominator is identically zero")
        object.__setattr__(self, "excluded", frozenset(int(m) for m in self.excluded))

    @classmethod
    def from_coefficients(cls, num: Iterable, den: Iterable, start_index: int = 1,
                          excluded: Iterable[int] = ()) -> "SeriesTerm":
        return cls(Polynomial.from_strings([str(c) for c in num]),
                   Polynomial.from_strings([str(c) for c in den]), start_index, frozenset(excluded))

    @classmethod
    def power(cls, m: int, c=1, start_index: int = 1) -> "SeriesTerm":
        """``c / k^m``."""
        return cls(Polynomial([Fraction(c)]), Polynomial([0] * m + [1]), start_index)

    @classmethod
    def coerce(cls, term) -> "SeriesTerm":
        if isinstance(term, SeriesTerm):
            return term
        if isinstance(term, RationalFunctionSpec):
            return cls(term.numerator, term.denominator, term.start_index, term.excluded)
        raise PreconditionError(f"cannot use {type(term).__name__} as a series term")

    def __call__(self, k, prec: int | None = None):
        d = self.denominator(k, prec)
        if d == 0:
            raise ZeroFactor(k, "pole")
        n = self.numerator(k, prec)
        if is_exact(n) and is_exact(d):
            return simplify_exact(n / d)
        with workprec(prec or 128):
            return n / d

    @property
    def monomial(self) -> bool:
        """True for ``alpha / (beta k^m)``."""
        den = self.denominator
        return self.numerator.degree == 0 and all(den.coeff(i) == 0 for i in range(den.degree))


def _check_summable(t: SeriesTerm) -> None:
    gap = t.denominator.degree - t.numerator.degree
    if gap < 2:
        raise SummabilityError(f"degree gap {gap} < 2: the series does not converge absolutely")


def _pole_indices(t: SeriesTerm, N: int) -> list[int]:
    if t.denominator.degree < 1:
        return []
    out = []
    for r in factor_roots(t.denominator, 64):
        if r.exact is not None and r.exact.denominator == 1 and r.exact >= N:
            out.append(int(r.exact))
        elif r.exact is None:
            z = complex(r.value)
            m = round(z.real)
            if m >= N and abs(z - m) < 1e-12 * max(1, m) and t.denominator(m, 256) == 0:
                out.append(m)
    return sorted(out)


def _level_roots(t: SeriesTerm, x, prec: int) -> list:
    """Zeros of ``A(k) - x B(k)`` in ``k``."""
    A, B = t.numerator, t.denominator
    if t.monomial:
        m = B.degree
        with workprec(prec):
            u = to_mpc(A.coeff(0), prec) / (to_mpc(x, prec) * to_mpc(B.leading, prec))
            if m == 1:
                return [u]
            base = u ** (mpfr(1) / m)
            tau = 2 * gmpy2.const_pi(prec)
            return [base * gmpy2.exp(mpc(0, tau * j / m)) for j in range(m)]
    with workprec(prec):
        xs = to_mpc(x, prec)
        coeffs = [to_mpc(A.coeff(i), prec) - xs * to_mpc(B.coeff(i), prec) for i in range(B.degree + 1)]
    return poly_roots(Polynomial(coeffs, prec), prec)


@lru_cache(maxsize=64)
def _fn_roots(n: int, prec: int):
    return poly_roots(exp_pade_poly(n), prec)


def sum_tail_spec(t: SeriesTerm, n: int, N: int, prec: int) -> RationalFunctionSpec:
    """``prod_{k >= N} f_n(a(k)) / f_n(-a(k))`` cleared by ``B(k)^n``."""
    num, den = [], []
    for x in _fn_roots(n, prec):
        num.extend(_level_roots(t, x, prec))
        with workprec(prec):
            mx = -x
        den.extend(_level_roots(t, mx, prec))
    return RationalFunctionSpec.from_roots(num, den, start_index=N, prec=prec)


def _head_sum(t: SeriesTerm, N: int, prec: int):
    acc = Fraction(0)
    with workprec(prec):
        for k in range(t.start_index, N):
            if k in t.excluded:
                continue
            acc = acc + t(k, prec if not (t.numerator.exact and t.denominator.exact) else None)
    return acc


def accelerate_sum(term, n: int, N: int, digits: int = 30) -> AccelResult:
    """``sum_{k0 <= k < N} a(k) + log prod_{k >= N} f_n(a(k)) / f_n(-a(k))``."""
    t = SeriesTerm.coerce(term)
    if n < 1:
        raise PreconditionError("Pade order n must be >= 1")
    if N < t.start_index:
        raise PreconditionError(f"N={N} must be >= start index {t.start_index}")
    t0 = time.perf_counter()
    if t.numerator.is_zero():
        return AccelResult(mpfr(0), n, N - t.start_index, None, math.inf, digits, timing=0.0)
    _check_summable(t)
    if any(m >= N for m in t.excluded):
        raise PreconditionError("excluded indices must lie in the head (below N)")
    poles = _pole_indices(t, N)
    if poles:
        raise ZeroFactor(poles[0], "pole")
    real = t.numerator.is_real() and t.denominator.is_real()

    def compute(prec):
        q = to_gamma_quotient(sum_tail_spec(t, n, N, prec), prec)
        head = _head_sum(t, N, prec)
        wp = prec + q.guard_bits()
        with workprec(wp):
            s = q.log_gamma_part(prec) + gmpy2.log(to_mpc(q.prefactor, wp)) + to_mpc(head, wp)
        with workprec(prec):
            v = mpfr(s.real) if real else mpc(s)
        return v, (q, head)

    (value, (q, head)), cert = _certify(compute, digits)
    return AccelResult(value, n, N - t.start_index, q, None, cert, head, None, time.perf_counter() - t0)


def zeta_approx(m: int, n: int, digits: int = 30, N: int = 1):
    """``zeta_n(m) = log prod_{k >= 1} f_n(k^-m) / f_n(-k^-m)`` (head below ``N``)."""
    if m < 2:
        raise PreconditionError("m must be >= 2")
    return accelerate_sum(SeriesTerm.power(m), n, N, digits).value


def zeta_limit(n: int, prec: int = 128):
    """``lim_{m -> oo} zeta_n(m) = log(f_n(1) / f_n(-1))``: the exact ratio and its log."""
    f = exp_pade_poly(n)
    ratio = f(Fraction(1)) / f(Fraction(-1))
    with workprec(prec):
        return ratio, gmpy2.log(to_mpfr(ratio, prec))


def zeta_direct_bounds(m: int, K: int = 10000, prec: int = 64):
    """Enclosure of ``zeta(m)`` from ``K - 1`` terms and integral tail bounds."""
    with workprec(prec):
        s = mpfr(0)
        for k in range(K - 1, 0, -1):
            s += mpfr(1) / mpfr(k) ** m
        lo = s + mpfr(1) / ((m - 1) * mpfr(K) ** (m - 1))
        hi = s + mpfr(1) / ((m - 1) * mpfr(K - 1) ** (m - 1))
    return lo, hi


@lru_cache(maxsize=8)
def zeta_reference(m: int, digits: int = 80, n: int = 40, check_n: int = 50, N: int = 10):
    """``zeta(m)`` from this module at order ``n``, cross-checked at ``check_n``.

    Returns ``(value, agreement_digits)``.
    """
    a = accelerate_sum(SeriesTerm.power(m), n, N, digits).value
    b = accelerate_sum(SeriesTerm.power(m), check_n, N, digits).value
    lo, hi = zeta_direct_bounds(m, 2000)
    if not lo <= a <= hi:
        raise PreconditionError("reference value falls outside the direct-summation enclosure")
    return a, abs_digits(a, b)


def zeta_table(n_list: Sequence[int] = TABLE2_N, m: int = 3, digits: int = 60, reference=None) -> list[float]:
    """Digits of agreement of ``zeta_n(m)`` with ``zeta(m)`` for each ``n``."""
    ref = reference if reference is not None else zeta_reference(m)[0]
    return [abs_digits(zeta_approx(m, n, digits), ref) for n in n_list]
