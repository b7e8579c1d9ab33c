"""Thue-Morse sign products.

``p(j) = (-1)^(number of ones in binary j)``. The finite identities are
checked in exact rational arithmetic; only the limits ``f(x)``, ``P`` and ``Q``
are numeric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import gmpy2
from gmpy2 import mpfr

from ..errors import PoleOrZero, PreconditionError
from ..mpcore import digits_to_bits, is_exact, to_mpc, to_mpfr, workprec
from ..mpcore.numbers import simplify_exact
from ..ratprod import RationalFunctionSpec, evaluate
from ..reports import CheckReport

__all__ = [
    "tm_sign", "tm_signs", "prouhet_check", "block_product_rhs", "factorial_route", "block_product_spec",
    "TMProductReport", "block_product_lhs_gamma", "fm_eval", "duplication_check", "extension_check",
    "limit_f", "q_estimate",
]


def tm_sign(j: int) -> int:
    """``p(j) = (-1)^(popcount j)``."""
    if j < 0:
        raise PreconditionError("j must be nonnegative")
    return -1 if bin(j).count("1") % 2 else 1


@lru_cache(maxsize=8)
def _sign_bits(m: int) -> bytes:
    # bit b_j = 1 when p(j) = -1; doubling uses p(j + 2^i) = -p(j) for j < 2^i
    s = bytearray([0])
    while len(s) < 2 ** m:
        s += bytes(1 - b for b in s)
    return bytes(s)


def tm_signs(m: int) -> list[int]:
    """``[p(0), ..., p(2^m - 1)]``."""
    return [-1 if b else 1 for b in _sign_bits(m)]


def prouhet_check(m: int) -> CheckReport:
    """Power sums over ``S_1`` and ``S_-1`` within ``[0, 2^m)`` agree for ``n < m``.

    ``values["first_failure"]`` is the first ``n`` (searched up to ``m``) where
    they differ; it is ``m`` for every ``m`` tested.
    """
    if m < 1:
        raise PreconditionError("m must be >= 1")
    signs = tm_signs(m)
    rep = CheckReport(f"prouhet(m={m})")
    first = None
    for n in range(m + 1):
        diff = sum(p * j ** n for j, p in enumerate(signs))
        if n < m:
            rep.add(f"n={n}", diff == 0, abs(diff))
        if diff != 0 and first is None:
            first = n
    rep.add("fails_at_m", first == m, 0 if first == m else 1)
    rep.values["first_failure"] = first
    return rep


def block_product_rhs(m: int) -> Fraction:
    """``prod_{j < 2^(m-1)} (2j + 1)^p(j)``."""
    if m < 2:
        raise PreconditionError("m must be >= 2")
    num, den = 1, 1
    for j, p in enumerate(tm_signs(m - 1)):
        if p > 0:
            num *= 2 * j + 1
        else:
            den *= 2 * j + 1
    return Fraction(num, den)


def factorial_route(m: int) -> Fraction:
    """``prod_{j < 2^m} (j!)^(-p(j))``, expanded as ``prod_i i^(-sum_{j >= i} p(j))``."""
    if m < 2:
        raise PreconditionError("m must be >= 2")
    signs = tm_signs(m)
    num, den = 1, 1
    suffix = 0
    for i in range(len(signs) - 1, 0, -1):
        suffix += signs[i]
        e = -suffix
        if e > 0:
            num *= i ** e
        elif e < 0:
            den *= i ** (-e)
    return Fraction(num, den)


def block_product_spec(m: int, x=Fraction(1), start_index: int = 0) -> RationalFunctionSpec:
    """``prod_{k >= start} prod_{j < 2^m} (x + k + j)^p(j)`` as a ratprod spec."""
    if m < 2:
        raise PreconditionError("m must be >= 2 for convergence")
    num, den = [], []
    for j, p in enumerate(tm_signs(m)):
        (num if p > 0 else den).append(simplify_exact(-(x + j)))
    return RationalFunctionSpec.from_roots(num, den, start_index)


@dataclass
class TMProductReport:
    m: int
    exact_value: Fraction
    numeric_value: object
    routes: dict = field(default_factory=dict)
    report: CheckReport = None

    @property
    def passed(self) -> bool:
        return self.report.passed


def block_product_lhs_gamma(m: int, digits: int = 30, gamma_route: bool = True) -> TMProductReport:
    """``prod_{k >= 1} prod_{j < 2^m} (k + j)^p(j)`` by three routes.

    The gamma route goes through the ratprod engine; the factorial and
    odd-number routes are exact and must agree exactly.
    """
    rhs = block_product_rhs(m)
    fac = factorial_route(m)
    rep = CheckReport(f"tm_block_product(m={m})")
    rep.add("factorial_equals_rhs", fac == rhs)
    routes = {"factorial": fac, "direct": rhs}
    numeric = None
    if gamma_route:
        r = evaluate(block_product_spec(m, Fraction(0), 1), digits)
        numeric = r.real
        routes["gamma"] = numeric
        rep.add_close("gamma_equals_rhs", numeric, to_mpfr(rhs, r.real.precision), 10.0 ** (-digits + 2))
    return TMProductReport(m, rhs, numeric, routes, rep)


def fm_eval(m: int, x, prec: int | None = None):
    """``f_m(x) = prod_{j < 2^m} (x + j)^p(j)``; exact for exact ``x``."""
    if m < 0:
        raise PreconditionError("m must be >= 0")
    signs = tm_signs(m)
    if is_exact(x):
        x = simplify_exact(x)
        if not isinstance(x, Fraction):
            return _fm_gaussian(signs, x)
        a, b = x.numerator, x.denominator
        num = den = 1
        nnum = nden = 0
        for j, p in enumerate(signs):
            t = a + j * b
            if t == 0:
                raise PoleOrZero(j, "zero" if p > 0 else "pole")
            if p > 0:
                num *= t
                nnum += 1
            else:
                den *= t
                nden += 1
        # each factor is t / b
        return Fraction(num * b ** nden, den * b ** nnum)
    prec = prec or 128
    with workprec(prec + 16):
        v = to_mpc(x, prec + 16)
        acc = to_mpc(1, prec + 16)
        for j, p in enumerate(signs):
            t = v + j
            if t == 0:
                raise PoleOrZero(j, "zero" if p > 0 else "pole")
            acc = acc * t if p > 0 else acc / t
    with workprec(prec):
        return +acc


def _fm_gaussian(signs, x):
    num = den = Fraction(1)
    for j, p in enumerate(signs):
        t = x + j
        if t == 0:
            raise PoleOrZero(j, "zero" if p > 0 else "pole")
        if p > 0:
            num = num * t
        else:
            den = den * t
    return simplify_exact(num / den)


def duplication_check(m: int, x) -> bool:
    """Exact test of ``f_{m+1}(2x) f_m(x + 1/2) = f_m(x)``."""
    x = simplify_exact(x)
    return fm_eval(m + 1, 2 * x) * fm_eval(m, x + Fraction(1, 2)) == fm_eval(m, x)


def extension_check(m: int, x, digits: int = 30) -> CheckReport:
    """``prod_{k >= 0} prod_{j < 2^m} (x + k + j)^p(j) = prod_{j < 2^(m-1)} (x + 2j)^p(j)``.

    The right side also equals ``f_{m-1}(x / 2)`` since the signs below
    ``2^(m-1)`` balance. The left side is evaluated through the engine.
    """
    x = simplify_exact(x)
    exact = Fraction(1)
    for j, p in enumerate(tm_signs(m - 1)):
        exact *= (x + 2 * j) ** p
    rep = CheckReport(f"tm_extension(m={m}, x={x})")
    rep.add("halved_argument_form", exact == fm_eval(m - 1, x / 2))
    r = evaluate(block_product_spec(m, x, 0), digits)
    rep.add_close("engine", r.real, to_mpfr(exact, r.real.precision), 10.0 ** (-digits + 2))
    rep.values.update(exact=exact, engine=r.real)
    return rep


def _block_partials(terms, m_max: int, wp: int):
    """Partial products of ``prod_j term(j)^p(j)`` at ``j = 2^m``, ``m <= m_max``.

    ``terms(j)`` returns a (numerator, denominator) pair of integers or reals.
    """
    bits = _sign_bits(m_max)
    out = {}
    with workprec(wp):
        top = mpfr(1)
        bot = mpfr(1)
        nxt = 1
        for j in range(2 ** m_max):
            a, b = terms(j)
            if bits[j]:
                top *= b
                bot *= a
            else:
                top *= a
                bot *= b
            if j + 1 == nxt:
                out[j.bit_length() if j else 0] = top / bot
                nxt *= 2
    return out


def _limit_from_partials(parts: dict, m_max: int, wp: int):
    est = parts[m_max]
    with workprec(wp):
        delta = abs(parts[m_max] - parts[m_max - 1])
        # rounding: two products of 2^(m_max - 1) factors each
        rounding = abs(est) * mpfr(2) ** (m_max + 2 - wp)
        return est, 2 * delta + rounding


def _rounded(est, unc, wp: int, prec: int):
    with workprec(prec):
        out = +est
    with workprec(wp):
        unc = unc + abs(est - out)
    with workprec(prec):
        return out, +unc


def _limit_f_wp(x, m_max: int, wp: int):
    if is_exact(x):
        x = simplify_exact(x)
        if not isinstance(x, Fraction):
            raise PreconditionError("x must be real")
    if x <= 0:
        if is_exact(x) and x.denominator == 1:
            j = -int(x)
            raise PoleOrZero(j, "zero" if tm_sign(j) > 0 else "pole")
        raise PreconditionError("x must be positive")
    if is_exact(x):
        a, b = x.numerator, x.denominator

        # x + j = (a + j b) / b; the powers of b cancel at every cutoff 2^m, m >= 1
        def terms(j):
            return a + j * b, 1
    else:
        xv = to_mpfr(x, wp)

        def terms(j):
            return xv + j, 1
    return _limit_from_partials(_block_partials(terms, m_max, wp), m_max, wp)


def limit_f(x, m_max: int = 22, prec: int = 64):
    """Estimate ``f(x) = lim f_m(x)`` from the cutoffs ``j < 2^m``.

    The estimate is ``f_{m_max}(x)``, which is the product
    ``prod_{j < 2^(m_max - 1)} ((2j + x) / (2j + x + 1))^p(j)``. The uncertainty
    is twice the change between the last two cutoffs plus rounding bounds;
    this is a heuristic, since no convergence rate is proved.
    """
    if m_max < 2:
        raise PreconditionError("m_max must be >= 2")
    wp = prec + m_max + 16
    est, unc = _limit_f_wp(x, m_max, wp)
    return _rounded(est, unc, wp, prec)


def q_estimate(m_max: int = 22, prec: int = 64) -> CheckReport:
    """Estimates of ``P`` and ``Q = prod_{j >= 1} (2j / (2j + 1))^p(j)``.

    No closed form is asserted for ``Q``. The report checks ``P^2 = 1/2`` and
    the relation ``P Q = Q / (2 P)`` within the propagated uncertainties.
    """
    if m_max < 4:
        raise PreconditionError("m_max must be >= 4")
    wp = prec + m_max + 16
    P, uP = _limit_f_wp(Fraction(1), m_max + 1, wp)

    def qterms(j):
        return (2 * j, 2 * j + 1) if j else (1, 1)
    qparts = _block_partials(qterms, m_max, wp)
    Q, uQ = _limit_from_partials(qparts, m_max, wp)
    rep = CheckReport(f"thue_morse_PQ(m_max={m_max})")
    with workprec(wp):
        eps = mpfr(2) ** (8 - wp)
        p2 = P * P
        u2 = 2 * abs(P) * uP + uP * uP + eps
        rep.add("P_squared_half", abs(p2 - mpfr(1) / 2) <= u2, float(abs(p2 - mpfr(1) / 2)), float(u2))
        lhs = P * Q
        rhs = Q / (2 * P)
        ul = abs(P) * uQ + abs(Q) * uP
        ur = uQ / (2 * abs(P)) + abs(Q) * uP / (2 * P * P)
        tol = ul + ur + eps * abs(Q)
        rep.add("PQ_relation", abs(lhs - rhs) <= tol, float(abs(lhs - rhs)), float(tol))
        deltas = [float(abs(qparts[m] - qparts[m - 1])) for m in range(2, m_max + 1)]
    P, uP = _rounded(P, uP, wp, prec)
    Q, uQ = _rounded(Q, uQ, wp, prec)
    rep.values.update(P=P, P_uncertainty=uP, Q=Q, Q_uncertainty=uQ, Q_deltas=deltas)
    return rep
