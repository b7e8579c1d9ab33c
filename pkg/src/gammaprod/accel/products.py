"""Pade tail folding for slowly convergent products.

A factor ``f(x(k))`` with ``x(k) = c / k^d`` is kept exactly for
``k0 <= k < N``. Beyond that it is replaced by the [n, n] Pade approximant
``P/Q`` of ``f``; after clearing ``k^(n d)`` the tail is a rational product
in ``k`` and goes through the ratprod engine. The zeros of the cleared
numerator are the ``d``-th roots of ``c / x_r`` for the roots ``x_r`` of
``P`` (plus ``k = 0`` for any degree deficit), so no high-degree root
finding in ``k`` is needed.
"""

from __future__ import annotations

import math
import re
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import gmpy2
from gmpy2 import mpc, mpfr

from ..errors import PreconditionError, ZeroFactor
from ..mpcore import (abs_digits, cos_series, exp_series, format_big, is_exact, pade_from_series, parse_number, pi,
                      to_mpc, to_mpfr, workprec)
from ..mpcore.numbers import simplify_exact
from ..ratprod import GammaQuotient, RationalFunctionSpec, to_gamma_quotient
from ..ratprod.engine import _certify

__all__ = ["FactorSpec", "AccelResult", "accelerate_product", "kepler_bouwkamp", "kb_reference",
           "digits_table", "parse_scale", "KB_PUBLISHED", "TABLE1_N", "TABLE1_COLUMNS", "TABLE1_PUBLISHED"]

KB_PUBLISHED = "0.1149420448532962"

TABLE1_N = (2, 4, 6, 8, 10, 12, 14, 16)
TABLE1_COLUMNS = (3, 4, 5, 10, 100, 1000)
TABLE1_PUBLISHED = {
    2: (3.19, 4.00, 4.57, 6.22, 11.3, 16.3),
    4: (6.87, 8.22, 9.21, 12.1, 21.3, 30.3),
    6: (11.2, 13.1, 14.5, 18.7, 31.9, 45.0),
    8: (16.1, 18.5, 20.3, 25.7, 43.0, 60.1),
    10: (21.4, 24.3, 26.5, 33.1, 54.5, 75.5),
    12: (27.0, 30.4, 33.0, 40.8, 66.2, 91.3),
    14: (32.9, 36.8, 39.7, 48.8, 78.3, 107.0),
    16: (39.0, 43.4, 46.7, 57.0, 90.5, 124.0),
}

_SCALE_RE = re.compile(r"^\s*(?:(?P<q>[^*]+?)\s*\*\s*)?pi(?:\s*/\s*(?P<d>\d+))?\s*$")


def parse_scale(text) -> tuple[Fraction, int]:
    """Parse ``c`` as ``q * pi^e`` with ``e`` in {0, 1}.

    Accepts ``"pi"``, ``"p/q"``, ``"q*pi"``, ``"pi/m"`` and plain numbers.
    """
    if isinstance(text, (int, Fraction)):
        return Fraction(text), 0
    s = str(text).strip()
    m = _SCALE_RE.match(s)
    if m:
        q = Fraction(1) if m.group("q") is None else _rational(m.group("q"))
        if m.group("d"):
            q /= int(m.group("d"))
        return q, 1
    return _rational(s), 0


def _rational(s: str) -> Fraction:
    v = parse_number(s)
    if not isinstance(v, Fraction):
        raise PreconditionError(f"scale {s!r} must be real rational, optionally times pi")
    return v


@dataclass(frozen=True)
class FactorSpec:
    """The factor ``f(c / k^d)`` for ``k >= start_index``.

    ``source`` is ``"cos"``, ``"exp"`` or ``"series"``; for ``"series"`` the
    factor is the finite power series given by ``series`` (constant term 1).
    ``c`` is ``scale * pi**pi_power``.
    """

    source: str
    scale: Fraction = Fraction(1)
    pi_power: int = 0
    d: int = 1
    start_index: int = 1
    series: tuple = ()

    def __post_init__(self):
        if self.source not in ("cos", "exp", "series"):
            raise PreconditionError(f"unknown factor source {self.source!r}")
        if self.d < 1:
            raise PreconditionError("exponent d must be a positive integer")
        if self.start_index < 1:
            raise PreconditionError("start index must be >= 1")
        if self.scale == 0:
            raise PreconditionError("scale c must be nonzero")
        if self.source == "series":
            if not self.series or simplify_exact(self.series[0]) != 1:
                raise PreconditionError("series factor needs constant term 1")

    @classmethod
    def cos(cls, c="pi", d: int = 1, start_index: int = 3) -> "FactorSpec":
        q, e = parse_scale(c)
        return cls("cos", q, e, d, start_index)

    @classmethod
    def exp(cls, c=1, d: int = 2, start_index: int = 1) -> "FactorSpec":
        q, e = parse_scale(c)
        return cls("exp", q, e, d, start_index)

    @classmethod
    def from_series(cls, coefficients: Sequence, c=1, d: int = 1, start_index: int = 1) -> "FactorSpec":
        coeffs = tuple(parse_number(x) if isinstance(x, str) else Fraction(x) for x in coefficients)
        q, e = parse_scale(c)
        return cls("series", q, e, d, start_index, coeffs)

    @property
    def exact_scale(self) -> bool:
        return self.pi_power == 0

    def c_value(self, prec: int):
        if self.exact_scale:
            return self.scale
        with workprec(prec):
            return to_mpfr(self.scale, prec) * pi(prec)

    def maclaurin(self, count: int) -> list:
        if self.source == "cos":
            return cos_series(count)
        if self.source == "exp":
            return exp_series(count)
        return list(self.series[:count]) + [Fraction(0)] * max(0, count - len(self.series))

    def x(self, k: int, prec: int):
        c = self.c_value(prec)
        if is_exact(c):
            return Fraction(c) / k ** self.d
        with workprec(prec):
            return c / mpfr(k) ** self.d

    def value(self, k: int, prec: int):
        """``f(x(k))``; exact for a series factor with rational ``c``."""
        if self.source == "cos" and self.pi_power == 1:
            # cos(q pi / k^d) vanishes exactly when q / k^d is a half odd integer
            t = self.scale / k ** self.d - Fraction(1, 2)
            if t.denominator == 1:
                return Fraction(0)
        x = self.x(k, prec)
        if self.source == "series" and is_exact(x):
            acc = Fraction(0)
            for a in reversed(self.series):
                acc = acc * x + a
            return acc
        with workprec(prec):
            xv = to_mpfr(x, prec)
            if self.source == "cos":
                return gmpy2.cos(xv)
            if self.source == "exp":
                return gmpy2.exp(xv)
            acc = mpfr(0)
            for a in reversed(self.series):
                acc = acc * xv + to_mpfr(a, prec)
            return acc

    def label(self) -> str:
        c = str(self.scale) if self.pi_power == 0 else (f"{self.scale}*pi" if self.scale != 1 else "pi")
        k = "k" if self.d == 1 else f"k^{self.d}"
        return f"{self.source}({c}/{k})"


@dataclass
class AccelResult:
    value: object
    pade_order: int
    head_count: int
    closed_form: GammaQuotient
    digits_estimate: float | None = None
    digits_certified: int = 0
    head: object = None
    tail: object = None
    timing: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_dict(self, digits: int = 30) -> dict:
        v = to_mpc(self.value, 64 + int(digits * 3.33))
        return {
            "value": {"re": format_big(v.real, digits), "im": format_big(v.imag, digits),
                      "digits": self.digits_certified},
            "pade_order": self.pade_order,
            "head_count": self.head_count,
            "digits_estimate": None if self.digits_estimate is None or math.isinf(self.digits_estimate)
            else self.digits_estimate,
            "closed_form": self.closed_form.to_dict(min(digits, 40)) if self.closed_form else None,
        }


@lru_cache(maxsize=64)
def _pade(maclaurin: tuple, n: int, prec: int):
    return pade_from_series(list(maclaurin), n, prec)


def pade_for(f: FactorSpec, n: int, prec: int):
    return _pade(tuple(f.maclaurin(2 * n + 1)), n, prec)


def _dth_roots(u, d: int, prec: int) -> list:
    if d == 1:
        return [u]
    with workprec(prec):
        base = to_mpc(u, prec) ** (mpfr(1) / d)
        tau = 2 * pi(prec)
        return [base * gmpy2.exp(mpc(0, tau * j / d)) for j in range(d)]


def composed_roots(roots, degree_gap: int, c, d: int, prec: int) -> list:
    """Zeros in ``k`` of ``k^(n d) R(c / k^d)`` given the roots of ``R``."""
    out = []
    for r in roots:
        if r.exact is not None and is_exact(c):
            u = simplify_exact(Fraction(c) / r.exact)
        else:
            with workprec(prec):
                u = to_mpc(c, prec) / r.value
        for _ in range(r.multiplicity):
            out.extend(_dth_roots(u, d, prec))
    out.extend([Fraction(0)] * (degree_gap * d))
    return out


def tail_spec(f: FactorSpec, n: int, N: int, prec: int) -> RationalFunctionSpec:
    """The cleared tail ``prod_{k >= N} r_n(x(k))`` as a ratprod spec."""
    p = pade_for(f, n, prec)
    c = f.c_value(prec)
    num = composed_roots(p.roots, n - p.numerator.degree, c, f.d, prec)
    den = composed_roots(p.poles, n - p.denominator.degree, c, f.d, prec)
    return RationalFunctionSpec.from_roots(num, den, start_index=N, prec=prec)


@lru_cache(maxsize=256)
def _head(f: FactorSpec, N: int, prec: int):
    acc = Fraction(1)
    with workprec(prec):
        for k in range(f.start_index, N):
            v = f.value(k, prec)
            if v == 0:
                raise ZeroFactor(k, "zero")
            acc = acc * v
    return acc


def _evaluate(f: FactorSpec, n: int, N: int, prec: int):
    head = _head(f, N, prec)
    q = to_gamma_quotient(tail_spec(f, n, N, prec), prec)
    tail = q.value(prec)
    with workprec(prec):
        total = to_mpc(head, prec) * tail
    return total, head, tail, q


def _real(z, prec):
    with workprec(prec):
        return mpfr(z.real) if isinstance(z, type(mpc(0))) else z


def accelerate_product(f: FactorSpec, n: int, N: int, digits: int = 30, estimate: bool = True) -> AccelResult:
    """``[prod_{k0 <= k < N} f(k)] * prod_{k >= N} r_n(x(k))`` to ``digits`` digits.

    With ``estimate`` the run is repeated at order ``n + 2`` and the decimal
    agreement of the two values is reported as ``digits_estimate``.
    """
    if n < 1:
        raise PreconditionError("Pade order n must be >= 1")
    if N < f.start_index:
        raise PreconditionError(f"N={N} must be >= start index {f.start_index}")
    t0 = time.perf_counter()

    def compute(prec):
        total, head, tail, q = _evaluate(f, n, N, prec)
        return total, (head, tail, q, prec)

    (value, (head, tail, q, prec)), cert = _certify(compute, digits)
    value = _real(value, prec)
    est = None
    if estimate:
        other = _real(_evaluate(f, n + 2, N, prec)[0], prec)
        est = abs_digits(value, other)
    return AccelResult(value, n, N - f.start_index, q, est, cert, head, tail, time.perf_counter() - t0)


def kepler_bouwkamp(n: int, N: int, digits: int = 30, estimate: bool = True) -> AccelResult:
    """``prod_{k >= 3} cos(pi / k)`` with an order-n Pade tail from ``k = N``."""
    return accelerate_product(FactorSpec.cos("pi", 1, 3), n, N, digits, estimate)


@lru_cache(maxsize=4)
def kb_reference(digits: int = 200, n: int = 20, N: int = 2000) -> AccelResult:
    """High-order run used as the reference for digit counts."""
    return kepler_bouwkamp(n, N, digits, estimate=False)


def digits_table(n_list: Sequence[int], N_list: Sequence[int], reference, digits: int = 200,
                 f: FactorSpec | None = None) -> list[list[float]]:
    """Rows over ``n``, columns over ``N``: ``-log10 |approx - reference|``."""
    f = f or FactorSpec.cos("pi", 1, 3)
    ref = reference.value if isinstance(reference, AccelResult) else reference
    rows = []
    for n in n_list:
        row = []
        for N in N_list:
            r = accelerate_product(f, n, N, digits, estimate=False)
            row.append(abs_digits(r.value, ref))
        rows.append(row)
    return rows
