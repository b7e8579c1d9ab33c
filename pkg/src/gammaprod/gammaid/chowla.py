"""Kronecker symbol, reduced quadratic forms, Dedekind eta and Chowla-Selberg."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpc, mpfr

from ..errors import NotFundamental, PreconditionError
from ..mpcore import digits_to_bits, loggamma_real, pi, to_mpc, workprec
from ..reports import CheckReport

__all__ = ["kronecker_symbol", "is_fundamental", "QuadraticForm", "reduced_forms", "class_number",
           "EtaValue", "dedekind_eta", "roots_of_unity_count", "chowla_selberg_check"]


def _jacobi(a: int, n: int) -> int:
    # n odd positive
    a %= n
    result = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def kronecker_symbol(D: int, m: int) -> int:
    """The Kronecker symbol ``(D | m)``."""
    if m == 0:
        return 1 if abs(D) == 1 else 0
    result = 1
    if m < 0:
        m = -m
        if D < 0:
            result = -1
    while m % 2 == 0:
        m //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    if m == 1:
        return result
    return result * _jacobi(D, m)


def _squarefree(n: int) -> bool:
    n = abs(n)
    p = 2
    while p * p <= n:
        if n % (p * p) == 0:
            return False
        p += 1
    return n != 0


def is_fundamental(D: int) -> bool:
    """Standard test: ``D = 1 mod 4`` squarefree, or ``D = 4 m`` with ``m = 2, 3 mod 4`` squarefree."""
    if D in (0, 1):
        return False
    if D % 4 == 1:
        return _squarefree(D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and _squarefree(m)
    return False


@dataclass(frozen=True, order=True)
class QuadraticForm:
    """``a x^2 + b x y + c y^2`` with negative discriminant."""

    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        return not ((abs(b) == a or a == c) and b < 0)

    @property
    def is_primitive(self) -> bool:
        return math.gcd(math.gcd(self.a, self.b), self.c) == 1

    def root(self, prec: int):
        """The root ``z = (-b + i sqrt(d)) / (2a)`` of ``Q(z, 1)`` in the upper half-plane."""
        d = -self.discriminant
        with workprec(prec):
            return mpc(mpfr(-self.b) / (2 * self.a), gmpy2.sqrt(mpfr(d)) / (2 * self.a))

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y


def reduced_forms(d: int) -> list[QuadraticForm]:
    """Primitive reduced forms of discriminant ``-d``; raises NotFundamental."""
    if d <= 0 or not is_fundamental(-d):
        raise NotFundamental(f"-{d} is not a fundamental discriminant")
    out = []
    a = 1
    while 3 * a * a <= d:
        for b in range(-a + 1, a + 1):
            if (b * b + d) % (4 * a):
                continue
            c = (b * b + d) // (4 * a)
            q = QuadraticForm(a, b, c)
            if q.is_reduced and q.is_primitive:
                out.append(q)
        a += 1
    return sorted(out)


def class_number(d: int) -> int:
    return len(reduced_forms(d))


@dataclass(frozen=True)
class EtaValue:
    tau: object
    value: object
    terms: int
    tail_bound: float


def dedekind_eta(tau, prec: int) -> EtaValue:
    """``eta(tau) = e^(pi i tau / 12) prod_{k >= 1} (1 - q^k)``, ``q = e^(2 pi i tau)``.

    The product stops once ``|q|^k < 2^(-prec-8)``; ``tail_bound`` bounds the
    relative effect of the omitted factors.
    """
    wp = prec + 16
    t = to_mpc(tau, wp)
    if t.imag <= 0:
        raise PreconditionError("eta needs Im(tau) > 0")
    with workprec(wp):
        ipi = mpc(0, pi(wp))
        q = gmpy2.exp(2 * ipi * t)
        aq = abs(q)
        eps = mpfr(2) ** (-prec - 8)
        prod = mpc(1)
        qk = mpc(1)
        k = 0
        while True:
            k += 1
            qk *= q
            prod *= 1 - qk
            if abs(qk) < eps:
                break
        # |prod_{j>k} (1 - q^j) - 1| <= exp(s) - 1 with s = sum_{j>k} |q|^j
        s = aq ** (k + 1) / (1 - aq)
        bound = float(gmpy2.expm1(s))
        value = gmpy2.exp(ipi * t / 12) * prod
    with workprec(prec):
        return EtaValue(tau, mpc(value), k, bound)


def roots_of_unity_count(d: int) -> int:
    return 6 if d == 3 else 4 if d == 4 else 2


def chowla_selberg_check(d: int, digits: int = 30) -> CheckReport:
    """Compare ``prod_{m=1}^{d} Gamma(m/d)^((-d|m))`` with
    ``[prod_j 4 pi sqrt(d) y_j |eta(z_j)|^4]^(2/w)`` over the reduced forms.

    Both sides are compared as logarithms; the reported delta is the relative
    difference of the values.
    """
    forms = reduced_forms(d)
    if d > 200:
        raise PreconditionError("d must be <= 200")
    prec = digits_to_bits(digits) + 32
    w = roots_of_unity_count(d)
    with workprec(prec):
        lhs = mpfr(0)
        for m in range(1, d + 1):
            chi = kronecker_symbol(-d, m)
            if chi:
                lhs += chi * loggamma_real(Fraction(m, d), prec)
        rhs = mpfr(0)
        tail = 0.0
        sd = gmpy2.sqrt(mpfr(d))
        for q in forms:
            z = q.root(prec)
            eta = dedekind_eta(z, prec)
            tail += eta.tail_bound
            rhs += gmpy2.log(4 * pi(prec) * sd * z.imag * abs(eta.value) ** 4)
        rhs = rhs * 2 / w
        diff = abs(gmpy2.expm1(lhs - rhs))
    rep = CheckReport(f"chowla_selberg(d={d})")
    tol = 10.0 ** (-digits + 4)
    rep.add("relative_difference", diff <= tol, float(diff), tol)
    with workprec(prec):
        rep.values.update(lhs=gmpy2.exp(lhs), rhs=gmpy2.exp(rhs), h=len(forms), w=w,
                          forms=[(q.a, q.b, q.c) for q in forms], eta_tail=tail)
    return rep
