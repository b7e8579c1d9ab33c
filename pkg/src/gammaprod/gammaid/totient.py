"""Gamma products over reduced residues, coset products and power sums."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import gmpy2
from gmpy2 import mpfr

from ..errors import GammaProdError, PreconditionError
from ..mpcore import (bernoulli_number, digits_to_bits, euler_gamma_const, loggamma_real, pi, to_mpfr, workprec,
                      zeta_int)
from ..ratprod import RationalFunctionSpec, evaluate
from ..reports import CheckReport

__all__ = [
    "CoprimeSet", "prime_factors", "prime_power_base", "totient_gamma_product", "nijenhuis_coset",
    "coset_to_rational_product", "coset_product_report", "psi_power_sum", "psi_brute", "zetasumphi_check",
    "zetasumphi_independence",
]


def prime_factors(n: int) -> list[int]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def prime_power_base(n: int) -> int | None:
    """``p`` if ``n = p^m`` with ``m >= 1``, else None."""
    ps = prime_factors(n)
    return ps[0] if len(ps) == 1 else None


@dataclass(frozen=True)
class CoprimeSet:
    """``Phi(n)``: the residues in ``[1, n)`` coprime to ``n``."""

    n: int
    members: tuple

    @classmethod
    def of(cls, n: int) -> "CoprimeSet":
        if n < 2:
            raise PreconditionError("n must be >= 2")
        return cls(n, tuple(k for k in range(1, n) if math.gcd(k, n) == 1))

    @property
    def phi(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __contains__(self, k):
        return k in self.members


def _log_gamma_sum(args, prec: int):
    with workprec(prec):
        s = mpfr(0)
        for a in args:
            s += loggamma_real(a, prec)
    return s


def totient_gamma_product(n: int, digits: int = 30):
    """Closed form of ``prod_{k in Phi(n)} Gamma(k/n)`` and a numeric check.

    The value is ``(2 pi)^(phi(n)/2)``, divided by ``sqrt(p)`` when ``n = p^m``.
    The report compares it with the direct product and, for ``n >= 3``, with
    the reflection pairing ``prod^2 = prod pi / sin(pi k / n)``.
    """
    cs = CoprimeSet.of(n)
    prec = digits_to_bits(digits) + 24
    p = prime_power_base(n)
    with workprec(prec):
        closed = (2 * pi(prec)) ** (mpfr(cs.phi) / 2)
        if p is not None:
            closed /= gmpy2.sqrt(mpfr(p))
        lg = _log_gamma_sum([Fraction(k, n) for k in cs], prec)
        direct = gmpy2.exp(lg)
    rep = CheckReport(f"totient_gamma_product(n={n})")
    rep.values.update(closed_form=closed, product=direct, phi=cs.phi, prime_power=p)
    tol = 10.0 ** (-digits + 2)
    with workprec(prec):
        rep.add_close("product", direct, closed, tol)
        if n >= 3:
            ref = mpfr(0)
            for k in cs:
                ref += gmpy2.log(pi(prec) / gmpy2.sin(pi(prec) * k / n))
            rep.add_close("reflection_pairing", 2 * lg, ref, tol, relative=False)
    return closed, rep


def _subgroup(g: int, mod: int) -> list[int]:
    out, x = [], 1
    while True:
        out.append(x)
        x = x * g % mod
        if x == 1:
            return out


def nijenhuis_coset(n: int, coset_rep: int = 1, digits: int = 30):
    """The coset ``A = rep * <n + 2>`` in ``Phi(2n)`` and its gamma identities.

    Returns ``(A, b, report)`` where ``b`` counts elements of ``A`` above ``n``.
    The report checks ``prod Gamma(k/2n) = 2^b pi^(|A|/2)`` and
    ``prod Gamma(k/2n) / Gamma(1 - k/2n) = 2^(2b - |A|)``.
    """
    if n < 3 or n % 2 == 0:
        raise PreconditionError("n must be an odd integer > 1")
    m = 2 * n
    if math.gcd(coset_rep, m) != 1:
        raise PreconditionError(f"coset representative {coset_rep} is not coprime to {m}")
    A = frozenset(coset_rep * h % m for h in _subgroup(n + 2, m))
    b = sum(1 for k in A if k > n)
    prec = digits_to_bits(digits) + 24
    tol = 10.0 ** (-digits + 2)
    rep = CheckReport(f"nijenhuis_coset(n={n}, rep={coset_rep})")
    with workprec(prec):
        lhs = gmpy2.exp(_log_gamma_sum([Fraction(k, m) for k in A], prec))
        rhs = mpfr(2) ** b * pi(prec) ** (mpfr(len(A)) / 2)
        rep.add_close("gamma_product", lhs, rhs, tol)
        ratio = gmpy2.exp(_log_gamma_sum([Fraction(k, m) for k in A], prec)
                          - _log_gamma_sum([1 - Fraction(k, m) for k in A], prec))
        rep.add_close("ratio", ratio, mpfr(2) ** (2 * b - len(A)), tol)
    rep.values.update(A=sorted(A), b=b, product=lhs, closed_form=rhs, ratio=ratio)
    return A, b, rep


def _check_coset(A, n2: int) -> int:
    if n2 % 2 or n2 < 6 or (n2 // 2) % 2 == 0:
        raise PreconditionError("modulus must be 2n with n odd > 1")
    n = n2 // 2
    A = frozenset(A)
    if not A or any(math.gcd(a, n2) != 1 or not 0 < a < n2 for a in A):
        raise PreconditionError("coset elements must be residues coprime to the modulus")
    rep = min(A)
    if frozenset(rep * h % n2 for h in _subgroup(n + 2, n2)) != A:
        raise PreconditionError(f"{sorted(A)} is not a coset of <{n + 2}> mod {n2}")
    return n


def coset_to_rational_product(A, n2: int):
    """``prod_{k >= 0} prod_{a in A} (k + 1 - a/n2) / (k + a/n2)`` and its value.

    Returns ``(spec, expected)`` with ``expected = 2^(2 b(A) - |A|)``.
    """
    n = _check_coset(A, n2)
    A = sorted(A)
    num_roots = [Fraction(a, n2) - 1 for a in A]
    den_roots = [-Fraction(a, n2) for a in A]
    spec = RationalFunctionSpec.from_roots(num_roots, den_roots, 0)
    b = sum(1 for a in A if a > n)
    return spec, Fraction(2) ** (2 * b - len(A))


def coset_product_report(A, n2: int, digits: int = 30) -> CheckReport:
    """Evaluate the coset rational product through the engine against its value."""
    spec, expected = coset_to_rational_product(A, n2)
    r = evaluate(spec, digits)
    rep = CheckReport(f"coset_product(A={sorted(A)}, mod={n2})")
    rep.add_close("engine_value", r.real, to_mpfr(expected, 64 + digits_to_bits(digits)), 10.0 ** (-digits))
    rep.values.update(expected=expected, value=r.real, closed_form=r.closed_form)
    return rep


def psi_brute(k: int, n: int) -> int:
    return sum(x ** k for x in range(1, n) if math.gcd(x, n) == 1)


def psi_power_sum(k: int, n: int, verify: bool = True) -> Fraction:
    """``Psi_k(n) = sum_{x in Phi(n)} x^k`` from its Bernoulli-number closed form.

    With ``verify`` the result is compared with direct summation for ``n <= 10^4``.
    """
    if k < 0:
        raise PreconditionError("k must be nonnegative")
    if n < 2:
        raise PreconditionError("n must be >= 2")
    ps = prime_factors(n)
    total = Fraction(0)
    for m in range(k // 2 + 1):
        f = Fraction(1)
        for p in ps:
            f *= 1 - Fraction(p) ** (2 * m - 1)
        total += math.comb(k + 1, 2 * m) * bernoulli_number(2 * m) / Fraction(n) ** (2 * m) * f
    value = Fraction(n) ** (k + 1) / (k + 1) * total
    if verify and n <= 10 ** 4 and value != psi_brute(k, n):
        raise GammaProdError(f"power-sum closed form disagrees with direct sum at k={k}, n={n}")
    return value


@lru_cache(maxsize=64)
def _zetasumphi_partial(n: int, K: int, prec: int):
    phi = CoprimeSet.of(n).phi
    with workprec(prec):
        s = mpfr(0)
        for k in range(2, K + 1):
            w = psi_power_sum(k, n, verify=False) / (phi * Fraction(n) ** k)
            s += zeta_int(k, prec) / k * to_mpfr(w, prec)
        r = mpfr(n - 1) / n
        tail = zeta_int(K + 1, prec) / (K + 1) * r ** (K + 1) / (1 - r)
    return s, tail


def zetasumphi_check(n: int, K: int = 200, digits: int = 30) -> CheckReport:
    """``sum_{k=2}^K zeta(k)/k * Psi_k(n) / (phi(n) n^k)`` against ``(log 2 pi - gamma)/2``.

    The neglected tail is bounded by ``zeta(K+1)/(K+1) * r^(K+1) / (1 - r)``
    with ``r = (n-1)/n``, since every ``x/n`` in the sum is at most ``r``.
    """
    if n < 2 or prime_power_base(n) is not None:
        raise PreconditionError(f"n={n} must have at least two distinct prime factors")
    if K < 2:
        raise PreconditionError("K must be >= 2")
    prec = digits_to_bits(digits) + 24
    s, tail = _zetasumphi_partial(n, K, prec)
    with workprec(prec):
        target = (gmpy2.log(2 * pi(prec)) - euler_gamma_const(prec)) / 2
        gap = target - s
    rep = CheckReport(f"zetasumphi(n={n}, K={K})")
    # all terms are positive, so the partial sum lies below the limit
    rep.add("within_tail_bound", -(10.0 ** -digits) <= gap <= tail, float(gap), float(tail))
    rep.values.update(partial_sum=s, target=target, tail_bound=tail)
    return rep


def zetasumphi_independence(ns, K: int = 200, digits: int = 30) -> CheckReport:
    """Partial sums for different ``n`` agree within their combined tail bounds."""
    reps = [zetasumphi_check(n, K, digits) for n in ns]
    out = CheckReport(f"zetasumphi_independence(n={list(ns)}, K={K})")
    for r in reps:
        out.merge(r, r.name)
    for i in range(len(reps)):
        for j in range(i + 1, len(reps)):
            a, b = reps[i].values, reps[j].values
            d = abs(a["partial_sum"] - b["partial_sum"])
            tol = a["tail_bound"] + b["tail_bound"]
            out.add(f"n={ns[i]}~n={ns[j]}", d <= tol, float(d), float(tol))
    return out
