"""Diagonal Pade approximants from Maclaurin coefficients."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpc, mpfr

from ..errors import DegenerateTable, PreconditionError
from .numbers import is_exact, maybe_workprec, simplify_exact, to_mpc, workprec
from .poly import Polynomial
from .roots import Root, factor_roots

__all__ = ["PadeApproximant", "pade_from_series", "series_of_quotient", "cos_series", "exp_series"]


@dataclass(frozen=True)
class PadeApproximant:
    order: int
    numerator: Polynomial
    denominator: Polynomial
    roots: tuple[Root, ...] = field(default=(), compare=False)
    poles: tuple[Root, ...] = field(default=(), compare=False)

    def __call__(self, x, prec: int | None = None):
        num = self.numerator(x, prec)
        den = self.denominator(x, prec)
        if prec is None and is_exact(num) and is_exact(den):
            return simplify_exact(num / den)
        with workprec(prec or self.numerator.prec or 128):
            return num / den


def cos_series(count: int) -> list[Fraction]:
    """Maclaurin coefficients of cos(x): 1, 0, -1/2, 0, 1/24, ..."""
    out = []
    fact = 1
    for k in range(count):
        if k:
            fact *= k
        out.append(Fraction(0) if k % 2 else Fraction((-1) ** (k // 2), fact))
    return out


def exp_series(count: int) -> list[Fraction]:
    out = []
    fact = 1
    for k in range(count):
        if k:
            fact *= k
        out.append(Fraction(1, fact))
    return out


def series_of_quotient(num: Polynomial, den: Polynomial, count: int, prec: int | None = None) -> list:
    """First ``count`` Maclaurin coefficients of ``num / den``."""
    d0 = den.coeff(0)
    out = []
    with maybe_workprec(prec):
        for i in range(count):
            acc = num.coeff(i)
            for j in range(1, min(i, den.degree) + 1):
                acc = acc - den.coeff(j) * out[i - j]
            out.append(acc / d0)
    return out


def _solve_exact(mat: list[list], rhs: list):
    n = len(rhs)
    a = [row[:] + [rhs[i]] for i, row in enumerate(mat)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col] != 0), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        pv = a[col][col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col] / pv
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


def _solve_float(mat: list[list], rhs: list, prec: int):
    n = len(rhs)
    with workprec(prec):
        a = [[mpc(x) for x in row] + [mpc(rhs[i])] for i, row in enumerate(mat)]
        scale = max((abs(x) for row in mat for x in row), default=mpfr(0))
        tiny = scale * mpfr(2) ** (-(prec // 2))
        for col in range(n):
            piv = max(range(col, n), key=lambda r: abs(a[r][col]))
            if abs(a[piv][col]) <= tiny:
                return None
            a[col], a[piv] = a[piv], a[col]
            pv = a[col][col]
            for r in range(col + 1, n):
                f = a[r][col] / pv
                if f != 0:
                    a[r] = [x - f * y for x, y in zip(a[r], a[col])]
        sol = [mpc(0)] * n
        for i in range(n - 1, -1, -1):
            acc = a[i][n]
            for j in range(i + 1, n):
                acc -= a[i][j] * sol[j]
            sol[i] = acc / a[i][i]
        return sol


def pade_from_series(coeffs: Sequence, n: int, prec: int, locate: bool = True) -> PadeApproximant:
    """The [n, n] Pade approximant of a power series.

    ``coeffs`` are Maclaurin coefficients c_0, c_1, ... (at least 2n+1 of
    them). With exact rational coefficients the Toeplitz system is solved
    exactly; otherwise it is solved at twice ``prec`` bits. The denominator is
    normalised so that its constant term is 1.
    """
    if n < 1:
        raise PreconditionError("Pade order must be positive")
    if len(coeffs) < 2 * n + 1:
        raise PreconditionError(f"need {2 * n + 1} Maclaurin coefficients, got {len(coeffs)}")
    exact = all(is_exact(c) for c in coeffs[: 2 * n + 1])
    if exact:
        c = [simplify_exact(x) for x in coeffs[: 2 * n + 1]]
    else:
        c = [to_mpc(x, 2 * prec) for x in coeffs[: 2 * n + 1]]
    if c[0] == 0:
        raise PreconditionError("series constant term must be nonzero")

    # Solve for a denominator of degree m <= n: sum_{j=1..m} q_j c_{n+i-j} = -c_{n+i}.
    # m = n is the generic case; a smaller m covers singular blocks such as a
    # polynomial series, and is accepted only if it still matches through 2n.
    num = den = None
    for m in range(n, -1, -1):
        found = _try_order(c, n, m, exact, prec)
        if found is not None:
            num, den = found
            break
        if m == n and not _lower_may_help(c, n):
            break
    if num is None:
        raise DegenerateTable(n, n - 1 if n > 1 else None)
    if not exact:
        num, den = num.to_float(prec), den.to_float(prec)
    roots = factor_roots(num, prec) if locate and num.degree >= 1 else ()
    poles = factor_roots(den, prec) if locate and den.degree >= 1 else ()
    return PadeApproximant(n, num, den, roots, poles)


def _lower_may_help(c: list, n: int) -> bool:
    # a reduced denominator can only work if the top coefficients vanish
    return any(x == 0 for x in c[n + 1: 2 * n + 1])


def _try_order(c: list, n: int, m: int, exact: bool, prec: int):
    def cc(i):
        return c[i] if i >= 0 else 0

    wp = None if exact else 2 * prec
    if m:
        mat = [[cc(n + i - j) for j in range(1, m + 1)] for i in range(1, m + 1)]
        with maybe_workprec(wp):
            rhs = [-cc(n + i) for i in range(1, m + 1)]
        sol = _solve_exact(mat, rhs) if exact else _solve_float(mat, rhs, wp)
        if sol is None:
            return None
    else:
        sol = []
    q = [Fraction(1) if exact else to_mpc(1, wp)] + list(sol)
    with maybe_workprec(wp):
        p = []
        for i in range(n + 1):
            acc = 0
            for j in range(0, min(i, m) + 1):
                acc = acc + q[j] * c[i - j]
            p.append(acc)
    num = Polynomial(p) if exact else Polynomial(p, wp)
    den = Polynomial(q) if exact else Polynomial(q, wp)
    return (num, den) if _matches(num, den, c, n, wp) else None


def _matches(num: Polynomial, den: Polynomial, c: list, n: int, prec: int | None) -> bool:
    back = series_of_quotient(num, den, 2 * n + 1, prec)
    if prec is None:
        return back == c
    with workprec(prec):
        scale = max(abs(x) for x in c)
        tol = scale * mpfr(2) ** (-(prec // 2))
        return all(abs(b - x) <= tol for b, x in zip(back, c))
