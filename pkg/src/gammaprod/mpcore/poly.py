"""Dense univariate polynomials with exact or big-float coefficients."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from gmpy2 import mpc

from .numbers import (
    BigComplex,
    BigReal,
    GaussianRational,
    format_big,
    format_exact,
    maybe_workprec,
    is_exact,
    parse_number,
    simplify_exact,
    to_mpc,
    workprec,
)


class Polynomial:
    """Polynomial with ascending coefficients.

    ``prec is None`` means exact mode (``Fraction`` / ``GaussianRational``
    coefficients); otherwise every coefficient is an ``mpc`` rounded to
    ``prec`` bits. The two modes never mix inside one polynomial: combining an
    exact polynomial with a float one converts the exact operand.
    """

    __slots__ = ("coeffs", "prec")

    def __init__(self, coeffs: Iterable, prec: int | None = None):
        coeffs = list(coeffs)
        if prec is None and not all(is_exact(c) for c in coeffs):
            raise TypeError("exact polynomial needs rational coefficients; pass prec for floats")
        if prec is None:
            coeffs = [simplify_exact(c) for c in coeffs]
        else:
            coeffs = [to_mpc(c, prec) for c in coeffs]
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        self.coeffs = tuple(coeffs)
        self.prec = prec

    # ------------------------------------------------------------ basics
    @property
    def exact(self) -> bool:
        return self.prec is None

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def leading(self):
        return self.coeffs[-1] if self.coeffs else self._zero()

    def coeff(self, i: int):
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else self._zero()

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_real(self) -> bool:
        if self.exact:
            return all(not isinstance(c, GaussianRational) for c in self.coeffs)
        return all(c.imag == 0 for c in self.coeffs)

    def _zero(self):
        return Fraction(0) if self.exact else to_mpc(0, self.prec)

    def __repr__(self):
        mode = "exact" if self.exact else f"prec={self.prec}"
        body = ", ".join(self.coefficient_strings(20))
        return f"Polynomial([{body}], {mode})"

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.prec == other.prec and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.prec, self.coeffs))

    # ------------------------------------------------------------ construction
    @classmethod
    def from_roots(cls, roots: Sequence, leading=1, prec: int | None = None) -> "Polynomial":
        """``leading * prod (x - r)`` over ``roots``."""
        p = cls([leading], prec)
        with maybe_workprec(prec):
            for r in roots:
                p = p * cls([-r if prec is None else -to_mpc(r, prec), 1], prec)
        return p

    @classmethod
    def from_strings(cls, items: Sequence[str], prec: int | None = None) -> "Polynomial":
        coeffs = [parse_number(s) if isinstance(s, str) else s for s in items]
        if prec is None:
            return cls(coeffs)
        return cls([to_mpc(c, prec) for c in coeffs], prec)

    def coefficient_strings(self, digits: int = 30) -> list[str]:
        if self.exact:
            return [format_exact(c) for c in self.coeffs]
        return [format_big(c, digits) for c in self.coeffs]

    def to_float(self, prec: int) -> "Polynomial":
        return Polynomial(self.coeffs, prec)

    # ------------------------------------------------------------ arithmetic
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            return other
        if self.exact and is_exact(other):
            return Polynomial([other])
        return Polynomial([other], self.prec or _prec_of(other))

    def _common(self, other: "Polynomial"):
        if self.exact and other.exact:
            return self, other, None
        prec = max(p for p in (self.prec, other.prec) if p is not None)
        a = self if self.prec == prec else self.to_float(prec)
        b = other if other.prec == prec else other.to_float(prec)
        return a, b, prec

    def __add__(self, other):
        a, b, prec = self._common(self._coerce(other))
        n = max(len(a.coeffs), len(b.coeffs))
        with maybe_workprec(prec):
            return Polynomial([a.coeff(i) + b.coeff(i) for i in range(n)], prec)

    __radd__ = __add__

    def __neg__(self):
        with maybe_workprec(self.prec):
            return Polynomial([-c for c in self.coeffs], self.prec)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        a, b, prec = self._common(self._coerce(other))
        if a.is_zero() or b.is_zero():
            return Polynomial([], prec)
        out = [0] * (len(a.coeffs) + len(b.coeffs) - 1)
        with maybe_workprec(prec):
            for i, x in enumerate(a.coeffs):
                if x == 0:
                    continue
                for j, y in enumerate(b.coeffs):
                    out[i + j] = out[i + j] + x * y
        return Polynomial(out, prec)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative polynomial power")
        out = Polynomial([1], self.prec)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __call__(self, x, prec: int | None = None):
        """Horner evaluation; exact when both the polynomial and ``x`` are exact."""
        if self.exact and is_exact(x) and prec is None:
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * x + c
            return simplify_exact(acc)
        prec = prec or self.prec or _prec_of(x)
        cs = self.coeffs if self.prec == prec else [to_mpc(c, prec) for c in self.coeffs]
        xv = x if isinstance(x, int) else to_mpc(x, prec)
        with workprec(prec):
            acc = mpc(0)
            for c in reversed(cs):
                acc = acc * xv + c
            return acc

    def scale(self, factor) -> "Polynomial":
        return self * factor

    def monic(self) -> "Polynomial":
        lead = self.leading
        with maybe_workprec(self.prec):
            return Polynomial([c / lead for c in self.coeffs], self.prec)

    def derivative(self) -> "Polynomial":
        with maybe_workprec(self.prec):
            return Polynomial([i * c for i, c in enumerate(self.coeffs)][1:], self.prec)

    def taylor_shift(self, s) -> "Polynomial":
        """Return ``q(x) = p(x + s)``."""
        out = Polynomial([], self.prec)
        lin = Polynomial([s, 1], self.prec) if self.exact else Polynomial([to_mpc(s, self.prec), 1], self.prec)
        for c in reversed(self.coeffs):
            out = out * lin + Polynomial([c], self.prec)
        return out

    # ------------------------------------------------------------ exact algebra
    def divmod(self, other: "Polynomial"):
        if not (self.exact and other.exact):
            raise TypeError("polynomial division is only supported in exact mode")
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.leading
        dd = other.degree
        for i in range(len(q) - 1, -1, -1):
            c = rem[i + dd] / lead
            q[i] = c
            if c != 0:
                for j, oc in enumerate(other.coeffs):
                    rem[i + j] = rem[i + j] - c * oc
        return Polynomial(q), Polynomial(rem[:dd] if dd > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def gcd(self, other: "Polynomial") -> "Polynomial":
        """Monic greatest common divisor (exact mode)."""
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def squarefree_decomposition(self) -> list[tuple["Polynomial", int]]:
        """Yun's algorithm: ``[(f_i, i)]`` with ``p = lead * prod f_i**i``."""
        if not self.exact:
            raise TypeError("squarefree decomposition needs exact coefficients")
        if self.degree < 1:
            return []
        p = self.monic()
        dp = p.derivative()
        a = p.gcd(dp)
        b = p // a
        c = dp // a
        out = []
        i = 1
        while b.degree > 0:
            d = c - b.derivative()
            g = b.gcd(d)
            if g.degree > 0:
                out.append((g, i))
            b = b // g
            c = d // g
            i += 1
        return out


def _prec_of(x) -> int:
    if isinstance(x, (BigComplex, BigReal)):
        return x.precision if isinstance(x, BigReal) else x.precision[0]
    raise TypeError("cannot infer precision from an exact scalar")
