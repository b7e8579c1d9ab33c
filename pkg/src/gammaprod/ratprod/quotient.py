"""Finite gamma quotients ``prefactor * prod Gamma(b_j) / prod Gamma(a_j)``."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

import gmpy2
from gmpy2 import mpc

from ..errors import PoleError
from ..mpcore import complex_loggamma, format_big, format_exact, is_exact, to_mpc, workprec
from ..mpcore.numbers import simplify_exact

__all__ = ["GammaQuotient"]


def _is_pole(x) -> bool:
    if is_exact(x):
        x = simplify_exact(x)
        return isinstance(x, Fraction) and x.denominator == 1 and x <= 0
    return x.imag == 0 and x.real <= 0 and gmpy2.is_integer(x.real)


def _cancel(num: list, den: list) -> tuple[tuple, tuple]:
    """Drop exact arguments that appear in both multisets."""
    en = Counter(simplify_exact(a) for a in num if is_exact(a))
    ed = Counter(simplify_exact(a) for a in den if is_exact(a))
    common = en & ed
    if not common:
        return tuple(num), tuple(den)
    drop_n = Counter(common)
    drop_d = Counter(common)
    out_n, out_d = [], []
    for a in num:
        key = simplify_exact(a) if is_exact(a) else None
        if key is not None and drop_n[key] > 0:
            drop_n[key] -= 1
            continue
        out_n.append(a)
    for a in den:
        key = simplify_exact(a) if is_exact(a) else None
        if key is not None and drop_d[key] > 0:
            drop_d[key] -= 1
            continue
        out_d.append(a)
    return tuple(out_n), tuple(out_d)


def _lg_size(z) -> float:
    """Rough magnitude of log Gamma(z), used to size guard bits."""
    w = complex(to_mpc(z, 53))
    r = abs(w) + 2
    return r * (abs(math.log(r)) + 1)


def _mul_prefactors(a, b):
    if is_exact(a) and is_exact(b):
        return simplify_exact(a * b)
    prec = max(x.precision[0] for x in (a, b) if not is_exact(x))
    with workprec(prec):
        return to_mpc(a, prec) * to_mpc(b, prec)


@dataclass(frozen=True)
class GammaQuotient:
    """``prefactor * prod Gamma(num_args) / prod Gamma(den_args)``.

    Arguments are exact rationals (``Fraction`` / ``GaussianRational``) when they
    are known exactly and big complex values otherwise. ``prefactor`` is an
    exact rational or a big complex value.
    """

    num_args: tuple = ()
    den_args: tuple = ()
    prefactor: object = Fraction(1)

    def __post_init__(self):
        for a in self.num_args + self.den_args:
            if _is_pole(a):
                raise PoleError(f"gamma argument {a} is a pole")
        if self.prefactor == 0:
            raise ValueError("gamma quotient prefactor must be nonzero")

    @classmethod
    def build(cls, num_args, den_args, prefactor=Fraction(1)) -> "GammaQuotient":
        num = [simplify_exact(a) if is_exact(a) else a for a in num_args]
        den = [simplify_exact(a) if is_exact(a) else a for a in den_args]
        n, d = _cancel(num, den)
        return cls(n, d, simplify_exact(prefactor) if is_exact(prefactor) else prefactor)

    def __mul__(self, other: "GammaQuotient") -> "GammaQuotient":
        if not isinstance(other, GammaQuotient):
            return NotImplemented
        pre = _mul_prefactors(self.prefactor, other.prefactor)
        return GammaQuotient.build(self.num_args + other.num_args, self.den_args + other.den_args, pre)

    def inverse(self) -> "GammaQuotient":
        p = self.prefactor
        if is_exact(p):
            inv = simplify_exact(1 / p)
        else:
            with workprec(p.precision[0]):
                inv = 1 / p
        return GammaQuotient(self.den_args, self.num_args, inv)

    @property
    def exact_arguments(self) -> bool:
        return all(is_exact(a) for a in self.num_args + self.den_args)

    def guard_bits(self) -> int:
        total = sum(_lg_size(a) for a in self.num_args + self.den_args)
        return 16 + int(math.ceil(math.log2(total + 2)))

    def log_gamma_part(self, prec: int):
        """``sum log Gamma(num) - sum log Gamma(den)`` on principal branches."""
        wp = prec + self.guard_bits()
        with workprec(wp):
            s = mpc(0)
            for a in self.num_args:
                s += complex_loggamma(a, wp)
            for a in self.den_args:
                s -= complex_loggamma(a, wp)
        return s

    def value(self, prec: int):
        """Numeric value at ``prec`` bits as a big complex number."""
        wp = prec + self.guard_bits()
        s = self.log_gamma_part(prec)
        with workprec(wp):
            v = gmpy2.exp(s) * to_mpc(self.prefactor, wp)
        with workprec(prec):
            return mpc(v)

    # ------------------------------------------------------------ rendering
    def argument_strings(self, digits: int = 25) -> tuple[list[str], list[str]]:
        def fmt(a):
            return format_exact(a) if is_exact(a) else format_big(a, digits)
        return [fmt(a) for a in self.num_args], [fmt(a) for a in self.den_args]

    def prefactor_string(self, digits: int = 25) -> str:
        p = self.prefactor
        return format_exact(p) if is_exact(p) else format_big(p, digits)

    def to_dict(self, digits: int = 25) -> dict:
        num, den = self.argument_strings(digits)
        return {"prefactor": self.prefactor_string(digits), "num_args": num, "den_args": den}

    def __str__(self):
        num, den = self.argument_strings(20)
        top = "*".join(f"G({a})" for a in num) or "1"
        bot = "*".join(f"G({a})" for a in den) or "1"
        head = "" if self.prefactor == 1 else f"{self.prefactor_string(20)} * "
        return f"{head}{top} / ({bot})"
