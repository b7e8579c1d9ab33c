"""Precision handling, exact scalars and conversions.

Big values are gmpy2 ``mpfr``/``mpc`` objects. Each carries its own precision
in bits; arithmetic is always performed inside :func:`workprec`, which installs
a thread-local gmpy2 context, so no global precision is ever mutated.
"""

from __future__ import annotations

import math
from contextlib import contextmanager, nullcontext
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

import gmpy2
from gmpy2 import mpc, mpfr, mpq

LOG2_10 = math.log2(10)

BigReal = type(mpfr(0))
BigComplex = type(mpc(0))


def digits_to_bits(digits: float) -> int:
    return int(math.ceil(digits * LOG2_10))


def bits_to_digits(bits: int) -> float:
    return bits / LOG2_10


@contextmanager
def workprec(bits: int):
    """Run the enclosed block with a thread-local working precision."""
    if bits < 2:
        raise ValueError("precision must be at least 2 bits")
    with gmpy2.context(precision=int(bits)) as ctx:
        yield ctx


def maybe_workprec(bits: int | None):
    """:func:`workprec` for float work, a no-op for exact (``None``) mode."""
    return nullcontext() if bits is None else workprec(bits)


@dataclass(frozen=True)
class GaussianRational:
    """Exact complex number ``re + im*i`` with rational parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @staticmethod
    def _coerce(other):
        if isinstance(other, GaussianRational):
            return other
        if isinstance(other, (int, Fraction)):
            return GaussianRational(Fraction(other))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return GaussianRational(self.re * o.re - self.im * o.im,
                                self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero")
        return GaussianRational((self.re * o.re + self.im * o.im) / n,
                                (self.im * o.re - self.re * o.im) / n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return 1 / (self ** -k)
        out = GaussianRational(Fraction(1))
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def conjugate(self):
        return GaussianRational(self.re, -self.im)

    def __str__(self):
        return format_exact(self)


Exact = (int, Fraction, GaussianRational)


def is_exact(x) -> bool:
    return isinstance(x, Exact) and not isinstance(x, bool)


def simplify_exact(x):
    """Fold a Gaussian rational with zero imaginary part back to a Fraction."""
    if isinstance(x, GaussianRational):
        return x.re if x.im == 0 else x
    if isinstance(x, int):
        return Fraction(x)
    return x


def to_mpfr(x, prec: int) -> BigReal:
    """Round a real scalar to ``prec`` bits."""
    with workprec(prec):
        if isinstance(x, Fraction):
            return mpfr(mpq(x.numerator, x.denominator))
        if isinstance(x, GaussianRational):
            if x.im != 0:
                raise ValueError("complex value where a real one is required")
            return to_mpfr(x.re, prec)
        if isinstance(x, BigComplex):
            return mpfr(x.real)
        if isinstance(x, str):
            return to_mpfr(parse_number(x), prec)
        return mpfr(x)


def to_mpc(x, prec: int) -> BigComplex:
    """Round any supported scalar to a complex value of ``prec`` bits."""
    with workprec(prec):
        if isinstance(x, BigComplex):
            return mpc(x)
        if isinstance(x, GaussianRational):
            return mpc(to_mpfr(x.re, prec), to_mpfr(x.im, prec))
        if isinstance(x, (Fraction, int, BigReal, float)):
            return mpc(to_mpfr(x, prec))
        if isinstance(x, complex):
            return mpc(x)
        if isinstance(x, str):
            return to_mpc(parse_number(x), prec)
        if isinstance(x, Rational):
            return to_mpc(Fraction(x), prec)
    raise TypeError(f"cannot convert {type(x).__name__} to a big complex")


def pi(prec: int) -> BigReal:
    with workprec(prec):
        return gmpy2.const_pi()


def _imag_coefficient(text: str) -> Fraction:
    text = text.rstrip("*")
    if text in ("", "+"):
        return Fraction(1)
    if text == "-":
        return Fraction(-1)
    return Fraction(text)


def parse_number(text: str):
    """Parse ``"p/q"`` or ``"a+bi"`` (rational ``a``, ``b``) exactly.

    Returns a :class:`~fractions.Fraction` for real input and a
    :class:`GaussianRational` when an imaginary part is present.
    """
    s = text.strip().replace(" ", "").replace("j", "i")
    if not s:
        raise ValueError("empty number")
    try:
        if not s.endswith("i"):
            return Fraction(s)
        body = s[:-1]
        split = None
        for pos in range(len(body) - 1, 0, -1):
            if body[pos] in "+-" and body[pos - 1] not in "eE":
                split = pos
                break
        if split is None:
            real, imag = Fraction(0), _imag_coefficient(body)
        else:
            real, imag = Fraction(body[:split]), _imag_coefficient(body[split:])
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse number {text!r}") from exc
    return simplify_exact(GaussianRational(real, imag))


def format_exact(x) -> str:
    x = simplify_exact(x)
    if isinstance(x, Fraction):
        return str(x)
    re_s = "" if x.re == 0 else str(x.re)
    sign = "-" if x.im < 0 else ("+" if re_s else "")
    mag = abs(x.im)
    im_s = "" if mag == 1 else str(mag)
    return f"{re_s}{sign}{im_s}i"


def format_big(x, digits: int) -> str:
    """Decimal rendering of a big real or complex value with ``digits`` significant digits."""
    digits = max(int(digits), 1)
    if isinstance(x, BigComplex):
        re_s = format_big(x.real, digits)
        if x.imag == 0:
            return re_s
        im_s = format_big(abs(x.imag), digits)
        return f"{re_s}{'-' if x.imag < 0 else '+'}{im_s}i"
    return f"{x:.{digits}g}" if x == 0 else _fmt_real(x, digits)


def _fmt_real(x: BigReal, digits: int) -> str:
    # gmpy2 format: 'g' with explicit precision gives shortest correct digits
    return format(x, f".{digits}g")


def abs_digits(a, b) -> float:
    """Decimal digits of agreement, ``-log10 |a - b|``."""
    d = abs(a - b)
    if d == 0:
        return math.inf
    return -float(gmpy2.log10(mpfr(d)))


def rel_digits(a, b) -> float:
    """Relative decimal agreement, ``-log10(|a - b| / |b|)``."""
    d = abs(a - b)
    if d == 0:
        return math.inf
    scale = abs(b)
    if scale == 0:
        return -float(gmpy2.log10(mpfr(d)))
    return -float(gmpy2.log10(mpfr(d) / mpfr(scale)))


def is_real_value(x) -> bool:
    return not isinstance(x, BigComplex) or x.imag == 0
