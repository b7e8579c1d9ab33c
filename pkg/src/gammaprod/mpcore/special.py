"""Gamma, log-gamma, Bernoulli numbers, Euler's constant and integer zeta values.

Log-gamma uses the Stirling series with Bernoulli coefficients after shifting
the argument upward by the recurrence until the truncation error is below the
requested precision. Gamma applies the reflection formula when ``Re z < 1/2``.
"""

from __future__ import annotations

import cmath
import math
import threading
from fractions import Fraction
from functools import lru_cache

import gmpy2
from gmpy2 import mpc, mpfr, mpq

from ..errors import NonConvergence, PoleError
from .numbers import BigComplex, BigReal, to_mpc, workprec

__all__ = [
    "bernoulli_number",
    "complex_loggamma",
    "complex_gamma",
    "loggamma_real",
    "gamma_real",
    "euler_gamma_const",
    "zeta_int",
]

# ---------------------------------------------------------------- Bernoulli

_bern_lock = threading.Lock()
_bern_even: list[Fraction] = [Fraction(1)]  # B_0, B_2, B_4, ...


def _tangent_numbers(n: int) -> list[int]:
    """Tangent numbers T_1..T_n (index 0 unused), integer-only recurrence."""
    t = [0] * (n + 1)
    t[1] = 1
    for k in range(2, n + 1):
        t[k] = (k - 1) * t[k - 1]
    for k in range(2, n + 1):
        for j in range(k, n + 1):
            t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
    return t


def _ensure_bernoulli(half_index: int) -> None:
    if half_index < len(_bern_even):
        return
    with _bern_lock:
        have = len(_bern_even) - 1
        if half_index <= have:
            return
        target = max(half_index, 2 * have, 16)
        t = _tangent_numbers(target)
        fresh = [Fraction(1)]
        for k in range(1, target + 1):
            sign = 1 if k % 2 else -1
            four_k = 1 << (2 * k)
            fresh.append(Fraction(sign * 2 * k * t[k], four_k * (four_k - 1)))
        _bern_even[:] = fresh


def bernoulli_number(k: int) -> Fraction:
    """Exact Bernoulli number ``B_k`` with the convention ``B_1 = -1/2``."""
    if k < 0:
        raise ValueError("Bernoulli index must be nonnegative")
    if k == 1:
        return Fraction(-1, 2)
    if k % 2:
        return Fraction(0)
    _ensure_bernoulli(k // 2)
    return _bern_even[k // 2]


@lru_cache(maxsize=64)
def _stirling_coefficients(count: int, prec: int) -> tuple:
    """B_{2k} / (2k (2k-1)) for k = 1..count, rounded to ``prec`` bits."""
    _ensure_bernoulli(count)
    with workprec(prec):
        out = []
        for k in range(1, count + 1):
            c = _bern_even[k] / (2 * k * (2 * k - 1))
            out.append(mpfr(mpq(c.numerator, c.denominator)))
        return tuple(out)


# ---------------------------------------------------------------- log-gamma

def _log2pi_half(prec: int):
    with workprec(prec):
        return gmpy2.log(2 * gmpy2.const_pi()) / 2


def _stirling_radius(prec: int) -> float:
    return 0.22 * prec + 6


def _stirling_sum(w, prec: int, sector_factor: float):
    """Stirling series for log Gamma(w); requires |w| large and Re(w) > 0."""
    coeffs_needed = int(0.2 * prec) + 8
    coeffs = _stirling_coefficients(coeffs_needed, prec)
    s = (w - mpfr(0.5)) * gmpy2.log(w) - w + _log2pi_half(prec)
    inv = 1 / w
    inv2 = inv * inv
    t = inv
    scale = max(abs(s), 1)
    eps = mpfr(2) ** (-prec) * scale
    prev = None
    for k, c in enumerate(coeffs, start=1):
        term = c * t
        s += term
        mag = abs(term) * sector_factor ** (2 * k)
        if mag < eps:
            return s
        if prev is not None and mag > prev:
            break
        prev = mag
        t *= inv2
    raise NonConvergence(f"Stirling series did not reach {prec} bits for |w|={float(abs(w)):.3g}")


def _check_pole(z) -> None:
    if isinstance(z, BigComplex):
        if z.imag != 0:
            return
        x = z.real
    else:
        x = z
    if x <= 0 and gmpy2.is_integer(x):
        raise PoleError(f"gamma has a pole at {int(x)}")


def _shift_count(re: float, im: float, radius: float) -> int:
    n = 0
    if re < radius / 2:
        n = int(math.ceil(radius / 2 - re))
    while math.hypot(re + n, im) < radius:
        n += 1
    return n


def loggamma_real(x, prec: int) -> BigReal:
    """log Gamma(x) for real ``x > 0`` at ``prec`` bits."""
    radius = _stirling_radius(prec)
    wp = prec + 24 + int(math.log2(radius * math.log(radius) + 2))
    with workprec(wp):
        x = mpfr(x) if not isinstance(x, Fraction) else mpfr(mpq(x.numerator, x.denominator))
        if x <= 0:
            _check_pole(x)
            raise ValueError("loggamma_real requires x > 0; use complex_loggamma")
        n = _shift_count(float(x), 0.0, radius)
        w = x + n
        s = _stirling_sum(w, wp, 1.0)
        if n:
            prod = mpfr(1)
            for j in range(n):
                prod *= x + j
            s -= gmpy2.log(prod)
    with workprec(prec):
        return mpfr(s)


def complex_loggamma(z, prec: int) -> BigComplex:
    """Principal branch of log Gamma(z) at ``prec`` bits.

    The branch is the analytic continuation from the positive real axis with
    the cut along the negative real axis, approached from above.
    """
    radius = _stirling_radius(prec)
    mag_guess = abs(complex(to_mpc(z, 64))) + radius
    wp = prec + 24 + int(math.log2(mag_guess * math.log(mag_guess) + 2))
    zc = to_mpc(z, wp)
    _check_pole(zc)
    if zc.imag == 0 and zc.real > 0:
        real = loggamma_real(zc.real, prec)
        with workprec(prec):
            return mpc(real)
    with workprec(wp):
        re_f, im_f = float(zc.real), float(zc.imag)
        n = _shift_count(re_f, im_f, radius)
        w = zc + n
        theta = abs(cmath.phase(complex(w)))
        sector = 1 / math.cos(theta / 2)
        s = _stirling_sum(w, wp, sector)
        if n:
            prod = mpc(1)
            arg_sum = 0.0
            for j in range(n):
                f = zc + j
                prod *= f
                arg_sum += math.atan2(im_f, re_f + j)
            lp = gmpy2.log(prod)
            twopi = 2 * gmpy2.const_pi()
            turns = round((arg_sum - float(lp.imag)) / float(twopi))
            if turns:
                lp = mpc(lp.real, lp.imag + turns * twopi)
            s -= lp
    with workprec(prec):
        return mpc(s)


def complex_gamma(z, prec: int) -> BigComplex:
    """Gamma(z) at ``prec`` bits; reflection is used for ``Re z < 1/2``."""
    wp = prec + 16
    zc = to_mpc(z, wp)
    _check_pole(zc)
    with workprec(wp):
        if zc.real < mpfr(0.5):
            pi = gmpy2.const_pi()
            lg = complex_loggamma(1 - zc, wp)
            with workprec(wp):
                val = pi / (gmpy2.sin(pi * zc) * gmpy2.exp(lg))
        else:
            lg = complex_loggamma(zc, wp)
            with workprec(wp):
                val = gmpy2.exp(lg)
    with workprec(prec):
        return mpc(val)


def gamma_real(x, prec: int) -> BigReal:
    """Gamma(x) for real ``x`` (not a pole) at ``prec`` bits."""
    wp = prec + 16
    with workprec(wp):
        xr = mpfr(mpq(x.numerator, x.denominator)) if isinstance(x, Fraction) else mpfr(x)
        _check_pole(xr)
        if xr < mpfr(0.5):
            pi = gmpy2.const_pi()
            val = pi / (gmpy2.sin(pi * xr) * gmpy2.exp(loggamma_real(1 - xr, wp)))
        else:
            val = gmpy2.exp(loggamma_real(xr, wp))
    with workprec(prec):
        return mpfr(val)


# ---------------------------------------------------------------- constants

def _euler_gamma_at(N: int, wp: int):
    # gamma = H_{N-1} - psi(N), psi(N) ~ log N - 1/(2N) - sum B_2k / (2k N^2k)
    _ensure_bernoulli(int(0.25 * wp) + 8)
    with workprec(wp):
        h = mpfr(0)
        for j in range(1, N):
            h += mpfr(1) / j
        s = h - gmpy2.log(mpfr(N)) + mpfr(1) / (2 * N)
        inv2 = mpfr(1) / (N * N)
        t = inv2
        eps = mpfr(2) ** (-wp)
        for k in range(1, len(_bern_even)):
            b = _bern_even[k] / (2 * k)
            term = mpfr(mpq(b.numerator, b.denominator)) * t
            s += term
            if abs(term) < eps:
                return s
            t *= inv2
    raise NonConvergence("digamma asymptotic series did not converge")


@lru_cache(maxsize=32)
def euler_gamma_const(prec: int) -> BigReal:
    """Euler's constant at ``prec`` bits, certified by two independent cut-offs."""
    wp = prec + 24
    n1 = int(0.15 * wp) + 10
    g1 = _euler_gamma_at(n1, wp)
    g2 = _euler_gamma_at(n1 + 9, wp)
    with workprec(wp):
        if abs(g1 - g2) > mpfr(2) ** (-(prec + 8)):
            raise NonConvergence("Euler constant cut-offs disagree")
    with workprec(prec):
        return mpfr(g1)


@lru_cache(maxsize=1024)
def zeta_int(s: int, prec: int) -> BigReal:
    """Riemann zeta at an integer ``s >= 2`` by Euler-Maclaurin summation."""
    if s < 2:
        raise ValueError("zeta_int requires s >= 2")
    wp = prec + 20
    with workprec(wp):
        eps = mpfr(2) ** (-wp)
        if s > wp:
            total = mpfr(1)
            j = 2
            while True:
                t = mpfr(j) ** (-s)
                total += t
                if t < eps:
                    break
                j += 1
            with workprec(prec):
                return mpfr(total)
        N = max(int(0.12 * wp) + 10, s // 2 + 10)
        total = mpfr(0)
        for j in range(1, N):
            total += mpfr(j) ** (-s)
        Nf = mpfr(N)
        total += Nf ** (1 - s) / (s - 1) + Nf ** (-s) / 2
        rising = mpfr(s)  # s (s+1) ... (s + 2i - 2)
        npow = Nf ** (-s - 1)
        inv2 = 1 / (Nf * Nf)
        fact = mpfr(2)  # (2i)!
        prev = None
        i = 1
        while True:
            _ensure_bernoulli(i)
            b = _bern_even[i]
            term = mpfr(mpq(b.numerator, b.denominator)) / fact * rising * npow
            total += term
            mag = abs(term)
            if mag < eps:
                break
            if prev is not None and mag > prev:
                raise NonConvergence(f"Euler-Maclaurin diverged for zeta({s})")
            prev = mag
            rising *= (s + 2 * i - 1) * (s + 2 * i)
            fact *= (2 * i + 1) * (2 * i + 2)
            npow *= inv2
            i += 1
    with workprec(prec):
        return mpfr(total)
