"""Polynomial root finding by Aberth-Ehrlich simultaneous iteration.

Roots are first located in double precision from points on a perturbed circle
and then polished at twice the target precision. Exact polynomials are split
into squarefree parts first, and rational roots are recognised and verified
exactly so that multiple and rational roots come out clean.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce

import gmpy2
from gmpy2 import mpc, mpfr

from ..errors import NonConvergence, PreconditionError
from .numbers import BigComplex, GaussianRational, to_mpc, workprec
from .poly import Polynomial

__all__ = ["Root", "factor_roots", "poly_roots", "aberth"]


@dataclass(frozen=True)
class Root:
    value: BigComplex
    multiplicity: int = 1
    exact: Fraction | None = None
    residual: object = 0  # relative backward residual |p(z)| / sum |a_k z^k|


def _double_seeds(coeffs: list[BigComplex], max_iter: int = 800):
    """Aberth in complex doubles on a rescaled copy of the polynomial."""
    n = len(coeffs) - 1
    with workprec(128):
        lead = coeffs[-1]
        monic = [c / lead for c in coeffs]
        # Fujiwara-type radius estimate
        radius = mpfr(0)
        for k in range(n):
            mag = abs(monic[k])
            if mag != 0:
                radius = max(radius, mag ** (mpfr(1) / (n - k)))
        if radius == 0:
            radius = mpfr(1)
        scaled = [complex(monic[k] / radius ** (n - k)) for k in range(n + 1)]
    r = float(radius)

    def ev(z):
        p = 0j
        dp = 0j
        for c in reversed(scaled):
            dp = dp * z + p
            p = p * z + c
        return p, dp

    zs = [0.7 * cmath.exp(1j * (2 * math.pi * k / n + 0.4)) for k in range(n)]
    for _ in range(max_iter):
        worst = 0.0
        for i in range(n):
            p, dp = ev(zs[i])
            if p == 0:
                continue
            ratio = p / dp if dp != 0 else complex(1e-3)
            s = 0j
            zi = zs[i]
            for j in range(n):
                if j != i:
                    d = zi - zs[j]
                    s += 1 / d if d != 0 else 1e12
            denom = 1 - ratio * s
            w = ratio / denom if denom != 0 else ratio
            zs[i] = zi - w
            worst = max(worst, abs(w) / max(abs(zs[i]), 1e-30))
        if worst < 1e-14:
            break
    return [complex(z * r) for z in zs]


def aberth(coeffs: list, prec: int, seeds=None, max_iter: int | None = None) -> list[BigComplex]:
    """Simultaneous iteration on ascending ``coeffs`` at ``prec`` bits."""
    n = len(coeffs) - 1
    if n < 1:
        raise PreconditionError("root finding needs degree >= 1")
    coeffs = [to_mpc(c, prec) for c in coeffs]
    if seeds is None:
        seeds = _double_seeds(coeffs)
    max_iter = max_iter or 200 + 4 * n
    with workprec(prec):
        lead = coeffs[-1]
        a = [c / lead for c in coeffs]
        da = [k * a[k] for k in range(1, n + 1)]
        absa = [abs(c) for c in a]
        zs = [mpc(complex(s)) for s in seeds]
        tol = mpfr(2) ** (-(prec - 12))
        eps = mpfr(2) ** (-prec)
        small_residual_streak = 0
        for _ in range(max_iter):
            worst = mpfr(0)
            all_small = True
            for i in range(n):
                zi = zs[i]
                p = mpc(0)
                for c in reversed(a):
                    p = p * zi + c
                if p == 0:
                    continue
                dp = mpc(0)
                for c in reversed(da):
                    dp = dp * zi + c
                s = mpc(0)
                for j in range(n):
                    if j != i:
                        s += 1 / (zi - zs[j])
                ratio = p / dp if dp != 0 else mpc(eps)
                w = ratio / (1 - ratio * s)
                zs[i] = zi - w
                rel = abs(w) / max(abs(zs[i]), eps)
                worst = max(worst, rel)
                az = abs(zi)
                scale = mpfr(0)
                for c in reversed(absa):
                    scale = scale * az + c
                if abs(p) > 64 * n * eps * scale:
                    all_small = False
            if worst < tol:
                return zs
            small_residual_streak = small_residual_streak + 1 if all_small else 0
            if small_residual_streak >= 4:
                # clustered or multiple roots: backward error is at working precision
                return zs
    raise NonConvergence(f"Aberth iteration did not converge at {prec} bits (degree {n})")


def _relative_residual(coeffs, z, prec):
    with workprec(prec):
        p = mpc(0)
        scale = mpfr(0)
        az = abs(z)
        for c in reversed(coeffs):
            p = p * z + c
            scale = scale * az + abs(c)
        if scale == 0:
            return mpfr(0)
        return abs(p) / scale


def _integer_primitive(p: Polynomial) -> list[int]:
    dens = [c.denominator for c in p.coeffs]
    lcm = reduce(lambda x, y: x * y // math.gcd(x, y), dens, 1)
    ints = [int(c * lcm) for c in p.coeffs]
    g = reduce(math.gcd, ints, 0) or 1
    return [i // g for i in ints]


def _exact_rational_root(ints: list[int], z: BigComplex, prec: int) -> Fraction | None:
    if abs(z.imag) > abs(z) * mpfr(2) ** (-(prec // 2)) + mpfr(2) ** (-(prec // 2)):
        return None
    lead = abs(ints[-1])
    n, d = z.real.as_integer_ratio()
    cand = Fraction(n, d).limit_denominator(max(lead, 1))
    if cand.denominator > lead or lead % cand.denominator:
        return None
    acc = 0
    num, den = cand.numerator, cand.denominator
    # homogeneous evaluation: sum a_k num^k den^(n-k) == 0
    deg = len(ints) - 1
    for k, a in enumerate(ints):
        acc += a * num ** k * den ** (deg - k)
    return cand if acc == 0 else None


def _numeric_roots(p: Polynomial, prec: int) -> list[BigComplex]:
    work = 2 * prec + 16
    coeffs = [to_mpc(c, work) for c in p.coeffs]
    if p.degree == 1:
        with workprec(work):
            return [-coeffs[0] / coeffs[1]]
    return aberth(coeffs, work)


def _clean(z: BigComplex, real_poly: bool, prec: int) -> BigComplex:
    if real_poly and abs(z.imag) <= (abs(z) + 1) * mpfr(2) ** (-prec):
        with workprec(prec):
            return mpc(z.real)
    with workprec(prec):
        return mpc(z)


@lru_cache(maxsize=512)
def factor_roots(p: Polynomial, prec: int) -> tuple[Root, ...]:
    """All roots of ``p`` with multiplicities, accurate to ``prec`` bits."""
    if p.degree < 1:
        raise PreconditionError("root finding needs degree >= 1")
    out: list[Root] = []
    coeffs = list(p.coeffs)
    zeros = 0
    while coeffs[zeros] == 0:
        zeros += 1
    if zeros:
        out.append(Root(to_mpc(0, prec), zeros, Fraction(0), 0))
    rest = Polynomial(coeffs[zeros:], p.prec)
    if rest.degree < 1:
        return tuple(out)
    real_poly = rest.is_real()
    if rest.exact:
        parts = rest.squarefree_decomposition()
    else:
        parts = [(rest, 1)]
    for part, mult in parts:
        exact_real = part.exact and part.is_real()
        ints = _integer_primitive(part) if exact_real else None
        pc = [to_mpc(c, 2 * prec + 16) for c in part.coeffs]
        for z in _numeric_roots(part, prec):
            ex = _exact_rational_root(ints, z, 2 * prec) if exact_real else None
            if ex is not None:
                out.append(Root(to_mpc(ex, prec), mult, ex, 0))
                continue
            res = _relative_residual(pc, z, 2 * prec + 16)
            out.append(Root(_clean(z, real_poly, prec), mult, None, res))
    return tuple(out)


def poly_roots(p: Polynomial, prec: int) -> list[BigComplex]:
    """All complex roots of ``p`` repeated by multiplicity."""
    out = []
    for r in factor_roots(p, prec):
        out.extend([r.value] * r.multiplicity)
    return out
