"""Worked products: Wallis, sine, alternating cubes, Artin's integer analogue,
multiplicative partitions, Ramanujan's phi, cyclotomic products and the
Ramanujan / Mellin-Barnes integral."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import gmpy2
import mpmath
from gmpy2 import mpc, mpfr

from ..errors import DivergentProduct, PoleError, PreconditionError
from ..mpcore import (
    GaussianRational,
    Polynomial,
    complex_loggamma,
    digits_to_bits,
    is_exact,
    parse_number,
    rel_digits,
    to_mpc,
    workprec,
)
from ..mpcore.numbers import simplify_exact
from ..reports import Check, CheckReport
from .engine import EvaluationReport, evaluate, evaluate_partial, evaluate_quotient, to_gamma_quotient
from .quotient import GammaQuotient
from .spec import RationalFunctionSpec, check_convergence

__all__ = [
    "wallis_spec",
    "sine_product_spec",
    "artin_integer_spec",
    "alternating_cube_specs",
    "alternating_cube_product",
    "alternating_cube_closed_form",
    "multpart_value",
    "multpart_spec",
    "multpart_tail_bound",
    "count_multiplicative_partitions",
    "phi_ramanujan",
    "phi_spec",
    "phi_tail_bound",
    "cyclotomic_power_product",
    "cyclotomic_spec",
    "mellin_barnes_check",
]


def _scalar(x):
    if isinstance(x, str):
        return parse_number(x)
    if isinstance(x, int):
        return Fraction(x)
    return x


# ---------------------------------------------------------------- fixtures

def wallis_spec() -> RationalFunctionSpec:
    """(2k+2)^2 / ((2k+1)(2k+3)) over k >= 0; value pi/2."""
    return RationalFunctionSpec(Polynomial([2, 2]) ** 2, Polynomial([1, 2]) * Polynomial([3, 2]), 0)


def sine_product_spec(z) -> RationalFunctionSpec:
    """(k^2 - z^2) / k^2 over k >= 1; value sin(pi z)/(pi z)."""
    z = _scalar(z)
    if is_exact(z):
        return RationalFunctionSpec.from_roots([z, -z], [0, 0], 1)
    prec = z.precision[0] if hasattr(z.precision, "__len__") else z.precision
    zc = to_mpc(z, prec)
    with workprec(prec):
        return RationalFunctionSpec.from_roots([zc, -zc], [0, 0], 1, prec=prec)


def artin_integer_spec() -> RationalFunctionSpec:
    """1 - 1/(k(k-1)) over k >= 2; value -cos(sqrt(5) pi / 2) / pi."""
    return RationalFunctionSpec(Polynomial([-1, -1, 1]), Polynomial([0, -1, 1]), 2)


def alternating_cube_specs() -> tuple[RationalFunctionSpec, RationalFunctionSpec]:
    """prod_{k>=1} (1 - (-1)^k / (2k+1)^3) split by the parity of k.

    Even k = 2j gives 1 - 1/(4j+1)^3, odd k = 2j-1 gives 1 + 1/(4j-1)^3, both
    over j >= 1.
    """
    c1 = Polynomial([1, 4]) ** 3
    c2 = Polynomial([-1, 4]) ** 3
    return RationalFunctionSpec(c1 - 1, c1, 1), RationalFunctionSpec(c2 + 1, c2, 1)


def alternating_cube_closed_form(prec: int):
    """(pi/12) (1 + sqrt(2) cosh(sqrt(3) pi / 4))."""
    with workprec(prec + 10):
        pi = gmpy2.const_pi()
        v = pi / 12 * (1 + gmpy2.sqrt(2) * gmpy2.cosh(gmpy2.sqrt(3) * pi / 4))
    with workprec(prec):
        return mpfr(v)


def alternating_cube_product(digits: int) -> EvaluationReport:
    even, odd = alternating_cube_specs()
    rep = evaluate_quotient(lambda p: to_gamma_quotient(even, p) * to_gamma_quotient(odd, p), digits)
    ref = alternating_cube_closed_form(digits_to_bits(digits) + 32)
    d = rel_digits(rep.value, ref)
    rep.checks.append(Check("closed_form", d >= digits, 10.0 ** -d if d != math.inf else 0.0, 10.0 ** -digits))
    return rep


# ---------------------------------------------------------------- roots of unity

def unit_root(j: int, n: int, prec: int):
    """exp(2 pi i j / n), exact (as a Gaussian rational) at the quarter turns."""
    j %= n
    if (4 * j) % n == 0:
        return {0: Fraction(1), 1: GaussianRational(0, 1), 2: Fraction(-1), 3: GaussianRational(0, -1)}[4 * j // n]
    with workprec(prec + 8):
        t = 2 * gmpy2.const_pi() * j / n
        v = mpc(gmpy2.cos(t), gmpy2.sin(t))
    return to_mpc(v, prec)


def _times(z, w, prec: int):
    if is_exact(z) and is_exact(w):
        return simplify_exact(z * w)
    with workprec(prec):
        return to_mpc(z, prec) * to_mpc(w, prec)


# ---------------------------------------------------------------- multiplicative partitions

@lru_cache(maxsize=4096)
def _mp_count(n: int, least: int) -> int:
    if n == 1:
        return 1
    total = 0
    d = least
    while d * d <= n:
        if n % d == 0:
            total += _mp_count(n // d, d)
        d += 1
    if n >= least:
        total += 1  # n itself as the last (largest) factor
    return total


def count_multiplicative_partitions(n: int) -> int:
    """Number of ways to write ``n`` as an unordered product of integers >= 2.

    ``a_1 = 1`` (the empty product), matching the Dirichlet series constant term.
    """
    if n < 1:
        raise PreconditionError("n must be positive")
    return _mp_count(n, 2)


def multpart_spec(n: int) -> RationalFunctionSpec:
    """k^n / (k^n - 1) over k >= 2, with the roots of unity supplied."""
    if n < 2:
        raise PreconditionError("n must be >= 2")
    num = Polynomial([0] * n + [1])
    den = Polynomial([-1] + [0] * (n - 1) + [1])
    return RationalFunctionSpec(num, den, 2, frozenset(), [Fraction(0)] * n,
                                lambda prec: [unit_root(j, n, prec) for j in range(n)])


def multpart_tail_bound(n: int, M: int) -> float:
    """Bound on |prod_{k=2}^{M} / prod_{k>=2} - 1| for k^n/(k^n - 1)."""
    return M ** (1 - n) / ((n - 1) * (1 - M ** (-n)))


def _multpart_quotient(n: int, prec: int) -> GammaQuotient:
    # n * prod_{j=1}^{n-1} Gamma(1 - xi^j); Gamma(1) = 1 pads the denominator
    args = []
    for j in range(1, n):
        w = unit_root(j, n, prec)
        args.append(simplify_exact(1 - w) if is_exact(w) else _sub1(w, prec))
    return GammaQuotient.build(args, [Fraction(1)] * (n - 1), Fraction(n))


def _sub1(w, prec):
    with workprec(prec):
        return 1 - w


def multpart_value(n: int, digits: int) -> EvaluationReport:
    """prod_{k>=2} 1/(1 - k^-n) = n prod_{j=1}^{n-1} Gamma(1 - xi_n^j), real part returned."""
    if n < 2:
        raise PreconditionError("n must be >= 2")
    rep = evaluate_quotient(lambda p: _multpart_quotient(n, p), digits)
    prec = digits_to_bits(digits) + 32
    v = rep.value
    with workprec(prec):
        im = abs(v.imag) / abs(v)
    tol = 10.0 ** -digits
    rep.checks.append(Check("imaginary_part", float(im) < tol, float(im), tol))
    engine = evaluate(multpart_spec(n), digits)
    d = rel_digits(v, engine.value)
    rep.checks.append(Check("engine_route", d >= digits - 1, _delta(d), 10.0 ** -(digits - 1)))
    with workprec(prec):
        rep.value = mpfr(v.real)
    return rep


def _delta(d: float) -> float:
    return 0.0 if d == math.inf else 10.0 ** -d


# ---------------------------------------------------------------- Ramanujan's phi

def phi_spec(alpha, beta) -> RationalFunctionSpec:
    """1 + ((alpha + beta)/(n + alpha))^3 over n >= 1."""
    alpha, beta = _scalar(alpha), _scalar(beta)
    if is_exact(alpha) and is_exact(beta):
        base = Polynomial([alpha, 1])
        c = alpha + beta
        return RationalFunctionSpec(base ** 3 + Polynomial([c * c * c]), base ** 3, 1)
    prec = max(_precision(x) for x in (alpha, beta) if not is_exact(x))
    with workprec(prec):
        a, b = to_mpc(alpha, prec), to_mpc(beta, prec)
        base = Polynomial([a, 1], prec)
        c = a + b
        return RationalFunctionSpec(base ** 3 + Polynomial([c * c * c], prec), base ** 3, 1)


def _precision(x) -> int:
    p = x.precision
    return p[0] if isinstance(p, tuple) else p


def _phi_quotient(alpha, beta, prec: int) -> GammaQuotient:
    a, b = to_mpc(alpha, prec + 8), to_mpc(beta, prec + 8)
    with workprec(prec + 8):
        s3 = gmpy2.sqrt(mpfr(3))
        half = (a - b) / 2
        twist = mpc(0, 1) * (a + b) * s3 / 2
        den = [1 + 2 * a + b, 1 + half + twist, 1 + half - twist]
        num = [1 + a] * 3
    if is_exact(alpha) and is_exact(beta):
        al, be = simplify_exact(alpha), simplify_exact(beta)
        num = [simplify_exact(1 + al)] * 3
        den[0] = simplify_exact(1 + 2 * al + be)
    return GammaQuotient.build(num, den)


def _phi_hyperbolic(alpha, prec: int):
    """Gamma(1+a)^3/Gamma(1+3a) * sinh(pi a sqrt3)/(pi a sqrt3)."""
    wp = prec + 16
    a = to_mpc(alpha, wp)
    with workprec(wp):
        if a == 0:
            ratio = mpc(1)
        else:
            t = gmpy2.const_pi() * a * gmpy2.sqrt(mpfr(3))
            ratio = gmpy2.sinh(t) / t
        lg = 3 * complex_loggamma(1 + a, wp) - complex_loggamma(1 + 3 * a, wp)
        v = gmpy2.exp(lg) * ratio
    with workprec(prec):
        return mpc(v)


def phi_tail_bound(alpha, beta, M: int) -> float:
    """Bound on |prod_{n<=M} / phi - 1| for the defining product."""
    c = abs(complex(to_mpc(alpha, 53) + to_mpc(beta, 53))) ** 3
    shift = M + complex(to_mpc(alpha, 53)).real
    if shift <= 0:
        return math.inf
    x = c / shift ** 3
    if x >= 1:
        return math.inf
    log_bound = c / (2 * shift ** 2) / (1 - x)
    return math.expm1(log_bound)


def phi_ramanujan(alpha, beta, digits: int, partial_terms: int = 10_000) -> EvaluationReport:
    """phi(alpha, beta) = prod_{n>=1} {1 + ((alpha+beta)/(n+alpha))^3} in closed form.

    Checks: the general engine on the defining product, the hyperbolic form
    when alpha == beta, and (if ``partial_terms``) the truncated product
    against :func:`phi_tail_bound`.
    """
    alpha, beta = _scalar(alpha), _scalar(beta)
    rep = evaluate_quotient(lambda p: _phi_quotient(alpha, beta, p), digits)
    tol = 10.0 ** -(digits - 1)
    try:
        engine = evaluate(phi_spec(alpha, beta), digits)
        d = rel_digits(rep.value, engine.value)
        rep.checks.append(Check("engine_route", d >= digits - 1, _delta(d), tol))
    except DivergentProduct:
        rep.checks.append(Check("engine_route", False, math.inf, tol))
    if alpha == beta:
        hyp = _phi_hyperbolic(alpha, digits_to_bits(digits) + 32)
        d = rel_digits(rep.value, hyp)
        rep.checks.append(Check("hyperbolic_form", d >= digits - 1, _delta(d), tol))
        rep.extra["hyperbolic"] = hyp
    if partial_terms:
        part = evaluate_partial(phi_spec(alpha, beta), partial_terms, 96)
        with workprec(96):
            dev = float(abs(part / rep.value - 1))
        bound = phi_tail_bound(alpha, beta, partial_terms)
        rep.checks.append(Check("partial_product", dev <= bound, dev, bound))
        rep.extra["partial"] = part
    return rep


# ---------------------------------------------------------------- cyclotomic products

def cyclotomic_spec(n: int, z, removed: int | None = None) -> RationalFunctionSpec:
    """(k^n - z^n)/(k^n + z^n) over k >= 0; ``removed`` sets z = m and skips k = m."""
    if removed is not None:
        m = int(removed)
        zn = Fraction(m) ** n
        return RationalFunctionSpec(Polynomial([-zn] + [0] * (n - 1) + [1]),
                                    Polynomial([zn] + [0] * (n - 1) + [1]), 0, frozenset({m}))
    z = _scalar(z)

    def num_roots(prec):
        return [_times(z, unit_root(2 * i, 2 * n, prec), prec) for i in range(n)]

    def den_roots(prec):
        return [_times(z, unit_root(2 * i + 1, 2 * n, prec), prec) for i in range(n)]

    if is_exact(z):
        zn = simplify_exact(z ** n)
        num = Polynomial([-zn] + [0] * (n - 1) + [1])
        den = Polynomial([zn] + [0] * (n - 1) + [1])
    else:
        prec = _precision(z)
        with workprec(prec):
            zn = to_mpc(z, prec) ** n
        num = Polynomial([-zn] + [0] * (n - 1) + [1], prec)
        den = Polynomial([zn] + [0] * (n - 1) + [1], prec)
    return RationalFunctionSpec(num, den, 0, frozenset(), num_roots, den_roots)


def _neg_times(z, w, prec):
    v = _times(z, w, prec)
    if is_exact(v):
        return simplify_exact(-v)
    with workprec(prec):
        return -v


def _cyclotomic_quotient(n: int, z, prec: int) -> GammaQuotient:
    # prod_{j=1}^{2n} Gamma(-z xi_{2n}^j)^{(-1)^{j+1}}
    num, den = [], []
    for j in range(1, 2 * n + 1):
        arg = _neg_times(z, unit_root(j, 2 * n, prec), prec)
        (num if j % 2 else den).append(arg)
    return GammaQuotient.build(num, den)


def _cyclotomic_removed_quotient(n: int, m: int, prec: int) -> GammaQuotient:
    # (-1)^m m! (2m/n) prod_{j=1}^{2n-1} Gamma(-m xi_{2n}^j)^{(-1)^{j+1}}
    num, den = [], []
    for j in range(1, 2 * n):
        arg = _neg_times(Fraction(m), unit_root(j, 2 * n, prec), prec)
        (num if j % 2 else den).append(arg)
    pre = Fraction((-1) ** m * math.factorial(m) * 2 * m, n)
    return GammaQuotient.build(num, den, pre)


def cyclotomic_power_product(n: int, z=None, digits: int = 30, removed: int | None = None) -> EvaluationReport:
    """prod_{k>=0} (k^n - z^n)/(k^n + z^n) in gamma form, or the k != m variant.

    The plain form is ``prod_{j=1}^{2n} Gamma(-z xi^j)^{(-1)^{j+1}}`` with
    ``xi = exp(pi i / n)``; for even n this coincides with
    ``prod Gamma(z xi^j)^{(-1)^{j+1}}``. Both routes (closed form and engine)
    are evaluated and compared.
    """
    if n < 1:
        raise PreconditionError("n must be >= 1")
    if removed is not None:
        m = int(removed)
        if m < 0:
            raise PreconditionError("removed index must be >= 0")
        spec = cyclotomic_spec(n, None, m)
        verdict = check_convergence(spec)
        if not verdict:
            raise DivergentProduct(verdict.detail)
        if m == 0:
            build = lambda p: GammaQuotient()  # noqa: E731  every factor is 1
        else:
            build = lambda p: _cyclotomic_removed_quotient(n, m, p)  # noqa: E731
    else:
        z = _scalar(z)
        if is_exact(z):
            zs = simplify_exact(z)
            if isinstance(zs, Fraction) and zs.denominator == 1 and zs >= 0:
                raise PoleError(f"z = {zs} makes a factor vanish")
        spec = cyclotomic_spec(n, z)
        verdict = check_convergence(spec)
        if not verdict:
            raise DivergentProduct(verdict.detail)
        build = lambda p: _cyclotomic_quotient(n, z, p)  # noqa: E731
    rep = evaluate_quotient(build, digits)
    engine = evaluate(spec, digits)
    d = rel_digits(rep.value, engine.value)
    rep.checks.append(Check("engine_route", d >= digits - 1, _delta(d), 10.0 ** -(digits - 1)))
    return rep


# ---------------------------------------------------------------- Mellin-Barnes check

def _from_mpf(x, ctx) -> mpfr:
    man, exp = ctx.mpf(x).man_exp
    with workprec(max(int(man).bit_length(), 2) + 2):
        return mpfr(int(man)) * mpfr(2) ** int(exp)


def _to_mpf(v: mpfr, ctx):
    man, exp = v.as_mantissa_exp()
    return ctx.mpf((int(man), int(exp)))


def _mb_closed_forms(a, b, prec: int):
    wp = prec + 16

    def lg(x):
        return complex_loggamma(x, wp).real

    with workprec(wp):
        half = Fraction(1, 2)
        first = (gmpy2.log(gmpy2.const_pi()) / 2 - gmpy2.log(mpfr(2)) + lg(a + half) + lg(b)
                 + lg(b - a - half) - lg(a) - lg(b - half) - lg(b - a))
        second = (gmpy2.log(gmpy2.const_pi()) + 2 * lg(b) - 2 * lg(a) + lg(2 * a) + lg(2 * b - 2 * a - 1)
                  - 2 * lg(b - a) - lg(2 * b - 1))
        v1, v2 = gmpy2.exp(first), gmpy2.exp(second)
    with workprec(prec):
        return mpfr(v1), mpfr(v2)


def mellin_barnes_check(a, b, digits_target: int = 8) -> CheckReport:
    """Numerically verify Ramanujan's integral of the rational-product integrand.

    The integrand prod_{k>=0} (1 + x^2/(b+k)^2)/(1 + x^2/(a+k)^2) is evaluated
    as the gamma quotient Gamma(b)^2 |Gamma(a+ix)|^2 / (Gamma(a)^2 |Gamma(b+ix)|^2).
    The integral over [0, T] uses adaptive quadrature; beyond T the integrand
    behaves like c x^(2(a-b)), which is integrated analytically. The value is
    compared with (sqrt(pi)/2) G(a+1/2) G(b) G(b-a-1/2) / (G(a) G(b-1/2) G(b-a))
    and with the duplication-simplified form
    pi G(b)^2/G(a)^2 * G(2a) G(2b-2a-1) / (G(b-a)^2 G(2b-1)).
    """
    a, b = _scalar(a), _scalar(b)
    if not (a > 0 and b - a > Fraction(1, 2)):
        raise PreconditionError("need 0 < a < b - 1/2")
    report = CheckReport("mellin_barnes")
    prec = digits_to_bits(digits_target + 12) + 16
    closed, simplified = _mb_closed_forms(a, b, prec)
    with workprec(prec):
        d_forms = abs(closed - simplified) / closed
    report.add("duplication_form", d_forms <= mpfr(2) ** (-(prec - 16)), float(d_forms), 2.0 ** -(prec - 16))

    wp = prec
    with workprec(wp):
        base = 2 * (complex_loggamma(b, wp).real - complex_loggamma(a, wp).real)
    p = 2 * (b - a)

    def g(x: mpfr) -> mpfr:
        with workprec(wp):
            z = mpc(0, x)
            s = base + 2 * (complex_loggamma(a + z, wp).real - complex_loggamma(b + z, wp).real)
            return gmpy2.exp(s)

    ctx = mpmath.MPContext()
    ctx.dps = digits_target + 12
    tol = 10.0 ** -digits_target * float(closed)

    def tail(T: int):
        with workprec(wp):
            cT = g(mpfr(T)) * mpfr(T) ** p
            cH = g(mpfr(T) / 2) * (mpfr(T) / 2) ** p
            est = cT * mpfr(T) ** (1 - p) / (p - 1)
            unc = est * abs(cT - cH) / cT
        return est, unc

    T = 16
    est, unc = tail(T)
    while float(unc) > tol / 2 and T < 2 ** 20:
        T *= 2
        est, unc = tail(T)
    nodes = [0] + [2 ** i for i in range(int(math.log2(T)) + 1)]
    f = lambda x: _to_mpf(g(_from_mpf(x, ctx)), ctx)  # noqa: E731
    quad, qerr = ctx.quad(f, nodes, error=True)
    with workprec(wp):
        total = _from_mpf(quad, ctx) + est
        diff = abs(total - closed) / closed
    agree = -math.log10(float(diff)) if diff != 0 else math.inf
    bound = (float(unc) + float(qerr)) / float(closed)
    report.add("quadrature", agree >= digits_target, float(diff), 10.0 ** -digits_target)
    report.values.update({
        "closed_form": closed,
        "simplified_form": simplified,
        "quadrature": total,
        "tail_estimate": est,
        "tail_uncertainty": unc,
        "quadrature_error": qerr,
        "cutoff": T,
        "digits_agreement": agree,
        "error_bound": bound,
    })
    return report
