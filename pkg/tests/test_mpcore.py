"""Numeric substrate: gamma, constants, polynomials, roots and Pade tables."""

from fractions import Fraction

import gmpy2
import mpmath
import pytest
from gmpy2 import mpc, mpfr
from hypothesis import given, settings
from hypothesis import strategies as st

from gammaprod.errors import DegenerateTable, PoleError, PreconditionError
from gammaprod.mpcore import (GaussianRational, Polynomial, abs_digits, bernoulli_number, complex_gamma,
                              complex_loggamma, cos_series, euler_gamma_const, exp_series, factor_roots,
                              format_exact, gamma_real, loggamma_real, pade_from_series, parse_number, pi,
                              poly_roots, rel_digits, series_of_quotient, to_mpc, workprec, zeta_int)

PREC = 128
TOL = mpfr(2) ** -110


def _mp(x, dps=45):
    mpmath.mp.dps = dps
    return mpmath.mpmathify(str(x))


def _rel(a, b):
    with workprec(PREC + 32):
        return abs(a - b) / abs(b)


# points kept away from the poles of either side
coords = st.fractions(min_value=-6, max_value=6, max_denominator=997)
points = st.tuples(coords, coords).filter(
    lambda t: abs(t[1]) > Fraction(1, 50) or abs(t[0] - round(t[0])) > Fraction(1, 50))


def _z(t):
    return GaussianRational(t[0], t[1])


@settings(max_examples=1000)
@given(points)
def test_reflection(t):
    z = _z(t)
    with workprec(PREC + 32):
        lhs = gmpy2.exp(complex_loggamma(z, PREC + 32) + complex_loggamma(1 - z, PREC + 32))
        zc = to_mpc(z, PREC + 32)
        rhs = pi(PREC + 32) / gmpy2.sin(pi(PREC + 32) * zc)
    assert _rel(lhs, rhs) < TOL


@settings(max_examples=1000)
@given(points)
def test_duplication(t):
    z = _z(t)
    if not abs(t[1]) > Fraction(1, 50):
        # 2z and z + 1/2 must also stay off the poles
        frac2 = 2 * t[0] - round(2 * t[0])
        if abs(frac2) < Fraction(1, 25):
            return
    wp = PREC + 32
    with workprec(wp):
        zc = to_mpc(z, wp)
        lhs = complex_gamma(z, wp) * complex_gamma(z + Fraction(1, 2), wp)
        rhs = mpfr(2) ** (1 - 2 * zc) * gmpy2.sqrt(pi(wp)) * complex_gamma(2 * z, wp)
    assert _rel(lhs, rhs) < TOL


@settings(max_examples=1000)
@given(points)
def test_recurrence(t):
    z = _z(t)
    wp = PREC + 32
    with workprec(wp):
        lhs = complex_gamma(z + 1, wp)
        rhs = to_mpc(z, wp) * complex_gamma(z, wp)
    assert _rel(lhs, rhs) < TOL


@settings(max_examples=200)
@given(points)
def test_gamma_against_mpmath(t):
    z = _z(t)
    v = complex_gamma(z, PREC)
    mpmath.mp.dps = 45
    ref = mpmath.gamma(mpmath.mpc(_mp(t[0]), _mp(t[1])))
    got = mpmath.mpc(_mp(v.real), _mp(v.imag))
    assert abs(got - ref) / abs(ref) < mpmath.mpf(2) ** -115


@settings(max_examples=200)
@given(st.fractions(min_value=Fraction(1, 1000), max_value=200, max_denominator=1000))
def test_loggamma_real_against_mpmath(x):
    v = loggamma_real(x, PREC)
    ref = mpmath.loggamma(mpmath.mpf(x.numerator) / x.denominator)
    assert abs(_mp(v) - ref) <= mpmath.mpf(2) ** -118 * max(1, abs(ref))


def test_loggamma_branch_matches_mpmath_near_cut():
    for re, im in (("-2.5", "0.001"), ("-7.3", "-0.4"), ("-0.5", "3"), ("0.1", "40")):
        v = complex_loggamma(GaussianRational(Fraction(re), Fraction(im)), PREC)
        mpmath.mp.dps = 45
        ref = mpmath.loggamma(mpmath.mpc(re, im))
        assert abs(mpmath.mpc(_mp(v.real), _mp(v.imag)) - ref) < mpmath.mpf(10) ** -30


def test_gamma_poles_raise():
    with pytest.raises(PoleError):
        complex_gamma(Fraction(-3), 64)
    with pytest.raises(PoleError):
        gamma_real(Fraction(0), 64)


def test_gamma_half():
    with workprec(PREC):
        assert _rel(gamma_real(Fraction(1, 2), PREC), gmpy2.sqrt(pi(PREC))) < TOL


def test_bernoulli_against_mpmath():
    for k in range(0, 60):
        b = bernoulli_number(k)
        assert b == Fraction(str(mpmath.bernfrac(k)[0])) / Fraction(str(mpmath.bernfrac(k)[1]))


def test_constants_against_mpmath():
    mpmath.mp.dps = 80
    assert abs(_mp(euler_gamma_const(260), 80) - mpmath.euler) < mpmath.mpf(10) ** -75
    for s in (2, 3, 5, 10, 41):
        assert abs(_mp(zeta_int(s, 260), 80) - mpmath.zeta(s)) < mpmath.mpf(10) ** -75


def test_parse_and_format_round_trip():
    for text in ("3/7", "-2", "1/2+3/4i", "-5i", "0"):
        v = parse_number(text)
        assert parse_number(format_exact(v)) == v
    with pytest.raises(ValueError):
        parse_number("seven")


def test_digit_helpers():
    with workprec(100):
        assert abs_digits(mpfr(1), mpfr(1) + mpfr(10) ** -12) == pytest.approx(12, abs=1e-6)
        assert rel_digits(mpfr(2), mpfr(2)) == float("inf")


# ---------------------------------------------------------------- polynomials

small = st.fractions(min_value=-20, max_value=20, max_denominator=12)
polys = st.lists(small, min_size=1, max_size=6).map(Polynomial)


@given(polys, polys.filter(lambda p: not p.is_zero()))
def test_divmod_identity(a, b):
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree


@given(polys, polys, small)
def test_evaluation_is_a_ring_map(a, b, x):
    assert (a * b)(x) == a(x) * b(x)
    assert (a + b)(x) == a(x) + b(x)


@given(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=5), min_size=1, max_size=6))
def test_exact_rational_roots_are_recovered(roots):
    p = Polynomial.from_roots(roots)
    found = []
    for r in factor_roots(p, 128):
        assert r.exact is not None
        found += [r.exact] * r.multiplicity
    assert sorted(found) == sorted(roots)


def test_numeric_roots_reconstruct_polynomial():
    p = Polynomial([7, -3, 0, 2, 1, 5])
    rts = poly_roots(p, 200)
    assert len(rts) == 5
    with workprec(200):
        for z in rts:
            assert abs(p(z, 200)) < mpfr(2) ** -180


def test_roots_of_unity_degree_64():
    p = Polynomial([-1] + [0] * 63 + [1])
    rts = poly_roots(p, 160)
    with workprec(160):
        for z in rts:
            assert abs(abs(z) - 1) < mpfr(2) ** -140
    assert len(rts) == 64


# ---------------------------------------------------------------- Pade

series_lists = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=9), min_size=9, max_size=9)


@settings(max_examples=150)
@given(st.integers(min_value=1, max_value=4), series_lists)
def test_pade_defining_property(n, tail):
    c = [Fraction(1)] + tail[: 2 * n]
    try:
        p = pade_from_series(c, n, 128, locate=False)
    except DegenerateTable:
        return
    assert p.numerator.degree <= n and p.denominator.degree <= n
    assert p.denominator.coeff(0) != 0
    assert series_of_quotient(p.numerator, p.denominator, 2 * n + 1) == c[: 2 * n + 1]


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_exp_pade_is_symmetric(n):
    p = pade_from_series(exp_series(2 * n + 1), n, 128, locate=False)
    num = p.numerator.scale(1 / p.denominator.coeff(0))
    den = p.denominator.scale(1 / p.denominator.coeff(0))
    assert all(num.coeff(j) == (-1) ** j * den.coeff(j) for j in range(n + 1))


def test_cos_pade_needs_even_order():
    pade_from_series(cos_series(9), 4, 128)
    with pytest.raises(DegenerateTable):
        pade_from_series(cos_series(7), 3, 128)


def test_polynomial_series_uses_lower_denominator():
    p = pade_from_series([1, 0, -1, 0, 0, 0, 0], 3, 128)
    assert p.denominator.degree == 0
    assert p(Fraction(1, 2)) == Fraction(3, 4)


def test_pade_rejects_bad_order():
    with pytest.raises(PreconditionError):
        pade_from_series([1, 1], 3, 64)


def test_float_pade_matches_exact():
    c = [mpfr(1) / gmpy2.fac(k) for k in range(7)]
    with workprec(128):
        c = [mpfr(1)] + [mpfr(1) / gmpy2.fac(k) for k in range(1, 7)]
    pf = pade_from_series(c, 3, 128, locate=False)
    pe = pade_from_series(exp_series(7), 3, 128, locate=False)
    with workprec(128):
        x = mpfr("0.3")
        assert abs(pf(x, 128) - pe(x, 128)) < mpfr(2) ** -110
    assert isinstance(pf(x, 128), (type(mpfr(0)), type(mpc(0))))
