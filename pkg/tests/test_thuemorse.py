"""Thue-Morse signs, block products, duplication and limit estimates."""

from fractions import Fraction

import gmpy2
import pytest
from gmpy2 import mpfr
from hypothesis import given
from hypothesis import strategies as st

from gammaprod.errors import PoleOrZero, PreconditionError
from gammaprod.mpcore import workprec
from gammaprod.thuemorse import (block_product_lhs_gamma, block_product_rhs, duplication_check, extension_check,
                                 factorial_route, fm_eval, limit_f, prouhet_check, q_estimate, tm_sign, tm_signs)


def test_signs():
    assert tm_signs(3) == [1, -1, -1, 1, -1, 1, 1, -1]
    for j in range(500):
        assert tm_sign(2 * j) == tm_sign(j) and tm_sign(2 * j + 1) == -tm_sign(j)


@pytest.mark.parametrize("m", range(1, 11))
def test_prouhet(m):
    rep = prouhet_check(m)
    assert rep.passed and rep.values["first_failure"] == m


def test_block_product_values():
    assert block_product_rhs(2) == Fraction(1, 3)
    assert block_product_rhs(3) == Fraction(7, 15)
    assert block_product_rhs(4) / block_product_rhs(3) == Fraction(143, 135)


@pytest.mark.parametrize("m", range(2, 11))
def test_block_product_routes(m):
    assert factorial_route(m) == block_product_rhs(m)
    r = block_product_lhs_gamma(m, 30, gamma_route=m <= 8)
    assert r.passed


@pytest.mark.parametrize("m", range(0, 11))
def test_duplication_exact(m):
    for x in (Fraction(1), Fraction(1, 3), Fraction(5, 2), Fraction(7, 11)):
        assert duplication_check(m, x)


@given(st.integers(min_value=0, max_value=7),
       st.fractions(min_value=Fraction(1, 60), max_value=50, max_denominator=60))
def test_duplication_property(m, x):
    assert duplication_check(m, x)


def test_fm_values():
    assert fm_eval(2, Fraction(1)) == Fraction(2, 3)
    assert fm_eval(0, Fraction(5)) == Fraction(5)
    with pytest.raises(PoleOrZero):
        fm_eval(3, Fraction(-2))


@pytest.mark.parametrize("x", [Fraction(1, 4), Fraction(1, 3), Fraction(3, 2), Fraction(1)])
def test_extension(x):
    assert extension_check(4, x, 30).passed


def test_limit_values_at_22():
    est, unc = limit_f(Fraction(1), 22)
    assert unc <= 1e-3
    with workprec(200):
        assert abs(est - 1 / gmpy2.sqrt(mpfr(2))) <= unc
    est, unc = limit_f(Fraction(1, 2), 22)
    assert unc <= 1e-3
    with workprec(200):
        assert abs(est - mpfr(1) / 2) <= unc


@pytest.mark.parametrize("m_max", [6, 10, 14, 18])
def test_limit_uncertainty_is_honest(m_max):
    for x, ref in ((Fraction(1), None), (Fraction(1, 2), Fraction(1, 2))):
        est, unc = limit_f(x, m_max, 64)
        with workprec(200):
            r = 1 / gmpy2.sqrt(mpfr(2)) if ref is None else mpfr(ref)
            assert abs(est - r) <= unc


def test_limit_float_argument():
    est, unc = limit_f(mpfr(1.0), 12, 64)
    exact, _ = limit_f(Fraction(1), 12, 64)
    assert abs(est - exact) <= unc


def test_q_estimate():
    rep = q_estimate(16)
    assert rep.passed
    assert abs(float(rep.values["Q"]) - 1.6281601297189) < 1e-12


def test_preconditions():
    with pytest.raises(PreconditionError):
        limit_f(Fraction(1), 1)
    with pytest.raises(PreconditionError):
        block_product_rhs(1)
