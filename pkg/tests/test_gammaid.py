"""Totient gamma products, cosets, power sums, Kronecker symbol and Chowla-Selberg."""

import math
from fractions import Fraction

import gmpy2
import pytest
from gmpy2 import mpc, mpfr
from hypothesis import given, settings
from hypothesis import strategies as st

from gammaprod.errors import NotFundamental, PreconditionError
from gammaprod.gammaid import (CoprimeSet, QuadraticForm, chowla_selberg_check, class_number, coset_product_report,
                               coset_to_rational_product, dedekind_eta, is_fundamental, kronecker_symbol,
                               nijenhuis_coset, prime_power_base, psi_brute, psi_power_sum, reduced_forms,
                               totient_gamma_product, zetasumphi_check, zetasumphi_independence)
from gammaprod.mpcore import gamma_real, pi, rel_digits, workprec
from gammaprod.ratprod import evaluate


def test_totient_product_all_moduli():
    for n in range(2, 201):
        _, rep = totient_gamma_product(n, 30)
        assert rep.passed, n


def test_totient_prime_power_correction():
    closed, _ = totient_gamma_product(9, 30)
    with workprec(120):
        assert rel_digits(closed, (2 * pi(120)) ** 3 / gmpy2.sqrt(mpfr(3))) >= 30


def test_coprime_set():
    s = CoprimeSet.of(12)
    assert list(s) == [1, 5, 7, 11] and s.phi == 4 and 5 in s
    assert prime_power_base(27) == 3 and prime_power_base(12) is None


@pytest.mark.parametrize("rep,expected_b,expected_A", [(1, 2, {1, 9, 11}), (3, 1, {3, 5, 13})])
def test_coset_mod_fourteen(rep, expected_b, expected_A):
    A, b, report = nijenhuis_coset(7, rep, 30)
    assert set(A) == expected_A and b == expected_b
    assert report.passed
    with workprec(130):
        assert rel_digits(report.values["product"], 2 ** b * pi(130) ** mpfr(1.5)) >= 30


def test_coset_rational_products():
    _, expected = coset_to_rational_product({1, 9, 11}, 14)
    assert expected == 2
    assert coset_product_report({1, 9, 11}, 14, 30).passed
    A, b, _ = nijenhuis_coset(31, 1, 30)
    assert sorted(A) == [1, 33, 35, 39, 47] and b == 4
    _, expected = coset_to_rational_product(A, 62)
    assert expected == 8
    rep = coset_product_report(A, 62, 30)
    assert rep.passed


def test_coset_rejects_non_coset():
    with pytest.raises(PreconditionError):
        coset_to_rational_product({1, 3, 5}, 14)
    with pytest.raises(PreconditionError):
        nijenhuis_coset(8)


def test_psi_closed_form_exhaustive():
    for k in range(0, 9):
        for n in range(2, 501):
            assert psi_power_sum(k, n, verify=False) == psi_brute(k, n)


@given(st.integers(min_value=0, max_value=12), st.integers(min_value=2, max_value=3000))
def test_psi_closed_form_property(k, n):
    assert psi_power_sum(k, n, verify=False) == psi_brute(k, n)


def test_psi_examples():
    assert psi_power_sum(0, 12) == 4
    assert psi_power_sum(1, 12) == 24
    assert psi_power_sum(2, 10) == 140


@pytest.mark.parametrize("n", [6, 10, 12, 15])
def test_zetasumphi(n):
    rep = zetasumphi_check(n, 200, 30)
    assert rep.passed


def test_zetasumphi_independence():
    assert zetasumphi_independence([6, 10, 12, 15], 200, 30).passed


def test_zetasumphi_prime_power_rejected():
    with pytest.raises(PreconditionError):
        zetasumphi_check(9)


# ---------------------------------------------------------------- Kronecker and forms

def test_kronecker_matches_gmpy2():
    for D in range(-60, 61):
        for m in range(-30, 31):
            assert kronecker_symbol(D, m) == gmpy2.kronecker(D, m), (D, m)


@given(st.integers(min_value=-500, max_value=500), st.integers(min_value=1, max_value=400),
       st.integers(min_value=1, max_value=400))
def test_kronecker_multiplicative_in_bottom(D, m, n):
    assert kronecker_symbol(D, m * n) == kronecker_symbol(D, m) * kronecker_symbol(D, n)


@given(st.integers(min_value=-300, max_value=300), st.integers(min_value=-300, max_value=300),
       st.integers(min_value=1, max_value=500))
def test_kronecker_multiplicative_in_top(a, b, m):
    assert kronecker_symbol(a * b, m) == kronecker_symbol(a, m) * kronecker_symbol(b, m)


def test_fundamental_discriminants():
    negative = [d for d in range(1, 60) if is_fundamental(-d)]
    assert negative == [3, 4, 7, 8, 11, 15, 19, 20, 23, 24, 31, 35, 39, 40, 43, 47, 51, 52, 55, 56, 59]
    assert not is_fundamental(-12) and not is_fundamental(1)


def test_class_numbers():
    known = {3: 1, 4: 1, 7: 1, 8: 1, 11: 1, 15: 2, 20: 2, 23: 3, 24: 2, 40: 2, 47: 5, 71: 7, 84: 4, 163: 1}
    for d, h in known.items():
        assert class_number(d) == h, d
    assert reduced_forms(15) == [QuadraticForm(1, 1, 4), QuadraticForm(2, 1, 2)]
    assert reduced_forms(20) == [QuadraticForm(1, 0, 5), QuadraticForm(2, 2, 3)]
    with pytest.raises(NotFundamental):
        reduced_forms(12)


def test_reduced_form_invariants():
    for d in (23, 71, 84, 195):
        for q in reduced_forms(d):
            assert q.discriminant == -d and q.is_reduced and q.is_primitive


def test_eta_at_i():
    e = dedekind_eta(mpc(0, 1), 200)
    with workprec(200):
        ref = gamma_real(Fraction(1, 4), 200) / (2 * pi(200) ** (mpfr(3) / 4))
        assert rel_digits(e.value, ref) >= 55
    assert e.tail_bound < 1e-60


@pytest.mark.parametrize("d", [3, 4, 7, 8, 11, 15, 20, 23, 24, 84])
def test_chowla_selberg(d):
    rep = chowla_selberg_check(d, 30)
    assert rep.passed


def test_chowla_selberg_precondition():
    with pytest.raises(NotFundamental):
        chowla_selberg_check(12)
