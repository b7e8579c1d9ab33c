"""Gamma-quotient evaluation of rational products and the worked examples."""

import math
import random
from fractions import Fraction

import gmpy2
import pytest
from gmpy2 import mpfr
from hypothesis import given, settings
from hypothesis import strategies as st

from gammaprod.errors import DivergentProduct, PreconditionError, ZeroFactor
from gammaprod.mpcore import Polynomial, digits_to_bits, pi, rel_digits, to_mpc, workprec
from gammaprod.ratprod import (RationalFunctionSpec, check_convergence, evaluate, evaluate_partial, spec_from_json,
                               spec_to_json)
from gammaprod.ratprod.applications import (alternating_cube_closed_form, alternating_cube_product,
                                            artin_integer_spec, count_multiplicative_partitions,
                                            cyclotomic_power_product, mellin_barnes_check, multpart_spec,
                                            multpart_tail_bound, multpart_value, phi_ramanujan, sine_product_spec,
                                            wallis_spec)


def test_wallis_fifty_digits():
    r = evaluate(wallis_spec(), 50)
    with workprec(200):
        assert rel_digits(r.value, pi(200) / 2) >= 50
    assert r.digits_certified >= 50
    assert str(r.closed_form) == "G(1/2)*G(3/2) / (G(1)*G(1))"


def test_sine_product_rational_argument():
    z = Fraction(1, 3)
    r = evaluate(sine_product_spec(z), 40)
    with workprec(200):
        ref = gmpy2.sin(pi(200) / 3) / (pi(200) / 3)
    assert rel_digits(r.value, ref) >= 40


def test_artin_integer_analogue():
    r = evaluate(artin_integer_spec(), 40)
    with workprec(200):
        ref = -gmpy2.cos(gmpy2.sqrt(mpfr(5)) * pi(200) / 2) / pi(200)
    assert rel_digits(r.value, ref) >= 40


def test_alternating_cubes():
    r = alternating_cube_product(50)
    assert r.passed
    assert rel_digits(r.value, alternating_cube_closed_form(220)) >= 50


@pytest.mark.parametrize("num,den,condition", [
    ([1, 1], [2, 1], "subleading"),
    ([1, 2], [1, 1], "leading"),
    ([1, 0, 1], [1, 1], "degree"),
])
def test_divergence_verdicts(num, den, condition):
    spec = RationalFunctionSpec.from_coefficients([str(c) for c in num], [str(c) for c in den], 1)
    v = check_convergence(spec)
    assert not v and v.condition == condition
    with pytest.raises(DivergentProduct):
        evaluate(spec, 20)


def test_zero_factor_is_reported():
    spec = RationalFunctionSpec.from_roots([3, -1], [Fraction(1, 2), Fraction(3, 2)], 0)
    with pytest.raises(ZeroFactor) as exc:
        evaluate(spec, 20)
    assert exc.value.index == 3
    # excluding the zero index makes the product well defined again
    r = evaluate(spec.with_excluded([3]), 20)
    assert r.value != 0


def _random_spec(rng: random.Random) -> RationalFunctionSpec:
    while True:
        d = rng.randint(1, 3)

        def q():
            return Fraction(rng.randint(-30, 30), rng.randint(2, 7))
        alpha = [q() for _ in range(d)]
        beta = [q() for _ in range(d - 1)]
        beta.append(sum(alpha) - sum(beta))
        if all(r.denominator != 1 for r in alpha + beta) and sorted(alpha) != sorted(beta):
            return RationalFunctionSpec.from_roots(alpha, beta, rng.randint(0, 3))


def test_tail_bound_invariant():
    rng = random.Random(20240613)
    for _ in range(50):
        spec = _random_spec(rng)
        a, b = spec.roots(64)
        roots = [abs(complex(to_mpc(r, 64))) for r in a + b]
        C = sum(r * r for r in roots)
        M = math.ceil(10 * (1 + max(roots)))
        value = evaluate(spec, 30).value
        for m in (M, 3 * M):
            part = evaluate_partial(spec, m, 128)
            with workprec(128):
                dev = float(abs(part / value - 1))
            assert dev <= 2 * C / m


def test_index_shift_invariance():
    rng = random.Random(7)
    for _ in range(10):
        spec = _random_spec(rng)
        k0 = spec.start_index
        head = spec.factor(k0)
        full = evaluate(spec, 40).value
        rest = evaluate(spec.shifted(k0 + 1), 40).value
        with workprec(200):
            assert rel_digits(full, to_mpc(head, 200) * rest) >= 38


def test_exclusion_consistency():
    rng = random.Random(11)
    for _ in range(10):
        spec = _random_spec(rng)
        m = spec.start_index + rng.randint(0, 5)
        am = spec.factor(m)
        full = evaluate(spec, 40).value
        excl = evaluate(spec.with_excluded([m]), 40).value
        with workprec(200):
            assert rel_digits(full, excl * to_mpc(am, 200)) >= 38


def test_conjugate_closure_for_real_coefficients():
    spec = RationalFunctionSpec.from_coefficients(["3", "0", "1"], ["5", "0", "1"], 0)
    r = evaluate(spec, 40)
    prec = r.value.precision[0]
    assert abs(r.value.imag) < mpfr(2) ** (-prec + 16)


@given(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=9), min_size=2, max_size=4),
       st.integers(min_value=1, max_value=4), st.lists(st.integers(min_value=4, max_value=9), max_size=2))
def test_spec_json_round_trip(coeffs, k0, excl):
    if coeffs[-1] == 0:
        coeffs[-1] = Fraction(1)
    spec = RationalFunctionSpec(Polynomial(coeffs), Polynomial(coeffs[:-1] + [coeffs[-1] * 2]), k0,
                                frozenset(excl))
    back = spec_from_json(spec_to_json(spec))
    assert back == spec


def test_spec_json_rejects_unknown_fields():
    with pytest.raises(PreconditionError):
        spec_from_json('{"numerator": ["1"], "denominator": ["1"], "k0": 2}')


# ---------------------------------------------------------------- applications

def test_multiplicative_partition_counts():
    assert count_multiplicative_partitions(18) == 4
    assert count_multiplicative_partitions(1) == 1
    assert [count_multiplicative_partitions(n) for n in (12, 16, 24)] == [4, 5, 7]
    for p, q in ((2, 3), (5, 7), (11, 13), (3, 17)):
        assert count_multiplicative_partitions(p * q) == 2


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_multpart_value_against_partial_product(n):
    r = multpart_value(n, 30)
    assert r.passed
    M = 2000
    part = evaluate_partial(multpart_spec(n), M, 128)
    with workprec(128):
        dev = float(abs(part / r.value - 1))
    assert dev <= multpart_tail_bound(n, M)


def test_phi_ramanujan_equal_arguments():
    r = phi_ramanujan(1, 1, 30)
    assert {c.name for c in r.checks} == {"engine_route", "hyperbolic_form", "partial_product"}
    assert r.passed


def test_phi_ramanujan_general():
    r = phi_ramanujan(Fraction(1, 2), Fraction(1, 3), 30, partial_terms=2000)
    assert r.passed


@pytest.mark.parametrize("n,z", [(2, Fraction(1, 2)), (3, Fraction(1, 2)), (4, Fraction(1, 3)), (5, Fraction(2, 3))])
def test_cyclotomic_products(n, z):
    assert cyclotomic_power_product(n, z, 30).passed


def test_cyclotomic_removed_index():
    assert cyclotomic_power_product(3, removed=2, digits=30).passed


@pytest.mark.parametrize("a,b", [(1, 3), (Fraction(1, 2), 2), (Fraction(3, 2), Fraction(7, 2))])
def test_mellin_barnes(a, b):
    rep = mellin_barnes_check(a, b, 8)
    assert rep.passed
    assert rep.values["digits_agreement"] >= 8


def test_mellin_barnes_closed_form_at_one_three():
    rep = mellin_barnes_check(1, 3, 8)
    with workprec(100):
        assert rel_digits(rep.values["closed_form"], pi(100) / 3) >= 25


def test_mellin_barnes_domain():
    with pytest.raises(PreconditionError):
        mellin_barnes_check(1, Fraction(3, 2))


def test_digit_request_is_honoured():
    for d in (5, 20, 75):
        r = evaluate(wallis_spec(), d)
        assert r.digits_certified >= d
        with workprec(digits_to_bits(d) + 40):
            assert rel_digits(r.value, pi(digits_to_bits(d) + 40) / 2) >= d
