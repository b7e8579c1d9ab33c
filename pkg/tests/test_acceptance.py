"""Acceptance criteria, one printed pass/fail line each.

Run under pytest (lines appear in the verbose log and in a summary section)
or directly with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import math
import subprocess
import sys
import time
from fractions import Fraction
from pathlib import Path

import gmpy2
import pytest
from gmpy2 import mpfr

from gammaprod.accel import (KB_PUBLISHED, TABLE1_COLUMNS, TABLE1_N, TABLE1_PUBLISHED, TABLE2_N, TABLE2_PUBLISHED,
                             digits_table, exp_pade_poly, kepler_bouwkamp, zeta_approx, zeta_limit, zeta_reference,
                             zeta_table)
from gammaprod.cli import run
from gammaprod.gammaid import (chowla_selberg_check, class_number, coset_product_report, coset_to_rational_product,
                               nijenhuis_coset, totient_gamma_product, zetasumphi_independence)
from gammaprod.mpcore import abs_digits, format_big, pi, rel_digits, workprec
from gammaprod.ratprod import evaluate_partial
from gammaprod.ratprod.applications import (alternating_cube_closed_form, alternating_cube_product,
                                            count_multiplicative_partitions, mellin_barnes_check, multpart_spec,
                                            multpart_tail_bound, multpart_value, phi_ramanujan)
from gammaprod.thuemorse import (block_product_lhs_gamma, block_product_rhs, duplication_check, factorial_route,
                                 limit_f, prouhet_check)

ROOT = Path(__file__).resolve().parent.parent
KB_COLD = """
import json, time
t = time.perf_counter()
from gammaprod.accel import kb_reference, digits_table, TABLE1_N, TABLE1_COLUMNS
ref = kb_reference(200)
grid = digits_table(TABLE1_N, TABLE1_COLUMNS, ref, 200)
print(json.dumps({"grid": grid, "seconds": time.perf_counter() - t, "ref": format(ref.value, ".210g")}))
"""


# ---------------------------------------------------------------- criteria

def criterion_1():
    import io
    import json
    t = time.perf_counter()
    buf = io.StringIO()
    code = run(["prod-rational", "--num", "4,8,4", "--den", "3,8,4", "--digits", "50", "--format", "json"], buf)
    dt = time.perf_counter() - t
    r = json.loads(buf.getvalue())
    with workprec(220):
        expected = format_big(pi(220) / 2, 50)
    match = r["value"]["re"] == expected
    ok = code == 0 and match and r["value"]["digits"] >= 50 and dt < 1.0
    return ok, (f"Wallis via prod-rational: 50-digit value {'equals' if match else 'differs from'} pi/2, "
                f"certified {r['value']['digits']}, {dt:.2f} s")


def criterion_2():
    r = alternating_cube_product(50)
    d = rel_digits(r.value, alternating_cube_closed_form(260))
    return d >= 50 and r.passed, f"alternating cubes: engine vs (pi/12)(1+sqrt2 cosh(sqrt3 pi/4)) to {d:.1f} digits"


_KB_CACHE: dict = {}


def _kb_cold():
    if not _KB_CACHE:
        import json
        proc = subprocess.run([sys.executable, "-c", KB_COLD], capture_output=True, text=True, check=True,
                              timeout=600, cwd=ROOT)
        _KB_CACHE.update(json.loads(proc.stdout))
    return _KB_CACHE


def _kb_parts():
    cold = _kb_cold()
    ref = mpfr(cold["ref"], 800)
    r16 = kepler_bouwkamp(16, 1000, 200, estimate=False)
    agree = abs_digits(r16.value, ref)
    first16 = format_big(ref, 16)
    grid = {(n, N): v for n, row in zip(TABLE1_N, cold["grid"]) for N, v in zip(TABLE1_COLUMNS, row)}
    strict, printed = [], []
    for n in TABLE1_N:
        for j, N in enumerate(TABLE1_COLUMNS):
            pub = TABLE1_PUBLISHED[n][j]
            dev = abs(grid[(n, N)] - pub)
            if dev > 0.05:
                strict.append((n, N, grid[(n, N)], pub))
            # "107." and "124." are printed to units
            tol = 0.5 if pub >= 100 else 0.05
            if dev > tol:
                printed.append((n, N))
    return agree, first16, strict, printed, cold["seconds"]


def criterion_3():
    agree, first16, strict, printed, seconds = _kb_parts()
    cells = "; ".join(f"n={n},N={N}: {v:.3f} vs {p}" for n, N, v, p in strict)
    ok = agree >= 120 and first16 == KB_PUBLISHED and not strict and seconds < 60
    detail = (f"KB(16,1000) vs reference {agree:.1f} digits, reference {first16}, "
              f"{48 - len(strict)}/48 cells within 0.05" + (f" [{cells}]" if cells else "") +
              f", {48 - len(printed)}/48 within printed precision, grid {seconds:.1f} s")
    return ok, detail


def criterion_4():
    ref, _ = zeta_reference(3)
    t = zeta_table(TABLE2_N, 3, 60, ref)
    worst = max(abs(a - b) for a, b in zip(t, TABLE2_PUBLISHED))
    _, log = zeta_limit(3, 128)
    with workprec(128):
        lim = abs_digits(zeta_approx(60, 3, 30), gmpy2.log(mpfr(193) / 71))
    r2 = exp_pade_poly(2)(Fraction(1)) / exp_pade_poly(2)(Fraction(-1))
    r3 = exp_pade_poly(3)(Fraction(1)) / exp_pade_poly(3)(Fraction(-1))
    ok = worst <= 0.05 and lim >= 12 and r2 == Fraction(19, 7) and r3 == Fraction(193, 71)
    cells = " ".join(f"{v:.3f}" for v in t)
    return ok, f"zeta_n(3) digits [{cells}], max deviation {worst:.4f}; limit {lim:.1f} digits; {r2}, {r3}"


def criterion_5():
    worst = 0.0
    ok = True
    for n in range(2, 7):
        r = multpart_value(n, 30)
        M = 2000
        part = evaluate_partial(multpart_spec(n), M, 128)
        with workprec(128):
            dev = float(abs(part / r.value - 1))
        bound = multpart_tail_bound(n, M)
        ok &= r.passed and dev <= bound
        worst = max(worst, dev / bound)
    c18 = count_multiplicative_partitions(18)
    return ok and c18 == 4, f"n=2..6 within tail bound (max deviation/bound {worst:.3f}); a(18) = {c18}"


def criterion_6():
    r = phi_ramanujan(1, 1, 30, partial_terms=10_000)
    names = {c.name: c.passed for c in r.checks}
    mb = mellin_barnes_check(1, 3, 8)
    with workprec(100):
        pi3 = rel_digits(mb.values["closed_form"], pi(100) / 3)
    agree = mb.values["digits_agreement"]
    ok = r.passed and set(names) == {"engine_route", "hyperbolic_form", "partial_product"} and pi3 >= 25 \
        and agree >= 8 and mb.passed
    return ok, f"phi(1,1) checks {names}; Mellin-Barnes(1,3) closed form pi/3, quadrature {agree:.1f} digits"


def criterion_7():
    bad = [n for n in range(2, 201) if not totient_gamma_product(n, 30)[1].passed]
    A1, b1, rep1 = nijenhuis_coset(7, 1, 30)
    A3, b3, rep3 = nijenhuis_coset(7, 3, 30)
    with workprec(140):
        four = rel_digits(rep1.values["product"], 4 * pi(140) ** mpfr(1.5))
        two = rel_digits(rep3.values["product"], 2 * pi(140) ** mpfr(1.5))
    _, e14 = coset_to_rational_product({1, 9, 11}, 14)
    c14 = coset_product_report({1, 9, 11}, 14, 30)
    A31, _, _ = nijenhuis_coset(31, 1, 30)
    _, e31 = coset_to_rational_product(A31, 62)
    c31 = coset_product_report(A31, 62, 30)
    ok = (not bad and rep1.passed and rep3.passed and four >= 30 and two >= 30 and e14 == 2 and e31 == 8
          and c14.passed and c31.passed)
    return ok, (f"totient 2..200 failures {bad}; 4pi^(3/2) {four:.1f} and 2pi^(3/2) {two:.1f} digits; "
                f"coset products {e14} and {e31} through the engine")


def criterion_8():
    rep = zetasumphi_independence([6, 10, 12, 15], 200, 30)
    worst = max(c.delta / c.tolerance for c in rep.checks if c.tolerance)
    return rep.passed, f"{len(rep.checks)} checks over n in (6, 10, 12, 15), max gap/bound {worst:.3f}"


def criterion_9():
    ds = (3, 4, 7, 8, 11, 15, 20)
    reps = {d: chowla_selberg_check(d, 30) for d in ds}
    hs = sorted({class_number(d) for d in ds})
    worst = max(r.checks[0].delta for r in reps.values())
    ok = all(r.passed for r in reps.values()) and hs == [1, 2]
    return ok, f"d in {ds}, class numbers {hs}, max relative difference {worst:.2e}"


def criterion_10():
    ok = True
    for m in range(2, 11):
        r = block_product_lhs_gamma(m, 30, gamma_route=m <= 8)
        ok &= r.passed and factorial_route(m) == block_product_rhs(m)
    for m in range(0, 11):
        for x in (Fraction(1), Fraction(1, 3), Fraction(5, 2)):
            ok &= duplication_check(m, x)
    for m in range(1, 11):
        ok &= prouhet_check(m).passed
    ok &= block_product_rhs(3) == Fraction(7, 15)
    e1, u1 = limit_f(Fraction(1), 22)
    eh, uh = limit_f(Fraction(1, 2), 22)
    with workprec(200):
        g1 = abs(e1 - 1 / gmpy2.sqrt(mpfr(2)))
        gh = abs(eh - mpfr(1) / 2)
    ok &= g1 <= u1 <= 1e-3 and gh <= uh <= 1e-3
    return bool(ok), (f"exact routes, duplication and Prouhet for m <= 10; rhs(3) = 7/15; "
                      f"|f(1) - 1/sqrt2| = {float(g1):.1e} <= {float(u1):.1e}, "
                      f"|f(1/2) - 1/2| = {float(gh):.1e} <= {float(uh):.1e}")


PROPERTY_SELECTION = ("test_reflection or test_duplication or test_recurrence or test_pade_defining_property "
                      "or test_tail_bound_invariant or test_psi_closed_form")


def criterion_11():
    t = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
                           "tests/test_mpcore.py", "tests/test_ratprod.py", "tests/test_gammaid.py",
                           "-k", PROPERTY_SELECTION], capture_output=True, text=True, cwd=ROOT, timeout=600)
    dt = time.perf_counter() - t
    tail = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr.strip()[-200:]
    return proc.returncode == 0 and dt < 300, f"property suites: {tail} ({dt:.1f} s)"


TITLES = {
    1: "Wallis product", 2: "alternating cubes", 3: "Kepler-Bouwkamp and Table 1", 4: "Table 2 and limits",
    5: "multiplicative partitions", 6: "Ramanujan products", 7: "gamma identities", 8: "zetasumphi",
    9: "Chowla-Selberg", 10: "Thue-Morse", 11: "property suites",
}
CRITERIA = {i: globals()[f"criterion_{i}"] for i in TITLES}


def _line(i: int, ok: bool, detail: str) -> str:
    return f"[{'PASS' if ok else 'FAIL'}] criterion {i:2d} ({TITLES[i]}): {detail}"


@pytest.fixture
def emit(request):
    reporter = request.config.pluginmanager.getplugin("terminalreporter")

    def write(i, ok, detail):
        line = _line(i, ok, detail)
        request.config.acceptance_lines.append(line)
        if reporter is not None:
            reporter.write_line("")
            reporter.write_line(line)
    return write


def _params():
    out = []
    for i in TITLES:
        marks = ()
        if i == 3:
            marks = pytest.mark.xfail(
                strict=True,
                reason="two Table 1 entries (107., 124.) are printed to units, so a 0.05 tolerance is unattainable")
        out.append(pytest.param(i, id=f"criterion_{i:02d}", marks=marks))
    return out


@pytest.mark.parametrize("i", _params())
def test_criterion(i, emit):
    ok, detail = CRITERIA[i]()
    emit(i, ok, detail)
    assert ok, detail


def test_criterion_03_attainable_parts():
    # everything in criterion 3 except the 0.05 tolerance on the two unit-precision cells
    agree, first16, strict, printed, seconds = _kb_parts()
    assert agree >= 120
    assert first16 == KB_PUBLISHED
    assert not printed
    assert {(n, N) for n, N, _, _ in strict} == {(14, 1000), (16, 1000)}
    assert seconds < 60


if __name__ == "__main__":
    failed = 0
    for i, fn in CRITERIA.items():
        ok, detail = fn()
        failed += not ok
        print(_line(i, ok, detail), flush=True)
    sys.exit(1 if failed else 0)
