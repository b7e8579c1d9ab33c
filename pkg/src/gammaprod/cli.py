"""Command-line front end.

Input syntax
------------
Exact numbers are written ``p/q`` or ``a+bi`` with rational ``a`` and ``b``.
Polynomials in ``k`` are comma-separated ascending coefficients, so
``--num "4,8,4"`` is ``4 + 8k + 4k^2``. Integer lists accept ranges:
``--n 2..10`` or ``--n 2,4,6``.

A rational product may also be given as a JSON spec (``--spec`` or
``--spec-file``)::

    {"numerator": ["4", "8", "4"], "denominator": ["3", "8", "4"],
     "start_index": 0, "excluded": [], "precision": null}

``precision`` (bits) is only present for floating-point coefficients.

Reports
-------
``--format json`` prints::

    {"command", "params", "value": {"re", "im", "digits"}, "closed_form",
     "checks": [{"name", "pass", "delta", "tolerance"}], "extra", "notes",
     "version", "timing"}

``value.digits`` is the number of certified digits, or null for an exact
value. Everything except ``timing`` is deterministic, and ``params`` re-parses
to the same job via :meth:`JobSpec.from_report`.

Exit codes: 0 success, 1 input or numeric error, 2 an identity check failed.
The environment variable ``GAMMAPROD_DIGITS`` sets the default number of
digits; ``--digits`` overrides it.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

import gmpy2
from gmpy2 import mpfr

from . import __version__
from .accel import (TABLE1_COLUMNS, TABLE1_N, TABLE1_PUBLISHED, TABLE2_N, TABLE2_PUBLISHED, FactorSpec, SeriesTerm,
                    accelerate_product, accelerate_sum, digits_table, kb_reference, zeta_limit, zeta_reference,
                    zeta_table)
from .errors import DivergentProduct, GammaProdError
from .gammaid import (chowla_selberg_check, coset_product_report, nijenhuis_coset, psi_brute, psi_power_sum,
                      totient_gamma_product, zetasumphi_independence)
from .mpcore import (abs_digits, digits_to_bits, euler_gamma_const, format_big, format_exact, is_exact, parse_number,
                     pi, rel_digits, to_mpc, workprec, zeta_int)
from .mpcore.numbers import simplify_exact
from .ratprod import RationalFunctionSpec, check_convergence, evaluate, spec_from_dict, spec_to_dict
from .ratprod import applications as apps
from .reports import Check, CheckReport
from .thuemorse import (block_product_lhs_gamma, duplication_check, extension_check, fm_eval, limit_f,
                        prouhet_check, q_estimate)

ENV_DIGITS = "GAMMAPROD_DIGITS"
DEFAULT_DIGITS = 30
TABLE_DIGITS = {"kb": 200, "zeta": 60}

COMMANDS = ("prod-rational", "prod-accelerate", "sum-accelerate", "zeta", "gamma-id", "nijenhuis",
            "chowla-selberg", "thue-morse", "tables")


class InputError(Exception):
    """Bad command-line input; exit code 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


# ---------------------------------------------------------------- argument types

def _number(text: str):
    try:
        return parse_number(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _number_str(text: str) -> str:
    _number(text)
    return text.strip()


def _coeff_list(text: str) -> str:
    items = [s for s in text.split(",")]
    if not items or any(not s.strip() for s in items):
        raise argparse.ArgumentTypeError(f"empty coefficient in {text!r}")
    for s in items:
        _number(s)
    return ",".join(s.strip() for s in items)


def _int_list(text: str) -> str:
    _expand_ints(text)
    return text.replace(" ", "")


def _expand_ints(text: str) -> list[int]:
    out = []
    try:
        for part in text.replace(" ", "").split(","):
            if not part:
                continue
            if ".." in part:
                a, b = part.split("..")
                out.extend(range(int(a), int(b) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid integer list {text!r}") from None
    return out


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid int value {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


# ---------------------------------------------------------------- job description

@dataclass(frozen=True)
class JobSpec:
    """One invocation: subcommand, its parameters, digits and output format."""

    command: str
    params: dict = field(default_factory=dict)
    digits: int | None = None
    output: str = "text"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.digits is not None and self.digits < 1:
            raise InputError("argument --digits: must be >= 1")
        known = _command_dests(self.command)
        unknown = set(self.params) - known
        if unknown:
            raise InputError(f"unknown parameters for {self.command}: {sorted(unknown)}")

    def to_argv(self) -> list[str]:
        argv = [self.command]
        for key in sorted(self.params):
            value = self.params[key]
            flag = "--" + key.replace("_", "-")
            if value is True:
                argv.append(flag)
            elif value is not None and value is not False:
                argv += [flag, str(value)]
        if self.digits is not None:
            argv += ["--digits", str(self.digits)]
        return argv + ["--format", self.output]

    @classmethod
    def from_report(cls, report: dict) -> "JobSpec":
        params = dict(report["params"])
        digits = params.pop("digits", None)
        output = params.pop("format", "json")
        return cls(report["command"], params, digits, output)

    @classmethod
    def from_args(cls, args: argparse.Namespace) -> "JobSpec":
        params = {k: v for k, v in vars(args).items() if k not in ("command", "digits", "format") and v is not None}
        return cls(args.command, params, args.digits, args.format)


@dataclass
class Outcome:
    value: object = None
    exact: bool = False
    certified: int | None = None
    closed_form: object = None
    checks: list = field(default_factory=list)
    extra: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    table: dict | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def take(self, rep: CheckReport, prefix: str | None = None) -> None:
        for c in rep.checks:
            self.checks.append(Check(f"{prefix}.{c.name}" if prefix else c.name, c.passed, c.delta, c.tolerance))


# ---------------------------------------------------------------- parser

def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--digits", type=_positive, default=None,
                   help=f"decimal digits (default ${ENV_DIGITS} or {DEFAULT_DIGITS})")
    p.add_argument("--format", choices=("text", "json", "csv"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gammaprod", description="Closed forms and acceleration of infinite products.")
    parser.add_argument("--version", action="version", version=f"gammaprod {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("prod-rational", help="prod_{k >= k0} N(k)/D(k) as a gamma quotient")
    p.add_argument("--num", type=_coeff_list, help="numerator coefficients, ascending")
    p.add_argument("--den", type=_coeff_list, help="denominator coefficients, ascending")
    p.add_argument("--start", type=int, help="first index k0 (default 0)")
    p.add_argument("--exclude", type=_int_list, help="indices to skip")
    p.add_argument("--spec", help="spec as a JSON object")
    p.add_argument("--spec-file", help="path of a JSON spec")
    p.add_argument("--example", choices=("wallis", "sine", "artin", "alternating-cubes", "multpart", "phi",
                                         "cyclotomic"))
    p.add_argument("--z", type=_number_str, help="argument of the sine or cyclotomic product")
    p.add_argument("--n", type=int, help="exponent for multpart or cyclotomic")
    p.add_argument("--alpha", type=_number_str)
    p.add_argument("--beta", type=_number_str)
    p.add_argument("--removed", type=int, help="cyclotomic variant z = m with k = m skipped")
    _common(p)

    p = sub.add_parser("prod-accelerate", help="prod f(c/k^d) with a Pade tail")
    p.add_argument("--factor", choices=("cos", "exp", "series"), help="outer function (default cos)")
    p.add_argument("--series", type=_coeff_list, help="Maclaurin coefficients for --factor series")
    p.add_argument("--c", help="scale c: rational, optionally times pi (e.g. pi, 1/2*pi, pi/3)")
    p.add_argument("--d", type=_positive, help="power d of k")
    p.add_argument("--start", type=_positive, help="first index")
    p.add_argument("--n", type=_positive, help="Pade order (default 8)")
    p.add_argument("--N", type=_positive, help="first index of the tail (default 10)")
    p.add_argument("--no-estimate", action="store_const", const=True, help="skip the order n+2 comparison")
    _common(p)

    p = sub.add_parser("sum-accelerate", help="sum N(k)/D(k) via exp-Pade tail products")
    p.add_argument("--num", type=_coeff_list, required=True)
    p.add_argument("--den", type=_coeff_list, required=True)
    p.add_argument("--start", type=int, help="first index (default 1)")
    p.add_argument("--exclude", type=_int_list)
    p.add_argument("--n", type=_positive, help="Pade order (default 6)")
    p.add_argument("--N", type=_positive, help="first index of the tail (default 10)")
    _common(p)

    p = sub.add_parser("zeta", help="zeta_n(m), the order-n exp-Pade approximation of zeta(m)")
    p.add_argument("--m", type=int, help="argument (default 3)")
    p.add_argument("--n", type=_positive, help="Pade order (default 6)")
    p.add_argument("--N", type=_positive, help="exact terms below N (default 1)")
    p.add_argument("--limit", action="store_const", const=True, help="report the m -> infinity limit")
    _common(p)

    p = sub.add_parser("gamma-id", help="gamma-function identities")
    p.add_argument("--identity", required=True, choices=("totient", "zetasumphi", "psi", "mellin-barnes"))
    p.add_argument("--n", type=_int_list, help="modulus or list of moduli")
    p.add_argument("--k", type=int, help="power for psi")
    p.add_argument("--K", type=_positive, help="terms of the zetasumphi series (default 200)")
    p.add_argument("--a", type=_number_str)
    p.add_argument("--b", type=_number_str)
    _common(p)

    p = sub.add_parser("nijenhuis", help="cosets of <n+2> in (Z/2n)^* and their gamma products")
    p.add_argument("--n", type=int, help="odd n > 1")
    p.add_argument("--rep", type=int, help="coset representative (default 1)")
    p.add_argument("--coset", type=_int_list, help="explicit coset elements")
    p.add_argument("--modulus", type=int, help="modulus 2n for --coset")
    _common(p)

    p = sub.add_parser("chowla-selberg", help="gamma product against eta values over reduced forms")
    p.add_argument("--d", type=_int_list, required=True, help="d with -d a fundamental discriminant")
    _common(p)

    p = sub.add_parser("thue-morse", help="Thue-Morse product identities")
    p.add_argument("--check", required=True,
                   choices=("prouhet", "block-product", "duplication", "extension", "limit", "q"))
    p.add_argument("--m", type=_int_list, help="block exponent(s)")
    p.add_argument("--x", type=_number_str, help="argument (default 1)")
    p.add_argument("--m-max", type=int, help="cutoff exponent for limit and q (default 22)")
    p.add_argument("--prec", type=_positive, help="bits for limit and q (default 64)")
    _common(p)

    p = sub.add_parser("tables", help="digit tables for Kepler-Bouwkamp and zeta(3)")
    p.add_argument("--which", required=True, choices=("kb", "zeta"))
    p.add_argument("--n", type=_int_list, help="Pade orders")
    p.add_argument("--N", type=_int_list, help="tail starts (kb)")
    p.add_argument("--m", type=int, help="zeta argument (default 3)")
    p.add_argument("--published", action="store_const", const=True,
                   help="compare with the published grid at its printed precision")
    _common(p)
    return parser


def _command_dests(command: str) -> set[str]:
    parser = build_parser()
    for action in parser._subparsers._group_actions:
        sub = action.choices[command]
        return {a.dest for a in sub._actions if a.dest not in ("help", "digits", "format")}
    return set()


# ---------------------------------------------------------------- helpers

def _only(args, allowed: set[str], mode: str, names: tuple[str, ...]) -> None:
    for name in names:
        if getattr(args, name, None) is not None and name not in allowed:
            raise InputError(f"argument --{name.replace('_', '-')}: not used with {mode}")


def _need(args, name: str, mode: str):
    v = getattr(args, name, None)
    if v is None:
        raise InputError(f"argument --{name.replace('_', '-')}: required for {mode}")
    return v


def _single(text: str, flag: str) -> int:
    vals = _expand_ints(text)
    if len(vals) != 1:
        raise InputError(f"argument --{flag}: expected a single integer")
    return vals[0]


def _from_report(ev, out: Outcome) -> Outcome:
    out.value = ev.value
    out.certified = ev.digits_certified
    out.closed_form = ev.closed_form
    out.checks.extend(ev.checks)
    return out


def _certified_check(out: Outcome, digits: int) -> None:
    got = out.certified or 0
    out.checks.append(Check("certified_digits", got >= digits, 0.0 if got >= digits else 10.0 ** -got,
                            10.0 ** -digits))


def _ref_check(out: Outcome, name: str, ref, digits: int) -> None:
    d = rel_digits(out.value, ref)
    out.checks.append(Check(name, d >= digits - 1, 0.0 if d == math.inf else 10.0 ** -d, 10.0 ** -(digits - 1)))


# ---------------------------------------------------------------- commands

_PROD_NAMES = ("num", "den", "start", "exclude", "spec", "spec_file", "z", "n", "alpha", "beta", "removed")
_EXAMPLE_PARAMS = {
    "wallis": set(), "sine": {"z"}, "artin": set(), "alternating-cubes": set(), "multpart": {"n"},
    "phi": {"alpha", "beta"}, "cyclotomic": {"n", "z", "removed"},
}


def _load_spec(args) -> RationalFunctionSpec:
    sources = [s for s in ("num", "spec", "spec_file") if getattr(args, s) is not None]
    if len(sources) != 1:
        raise InputError("give exactly one of --num/--den, --spec, --spec-file or --example")
    if args.spec is not None or args.spec_file is not None:
        _only(args, {"spec", "spec_file"}, "a JSON spec", _PROD_NAMES)
        if args.spec is not None:
            text, flag = args.spec, "--spec"
        else:
            flag = "--spec-file"
            try:
                with open(args.spec_file) as fh:
                    text = fh.read()
            except OSError as exc:
                raise InputError(f"argument --spec-file: {exc.strerror}") from None
        try:
            return spec_from_dict(json.loads(text))
        except (json.JSONDecodeError, TypeError, ValueError) as exc:
            raise InputError(f"argument {flag}: {exc}") from None
    _only(args, {"num", "den", "start", "exclude"}, "--num/--den", _PROD_NAMES)
    den = _need(args, "den", "--num")
    return RationalFunctionSpec.from_coefficients(args.num.split(","), den.split(","), args.start or 0,
                                                  _expand_ints(args.exclude or ""))


def cmd_prod_rational(args, digits: int) -> Outcome:
    out = Outcome()
    prec = digits_to_bits(digits) + 32
    if args.example is None:
        spec = _load_spec(args)
        verdict = check_convergence(spec)
        if not verdict:
            raise DivergentProduct(verdict.detail)
        _from_report(evaluate(spec, digits), out)
        out.extra["spec"] = spec_to_dict(spec)
        _certified_check(out, digits)
        return out
    ex = args.example
    _only(args, _EXAMPLE_PARAMS[ex], f"--example {ex}", _PROD_NAMES)
    if ex == "wallis":
        _from_report(evaluate(apps.wallis_spec(), digits), out)
        with workprec(prec):
            _ref_check(out, "pi_over_2", pi(prec) / 2, digits)
    elif ex == "sine":
        z = parse_number(_need(args, "z", "--example sine"))
        _from_report(evaluate(apps.sine_product_spec(z), digits), out)
        with workprec(prec):
            zc = to_mpc(z, prec)
            if zc != 0:
                _ref_check(out, "sin_pi_z_over_pi_z", gmpy2.sin(pi(prec) * zc) / (pi(prec) * zc), digits)
    elif ex == "artin":
        _from_report(evaluate(apps.artin_integer_spec(), digits), out)
        with workprec(prec):
            _ref_check(out, "cosine_form", -gmpy2.cos(gmpy2.sqrt(mpfr(5)) * pi(prec) / 2) / pi(prec), digits)
    elif ex == "alternating-cubes":
        _from_report(apps.alternating_cube_product(digits), out)
    elif ex == "multpart":
        n = _need(args, "n", "--example multpart")
        _from_report(apps.multpart_value(n, digits), out)
        out.extra["count_multiplicative_partitions"] = apps.count_multiplicative_partitions(n)
    elif ex == "phi":
        alpha = parse_number(_need(args, "alpha", "--example phi"))
        beta = parse_number(_need(args, "beta", "--example phi"))
        _from_report(apps.phi_ramanujan(alpha, beta, digits), out)
    elif ex == "cyclotomic":
        n = _need(args, "n", "--example cyclotomic")
        if (args.z is None) == (args.removed is None):
            raise InputError("argument --z: give exactly one of --z and --removed")
        z = parse_number(args.z) if args.z is not None else None
        _from_report(apps.cyclotomic_power_product(n, z, digits, args.removed), out)
    _certified_check(out, digits)
    return out


def cmd_prod_accelerate(args, digits: int) -> Outcome:
    source = args.factor or "cos"
    kw = {}
    if args.c is not None:
        kw["c"] = args.c
    if args.d is not None:
        kw["d"] = args.d
    if args.start is not None:
        kw["start_index"] = args.start
    if source == "series":
        f = FactorSpec.from_series(_need(args, "series", "--factor series").split(","), **kw)
    else:
        _only(args, set(), f"--factor {source}", ("series",))
        f = FactorSpec.cos(**kw) if source == "cos" else FactorSpec.exp(**kw)
    n, N = args.n or 8, args.N or 10
    r = accelerate_product(f, n, N, digits, estimate=not args.no_estimate)
    out = Outcome(r.value, certified=r.digits_certified, closed_form=r.closed_form)
    out.extra.update(factor=f.label(), start_index=f.start_index, pade_order=n, tail_start=N,
                     head=r.head, digits_estimate=r.digits_estimate)
    out.notes.append("closed_form is the gamma quotient of the Pade tail from k = N")
    _certified_check(out, digits)
    return out


def cmd_sum_accelerate(args, digits: int) -> Outcome:
    start = 1 if args.start is None else args.start
    t = SeriesTerm.from_coefficients(args.num.split(","), args.den.split(","), start,
                                     _expand_ints(args.exclude or ""))
    n, N = args.n or 6, args.N or 10
    r = accelerate_sum(t, n, N, digits)
    out = Outcome(r.value, certified=r.digits_certified, closed_form=r.closed_form)
    out.extra.update(pade_order=n, tail_start=N, head=r.head)
    out.notes.append("value is head + log of the gamma quotient in closed_form")
    _certified_check(out, digits)
    return out


def cmd_zeta(args, digits: int) -> Outcome:
    n = args.n or 6
    if args.limit:
        _only(args, {"n", "limit"}, "--limit", ("m", "N"))
        ratio, log = zeta_limit(n, digits_to_bits(digits) + 32)
        out = Outcome(log, certified=digits)
        out.extra["ratio"] = ratio
        return out
    m = 3 if args.m is None else args.m
    N = args.N or 1
    r = accelerate_sum(SeriesTerm.power(m), n, N, digits)
    out = Outcome(r.value, certified=r.digits_certified, closed_form=r.closed_form)
    prec = digits_to_bits(digits) + 32
    out.extra.update(m=m, pade_order=n, digits_vs_zeta=abs_digits(r.value, zeta_int(m, prec)))
    _certified_check(out, digits)
    return out


def cmd_gamma_id(args, digits: int) -> Outcome:
    ident = args.identity
    names = ("n", "k", "K", "a", "b")
    out = Outcome()
    if ident == "totient":
        _only(args, {"n"}, "--identity totient", names)
        ns = _expand_ints(_need(args, "n", "--identity totient"))
        for n in ns:
            closed, rep = totient_gamma_product(n, digits)
            out.take(rep, f"n={n}" if len(ns) > 1 else None)
            if len(ns) == 1:
                out.value, out.certified = closed, digits
                out.extra.update(phi=rep.values["phi"], prime_power=rep.values["prime_power"])
    elif ident == "zetasumphi":
        _only(args, {"n", "K"}, "--identity zetasumphi", names)
        ns = _expand_ints(_need(args, "n", "--identity zetasumphi"))
        rep = zetasumphi_independence(ns, args.K or 200, digits)
        out.take(rep)
        wp = digits_to_bits(digits) + 24
        with workprec(wp):
            out.value = (gmpy2.log(2 * pi(wp)) - euler_gamma_const(wp)) / 2
        out.certified = digits
        out.notes.append("tolerance: analytic tail bound of the truncated series")
    elif ident == "psi":
        _only(args, {"n", "k"}, "--identity psi", names)
        n = _single(_need(args, "n", "--identity psi"), "n")
        k = _need(args, "k", "--identity psi")
        v = psi_power_sum(k, n, verify=False)
        out.value, out.exact = v, True
        if n <= 10 ** 5:
            out.checks.append(Check("brute_force", v == psi_brute(k, n)))
    else:
        _only(args, {"a", "b"}, "--identity mellin-barnes", names)
        a = parse_number(_need(args, "a", "--identity mellin-barnes"))
        b = parse_number(_need(args, "b", "--identity mellin-barnes"))
        target = min(digits, 8)
        rep = apps.mellin_barnes_check(a, b, target)
        out.take(rep)
        for key in ("quadrature", "digits_agreement", "error_bound"):
            out.extra[key] = rep.values[key]
        out.value = rep.values["closed_form"]
        out.certified = target
        out.notes.append("quadrature agreement target is min(digits, 8)")
    return out


def cmd_nijenhuis(args, digits: int) -> Outcome:
    out = Outcome()
    if args.coset is not None:
        _only(args, {"coset", "modulus"}, "--coset", ("n", "rep"))
        A = _expand_ints(args.coset)
        mod = _need(args, "modulus", "--coset")
    else:
        _only(args, {"n", "rep"}, "--n", ("modulus",))
        n = _need(args, "n", "nijenhuis")
        A, b, rep = nijenhuis_coset(n, args.rep or 1, digits)
        out.take(rep)
        mod = 2 * n
        out.value, out.certified = rep.values["product"], digits
        out.closed_form = f"2^{b} * pi^({len(A)}/2)"
        out.extra["b"] = b
    crep = coset_product_report(A, mod, digits)
    out.take(crep, "rational_product")
    if out.value is None:
        out.value, out.certified = crep.values["value"], digits
        out.closed_form = crep.values["closed_form"]
    else:
        out.extra["rational_product_closed_form"] = str(crep.values["closed_form"])
    out.extra.update(A=sorted(A), modulus=mod, rational_product_value=crep.values["expected"])
    return out


def cmd_chowla_selberg(args, digits: int) -> Outcome:
    ds = _expand_ints(args.d)
    out = Outcome()
    for d in ds:
        rep = chowla_selberg_check(d, digits)
        out.take(rep, f"d={d}" if len(ds) > 1 else None)
        if len(ds) == 1:
            out.value, out.certified = rep.values["lhs"], digits
            out.extra.update(h=rep.values["h"], w=rep.values["w"], forms=rep.values["forms"])
    return out


def cmd_thue_morse(args, digits: int) -> Outcome:
    check = args.check
    names = ("m", "x", "m_max", "prec")
    allowed = {"prouhet": {"m"}, "block-product": {"m"}, "duplication": {"m", "x"}, "extension": {"m", "x"},
               "limit": {"x", "m_max", "prec"}, "q": {"m_max", "prec"}}[check]
    _only(args, allowed, f"--check {check}", names)
    out = Outcome()
    x = parse_number(args.x) if args.x is not None else Fraction(1)
    if "m" in allowed:
        ms = _expand_ints(_need(args, "m", f"--check {check}"))
        many = len(ms) > 1
        for m in ms:
            tag = f"m={m}" if many else None
            if check == "prouhet":
                out.take(prouhet_check(m), tag)
            elif check == "block-product":
                r = block_product_lhs_gamma(m, digits)
                out.take(r.report, tag)
                if not many:
                    out.value, out.exact = r.exact_value, True
            elif check == "duplication":
                out.checks.append(Check(f"{tag}.duplication" if many else "duplication", duplication_check(m, x)))
                if not many:
                    out.value, out.exact = fm_eval(m, x), True
            else:
                rep = extension_check(m, x, digits)
                out.take(rep, tag)
                if not many:
                    out.value, out.exact = rep.values["exact"], True
        return out
    m_max = 22 if args.m_max is None else args.m_max
    prec = args.prec or 64
    if check == "limit":
        est, unc = limit_f(x, m_max, prec)
        out.value = est
        with workprec(prec):
            out.certified = max(0, int(-gmpy2.log10(unc / abs(est)))) if unc else digits
        out.extra["uncertainty"] = unc
        ref = None
        with workprec(prec + 64):
            if x == 1:
                ref = 1 / gmpy2.sqrt(mpfr(2))
            elif x == Fraction(1, 2):
                ref = mpfr(1) / 2
            if ref is not None:
                gap = abs(est - ref)
                out.checks.append(Check("known_value", gap <= unc, float(gap), float(unc)))
        out.notes.append("uncertainty: twice the last cutoff change plus rounding bounds")
    else:
        rep = q_estimate(m_max, prec)
        out.take(rep)
        out.value = rep.values["Q"]
        with workprec(prec):
            out.certified = max(0, int(-gmpy2.log10(rep.values["Q_uncertainty"] / out.value)))
        out.extra.update(P=rep.values["P"], P_uncertainty=rep.values["P_uncertainty"],
                         Q_uncertainty=rep.values["Q_uncertainty"])
    return out


def _printed_tolerance(published: float) -> float:
    # half a unit in the last printed place, at least 0.05
    text = repr(published)
    decimals = len(text.split(".")[1]) if "." in text and not text.endswith(".0") else 0
    if published >= 100 and published == int(published):
        decimals = 0
    return max(0.05, 0.5 * 10.0 ** -decimals)


def cmd_tables(args, digits: int | None) -> Outcome:
    out = Outcome()
    if args.which == "kb":
        _only(args, {"n", "N", "published"}, "--which kb", ("m",))
        work = digits or TABLE_DIGITS["kb"]
        ns = _expand_ints(args.n) if args.n else list(TABLE1_N)
        Ns = _expand_ints(args.N) if args.N else list(TABLE1_COLUMNS)
        ref = kb_reference(work)
        rows = digits_table(ns, Ns, ref, work)
        out.table = {"row_label": "n", "columns": [f"N={N}" for N in Ns], "rows": ns, "cells": rows}
        out.value, out.certified = ref.value, work
        if args.published:
            for n, row in zip(ns, rows):
                for N, v in zip(Ns, row):
                    if n in TABLE1_PUBLISHED and N in TABLE1_COLUMNS:
                        pub = TABLE1_PUBLISHED[n][TABLE1_COLUMNS.index(N)]
                        tol = _printed_tolerance(pub)
                        out.checks.append(Check(f"n={n},N={N}", abs(v - pub) <= tol, abs(v - pub), tol))
    else:
        _only(args, {"n", "m", "published"}, "--which zeta", ("N",))
        work = digits or TABLE_DIGITS["zeta"]
        m = 3 if args.m is None else args.m
        ns = _expand_ints(args.n) if args.n else list(TABLE2_N)
        ref, _ = zeta_reference(m)
        rows = [[v] for v in zeta_table(ns, m, work, ref)]
        out.table = {"row_label": "n", "columns": [f"m={m}"], "rows": ns, "cells": rows}
        out.value, out.certified = ref, 80
        if args.published:
            for n, (v,) in zip(ns, rows):
                if n in TABLE2_N:
                    pub = TABLE2_PUBLISHED[TABLE2_N.index(n)]
                    out.checks.append(Check(f"n={n}", abs(v - pub) <= 0.05, abs(v - pub), 0.05))
    out.notes.append("cells are -log10 |approximation - reference|")
    if args.published:
        out.notes.append("tolerance: 0.05, or half a unit in the last printed place when coarser")
    return out


_DISPATCH = {
    "prod-rational": cmd_prod_rational, "prod-accelerate": cmd_prod_accelerate, "sum-accelerate": cmd_sum_accelerate,
    "zeta": cmd_zeta, "gamma-id": cmd_gamma_id, "nijenhuis": cmd_nijenhuis, "chowla-selberg": cmd_chowla_selberg,
    "thue-morse": cmd_thue_morse, "tables": cmd_tables,
}


# ---------------------------------------------------------------- rendering

def _plain(v, digits: int):
    """JSON-safe rendering of report values."""
    if v is None or isinstance(v, (bool, int, str)):
        return v
    if isinstance(v, float):
        return v if math.isfinite(v) else None
    if is_exact(v):
        return format_exact(v)
    if isinstance(v, (list, tuple)):
        return [_plain(x, digits) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x, digits) for k, x in v.items()}
    if hasattr(v, "to_dict"):
        return v.to_dict(min(digits, 40))
    try:
        return format_big(v, digits)
    except (TypeError, ValueError):
        return str(v)


def _value_dict(out: Outcome, digits: int):
    v = out.value
    if v is None:
        return None
    if is_exact(v) or isinstance(v, int):
        v = simplify_exact(Fraction(v) if isinstance(v, int) else v)
        if isinstance(v, Fraction):
            return {"re": str(v), "im": "0", "digits": None}
        return {"re": str(v.re), "im": str(v.im), "digits": None}
    z = to_mpc(v, max(64, digits_to_bits(digits) + 16))
    return {"re": format_big(z.real, digits), "im": format_big(z.imag, digits), "digits": out.certified}


def build_report(job: JobSpec, out: Outcome, digits: int, timing: float) -> dict:
    params = dict(job.params)
    params["digits"] = job.digits
    params["format"] = job.output
    cf = out.closed_form
    report = {
        "command": job.command,
        "params": params,
        "value": _value_dict(out, digits),
        "closed_form": cf.to_dict(min(digits, 40)) if hasattr(cf, "to_dict") else _plain(cf, digits),
        "checks": [c.to_dict() for c in out.checks],
        "pass": out.passed,
        "extra": _plain(out.extra, digits),
        "notes": list(out.notes),
        "version": __version__,
        "timing": round(timing, 6),
    }
    if out.table is not None:
        report["table"] = {
            "row_label": out.table["row_label"], "columns": out.table["columns"],
            "rows": [[n] + [_cell(v) for v in row] for n, row in zip(out.table["rows"], out.table["cells"])],
        }
    return report


def _cell(v: float):
    return None if math.isinf(v) else round(v, 4)


def render_text(report: dict) -> str:
    lines = [f"{report['command']}"]
    v = report["value"]
    if v is not None:
        if v["im"] in ("0", "0.0") or v["im"].lstrip("-") in ("0", "0.0"):
            lines.append(f"value: {v['re']}")
        else:
            lines.append(f"value: {v['re']} + {v['im']} i")
        lines.append(f"digits: {'exact' if v['digits'] is None else v['digits']}")
    cf = report["closed_form"]
    if isinstance(cf, dict):
        top = " * ".join(f"G({a})" for a in cf["num_args"]) or "1"
        bot = " * ".join(f"G({a})" for a in cf["den_args"]) or "1"
        pre = "" if cf["prefactor"] in ("1", "1.0") else f"{cf['prefactor']} * "
        lines.append(f"closed form: {pre}{top} / ({bot})")
    elif cf is not None:
        lines.append(f"closed form: {cf}")
    if "table" in report:
        t = report["table"]
        lines.append(f"{t['row_label']:>4} " + " ".join(f"{c:>10}" for c in t["columns"]))
        for row in t["rows"]:
            lines.append(f"{row[0]:>4} " + " ".join(f"{'inf' if c is None else f'{c:.4f}':>10}" for c in row[1:]))
    for key, val in report["extra"].items():
        if key != "spec":
            lines.append(f"{key}: {val}")
    for c in report["checks"]:
        delta = "" if c["delta"] is None else f" delta={c['delta']:.3g}"
        tol = "" if not c["tolerance"] else f" tol={c['tolerance']:.3g}"
        lines.append(f"[{'PASS' if c['pass'] else 'FAIL'}] {c['name']}{delta}{tol}")
    lines.extend(f"note: {n}" for n in report["notes"])
    return "\n".join(lines)


def render_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    if "table" in report:
        t = report["table"]
        w.writerow([t["row_label"]] + t["columns"])
        for row in t["rows"]:
            w.writerow(["inf" if c is None else c for c in row])
        return buf.getvalue().rstrip("\n")
    w.writerow(["field", "value", "delta", "tolerance"])
    v = report["value"]
    if v is not None:
        w.writerow(["value.re", v["re"], "", ""])
        w.writerow(["value.im", v["im"], "", ""])
        w.writerow(["value.digits", "exact" if v["digits"] is None else v["digits"], "", ""])
    for c in report["checks"]:
        w.writerow([f"check.{c['name']}", "pass" if c["pass"] else "fail", c["delta"], c["tolerance"]])
    return buf.getvalue().rstrip("\n")


# ---------------------------------------------------------------- entry points

def _resolve_digits(job: JobSpec) -> int | None:
    if job.digits is not None:
        return job.digits
    if job.command == "tables":
        return None
    env = os.environ.get(ENV_DIGITS)
    if env is None:
        return DEFAULT_DIGITS
    try:
        d = int(env)
    except ValueError:
        raise InputError(f"environment variable {ENV_DIGITS}: invalid int value {env!r}") from None
    if d < 1:
        raise InputError(f"environment variable {ENV_DIGITS}: must be >= 1")
    return d


def execute(job: JobSpec) -> tuple[dict, Outcome]:
    """Run a job and return its report and raw outcome."""
    args = build_parser().parse_args(job.to_argv())
    digits = _resolve_digits(job)
    resolved = JobSpec(job.command, job.params, digits, job.output)
    t0 = time.perf_counter()
    out = _DISPATCH[job.command](args, digits)
    shown = digits or (out.certified or DEFAULT_DIGITS)
    return build_report(resolved, out, min(shown, 60) if job.command == "tables" else shown,
                        time.perf_counter() - t0), out


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    """Parse ``argv``, run the job, print the report; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        job = JobSpec.from_args(args)
        report, out = execute(job)
    except InputError as exc:
        print(f"gammaprod: error: {exc}", file=stderr)
        return 1
    except (GammaProdError, ValueError, ZeroDivisionError) as exc:
        print(f"gammaprod: {type(exc).__name__}: {exc}", file=stderr)
        return 1
    if job.output == "json":
        print(json.dumps(report, sort_keys=True), file=stdout)
    elif job.output == "csv":
        print(render_csv(report), file=stdout)
    else:
        print(render_text(report), file=stdout)
    return 0 if out.passed else 2


def main(argv: list[str] | None = None) -> int:
    return run(argv)


if __name__ == "__main__":
    sys.exit(main())
