"""Rational product specifications and the coefficient-level convergence test."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from gmpy2 import mpfr

from ..errors import PreconditionError, ZeroFactor
from ..mpcore import Polynomial, factor_roots, is_exact, maybe_workprec, to_mpc, workprec
from ..mpcore.numbers import simplify_exact

__all__ = [
    "RationalFunctionSpec",
    "ConvergenceVerdict",
    "check_convergence",
    "spec_to_dict",
    "spec_from_dict",
    "spec_to_json",
    "spec_from_json",
]

RootSource = Callable[[int], Sequence]


@dataclass(frozen=True)
class RationalFunctionSpec:
    """The product ``prod_{k >= start_index, k not in excluded} num(k) / den(k)``.

    ``num_roots`` / ``den_roots`` optionally supply the roots of the two
    polynomials (with repetition), either as a sequence or as a callable taking
    a precision in bits. When present they replace numerical root finding, which
    matters for high degrees with known factorizations.
    """

    numerator: Polynomial
    denominator: Polynomial
    start_index: int = 0
    excluded: frozenset = frozenset()
    num_roots: Sequence | RootSource | None = field(default=None, compare=False, repr=False)
    den_roots: Sequence | RootSource | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.denominator.is_zero():
            raise PreconditionError("denominator is identically zero")
        if self.numerator.is_zero():
            raise PreconditionError("numerator is identically zero")
        if self.start_index < 0:
            raise PreconditionError("start index must be nonnegative")
        excl = frozenset(int(m) for m in self.excluded)
        if any(m < self.start_index for m in excl):
            raise PreconditionError("excluded indices must be >= start index")
        object.__setattr__(self, "excluded", excl)

    # ------------------------------------------------------------ constructors
    @classmethod
    def from_coefficients(cls, num: Iterable, den: Iterable, start_index: int = 0,
                          excluded: Iterable[int] = (), prec: int | None = None) -> "RationalFunctionSpec":
        return cls(Polynomial.from_strings(list(num), prec), Polynomial.from_strings(list(den), prec),
                   start_index, frozenset(excluded))

    @classmethod
    def from_roots(cls, num_roots: Sequence, den_roots: Sequence, start_index: int = 0,
                   excluded: Iterable[int] = (), prec: int | None = None) -> "RationalFunctionSpec":
        """Monic product ``prod (k - r_i) / prod (k - s_j)`` with the roots kept."""
        num = Polynomial.from_roots(num_roots, prec=prec)
        den = Polynomial.from_roots(den_roots, prec=prec)
        return cls(num, den, start_index, frozenset(excluded), tuple(num_roots), tuple(den_roots))

    @property
    def exact(self) -> bool:
        return self.numerator.exact and self.denominator.exact

    @property
    def coefficient_prec(self) -> int | None:
        precs = [p.prec for p in (self.numerator, self.denominator) if p.prec is not None]
        return min(precs) if precs else None

    def shifted(self, start_index: int) -> "RationalFunctionSpec":
        return RationalFunctionSpec(self.numerator, self.denominator, start_index,
                                    frozenset(m for m in self.excluded if m >= start_index),
                                    self.num_roots, self.den_roots)

    def with_excluded(self, excluded: Iterable[int]) -> "RationalFunctionSpec":
        return RationalFunctionSpec(self.numerator, self.denominator, self.start_index,
                                    frozenset(excluded), self.num_roots, self.den_roots)

    # ------------------------------------------------------------ evaluation
    def factor(self, k, prec: int | None = None):
        """``a(k)``; exact when the spec and ``k`` are exact and ``prec`` is None."""
        n = self.numerator(k, prec)
        d = self.denominator(k, prec)
        if d == 0:
            raise ZeroFactor(k, "pole")
        if is_exact(n) and is_exact(d):
            return simplify_exact(n / d)
        with workprec(prec or self.coefficient_prec or 128):
            return n / d

    def roots(self, prec: int) -> tuple[list, list]:
        """Roots of numerator and denominator (with repetition) at ``prec`` bits.

        Exact rational roots are returned as ``Fraction``; everything else as a
        big complex value.
        """
        return (_roots_of(self.numerator, self.num_roots, prec),
                _roots_of(self.denominator, self.den_roots, prec))


def _roots_of(p: Polynomial, known, prec: int) -> list:
    if known is not None:
        vals = known(prec) if callable(known) else known
        return [simplify_exact(v) if is_exact(v) else to_mpc(v, prec) for v in vals]
    if p.degree < 1:
        return []
    out = []
    for r in factor_roots(p, prec):
        v = r.exact if r.exact is not None else r.value
        out.extend([v] * r.multiplicity)
    return out


# ---------------------------------------------------------------- convergence

@dataclass(frozen=True)
class ConvergenceVerdict:
    converges: bool
    condition: str | None = None  # "degree", "leading" or "subleading" when diverging
    detail: str = ""

    @property
    def status(self) -> str:
        return "CONVERGES" if self.converges else "DIVERGES"

    def __bool__(self):
        return self.converges

    def __str__(self):
        return self.status if self.converges else f"DIVERGES ({self.detail})"


def _index_candidates(values: Iterable, k0: int) -> set[int]:
    out = set()
    for v in values:
        if is_exact(v):
            v = simplify_exact(v)
            if isinstance(v, Fraction) and v.denominator == 1 and v >= k0:
                out.add(int(v))
            continue
        z = complex(v)
        m = round(z.real)
        if m >= k0 and abs(z - m) < 1e-6 * max(1.0, abs(m)):
            out.add(int(m))
    return out


def _vanishes_at(p: Polynomial, m: int) -> bool:
    if p.exact:
        return p(m) == 0
    prec = p.prec
    with workprec(prec):
        val = abs(p(m))
        scale = mpfr(0)
        for i, c in enumerate(p.coeffs):
            scale += abs(c) * mpfr(abs(m)) ** i
        return val <= scale * mpfr(2) ** (-(prec // 2))


def index_roots(spec: RationalFunctionSpec, prec: int = 64) -> dict[int, str]:
    """Indices k >= start_index where the factor has a zero or a pole."""
    num_r, den_r = spec.roots(prec)
    hits: dict[int, str] = {}
    for m in sorted(_index_candidates(num_r, spec.start_index)):
        if _vanishes_at(spec.numerator, m):
            hits[m] = "zero"
    for m in sorted(_index_candidates(den_r, spec.start_index)):
        if _vanishes_at(spec.denominator, m):
            hits[m] = "zero/pole" if m in hits else "pole"
    return hits


def _close(a, b, prec: int | None) -> bool:
    if prec is None:
        return a == b
    with workprec(prec):
        scale = max(abs(a), abs(b), mpfr(1))
        return abs(a - b) <= scale * mpfr(2) ** (-(prec // 2))


def check_convergence(spec: RationalFunctionSpec, prec: int = 64) -> ConvergenceVerdict:
    """Decide convergence from the coefficients (degree, leading, subleading).

    Raises :class:`ZeroFactor` first if a non-excluded index hits a zero or a
    pole, since the product is then 0 or undefined regardless.
    """
    hits = {m: kind for m, kind in index_roots(spec, prec).items() if m not in spec.excluded}
    if hits:
        m = min(hits)
        raise ZeroFactor(m, hits[m])
    num, den = spec.numerator, spec.denominator
    if num.degree != den.degree:
        return ConvergenceVerdict(False, "degree", f"degree {num.degree} != {den.degree}, a(k) does not tend to 1")
    tol_prec = spec.coefficient_prec
    if not _close(num.leading, den.leading, tol_prec):
        return ConvergenceVerdict(False, "leading", "leading coefficients differ, a(k) does not tend to 1")
    d = num.degree
    if d == 0:
        return ConvergenceVerdict(True)
    with maybe_workprec(tol_prec):
        sub_n = num.coeff(d - 1) / num.leading
        sub_d = den.coeff(d - 1) / den.leading
    if not _close(sub_n, sub_d, tol_prec):
        return ConvergenceVerdict(False, "subleading", "sum of alpha differs from sum of beta")
    return ConvergenceVerdict(True)


# ---------------------------------------------------------------- serialization

def spec_to_dict(spec: RationalFunctionSpec, digits: int = 40) -> dict:
    out = {
        "numerator": spec.numerator.coefficient_strings(digits),
        "denominator": spec.denominator.coefficient_strings(digits),
        "start_index": spec.start_index,
        "excluded": sorted(spec.excluded),
    }
    if not spec.exact:
        out["precision"] = spec.coefficient_prec
    return out


def spec_from_dict(data: dict) -> RationalFunctionSpec:
    unknown = set(data) - {"numerator", "denominator", "start_index", "excluded", "precision"}
    if unknown:
        raise PreconditionError(f"unknown spec fields: {sorted(unknown)}")
    try:
        num, den = data["numerator"], data["denominator"]
    except KeyError as exc:
        raise PreconditionError(f"spec is missing {exc.args[0]!r}") from None
    return RationalFunctionSpec.from_coefficients(
        [str(c) for c in num], [str(c) for c in den],
        int(data.get("start_index", 0)), [int(m) for m in data.get("excluded", [])],
        data.get("precision"))


def spec_to_json(spec: RationalFunctionSpec, digits: int = 40) -> str:
    return json.dumps(spec_to_dict(spec, digits), sort_keys=True)


def spec_from_json(text: str) -> RationalFunctionSpec:
    return spec_from_dict(json.loads(text))
