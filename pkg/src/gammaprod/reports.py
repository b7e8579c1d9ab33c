"""Check results shared by the identity verifiers and the CLI."""

from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass(frozen=True)
class Check:
    """One numeric or exact comparison. ``delta`` is the observed discrepancy."""

    name: str
    passed: bool
    delta: float = 0.0
    tolerance: float = 0.0

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": bool(self.passed),
            "delta": _finite(self.delta),
            "tolerance": _finite(self.tolerance),
        }


@dataclass
class CheckReport:
    """Named bundle of checks plus the values they compared."""

    name: str
    checks: list[Check] = field(default_factory=list)
    values: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, delta=0.0, tolerance=0.0) -> Check:
        c = Check(name, bool(passed), float(delta), float(tolerance))
        self.checks.append(c)
        return c

    def add_close(self, name: str, a, b, tol, relative: bool = True) -> Check:
        """Record ``|a - b|`` (relative to ``|b|`` by default) against ``tol``."""
        d = abs(a - b)
        if relative and b != 0:
            d = d / abs(b)
        return self.add(name, d <= tol, float(d), float(tol))

    def merge(self, other: "CheckReport", prefix: str | None = None) -> None:
        for c in other.checks:
            name = f"{prefix}.{c.name}" if prefix else c.name
            self.checks.append(Check(name, c.passed, c.delta, c.tolerance))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "pass": self.passed,
            "checks": [c.to_dict() for c in self.checks],
            "notes": list(self.notes),
        }


def _finite(x: float):
    # json has no inf/nan
    if math.isinf(x) or math.isnan(x):
        return None
    return x
