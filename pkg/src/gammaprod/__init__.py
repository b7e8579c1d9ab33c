"""Gamma-quotient evaluation of rational infinite products, Pade tail
acceleration of slow products and series, and numeric certification of
gamma-function identities."""

__version__ = "0.1.0"

from . import accel, gammaid, mpcore, ratprod, thuemorse  # noqa: E402
from .errors import GammaProdError  # noqa: E402

__all__ = ["__version__", "accel", "gammaid", "mpcore", "ratprod", "thuemorse", "GammaProdError"]
