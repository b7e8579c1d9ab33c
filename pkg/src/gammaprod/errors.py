"""Exception hierarchy shared by all gammaprod modules."""


class GammaProdError(Exception):
    """Base class for every error raised by gammaprod."""


class PreconditionError(GammaProdError, ValueError):
    """An argument violates a documented precondition."""


class PoleError(PreconditionError):
    """A gamma function argument sits on a pole (0, -1, -2, ...)."""


class ZeroFactor(GammaProdError):
    """A factor of a product vanishes or is undefined at some index."""

    def __init__(self, index, kind="zero"):
        self.index = index
        self.kind = kind
        super().__init__(f"factor has a {kind} at index k={index}")


class DivergentProduct(GammaProdError):
    """The infinite product does not converge."""

    def __init__(self, reason):
        self.reason = reason
        super().__init__(f"product diverges: {reason}")


class NonConvergence(GammaProdError):
    """An iterative numerical method failed to converge."""


class DegenerateTable(GammaProdError):
    """The Pade linear system at the requested order is singular."""

    def __init__(self, order, suggested=None):
        self.order = order
        self.suggested = suggested
        msg = f"Pade table degenerate at order [{order},{order}]"
        if suggested is not None:
            msg += f"; try order {suggested}"
        super().__init__(msg)


class SummabilityError(PreconditionError):
    """A series is not absolutely summable at the required rate."""


class NotFundamental(PreconditionError):
    """An integer is not a negative fundamental discriminant."""


class PoleOrZero(GammaProdError):
    """A finite product hits a zero or a pole."""

    def __init__(self, j, kind):
        self.j = j
        self.kind = kind
        super().__init__(f"{kind} at j={j}")


class PrecisionError(GammaProdError):
    """The result could not be certified to the requested number of digits."""
