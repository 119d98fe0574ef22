"""Exception types shared across the package."""


class FieldError(ValueError):
    """Invalid modulus, dimension or modulus mismatch."""


class SingularMatrixError(FieldError):
    """Raised when inverting (or taking a negative power of) a singular matrix."""


class EnumerationTooLarge(ValueError):
    """An exhaustive sweep would exceed its configured cap."""


class BoundViolation(AssertionError):
    """A checked inequality failed.

    ``name`` identifies the inequality so callers (the CLI in particular) can
    report which one broke.
    """

    def __init__(self, name, detail=""):
        self.name = name
        self.detail = detail
        super().__init__(f"{name}: {detail}" if detail else name)


class PremiseViolation(ValueError):
    """The spectrum premise of a bound does not hold for the supplied constant."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness
