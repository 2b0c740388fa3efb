"""Exception types shared across the package."""


class DomainMismatch(ValueError):
    """Operands live over different coefficient rings."""


class UnsupportedDomain(TypeError):
    """Operation needs a field (or some other structure) the ring lacks."""


class CharacteristicHazard(ArithmeticError):
    """Characteristic too small for a separability-dependent computation."""


class FieldExtensionRequired(ArithmeticError):
    """A value (e.g. a square root) only exists after adjoining a root.

    ``poly`` holds the coefficient list (ascending) of the polynomial whose
    root must be adjoined.
    """

    def __init__(self, message, poly=None):
        super().__init__(message)
        self.poly = poly


class PreconditionError(ValueError):
    """Input data violates an operation's precondition."""


class ExcludedCase(PreconditionError):
    """Cover pair with identical branch sets: I(pi1, pi2) is infinite."""


class PrimeInconsistency(RuntimeError):
    """Verification primes disagree; carries the per-prime values."""

    def __init__(self, message, values=None):
        super().__init__(message)
        self.values = values or {}


class SampleShortfall(PreconditionError):
    """Too few usable sample points mod p; retry with a larger prime."""
