"""Error types shared across the package."""


class DivisionByZero(ZeroDivisionError):
    """Inversion of zero in a finite field."""


class FieldMismatch(ValueError):
    """Arithmetic between elements of different prime fields."""


class CyclotomicMismatch(ValueError):
    """Arithmetic between cyclotomic integers for different primes."""


class UnsupportedCharacteristic(ValueError):
    """Construction not available in this characteristic (e.g. SO over F_2)."""


class BadRank(ValueError):
    """Matrix size incompatible with the requested group type."""


class BadFlag(ValueError):
    """Invalid flag / composition for a standard parabolic."""


class NotGeneric(ValueError):
    """A unipotent character weight vector with a zero entry."""


class EnumerationBudgetExceeded(RuntimeError):
    """A subgroup or orbit enumeration would exceed the configured budget."""


class BadModelParams(ValueError):
    """Model parameters outside the registered validity range."""


class NoInvariantMap(ValueError):
    """No invariant tuple is defined for this model."""


class AmbiguousExtension(ValueError):
    """A lifted function received two inconsistent values at the same point."""
