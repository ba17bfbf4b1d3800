"""Exception types shared across the package."""


class ArrayError(Exception):
    """Base class for all errors raised by this library."""


class RegistryError(ArrayError, KeyError):
    """Lookup of an unregistered semiring, property, or builtin name."""

    def __str__(self) -> str:  # KeyError quotes its message; keep it readable
        return Exception.__str__(self)


class CarrierError(ArrayError, TypeError):
    """A value is outside the carrier a semiring accepts, or value tags of
    two operands cannot be combined."""


class KeyTagError(ArrayError, TypeError):
    """Keys on one axis mix tags (string / integer / real), or a key is of
    an unsupported type."""


class CapabilityError(ArrayError):
    """An operation requires a semiring capability (e.g. an additive
    inverse) that the semiring does not declare."""


class ContractError(ArrayError, ValueError):
    """A user-supplied predicate or aggregator violated its contract
    (non-{0,1} predicate output, non-commutative aggregator, ...)."""


class FormatError(ArrayError, ValueError):
    """A triple or table file does not conform to its format."""


class ScriptError(ArrayError, ValueError):
    """A query script failed to parse or referenced an unknown name."""


class BackendError(ArrayError):
    """The requested kernel backend is unavailable."""


class MismatchError(ArrayError):
    """Benchmark cross-validation found differing results between two
    evaluation orders; timing is aborted."""
