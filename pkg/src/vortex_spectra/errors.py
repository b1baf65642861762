"""Exception hierarchy shared across the package."""


class VortexSpectraError(Exception):
    """Base class for all package errors."""


class ValidationError(VortexSpectraError, ValueError):
    """A constant, domain or config entry is invalid."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"{field}: {message}")


class DomainError(VortexSpectraError, ValueError):
    """An argument lies outside the domain of a formula."""


class IndexOutOfRange(VortexSpectraError, IndexError):
    """A quantum number or zero index is out of range."""


class ConstraintError(VortexSpectraError):
    """A geometric constraint (closure) is violated."""

    def __init__(self, message, defect):
        self.defect = defect
        super().__init__(f"{message} (defect={defect:.3e})")


class ModelRegimeError(VortexSpectraError):
    """The parameters leave the regime in which the model is defined."""


class ResourceError(VortexSpectraError):
    """A requested computation exceeds the configured budget."""
