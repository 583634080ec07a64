"""Exception types raised across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class ContractError(ValueError):
    """Caller violated a precondition (shapes, normalization, counts)."""


class CapabilityError(ValueError):
    """Request exceeds what the implementation supports."""


class ResolutionError(RuntimeError):
    """Grid too small or too coarse to represent the requested state."""


class ValidityError(ValueError):
    """Construction outside the regime where it is physically meaningful."""


class NoEigenvalueError(RuntimeError):
    """Energy bracket does not contain a sign change of the mismatch."""


class BracketError(RuntimeError):
    """Converged eigenstate does not have the requested node count."""


class PotentialParseError(ValueError):
    """Malformed tabulated potential file."""

    def __init__(self, message, lineno=None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
