"""Exception types shared across the package."""


class CorescopeError(Exception):
    """Base class for all package errors."""


class EdgeListParseError(CorescopeError):
    """Raised when an edge-list line cannot be parsed."""

    def __init__(self, line_no: int, token: str, message: str = "cannot parse"):
        self.line_no = line_no
        self.token = token
        super().__init__(f"line {line_no}: {message}: {token!r}")


class BinaryFormatError(CorescopeError):
    """Raised when a binary graph cache is not in the expected format."""


class VersionMismatchError(BinaryFormatError):
    """Raised when a binary graph cache has an unsupported format version."""


class TruncatedFileError(BinaryFormatError):
    """Raised when a binary graph cache ends before all sections are read."""


class ContractViolationError(CorescopeError):
    """Raised when a caller-supplied object breaks a declared contract."""


class FitError(CorescopeError):
    """Base class for power-law fitting errors."""


class InsufficientTailError(FitError):
    """Raised when fewer than two sample values lie at or above the cutoff."""


class DegenerateTailError(FitError):
    """Raised when all tail values are equal and the estimator diverges."""


class NoCandidateError(FitError):
    """Raised when no cutoff candidate leaves a fittable tail."""
