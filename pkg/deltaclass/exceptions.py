"""Exception hierarchy for deltaclass."""

from typing import Any


class DeltaclassError(Exception):
    """Base exception for all deltaclass errors."""

    def __init__(
        self,
        message: str,
        details: dict[str, Any] | None = None,
    ):
        """
        Initialize deltaclass error.

        :param message: Error message
        :param details: Structured context (indices, windows, parameters)
        """
        super().__init__(message)
        self.message = message
        self.details = details or {}

    def __str__(self) -> str:
        """Return formatted error message."""
        if not self.details:
            return self.message
        context = ", ".join(f"{k}={v}" for k, v in sorted(self.details.items()))
        return f"{self.message} ({context})"


class InsufficientDataError(DeltaclassError):
    """A window does not contain the samples an operation needs."""

    def __init__(
        self,
        message: str = "Insufficient data in window",
        needed: tuple[int, int] | None = None,
        available: tuple[int, int] | None = None,
    ):
        """
        Initialize insufficient data error.

        :param message: Error message
        :param needed: Inclusive index range the operation requires
        :param available: Inclusive index range the sequence provides
        """
        details: dict[str, Any] = {}
        if needed is not None:
            details["needed"] = needed
        if available is not None:
            details["available"] = available
        super().__init__(message, details)
        self.needed = needed
        self.available = available


class DomainError(DeltaclassError):
    """Parameters outside an operation's domain (non-prime p, K < 2, ...)."""

    def __init__(self, message: str = "Parameter out of domain", **details: Any):
        super().__init__(message, details)


class DuplicateNodeError(DeltaclassError):
    """Interpolation nodes are not pairwise distinct."""

    def __init__(self, message: str = "Duplicate interpolation node", node: int | None = None):
        super().__init__(message, {"node": node} if node is not None else None)
        self.node = node


class SingularSystemError(DeltaclassError):
    """The mixed {x^i} U {x^j 2^x} interpolation system is singular on its nodes."""

    def __init__(
        self,
        message: str = "Singular interpolation system",
        nodes: list[int] | None = None,
    ):
        """
        Initialize singular system error.

        :param message: Error message
        :param nodes: Node set of the singular system
        """
        super().__init__(message, {"nodes": nodes} if nodes else None)
        self.nodes = nodes or []


class NonIntegralError(DeltaclassError):
    """An integer was required but a proper fraction was found."""

    def __init__(self, message: str = "Non-integral value", index: int | None = None):
        super().__init__(message, {"index": index} if index is not None else None)
        self.index = index


class CycloDivisionError(DeltaclassError):
    """Division in Z[zeta_p] that does not stay integral."""

    pass


class SequenceParseError(DeltaclassError):
    """Malformed sequence input."""

    def __init__(self, message: str = "Malformed sequence input", line: int | None = None):
        super().__init__(message, {"line": line} if line is not None else None)
        self.line = line


class IndexGapError(SequenceParseError):
    """A b-file skips an index."""

    def __init__(self, message: str = "Index gap in b-file", line: int | None = None):
        super().__init__(message, line)


class ConfigError(DeltaclassError):
    """Invalid run configuration (usage error)."""

    pass


class ReportIOError(DeltaclassError):
    """Reading or writing a sequence or report file failed."""

    def __init__(self, message: str = "I/O failure", path: str | None = None):
        super().__init__(message, {"path": path} if path is not None else None)
        self.path = path


class ReconstructionError(DeltaclassError):
    """A closed form could not be reconstructed from the window."""

    def __init__(self, message: str = "Reconstruction failed", witness: int | None = None):
        """
        Initialize reconstruction error.

        :param message: Error message
        :param witness: Index (or difference order) that defeated the reconstruction
        """
        super().__init__(message, {"witness": witness} if witness is not None else None)
        self.witness = witness
