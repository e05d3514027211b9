"""
rmatrix-lab error types.
"""


class RMatrixError(Exception):
    """Base class for every error raised by the library."""


class DomainError(RMatrixError, ValueError):
    """Index out of range, dimension mismatch or a non-bijective table."""


class ResourceLimitError(RMatrixError):
    """A computation was refused because it would exceed a configured cap."""

    def __init__(self, cap: str, requested: int, allowed: int):
        self.cap = cap
        self.requested = requested
        self.allowed = allowed
        super().__init__(
            f"{cap}: requested {requested} exceeds the configured limit {allowed}"
        )
