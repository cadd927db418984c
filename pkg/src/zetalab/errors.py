"""Exception types shared across the package.

Exit-code mapping used by the CLI: ConfigError -> 2, DomainError (and
subclasses) -> 3, CapacityError -> 4.
"""


class ZetalabError(Exception):
    """Base class for all package errors."""


class ConfigError(ZetalabError):
    """Invalid or inconsistent run configuration."""


class DomainError(ZetalabError):
    """Input outside the mathematical or numerical regime of an operation."""


class TruncationError(DomainError):
    """A truncated series could not meet its requested tail tolerance."""


class CapacityError(ZetalabError):
    """A term-count, pair-count, or memory cap would be exceeded."""
