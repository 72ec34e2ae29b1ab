"""Exception hierarchy shared by the library and the CLI."""


class CharopError(Exception):
    """Base class for all library errors."""


class DomainError(CharopError, ValueError):
    """A precondition on weights, primes or parameters was violated."""


class MissingEntryError(DomainError, KeyError):
    """A character database lacks a required weight."""

    def __init__(self, weight, what="character database"):
        self.weight = tuple(weight)
        super().__init__(f"{what} has no entry for weight {list(self.weight)}")

    def __str__(self):
        return self.args[0]


class CertificateError(CharopError):
    """An infinite family or product failed its summability certificate."""


class ResourceError(CharopError):
    """An evaluation would exceed the configured size limits."""
