"""Exception types shared across the package."""


class KflError(Exception):
    """Base class for all package errors."""


class InvalidInputError(KflError):
    """A domain object failed validation.

    ``violations`` carries the list of named violations, one string each.
    """

    def __init__(self, message, violations=None):
        super().__init__(message)
        self.violations = list(violations or [])


class ResourceLimitError(KflError):
    """A search or enumeration exceeded its configured ceiling."""
