"""Exception types shared across the workbench.

The CLI maps these onto exit codes: 0 success, 2 validation,
3 budget, 4 io.
"""


class MslError(Exception):
    """Base class for workbench errors."""


class ValidationError(MslError):
    """Bad arguments, malformed manifests, or violated preconditions."""


class BudgetError(MslError):
    """A request exceeds the configured memory or work budget."""


class CacheError(MslError):
    """Block-cache failure: bad magic, truncated payload, checksum mismatch."""
