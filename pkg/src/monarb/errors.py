"""Exception types shared across the package.

The CLI maps these onto process exit codes: invalid input -> 1,
capacity -> 2, failed consistency check -> 3.
"""


class InvalidInputError(ValueError):
    """Malformed or out-of-range argument, file, or flag."""


class CapacityError(RuntimeError):
    """Requested computation exceeds a hard size cap."""


class CheckFailure(RuntimeError):
    """A verification check did not hold."""
