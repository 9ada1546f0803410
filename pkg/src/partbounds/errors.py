"""Exception types shared across the package."""


class PartboundsError(Exception):
    """Base class for package-specific failures."""


class PreconditionError(PartboundsError):
    """An estimate was requested outside its licensed parameter range."""


class PrecisionError(PartboundsError):
    """A numeric consistency check exceeded its tolerance."""


class StabilizationError(PartboundsError):
    """An iterative evaluation failed to settle within its budget."""
