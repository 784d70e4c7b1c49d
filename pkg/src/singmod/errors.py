"""Exception hierarchy shared by every module of the package."""


class SingmodError(Exception):
    """Base class for all library errors."""


class CapExceededError(SingmodError):
    """A field or search space is larger than the configured enumeration cap."""


class ReductionError(SingmodError):
    """Bad reduction: the leading coefficient vanishes modulo the prime."""


class TruncationError(SingmodError):
    """A truncated local ring is too short to certify the requested quantity."""


class ClosureError(SingmodError):
    """A matrix product left the ring of cyclic-algebra matrices."""


class DegreeAuditError(SingmodError):
    """Widening the degree window produced solutions the derived bounds missed."""
