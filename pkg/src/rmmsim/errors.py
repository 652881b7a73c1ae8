class DomainError(ValueError):
    """Parameters outside the region where a formula or construction is defined."""


class CapacityError(ValueError):
    """Instance too large for exhaustive enumeration."""
