"""Exception types shared across the package."""


class CapacityError(Exception):
    """Requested register or enumeration size exceeds the configured cap."""


class ShapeError(ValueError):
    """Operands have incompatible dimensions."""


class ValidationError(ValueError):
    """Input violates a documented invariant (normalization, unitarity, range)."""
