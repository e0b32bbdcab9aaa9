"""Exception types shared across the package."""


class ScaleQMError(Exception):
    """Base class for all scaleqm errors."""


class InvalidScaleError(ScaleQMError, ValueError):
    """A structure scale factor is zero or non-finite."""


class GridMismatchError(ScaleQMError, ValueError):
    """Operands live on different grids or have incompatible shapes."""


class ContractError(ScaleQMError, ValueError):
    """An operation was applied to a state in the wrong scaling state."""


class FieldConstructionError(ScaleQMError, ValueError):
    """A scaling-field spec produced non-finite or malformed values."""


class PeriodicityError(FieldConstructionError):
    """An analytic field spec does not wrap periodically on the grid."""


class NotAMemberError(ScaleQMError, ValueError):
    """A divisibility requirement for subset membership is violated."""


class ResourceLimitError(ScaleQMError, ValueError):
    """A requested operator matrix or state tensor exceeds the size limits."""


class EigensolverError(ScaleQMError, RuntimeError):
    """The dense eigensolver failed to converge."""
