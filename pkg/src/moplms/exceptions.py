class DimensionError(ValueError):
    """Operand shapes are incompatible."""


class SingularSystemError(ValueError):
    pass


class SVDConvergenceError(RuntimeError):
    pass


class SolverDivergedError(RuntimeError):
    """The objective became non-finite during optimization."""


class EmptySupportError(ValueError):
    """No landmark survived; the group penalty is too large."""


class ModelFormatError(ValueError):
    """A serialized model document is malformed or has an unknown version."""
