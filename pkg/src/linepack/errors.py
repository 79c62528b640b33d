"""Exception types shared across the package."""


class LinepackError(Exception):
    """Base class for all package-specific failures."""


class InvalidParameterError(LinepackError):
    """A physical or numerical parameter is out of its admissible range."""


class ProfileDegenerateError(LinepackError):
    """The spatial profile G(x) reached zero before the end of the pipe."""


class ProfileSingularError(LinepackError):
    """The spatial profile G(x) blew up inside the pipe."""


class BranchError(LinepackError):
    """Closed-form inversion requested outside the supported real branch."""


class QuadratureError(LinepackError):
    """A quadrature or series evaluation failed to reach its tolerance."""


class DegenerateWeightError(LinepackError):
    """A weighted average has a vanishing weight integral."""


class CalibrationError(LinepackError):
    """Parameter recovery from boundary series failed (no bracket, no root)."""


class FlowReversalError(LinepackError):
    """Boundary data implies reversed flow, outside the model's assumptions."""


class StateInvalidError(LinepackError):
    """A field state violates positivity or grid assumptions."""


class StepError(LinepackError):
    """A time step could not be completed (solver divergence, stability)."""


class GridAlignmentError(LinepackError):
    """Two series meant to be compared do not share a common grid."""
