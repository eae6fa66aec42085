"""Exception hierarchy shared by all ptsync modules."""


class PtsyncError(Exception):
    """Base class for all errors raised by this package."""


class NonSquareError(PtsyncError):
    """A square matrix was required."""


class NotSymmetricError(PtsyncError):
    """Matrix asymmetry exceeds the admitted tolerance."""


class DegenerateKernelError(PtsyncError):
    """The numerical kernel dimension differs from one."""


class NonPositiveEntryError(PtsyncError):
    """A kernel component is not strictly positive."""


class TimeOutOfRangeError(PtsyncError):
    """Evaluation time outside [0, T)."""


class InvalidParametersError(PtsyncError):
    """Model or configuration parameters violate their constraints."""


class UnsupportedRegulatorError(PtsyncError):
    """The requested analysis is not defined for this regulator kind."""


class BlowupError(PtsyncError):
    """Finite-time escape: the state norm exceeded the blow-up threshold.

    ``partial`` holds whatever trajectory prefix was recorded before the
    failure, or None.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class StepUnderflowError(PtsyncError):
    """The step law pushed the step size below the representable floor."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class NonFiniteStateError(PtsyncError):
    """NaN or Inf appeared in a state vector."""


class MissingPinningError(PtsyncError):
    """A pinning configuration was required but absent."""


class DimensionMismatchError(PtsyncError):
    """Operand dimensions are inconsistent."""


class AssumptionViolatedError(PtsyncError):
    """A structural assumption on the sum matrices fails.

    ``verdicts`` carries the per-dimension check results when available.
    """

    def __init__(self, message, verdicts=None):
        super().__init__(message)
        self.verdicts = verdicts


class NotNegativeDefiniteError(PtsyncError):
    """The stacked matrix is not negative definite as required."""


class NotNegativeInTSError(PtsyncError):
    """The stacked matrix is not negative definite in the transverse space."""
