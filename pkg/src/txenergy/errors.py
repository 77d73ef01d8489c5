"""Exception types raised by the library."""


class TxEnergyError(Exception):
    """Base class for all library errors."""


class UnknownState(TxEnergyError):
    """A timeline interval names a state the model does not define."""


class UnknownEventKind(TxEnergyError):
    """A timeline event kind is absent from the model."""


class UnknownName(TxEnergyError):
    """An observation references a name the calibration did not fit."""


class EmptyTrace(TxEnergyError):
    """A trace operation requires at least one sample."""


class AmbiguousModel(TxEnergyError):
    """State currents are not separable under the requested hysteresis."""


class RankDeficient(TxEnergyError):
    """The calibration design matrix is rank deficient.

    ``columns`` lists the names of the unidentifiable columns.
    """

    def __init__(self, columns):
        self.columns = list(columns)
        super().__init__(f"design matrix rank deficient; offending columns: {self.columns}")


class TooFewObservations(TxEnergyError):
    """Fewer observations than unknowns."""


class TooFewSamples(TxEnergyError):
    """A confidence interval needs at least two samples."""


class NonPositiveMeasured(TxEnergyError):
    """Estimation error is undefined for non-positive measured energy."""


class InfeasibleSchedule(TxEnergyError):
    """Per-packet active time exceeds the packet inter-arrival time."""


class OverlappingBursts(TxEnergyError):
    """Traffic bursts overlap or extend past the connected period."""
