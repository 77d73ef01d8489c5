"""State-based energy modelling and calibration for wireless transceivers."""

from .calibrate import (
    CalibrationResult,
    Observation,
    confidence_interval,
    estimation_error,
    fit_ols,
    predict,
)
from .errors import (
    AmbiguousModel,
    EmptyTrace,
    InfeasibleSchedule,
    NonPositiveMeasured,
    OverlappingBursts,
    RankDeficient,
    TooFewObservations,
    TooFewSamples,
    TxEnergyError,
    UnknownEventKind,
    UnknownName,
    UnknownState,
)
from .model import (
    EnergyModel,
    EnergyReport,
    EventSpec,
    PowerState,
    StateInterval,
    Timeline,
    TransitionSpec,
    estimate_basic,
    estimate_with_events,
    estimate_with_transitions,
    transition_counts,
    validate_model,
)
from .sweep import (
    ErrorCurve,
    ErrorPoint,
    SweepConfig,
    compare_reports,
    demo_sweep_config,
    run_sweep,
)
from .trace import (
    CurrentTrace,
    PeakReport,
    SynthesisSpec,
    detect_periodic_peaks,
    integrate_energy,
    segment_trace,
    synthesize_trace,
)
from .workloads import (
    SensorWorkloadParams,
    WifiWorkloadParams,
    gen_sensor_workload,
    gen_wifi_psm_workload,
)

__version__ = "0.1.0"
