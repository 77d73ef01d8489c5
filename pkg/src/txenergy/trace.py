"""Ground-truth current traces: synthesis, integration, segmentation, peaks.

The synthesizer turns a model plus timeline into a finely sampled current
waveform (the "measured" side); ``integrate_energy`` defines measured energy
as the voltage-weighted trapezoidal integral of that waveform.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import median_filter

from .errors import AmbiguousModel, EmptyTrace, UnknownEventKind
from .model import EnergyModel, StateInterval, Timeline

__all__ = [
    "CurrentTrace",
    "SynthesisSpec",
    "PeakReport",
    "integrate_energy",
    "synthesize_trace",
    "segment_trace",
    "detect_periodic_peaks",
]

#: Pulse width used for event kinds without an explicit pulse shape.
DEFAULT_PULSE_WIDTH_S = 4e-3


@dataclass(frozen=True)
class CurrentTrace:
    """Uniformly sampled current-vs-time series."""

    sample_period_s: float
    samples: np.ndarray
    supply_voltage_v: float

    def __post_init__(self):
        object.__setattr__(self, "samples", np.asarray(self.samples, dtype=float))
        if self.sample_period_s <= 0 or not np.isfinite(self.sample_period_s):
            raise ValueError("sample_period_s must be finite and positive")
        if self.supply_voltage_v <= 0:
            raise ValueError("supply_voltage_v must be positive")

    @property
    def duration_s(self) -> float:
        return max(len(self.samples) - 1, 0) * self.sample_period_s

    @property
    def times_s(self) -> np.ndarray:
        return np.arange(len(self.samples)) * self.sample_period_s


@dataclass(frozen=True)
class SynthesisSpec:
    """How to render a timeline into a sampled waveform.

    ``event_pulse`` maps an event kind to a (width_s, amplitude_a)
    rectangular pulse; kinds without an entry get a default-width pulse
    whose amplitude reproduces the model's per-event charge.
    """

    sample_rate_hz: float = 1000.0
    transition_shape: str = "rectangular"  # or "linear-ramp"
    noise_stddev_a: float = 0.0
    event_pulse: dict[str, tuple[float, float]] = field(default_factory=dict)
    rng_seed: int = 0

    def __post_init__(self):
        if self.sample_rate_hz <= 0:
            raise ValueError("sample_rate_hz must be positive")
        if self.transition_shape not in ("rectangular", "linear-ramp"):
            raise ValueError(f"unknown transition_shape {self.transition_shape!r}")
        if self.noise_stddev_a < 0:
            raise ValueError("noise_stddev_a must be >= 0")
        for kind, (width, amp) in self.event_pulse.items():
            if width < 0 or amp < 0:
                raise ValueError(f"event pulse for {kind!r} must have width, amplitude >= 0")


@dataclass(frozen=True)
class PeakReport:
    """Summary of periodic excess-current peaks in a trace."""

    peak_count: int
    period_s: float
    mean_excess_charge_c: float


def integrate_energy(trace: CurrentTrace) -> float:
    """Measured energy in joules: U times the trapezoidal current integral."""
    if len(trace.samples) == 0:
        raise EmptyTrace("cannot integrate an empty trace")
    if len(trace.samples) == 1:
        return 0.0
    return trace.supply_voltage_v * float(
        np.trapezoid(trace.samples, dx=trace.sample_period_s)
    )


def _waveform_segments(model: EnergyModel, timeline: Timeline, shape: str):
    """Piecewise-linear segments (t0, t1, i0, i1) for the ideal waveform.

    Transition time is carved from the head of the destination interval,
    clamped to its duration, mirroring the transition-aware estimator.
    """
    segments: list[tuple[float, float, float, float]] = []
    t = 0.0
    prev_state: str | None = None
    for iv in timeline.intervals:
        current = model.state_current(iv.state)
        remaining = iv.duration_s
        if prev_state is not None and prev_state != iv.state:
            tr = model.transition(prev_state, iv.state)
            if tr is not None and tr.duration_s > 0:
                carved = min(tr.duration_s, remaining)
                if carved > 0:
                    if shape == "rectangular":
                        i0 = i1 = tr.avg_current_a
                    else:  # linear-ramp between the endpoint state currents
                        i0 = model.state_current(prev_state)
                        i1 = current
                    segments.append((t, t + carved, i0, i1))
                    t += carved
                    remaining -= carved
        if remaining > 0:
            segments.append((t, t + remaining, current, current))
            t += remaining
        prev_state = iv.state
    return segments


def synthesize_trace(
    model: EnergyModel, timeline: Timeline, spec: SynthesisSpec = SynthesisSpec()
) -> CurrentTrace:
    """Render a timeline into a sampled current trace.

    Deterministic for a fixed ``spec.rng_seed``; the noiseless rectangular
    waveform integrates to the event-aware estimate up to discretization.
    """
    period = 1.0 / spec.sample_rate_hz
    total = timeline.total_duration_s
    n = int(np.floor(total / period + 1e-9)) + 1
    times = np.arange(n) * period

    segments = _waveform_segments(model, timeline, spec.transition_shape)
    samples = np.zeros(n)
    if segments:
        starts = np.array([s[0] for s in segments])
        idx = np.clip(np.searchsorted(starts, times, side="right") - 1, 0, len(segments) - 1)
        t0 = starts[idx]
        t1 = np.array([s[1] for s in segments])[idx]
        i0 = np.array([s[2] for s in segments])[idx]
        i1 = np.array([s[3] for s in segments])[idx]
        with np.errstate(divide="ignore", invalid="ignore"):
            frac = np.where(t1 > t0, np.clip((times - t0) / np.where(t1 > t0, t1 - t0, 1.0), 0, 1), 0.0)
        samples = i0 + (i1 - i0) * frac

    for kind, ts in timeline.events:
        charge = model.event_charge(kind)  # raises UnknownEventKind
        if kind in spec.event_pulse:
            width, amplitude = spec.event_pulse[kind]
        else:
            width = DEFAULT_PULSE_WIDTH_S
            amplitude = charge / width if width > 0 else 0.0
        if width > 0 and amplitude > 0:
            samples[(times >= ts - 1e-12) & (times < ts + width - 1e-12)] += amplitude

    if spec.noise_stddev_a > 0:
        rng = np.random.default_rng(spec.rng_seed)
        samples = samples + rng.normal(0.0, spec.noise_stddev_a, n)

    return CurrentTrace(
        sample_period_s=period, samples=samples, supply_voltage_v=model.supply_voltage_v
    )


def _runs(labels: np.ndarray) -> list[list[int]]:
    """Run-length encode integer labels as [label, start, stop) triples."""
    change = np.flatnonzero(np.diff(labels)) + 1
    bounds = np.concatenate(([0], change, [len(labels)]))
    return [[int(labels[a]), int(a), int(b)] for a, b in zip(bounds[:-1], bounds[1:])]


def segment_trace(
    trace: CurrentTrace,
    model: EnergyModel,
    hysteresis_a: float,
    min_dwell_s: float,
) -> Timeline:
    """Recover a state timeline from a sampled trace.

    Nearest-current labeling with hysteresis, followed by merging of runs
    shorter than ``min_dwell_s`` and relabeling of runs whose mean current
    matches a transition better than either adjoining state.  Transition
    segments are emitted as pseudo-states named ``"from->to"``.
    """
    samples = trace.samples
    if len(samples) == 0:
        raise EmptyTrace("cannot segment an empty trace")

    names = list(model.state_names)
    state_currents = {s: model.state_current(s) for s in names}
    for i in range(len(names)):
        for j in range(i + 1, len(names)):
            if abs(state_currents[names[i]] - state_currents[names[j]]) <= 2 * hysteresis_a:
                raise AmbiguousModel(
                    f"states {names[i]!r} and {names[j]!r} are not separable "
                    f"under hysteresis {hysteresis_a} A"
                )

    # Candidate levels: states plus transition plateaus that are separable
    # from every state under the hysteresis.
    levels: list[tuple[float, object]] = [(state_currents[s], s) for s in names]
    for tr in model.transitions:
        if all(
            abs(tr.avg_current_a - state_currents[s]) > 2 * hysteresis_a for s in names
        ):
            levels.append((tr.avg_current_a, (tr.from_state, tr.to_state)))
    currents = np.array([c for c, _ in levels])

    nearest = np.argmin(np.abs(samples[:, None] - currents[None, :]), axis=1)
    labels = np.empty(len(samples), dtype=int)
    active = int(nearest[0])
    for k in range(len(samples)):
        cand = int(nearest[k])
        if cand != active and abs(samples[k] - currents[active]) > hysteresis_a:
            active = cand
        labels[k] = active

    runs = _runs(labels)
    min_dwell_n = int(round(min_dwell_s / trace.sample_period_s))
    while len(runs) > 1:
        short = [r for r in runs if r[2] - r[1] < min_dwell_n]
        if not short:
            break
        run = min(short, key=lambda r: r[2] - r[1])
        i = runs.index(run)
        mean = float(np.mean(samples[run[1] : run[2]]))
        neighbors = [runs[j] for j in (i - 1, i + 1) if 0 <= j < len(runs)]
        target = min(neighbors, key=lambda r: abs(currents[r[0]] - mean))
        run[0] = target[0]
        merged = []
        for r in runs:
            if merged and merged[-1][0] == r[0]:
                merged[-1][2] = r[2]
            else:
                merged.append(r)
        runs = merged

    def _nearest_state(mean: float) -> str:
        return min(names, key=lambda s: abs(state_currents[s] - mean))

    def _run_state(i: int) -> str:
        label = levels[runs[i][0]][1]
        return label if isinstance(label, str) else label[0]

    period = trace.sample_period_s
    out_labels: list[str] = []
    for i, (lab, a, b) in enumerate(runs):
        label = levels[lab][1]
        mean = float(np.mean(samples[a:b]))
        if isinstance(label, tuple):
            # transition plateau: keep only when its neighbours match
            f, t = label
            if 0 < i < len(runs) - 1 and _run_state(i - 1) == f and _run_state(i + 1) == t:
                out_labels.append(f"{f}->{t}")
            else:
                out_labels.append(_nearest_state(mean))
            continue
        name = label
        if 0 < i < len(runs) - 1:
            prev_name = _run_state(i - 1)
            next_name = _run_state(i + 1)
            tr = model.transition(prev_name, next_name)
            if tr is not None:
                d_tr = abs(mean - tr.avg_current_a)
                if d_tr < abs(mean - state_currents[prev_name]) and d_tr < abs(
                    mean - state_currents[next_name]
                ):
                    name = f"{prev_name}->{next_name}"
        out_labels.append(name)

    intervals: list[StateInterval] = []
    for i, (name, (_, a, b)) in enumerate(zip(out_labels, runs)):
        # samples are fence posts: n samples span (n - 1) periods
        dur = (b - a - (1 if i == len(runs) - 1 else 0)) * period
        if intervals and intervals[-1].state == name:
            intervals[-1] = StateInterval(name, intervals[-1].duration_s + dur)
        else:
            intervals.append(StateInterval(name, dur))
    return Timeline(intervals=tuple(intervals))


def detect_periodic_peaks(
    trace: CurrentTrace, baseline_window_s: float, threshold_a: float
) -> PeakReport:
    """Find excess-current peaks above a rolling-median baseline.

    A peak is a maximal run of samples exceeding baseline + threshold;
    the reported period is the median spacing between peak centers.
    """
    samples = trace.samples
    if len(samples) == 0:
        raise EmptyTrace("cannot analyze an empty trace")
    period = trace.sample_period_s
    if baseline_window_s < 10 * period:
        raise ValueError("baseline_window_s must be at least 10 sample periods")

    window = int(round(baseline_window_s / period))
    baseline = median_filter(samples, size=window, mode="nearest")
    # edge padding would echo a peak sitting at the trace boundary; hold the
    # first/last full-window medians constant instead
    half = window // 2
    if len(samples) > window:
        baseline[:half] = baseline[half]
        baseline[len(samples) - half :] = baseline[len(samples) - half - 1]
    above = samples > baseline + threshold_a

    centers: list[float] = []
    charges: list[float] = []
    for _, a, b in _runs(above.astype(int)):
        if not above[a]:
            continue
        centers.append(0.5 * (a + b - 1) * period)
        charges.append(float(np.sum(samples[a:b] - baseline[a:b])) * period)

    count = len(centers)
    peak_period = float(np.median(np.diff(centers))) if count >= 2 else 0.0
    mean_charge = float(np.mean(charges)) if count else 0.0
    return PeakReport(peak_count=count, period_s=peak_period, mean_excess_charge_c=mean_charge)
