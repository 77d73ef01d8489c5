"""Energy model data types and the three state-based estimators.

Energy is computed from per-state residency times multiplied by average
currents and the supply voltage.  Two refinements are layered on top of the
naive sum: finite-duration state transitions with their own current draw,
and fixed excess charge per discrete event (beacon receptions, packets).

All types are immutable; all operations are pure functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import UnknownEventKind, UnknownState

__all__ = [
    "PowerState",
    "TransitionSpec",
    "EventSpec",
    "EnergyModel",
    "StateInterval",
    "Timeline",
    "EnergyReport",
    "validate_model",
    "estimate_basic",
    "estimate_with_transitions",
    "estimate_with_events",
    "transition_counts",
]


@dataclass(frozen=True)
class PowerState:
    """A discrete operating mode with a characteristic average current."""

    name: str
    avg_current_a: float


@dataclass(frozen=True)
class TransitionSpec:
    """Finite-duration switch between two states at its own current."""

    from_state: str
    to_state: str
    duration_s: float
    avg_current_a: float


@dataclass(frozen=True)
class EventSpec:
    """A discrete event adding a fixed excess charge above the state baseline.

    ``charge_c`` is in coulombs (ampere-seconds).
    """

    kind: str
    charge_c: float


@dataclass(frozen=True)
class EnergyModel:
    """Supply voltage plus named states, transitions and event kinds."""

    supply_voltage_v: float
    states: tuple[PowerState, ...]
    transitions: tuple[TransitionSpec, ...] = ()
    events: tuple[EventSpec, ...] = ()

    def state_current(self, name: str) -> float:
        for s in self.states:
            if s.name == name:
                return s.avg_current_a
        raise UnknownState(f"state {name!r} not in model")

    def transition(self, from_state: str, to_state: str) -> TransitionSpec | None:
        for tr in self.transitions:
            if tr.from_state == from_state and tr.to_state == to_state:
                return tr
        return None

    def event_charge(self, kind: str) -> float:
        for ev in self.events:
            if ev.kind == kind:
                return ev.charge_c
        raise UnknownEventKind(f"event kind {kind!r} not in model")

    @property
    def state_names(self) -> tuple[str, ...]:
        return tuple(s.name for s in self.states)


@dataclass(frozen=True)
class StateInterval:
    """A contiguous span of residency in one state."""

    state: str
    duration_s: float


@dataclass(frozen=True)
class Timeline:
    """Ordered state intervals plus timestamped discrete events.

    Event timestamps are absolute seconds from the timeline start and must
    lie within the total duration; events must be sorted by timestamp.
    """

    intervals: tuple[StateInterval, ...]
    events: tuple[tuple[str, float], ...] = ()

    def __post_init__(self):
        total = self.total_duration_s
        prev = -math.inf
        for kind, ts in self.events:
            if ts < prev:
                raise ValueError("timeline events must be sorted by timestamp")
            if not 0.0 <= ts <= total + 1e-12:
                raise ValueError(f"event {kind!r} at {ts} s outside [0, {total}] s")
            prev = ts

    @property
    def total_duration_s(self) -> float:
        return sum(iv.duration_s for iv in self.intervals)

    def state_times(self) -> dict[str, float]:
        """Total residency per state, summed over intervals."""
        times: dict[str, float] = {}
        for iv in self.intervals:
            times[iv.state] = times.get(iv.state, 0.0) + iv.duration_s
        return times

    def event_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for kind, _ in self.events:
            counts[kind] = counts.get(kind, 0) + 1
        return counts


@dataclass(frozen=True)
class EnergyReport:
    """Per-state / per-transition / per-event energy breakdown, in joules."""

    per_state_j: dict[str, float]
    per_transition_j: dict[tuple[str, str], float] = field(default_factory=dict)
    per_event_j: dict[str, float] = field(default_factory=dict)

    @property
    def total_j(self) -> float:
        return (
            sum(self.per_state_j.values())
            + sum(self.per_transition_j.values())
            + sum(self.per_event_j.values())
        )


def validate_model(model: EnergyModel) -> list[str]:
    """Return all invariant violations; the model is valid iff the list is empty."""
    violations: list[str] = []
    if not (math.isfinite(model.supply_voltage_v) and model.supply_voltage_v > 0):
        violations.append(f"supply voltage must be finite and > 0, got {model.supply_voltage_v}")
    if not model.states:
        violations.append("model must define at least one state")

    seen: set[str] = set()
    for s in model.states:
        if s.name in seen:
            violations.append(f"duplicate state name {s.name!r}")
        seen.add(s.name)
        if not (math.isfinite(s.avg_current_a) and s.avg_current_a >= 0):
            violations.append(f"state {s.name!r} current must be finite and >= 0")

    names = {s.name for s in model.states}
    pairs: set[tuple[str, str]] = set()
    for tr in model.transitions:
        pair = (tr.from_state, tr.to_state)
        if tr.from_state == tr.to_state:
            violations.append(f"transition {pair} must join distinct states")
        if pair in pairs:
            violations.append(f"duplicate transition {pair}")
        pairs.add(pair)
        for endpoint in pair:
            if endpoint not in names:
                violations.append(f"transition {pair} references unknown state {endpoint!r}")
        if not (math.isfinite(tr.duration_s) and tr.duration_s >= 0):
            violations.append(f"transition {pair} duration must be finite and >= 0")
        if not (math.isfinite(tr.avg_current_a) and tr.avg_current_a >= 0):
            violations.append(f"transition {pair} current must be finite and >= 0")

    kinds: set[str] = set()
    for ev in model.events:
        if ev.kind in kinds:
            violations.append(f"duplicate event kind {ev.kind!r}")
        kinds.add(ev.kind)
        if not (math.isfinite(ev.charge_c) and ev.charge_c >= 0):
            violations.append(f"event {ev.kind!r} charge must be finite and >= 0")

    return violations


def transition_counts(timeline: Timeline) -> dict[tuple[str, str], int]:
    """Directed counts of state changes between adjacent intervals."""
    counts: dict[tuple[str, str], int] = {}
    prev: str | None = None
    for iv in timeline.intervals:
        if prev is not None and prev != iv.state:
            key = (prev, iv.state)
            counts[key] = counts.get(key, 0) + 1
        prev = iv.state
    return counts


def estimate_basic(model: EnergyModel, timeline: Timeline) -> EnergyReport:
    """Naive estimate: sum of U * I_state * residency over all states.

    Transitions are treated as instantaneous and events are ignored.
    """
    u = model.supply_voltage_v
    per_state = {
        state: u * model.state_current(state) * t
        for state, t in timeline.state_times().items()
    }
    return EnergyReport(per_state_j=per_state)


def _carved_residency(model: EnergyModel, timeline: Timeline):
    """Split residency into per-state time and per-transition time.

    For each adjacent interval pair with a matching TransitionSpec of
    duration d, d seconds are carved from the head of the destination
    interval (clamped to its duration) and attributed to the transition.
    Pairs without a spec switch instantaneously.
    """
    state_time: dict[str, float] = {}
    transition_time: dict[tuple[str, str], float] = {}
    prev_state: str | None = None
    for iv in timeline.intervals:
        model.state_current(iv.state)  # raises UnknownState early
        remaining = iv.duration_s
        if prev_state is not None and prev_state != iv.state:
            tr = model.transition(prev_state, iv.state)
            if tr is not None:
                carved = min(tr.duration_s, remaining)
                key = (tr.from_state, tr.to_state)
                transition_time[key] = transition_time.get(key, 0.0) + carved
                remaining -= carved
        state_time[iv.state] = state_time.get(iv.state, 0.0) + remaining
        prev_state = iv.state
    return state_time, transition_time


def estimate_with_transitions(model: EnergyModel, timeline: Timeline) -> EnergyReport:
    """Transition-aware estimate: carved transition time is charged at the
    transition current instead of the destination state's current."""
    u = model.supply_voltage_v
    state_time, transition_time = _carved_residency(model, timeline)
    per_state = {s: u * model.state_current(s) * t for s, t in state_time.items()}
    per_transition = {
        pair: u * model.transition(*pair).avg_current_a * t
        for pair, t in transition_time.items()
    }
    return EnergyReport(per_state_j=per_state, per_transition_j=per_transition)


def estimate_with_events(model: EnergyModel, timeline: Timeline) -> EnergyReport:
    """Event-aware estimate: transition-aware result plus U * charge per event."""
    base = estimate_with_transitions(model, timeline)
    u = model.supply_voltage_v
    per_event = {
        kind: u * model.event_charge(kind) * count
        for kind, count in timeline.event_counts().items()
    }
    return EnergyReport(
        per_state_j=base.per_state_j,
        per_transition_j=base.per_transition_j,
        per_event_j=per_event,
    )
