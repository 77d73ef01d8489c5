"""File formats: model JSON, timeline/trace/observations CSV, curve CSV.

All numeric fields carry unit suffixes in their names (``_v``, ``_a``,
``_s``, ``_c``, ``_j``, ``_pps``) and are written at full precision.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from .calibrate import CalibrationResult, Observation
from .model import (
    EnergyModel,
    EnergyReport,
    EventSpec,
    PowerState,
    StateInterval,
    Timeline,
    TransitionSpec,
)
from .sweep import ErrorCurve, SweepConfig
from .trace import CurrentTrace, SynthesisSpec

__all__ = [
    "model_to_dict",
    "model_from_dict",
    "load_model",
    "save_model",
    "load_timeline",
    "save_timeline",
    "load_trace",
    "save_trace",
    "load_observations",
    "save_observations",
    "report_to_dict",
    "calibration_to_dict",
    "save_calibration",
    "curve_to_csv",
    "load_sweep_config",
]


def model_to_dict(model: EnergyModel) -> dict:
    return {
        "supply_voltage_v": model.supply_voltage_v,
        "states": [{"name": s.name, "avg_current_a": s.avg_current_a} for s in model.states],
        "transitions": [
            {
                "from": tr.from_state,
                "to": tr.to_state,
                "duration_s": tr.duration_s,
                "avg_current_a": tr.avg_current_a,
            }
            for tr in model.transitions
        ],
        "events": [{"kind": ev.kind, "charge_c": ev.charge_c} for ev in model.events],
    }


def model_from_dict(doc: dict) -> EnergyModel:
    return EnergyModel(
        supply_voltage_v=float(doc["supply_voltage_v"]),
        states=tuple(
            PowerState(s["name"], float(s["avg_current_a"])) for s in doc.get("states", [])
        ),
        transitions=tuple(
            TransitionSpec(
                t["from"], t["to"], float(t["duration_s"]), float(t["avg_current_a"])
            )
            for t in doc.get("transitions", [])
        ),
        events=tuple(
            EventSpec(e["kind"], float(e["charge_c"])) for e in doc.get("events", [])
        ),
    )


def load_model(path) -> EnergyModel:
    with open(path) as f:
        return model_from_dict(json.load(f))


def save_model(model: EnergyModel, path) -> None:
    with open(path, "w") as f:
        json.dump(model_to_dict(model), f, indent=2)
        f.write("\n")


def load_timeline(intervals_path, events_path=None) -> Timeline:
    intervals = []
    with open(intervals_path, newline="") as f:
        for row in csv.DictReader(f):
            intervals.append(StateInterval(row["state"], float(row["duration_s"])))
    events = []
    if events_path is not None:
        with open(events_path, newline="") as f:
            for row in csv.DictReader(f):
                events.append((row["kind"], float(row["timestamp_s"])))
        events.sort(key=lambda kv: kv[1])
    return Timeline(intervals=tuple(intervals), events=tuple(events))


def save_timeline(timeline: Timeline, intervals_path, events_path=None) -> None:
    with open(intervals_path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["state", "duration_s"])
        for iv in timeline.intervals:
            w.writerow([iv.state, repr(float(iv.duration_s))])
    if events_path is not None:
        with open(events_path, "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["kind", "timestamp_s"])
            for kind, ts in timeline.events:
                w.writerow([kind, repr(float(ts))])


def _sidecar_path(trace_path) -> Path:
    return Path(trace_path).with_suffix(".json")


def load_trace(path, supply_voltage_v: float | None = None) -> CurrentTrace:
    """Read a `time_s,current_a` CSV; voltage from argument or JSON sidecar."""
    times = []
    currents = []
    with open(path, newline="") as f:
        for row in csv.DictReader(f):
            times.append(float(row["time_s"]))
            currents.append(float(row["current_a"]))
    if len(times) < 2:
        raise ValueError("trace CSV needs at least 2 samples")
    t = np.asarray(times)
    steps = np.diff(t)
    period = float(np.mean(steps))
    if period <= 0 or np.any(np.abs(steps - period) > 1e-6 * abs(period)):
        raise ValueError("trace sampling is not uniform within 1e-6 relative jitter")
    if supply_voltage_v is None:
        sidecar = _sidecar_path(path)
        if not sidecar.exists():
            raise ValueError(
                "supply voltage not given and no JSON sidecar found at " + str(sidecar)
            )
        with open(sidecar) as f:
            supply_voltage_v = float(json.load(f)["supply_voltage_v"])
    return CurrentTrace(
        sample_period_s=period, samples=np.asarray(currents), supply_voltage_v=supply_voltage_v
    )


def save_trace(trace: CurrentTrace, path, write_sidecar: bool = True) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["time_s", "current_a"])
        for k, cur in enumerate(trace.samples):
            w.writerow([repr(k * trace.sample_period_s), repr(float(cur))])
    if write_sidecar:
        with open(_sidecar_path(path), "w") as f:
            json.dump({"supply_voltage_v": trace.supply_voltage_v}, f)
            f.write("\n")


def _observation_columns(header: list[str]):
    states = [c[2:] for c in header if c.startswith("t_")]
    transitions = [
        tuple(c[2:].split("__", 1))
        for c in header
        if c.startswith("n_") and not c.startswith("n_ev_")
    ]
    events = [c[5:] for c in header if c.startswith("n_ev_")]
    return states, transitions, events


def load_observations(path) -> list[Observation]:
    """Read one observation per row: `t_<state>`, `n_<from>__<to>`,
    `n_ev_<kind>`, `energy_j` columns."""
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        states, transitions, events = _observation_columns(reader.fieldnames or [])
        out = []
        for row in reader:
            out.append(
                Observation(
                    state_times_s={s: float(row[f"t_{s}"]) for s in states},
                    transition_counts={
                        (a, b): float(row[f"n_{a}__{b}"]) for a, b in transitions
                    },
                    event_counts={k: float(row[f"n_ev_{k}"]) for k in events},
                    measured_energy_j=float(row["energy_j"]),
                )
            )
    return out


def save_observations(observations: list[Observation], path) -> None:
    states: list[str] = []
    transitions: list[tuple[str, str]] = []
    events: list[str] = []
    for obs in observations:
        for s in obs.state_times_s:
            if s not in states:
                states.append(s)
        for pair in obs.transition_counts:
            if pair not in transitions:
                transitions.append(pair)
        for k in obs.event_counts:
            if k not in events:
                events.append(k)
    header = (
        [f"t_{s}" for s in states]
        + [f"n_{a}__{b}" for a, b in transitions]
        + [f"n_ev_{k}" for k in events]
        + ["energy_j"]
    )
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        for obs in observations:
            row = (
                [repr(float(obs.state_times_s.get(s, 0.0))) for s in states]
                + [repr(float(obs.transition_counts.get(pair, 0.0))) for pair in transitions]
                + [repr(float(obs.event_counts.get(k, 0.0))) for k in events]
                + [repr(float(obs.measured_energy_j))]
            )
            w.writerow(row)


def report_to_dict(report: EnergyReport) -> dict:
    return {
        "per_state_j": dict(report.per_state_j),
        "per_transition_j": {f"{a}->{b}": v for (a, b), v in report.per_transition_j.items()},
        "per_event_j": dict(report.per_event_j),
        "total_j": report.total_j,
    }


def calibration_to_dict(
    result: CalibrationResult, supply_voltage_v: float, transition_durations=None
) -> dict:
    """Fitted model as model JSON plus a `fit` block.

    Fitted transition quantities are charges; the serialized TransitionSpec
    current is charge/duration when a duration is known, else the charge is
    carried with duration 1 s.
    """
    durations = transition_durations or {}
    transitions = []
    for (a, b), charge in result.transition_charges_c.items():
        d = durations.get((a, b), 1.0)
        transitions.append(
            {
                "from": a,
                "to": b,
                "duration_s": d,
                "avg_current_a": charge / d if d > 0 else 0.0,
            }
        )
    return {
        "supply_voltage_v": supply_voltage_v,
        "states": [
            {"name": s, "avg_current_a": cur} for s, cur in result.state_currents_a.items()
        ],
        "transitions": transitions,
        "events": [
            {"kind": k, "charge_c": q} for k, q in result.event_charges_c.items()
        ],
        "fit": {"residual_rms_j": result.residual_rms_j, "r_squared": result.r_squared},
    }


def save_calibration(
    result: CalibrationResult, skeleton: EnergyModel, path
) -> None:
    durations = {
        (tr.from_state, tr.to_state): tr.duration_s for tr in skeleton.transitions
    }
    with open(path, "w") as f:
        json.dump(
            calibration_to_dict(result, skeleton.supply_voltage_v, durations), f, indent=2
        )
        f.write("\n")


def curve_to_csv(curve: ErrorCurve) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(
        [
            "rate_pps",
            "err_naive_pct",
            "err_naive_lo",
            "err_naive_hi",
            "err_improved_pct",
            "err_improved_lo",
            "err_improved_hi",
        ]
    )
    for p in curve.points:
        w.writerow(
            [
                repr(p.rate_pps),
                repr(p.err_naive_pct),
                repr(p.err_naive_lo),
                repr(p.err_naive_hi),
                repr(p.err_improved_pct),
                repr(p.err_improved_lo),
                repr(p.err_improved_hi),
            ]
        )
    return buf.getvalue()


def load_sweep_config(path) -> SweepConfig:
    """Sweep config JSON with inline model and synthesis documents."""
    with open(path) as f:
        doc = json.load(f)
    synth = doc.get("synthesis", {})
    pulses = {
        kind: (float(w), float(a)) for kind, (w, a) in synth.get("event_pulse", {}).items()
    }
    return SweepConfig(
        rates_pps=tuple(float(r) for r in doc["rates_pps"]),
        duration_s=float(doc["duration_s"]),
        rx_time_per_packet_s=float(doc["rx_time_per_packet_s"]),
        tx_time_per_packet_s=float(doc["tx_time_per_packet_s"]),
        model_truth=model_from_dict(doc["model_truth"]),
        model_naive=model_from_dict(doc["model_naive"]),
        synthesis=SynthesisSpec(
            sample_rate_hz=float(synth.get("sample_rate_hz", 1000.0)),
            transition_shape=synth.get("transition_shape", "rectangular"),
            noise_stddev_a=float(synth.get("noise_stddev_a", 0.0)),
            event_pulse=pulses,
            rng_seed=int(synth.get("rng_seed", 0)),
        ),
        runs_per_rate=int(doc.get("runs_per_rate", 20)),
    )
