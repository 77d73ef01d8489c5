"""Command-line front end.

Data goes to stdout (or --out), diagnostics to stderr.  Exit codes:
0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import fileio
from .calibrate import fit_ols
from .errors import TxEnergyError
from .model import estimate_basic, estimate_with_events, estimate_with_transitions, validate_model
from .sweep import run_sweep
from .trace import SynthesisSpec, detect_periodic_peaks, segment_trace, synthesize_trace


def _emit(text: str, out_path) -> None:
    if out_path:
        with open(out_path, "w") as f:
            f.write(text)
    else:
        sys.stdout.write(text)


def _load_valid_model(path):
    model = fileio.load_model(path)
    violations = validate_model(model)
    if violations:
        raise TxEnergyError("invalid model: " + "; ".join(violations))
    return model


def cmd_estimate(args) -> int:
    model = _load_valid_model(args.model)
    timeline = fileio.load_timeline(args.timeline, args.events)
    estimator = {
        "basic": estimate_basic,
        "transitions": estimate_with_transitions,
        "events": estimate_with_events,
    }[args.mode]
    report = estimator(model, timeline)
    _emit(json.dumps(fileio.report_to_dict(report), indent=2) + "\n", args.out)
    return 0


def cmd_calibrate(args) -> int:
    skeleton = _load_valid_model(args.skeleton)
    observations = fileio.load_observations(args.observations)
    result = fit_ols(observations, skeleton)
    durations = {(t.from_state, t.to_state): t.duration_s for t in skeleton.transitions}
    doc = fileio.calibration_to_dict(result, skeleton.supply_voltage_v, durations)
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def cmd_segment(args) -> int:
    model = _load_valid_model(args.model)
    trace = fileio.load_trace(args.trace, args.voltage)
    timeline = segment_trace(trace, model, args.hysteresis, args.min_dwell)
    import io as _io
    import csv as _csv

    buf = _io.StringIO()
    w = _csv.writer(buf)
    w.writerow(["state", "duration_s"])
    for iv in timeline.intervals:
        w.writerow([iv.state, repr(iv.duration_s)])
    _emit(buf.getvalue(), args.out)
    return 0


def cmd_peaks(args) -> int:
    trace = fileio.load_trace(args.trace, args.voltage)
    report = detect_periodic_peaks(trace, args.baseline_window, args.threshold)
    doc = {
        "peak_count": report.peak_count,
        "period_s": report.period_s,
        "mean_excess_charge_c": report.mean_excess_charge_c,
    }
    if args.plot:
        from .plots import plot_trace

        plot_trace(trace, args.plot, peaks=report)
        print(f"wrote figure {args.plot}", file=sys.stderr)
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return 0


def cmd_synth(args) -> int:
    model = _load_valid_model(args.model)
    timeline = fileio.load_timeline(args.timeline, args.events)
    spec = SynthesisSpec(
        sample_rate_hz=args.rate,
        transition_shape=args.shape,
        noise_stddev_a=args.noise,
        rng_seed=args.seed,
    )
    trace = synthesize_trace(model, timeline, spec)
    if args.out:
        fileio.save_trace(trace, args.out)
    else:
        import io as _io
        import csv as _csv

        buf = _io.StringIO()
        w = _csv.writer(buf)
        w.writerow(["time_s", "current_a"])
        for k, cur in enumerate(trace.samples):
            w.writerow([repr(k * trace.sample_period_s), repr(float(cur))])
        sys.stdout.write(buf.getvalue())
    return 0


def cmd_sweep(args) -> int:
    config = fileio.load_sweep_config(args.config)
    if args.seed is not None:
        from dataclasses import replace

        config = replace(config, synthesis=replace(config.synthesis, rng_seed=args.seed))
    curve = run_sweep(config)
    if args.plot:
        from .plots import plot_error_curve

        plot_error_curve(curve, args.plot)
        print(f"wrote figure {args.plot}", file=sys.stderr)
    _emit(fileio.curve_to_csv(curve), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="txenergy",
        description="State-based transceiver energy estimation, calibration and trace analysis",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="estimate energy for a timeline under a model")
    p.add_argument("--model", required=True)
    p.add_argument("--timeline", required=True)
    p.add_argument("--events", help="optional events CSV (kind,timestamp_s)")
    p.add_argument("--mode", choices=["basic", "transitions", "events"], default="basic")
    p.add_argument("--out")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("calibrate", help="fit currents and charges from observations")
    p.add_argument("--observations", required=True)
    p.add_argument("--skeleton", required=True, help="model JSON giving structure and voltage")
    p.add_argument("--out")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("segment", help="recover a state timeline from a trace")
    p.add_argument("--trace", required=True)
    p.add_argument("--model", required=True)
    p.add_argument("--voltage", type=float)
    p.add_argument("--hysteresis", type=float, required=True, help="amperes")
    p.add_argument("--min-dwell", type=float, required=True, help="seconds")
    p.add_argument("--out")
    p.set_defaults(func=cmd_segment)

    p = sub.add_parser("peaks", help="detect periodic peaks above a rolling baseline")
    p.add_argument("--trace", required=True)
    p.add_argument("--voltage", type=float)
    p.add_argument("--baseline-window", type=float, required=True, help="seconds")
    p.add_argument("--threshold", type=float, required=True, help="amperes")
    p.add_argument("--plot", help="write a trace figure to this file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_peaks)

    p = sub.add_parser("synth", help="synthesize a current trace from model + timeline")
    p.add_argument("--model", required=True)
    p.add_argument("--timeline", required=True)
    p.add_argument("--events", help="optional events CSV")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", type=float, default=0.0, help="noise stddev in amperes")
    p.add_argument("--rate", type=float, default=1000.0, help="sample rate in Hz")
    p.add_argument("--shape", choices=["rectangular", "linear-ramp"], default="rectangular")
    p.add_argument("--out")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("sweep", help="run an error-vs-rate sweep from a config JSON")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, help="override the config's synthesis seed")
    p.add_argument("--plot", help="write the error-curve figure to this file")
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TxEnergyError, ValueError, KeyError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
