"""Figure rendering for sweep curves and traces (file output only)."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .sweep import ErrorCurve
from .trace import CurrentTrace, PeakReport

__all__ = ["plot_error_curve", "plot_trace"]


def plot_error_curve(curve: ErrorCurve, path) -> None:
    """Error-vs-rate figure with 95% CI bands for both estimators."""
    rates = [p.rate_pps for p in curve.points]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for label, mean, lo, hi, color in (
        (
            "three-state (naive)",
            [p.err_naive_pct for p in curve.points],
            [p.err_naive_lo for p in curve.points],
            [p.err_naive_hi for p in curve.points],
            "tab:red",
        ),
        (
            "transition-aware",
            [p.err_improved_pct for p in curve.points],
            [p.err_improved_lo for p in curve.points],
            [p.err_improved_hi for p in curve.points],
            "tab:blue",
        ),
    ):
        ax.plot(rates, mean, "o-", color=color, label=label)
        ax.fill_between(rates, lo, hi, color=color, alpha=0.2)
    ax.set_xlabel("Traffic rate (packets/s)")
    ax.set_ylabel("Absolute mean estimation error (%)")
    ax.set_ylim(bottom=0)
    ax.grid(True, alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_trace(trace: CurrentTrace, path, peaks: PeakReport | None = None) -> None:
    """Current-vs-time figure, optionally annotated with the peak summary."""
    fig, ax = plt.subplots(figsize=(8.0, 3.2))
    ax.plot(trace.times_s, trace.samples * 1e3, lw=0.7, color="tab:blue")
    ax.set_xlabel("Time (s)")
    ax.set_ylabel("Current (mA)")
    if peaks is not None and peaks.peak_count:
        ax.set_title(
            f"{peaks.peak_count} peaks, period {peaks.period_s * 1e3:.1f} ms, "
            f"mean excess charge {peaks.mean_excess_charge_c * 1e3:.3f} mC"
        )
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
