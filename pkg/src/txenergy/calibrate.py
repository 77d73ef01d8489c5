"""OLS calibration of per-state currents and per-transition/event charges.

Total measured energy is regressed (no intercept) on supply-voltage-scaled
state residency times and transition/event counts; the fitted coefficients
are the currents and charges of the energy model.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg as sla
from scipy import stats

from .errors import (
    NonPositiveMeasured,
    RankDeficient,
    TooFewObservations,
    TooFewSamples,
    UnknownName,
)
from .model import EnergyModel

__all__ = [
    "Observation",
    "CalibrationResult",
    "fit_ols",
    "predict",
    "estimation_error",
    "confidence_interval",
]


@dataclass(frozen=True)
class Observation:
    """Aggregate record of one run: residency times, counts, measured energy."""

    state_times_s: dict[str, float]
    transition_counts: dict[tuple[str, str], float] = field(default_factory=dict)
    event_counts: dict[str, float] = field(default_factory=dict)
    measured_energy_j: float = 0.0


@dataclass(frozen=True)
class CalibrationResult:
    """Fitted currents and charges plus fit quality."""

    state_currents_a: dict[str, float]
    transition_charges_c: dict[tuple[str, str], float]
    event_charges_c: dict[str, float]
    residual_rms_j: float
    r_squared: float


def _columns(skeleton: EnergyModel):
    state_cols = list(skeleton.state_names)
    transition_cols = [(tr.from_state, tr.to_state) for tr in skeleton.transitions]
    event_cols = [ev.kind for ev in skeleton.events]
    return state_cols, transition_cols, event_cols


def fit_ols(observations: list[Observation], skeleton: EnergyModel) -> CalibrationResult:
    """Least-squares fit of the skeleton's currents and charges.

    Solved via QR/SVD rather than normal equations; rank deficiency is
    reported with the offending column names instead of being regularized.
    """
    state_cols, transition_cols, event_cols = _columns(skeleton)
    col_names = state_cols + [f"{f}->{t}" for f, t in transition_cols] + event_cols
    p = len(col_names)
    n = len(observations)
    if n < p:
        raise TooFewObservations(f"{n} observations for {p} unknowns")

    u = skeleton.supply_voltage_v
    a = np.zeros((n, p))
    e = np.zeros(n)
    for k, obs in enumerate(observations):
        row = (
            [obs.state_times_s.get(s, 0.0) for s in state_cols]
            + [obs.transition_counts.get(pair, 0.0) for pair in transition_cols]
            + [obs.event_counts.get(kind, 0.0) for kind in event_cols]
        )
        a[k] = np.asarray(row) * u
        e[k] = obs.measured_energy_j

    _, r, piv = sla.qr(a, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    tol = max(a.shape) * np.finfo(float).eps * (diag[0] if diag.size else 0.0)
    rank = int(np.sum(diag > tol))
    if rank < p:
        raise RankDeficient([col_names[j] for j in piv[rank:]])

    x, _, _, _ = np.linalg.lstsq(a, e, rcond=None)
    residuals = a @ x - e
    ss_res = float(residuals @ residuals)
    ss_tot = float(e @ e)  # uncentered: the model has no intercept
    residual_rms = math.sqrt(ss_res / n)
    r_squared = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0

    ns = len(state_cols)
    nt = len(transition_cols)
    return CalibrationResult(
        state_currents_a=dict(zip(state_cols, x[:ns])),
        transition_charges_c=dict(zip(transition_cols, x[ns : ns + nt])),
        event_charges_c=dict(zip(event_cols, x[ns + nt :])),
        residual_rms_j=residual_rms,
        r_squared=float(np.clip(r_squared, 0.0, 1.0)),
    )


def predict(result: CalibrationResult, obs: Observation, supply_voltage_v: float) -> float:
    """Predicted energy in joules for one observation under the fitted model."""
    total = 0.0
    for s, t in obs.state_times_s.items():
        if s not in result.state_currents_a:
            raise UnknownName(f"state {s!r} was not fitted")
        total += t * result.state_currents_a[s]
    for pair, c in obs.transition_counts.items():
        if pair not in result.transition_charges_c:
            raise UnknownName(f"transition {pair} was not fitted")
        total += c * result.transition_charges_c[pair]
    for kind, c in obs.event_counts.items():
        if kind not in result.event_charges_c:
            raise UnknownName(f"event kind {kind!r} was not fitted")
        total += c * result.event_charges_c[kind]
    return supply_voltage_v * total


def estimation_error(estimated_j: float, measured_j: float) -> float:
    """Absolute percentage error of an estimate against a measurement."""
    if measured_j <= 0:
        raise NonPositiveMeasured(f"measured energy must be > 0, got {measured_j}")
    return 100.0 * abs(estimated_j - measured_j) / measured_j


def confidence_interval(samples, level: float = 0.95) -> tuple[float, float]:
    """Student-t confidence interval for the mean of a small sample."""
    x = np.asarray(samples, dtype=float)
    if len(x) < 2:
        raise TooFewSamples("confidence interval needs at least 2 samples")
    if not 0.0 < level < 1.0:
        raise ValueError("level must be in (0, 1)")
    n = len(x)
    mean = float(np.mean(x))
    sem = float(np.std(x, ddof=1)) / math.sqrt(n)
    q = float(stats.t.ppf(0.5 * (1.0 + level), n - 1))
    return (mean - q * sem, mean + q * sem)
