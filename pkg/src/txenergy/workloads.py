"""Deterministic synthetic timelines for the two evaluation scenarios.

A duty-cycled sensor forwarder with packets on a uniform arrival grid, and
an 802.11 station with power-save mode, periodic beacons and optional
traffic bursts.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InfeasibleSchedule, OverlappingBursts
from .model import StateInterval, Timeline

__all__ = [
    "SensorWorkloadParams",
    "WifiWorkloadParams",
    "gen_sensor_workload",
    "gen_wifi_psm_workload",
]


@dataclass(frozen=True)
class SensorWorkloadParams:
    """Forwarder node under uniform packet arrivals."""

    traffic_rate_pps: float
    duration_s: float
    rx_time_per_packet_s: float
    tx_time_per_packet_s: float
    include_transitions: bool = True

    def __post_init__(self):
        if self.traffic_rate_pps < 0 or self.duration_s < 0:
            raise ValueError("rate and duration must be >= 0")
        if self.rx_time_per_packet_s < 0 or self.tx_time_per_packet_s < 0:
            raise ValueError("per-packet times must be >= 0")


@dataclass(frozen=True)
class WifiWorkloadParams:
    """802.11 station: connect, then stay associated with periodic beacons.

    ``traffic_bursts`` are (start_s, duration_s, direction) relative to the
    start of the connected period, direction "rx" or "tx".  With PSM the
    station sleeps between beacons, waking for ``wake_slice_s`` per beacon.
    """

    connecting_duration_s: float
    connected_duration_s: float
    beacon_interval_s: float = 0.1
    psm_enabled: bool = False
    traffic_bursts: tuple[tuple[float, float, str], ...] = ()
    wake_slice_s: float = 0.005


def gen_sensor_workload(params: SensorWorkloadParams) -> Timeline:
    """Forwarder timeline: per packet sleep -> rx -> tx -> sleep.

    Packet k (k = 1..floor(rate*duration)) starts at (k-1)/rate.  Sleep
    intervals are emitted even when zero-length so the directed transition
    count is exactly 3 per packet.
    """
    rate, duration = params.traffic_rate_pps, params.duration_s
    active = params.rx_time_per_packet_s + params.tx_time_per_packet_s
    if rate == 0 or duration == 0:
        return Timeline(intervals=(StateInterval("sleep", duration),))
    if active * rate > 1 + 1e-12:
        raise InfeasibleSchedule(
            f"per-packet active time {active} s exceeds inter-arrival {1 / rate} s"
        )

    n_packets = int(rate * duration + 1e-9)
    intervals: list[StateInterval] = []
    t = 0.0
    for k in range(n_packets):
        start = k / rate
        intervals.append(StateInterval("sleep", max(start - t, 0.0)))
        intervals.append(StateInterval("rx", params.rx_time_per_packet_s))
        intervals.append(StateInterval("tx", params.tx_time_per_packet_s))
        t = start + active
    intervals.append(StateInterval("sleep", max(duration - t, 0.0)))

    # exact duration conservation
    total = sum(iv.duration_s for iv in intervals)
    drift = duration - total
    if drift != 0.0:
        last = intervals[-1]
        intervals[-1] = StateInterval(last.state, last.duration_s + drift)
    return Timeline(intervals=tuple(intervals))


def _overlay(segments, start, end, state):
    """Replace [start, end) of a (start, end, state) segment list with state."""
    out = []
    for a, b, s in segments:
        if end <= a or start >= b:
            out.append((a, b, s))
            continue
        if a < start:
            out.append((a, start, s))
        if b > end:
            out.append((end, b, s))
    out.append((max(start, segments[0][0]), min(end, segments[-1][1]), state))
    out.sort()
    return out


def gen_wifi_psm_workload(params: WifiWorkloadParams) -> Timeline:
    """802.11 station timeline with beacon events every beacon interval.

    The lead-in is a disconnected interval of ``connecting_duration_s``;
    models representing the connecting dip do so via a TransitionSpec out
    of the disconnected state.  Beacon count is
    floor(connected_duration / beacon_interval).
    """
    conn = params.connected_duration_s
    bursts = sorted(params.traffic_bursts)
    prev_end = 0.0
    for start, dur, direction in bursts:
        if direction not in ("rx", "tx"):
            raise ValueError(f"burst direction must be rx or tx, got {direction!r}")
        if start < prev_end or start + dur > conn + 1e-12:
            raise OverlappingBursts(
                f"burst at {start} s overlaps a neighbor or exceeds the connected period"
            )
        prev_end = start + dur

    n_beacons = int(conn / params.beacon_interval_s + 1e-9) if conn > 0 else 0
    beacon_times = [k * params.beacon_interval_s for k in range(n_beacons)]

    segments = [(0.0, conn, "idle" if not params.psm_enabled else "sleep")]
    if params.psm_enabled:
        for b in beacon_times:
            segments = _overlay(segments, b, min(b + params.wake_slice_s, conn), "idle")
    for start, dur, direction in bursts:
        segments = _overlay(segments, start, start + dur, direction)

    offset = params.connecting_duration_s
    intervals: list[StateInterval] = []
    if offset > 0:
        intervals.append(StateInterval("disconnected", offset))
    for a, b, s in segments:
        if b - a <= 0:
            continue
        if intervals and intervals[-1].state == s:
            intervals[-1] = StateInterval(s, intervals[-1].duration_s + (b - a))
        else:
            intervals.append(StateInterval(s, b - a))

    events = tuple(("beacon", offset + b) for b in beacon_times)
    return Timeline(intervals=tuple(intervals), events=events)
