import math

import pytest

from txenergy import (
    EnergyModel,
    EventSpec,
    PowerState,
    StateInterval,
    Timeline,
    TransitionSpec,
    UnknownEventKind,
    UnknownState,
    estimate_basic,
    estimate_with_events,
    estimate_with_transitions,
    transition_counts,
    validate_model,
)


def three_state_model(voltage=3.0):
    return EnergyModel(
        supply_voltage_v=voltage,
        states=(
            PowerState("sleep", 2e-3),
            PowerState("rx", 15e-3),
            PowerState("tx", 21e-3),
        ),
    )


class TestValidateModel:
    def test_well_formed_model_is_ok(self):
        assert validate_model(three_state_model()) == []

    def test_unknown_transition_endpoint(self):
        model = EnergyModel(
            3.0,
            (PowerState("sleep", 2e-3), PowerState("tx", 20e-3)),
            (TransitionSpec("sleep", "txx", 0.1, 5e-3),),
        )
        violations = validate_model(model)
        assert len(violations) == 1
        assert "txx" in violations[0]

    def test_duplicate_state_name(self):
        model = EnergyModel(3.0, (PowerState("sleep", 2e-3), PowerState("sleep", 3e-3)))
        assert len(validate_model(model)) == 1

    def test_negative_current(self):
        model = EnergyModel(3.0, (PowerState("sleep", -1e-3),))
        assert len(validate_model(model)) == 1

    def test_non_positive_voltage(self):
        assert validate_model(EnergyModel(0.0, (PowerState("a", 1.0),)))


class TestEstimateBasic:
    def test_unit_case(self):
        model = EnergyModel(1.0, (PowerState("a", 1.0),))
        timeline = Timeline((StateInterval("a", 1.0),))
        assert estimate_basic(model, timeline).total_j == pytest.approx(1.0)

    def test_empty_timeline(self):
        assert estimate_basic(three_state_model(), Timeline(())).total_j == 0.0

    def test_three_state_example(self):
        timeline = Timeline(
            (
                StateInterval("sleep", 0.9),
                StateInterval("rx", 0.05),
                StateInterval("tx", 0.05),
            )
        )
        report = estimate_basic(three_state_model(), timeline)
        # 3 * (0.9*0.002 + 0.05*0.015 + 0.05*0.021)
        assert report.total_j == pytest.approx(0.0108, rel=1e-12)
        assert report.per_transition_j == {}
        assert report.per_event_j == {}

    def test_unknown_state_raises(self):
        with pytest.raises(UnknownState):
            estimate_basic(three_state_model(), Timeline((StateInterval("idle", 1.0),)))


class TestEstimateWithTransitions:
    def model(self):
        return EnergyModel(
            3.0,
            (PowerState("sleep", 2e-3), PowerState("tx", 20e-3)),
            (TransitionSpec("sleep", "tx", 0.1, 5e-3),),
        )

    def test_no_transition_specs_matches_basic(self):
        model = three_state_model()
        timeline = Timeline(
            (StateInterval("sleep", 0.4), StateInterval("rx", 0.3), StateInterval("tx", 0.3))
        )
        a = estimate_basic(model, timeline)
        b = estimate_with_transitions(model, timeline)
        assert b.total_j == pytest.approx(a.total_j, rel=1e-12)
        assert b.per_transition_j == {}

    def test_zero_duration_transition_matches_basic(self):
        model = EnergyModel(
            3.0,
            (PowerState("sleep", 2e-3), PowerState("tx", 20e-3)),
            (TransitionSpec("sleep", "tx", 0.0, 5e-3),),
        )
        timeline = Timeline((StateInterval("sleep", 0.5), StateInterval("tx", 0.5)))
        assert estimate_with_transitions(model, timeline).total_j == pytest.approx(
            estimate_basic(model, timeline).total_j, rel=1e-12
        )

    def test_head_carve_example(self):
        timeline = Timeline((StateInterval("sleep", 0.5), StateInterval("tx", 0.5)))
        report = estimate_with_transitions(self.model(), timeline)
        # 3 * (0.5*0.002 + 0.1*0.005 + 0.4*0.020)
        assert report.total_j == pytest.approx(0.0285, rel=1e-12)
        assert report.per_transition_j[("sleep", "tx")] == pytest.approx(3 * 0.1 * 5e-3)

    def test_carve_clamped_to_short_interval(self):
        timeline = Timeline(
            (StateInterval("sleep", 0.5), StateInterval("tx", 0.04), StateInterval("sleep", 0.2))
        )
        report = estimate_with_transitions(self.model(), timeline)
        # whole 0.04 s tx interval is carved; no negative time
        assert report.per_state_j.get("tx", 0.0) == 0.0
        assert report.per_transition_j[("sleep", "tx")] == pytest.approx(3 * 0.04 * 5e-3)
        assert report.total_j == pytest.approx(3 * (0.7 * 2e-3 + 0.04 * 5e-3), rel=1e-12)


class TestEstimateWithEvents:
    def model(self):
        return EnergyModel(
            3.0,
            (PowerState("idle", 10e-3),),
            events=(EventSpec("beacon", 1e-3),),
        )

    def test_no_events_matches_transitions(self):
        timeline = Timeline((StateInterval("idle", 1.0),))
        assert estimate_with_events(self.model(), timeline).total_j == pytest.approx(
            estimate_with_transitions(self.model(), timeline).total_j
        )

    def test_ten_beacons(self):
        events = tuple(("beacon", 0.1 * k) for k in range(10))
        timeline = Timeline((StateInterval("idle", 1.0),), events)
        report = estimate_with_events(self.model(), timeline)
        assert report.per_event_j["beacon"] == pytest.approx(0.03, rel=1e-12)

    def test_unknown_event_kind(self):
        timeline = Timeline((StateInterval("idle", 1.0),), (("probe", 0.5),))
        with pytest.raises(UnknownEventKind):
            estimate_with_events(self.model(), timeline)


class TestProperties:
    def test_additivity_without_seam_transition(self):
        model = three_state_model()
        t1 = Timeline((StateInterval("sleep", 0.3), StateInterval("rx", 0.2)))
        t2 = Timeline((StateInterval("tx", 0.1), StateInterval("sleep", 0.4)))
        combined = Timeline(t1.intervals + t2.intervals)
        assert estimate_basic(model, combined).total_j == pytest.approx(
            estimate_basic(model, t1).total_j + estimate_basic(model, t2).total_j,
            rel=1e-12,
        )

    def test_voltage_scaling(self):
        timeline = Timeline(
            (StateInterval("sleep", 0.5), StateInterval("rx", 0.25), StateInterval("tx", 0.25))
        )
        r1 = estimate_basic(three_state_model(3.0), timeline)
        r2 = estimate_basic(three_state_model(6.0), timeline)
        for state in r1.per_state_j:
            assert r2.per_state_j[state] == 2.0 * r1.per_state_j[state]
        assert r2.total_j == 2.0 * r1.total_j

    def test_transition_dominance(self):
        # transition currents below both adjoining states: never more energy
        model = EnergyModel(
            3.0,
            (PowerState("sleep", 2e-3), PowerState("rx", 15e-3), PowerState("tx", 21e-3)),
            (
                TransitionSpec("sleep", "rx", 0.02, 1e-3),
                TransitionSpec("rx", "tx", 0.02, 1e-3),
                TransitionSpec("tx", "sleep", 0.02, 1e-3),
            ),
        )
        timeline = Timeline(
            (
                StateInterval("sleep", 0.5),
                StateInterval("rx", 0.2),
                StateInterval("tx", 0.2),
                StateInterval("sleep", 0.5),
            )
        )
        assert (
            estimate_with_transitions(model, timeline).total_j
            <= estimate_basic(model, timeline).total_j
        )

    def test_event_monotonicity(self):
        model = EnergyModel(
            3.0, (PowerState("idle", 10e-3),), events=(EventSpec("beacon", 1e-4),)
        )
        base = Timeline((StateInterval("idle", 1.0),))
        more = Timeline((StateInterval("idle", 1.0),), (("beacon", 0.5),))
        assert estimate_with_events(model, more).total_j > estimate_with_events(model, base).total_j

    def test_report_total_consistency(self):
        model = EnergyModel(
            3.0,
            (PowerState("sleep", 2e-3), PowerState("tx", 20e-3)),
            (TransitionSpec("sleep", "tx", 0.1, 5e-3),),
            (EventSpec("beacon", 1e-4),),
        )
        timeline = Timeline(
            (StateInterval("sleep", 0.5), StateInterval("tx", 0.5)), (("beacon", 0.2),)
        )
        report = estimate_with_events(model, timeline)
        parts = (
            sum(report.per_state_j.values())
            + sum(report.per_transition_j.values())
            + sum(report.per_event_j.values())
        )
        assert math.isclose(report.total_j, parts, rel_tol=1e-9)
        assert all(v >= 0 for v in report.per_state_j.values())


class TestTimeline:
    def test_event_outside_duration_rejected(self):
        with pytest.raises(ValueError):
            Timeline((StateInterval("a", 1.0),), (("e", 2.0),))

    def test_unsorted_events_rejected(self):
        with pytest.raises(ValueError):
            Timeline((StateInterval("a", 1.0),), (("e", 0.8), ("e", 0.2)))

    def test_transition_counts(self):
        timeline = Timeline(
            (
                StateInterval("sleep", 0.1),
                StateInterval("rx", 0.1),
                StateInterval("rx", 0.1),
                StateInterval("tx", 0.1),
                StateInterval("sleep", 0.1),
            )
        )
        assert transition_counts(timeline) == {
            ("sleep", "rx"): 1,
            ("rx", "tx"): 1,
            ("tx", "sleep"): 1,
        }
