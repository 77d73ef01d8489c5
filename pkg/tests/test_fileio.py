import json

import numpy as np
import pytest

from txenergy import (
    CurrentTrace,
    EnergyModel,
    EventSpec,
    Observation,
    PowerState,
    StateInterval,
    Timeline,
    TransitionSpec,
    demo_sweep_config,
    estimate_with_events,
    fit_ols,
    run_sweep,
)
from txenergy import fileio


def sample_model():
    return EnergyModel(
        3.0,
        (PowerState("sleep", 2e-3), PowerState("tx", 20e-3)),
        (TransitionSpec("sleep", "tx", 0.1, 5e-3),),
        (EventSpec("beacon", 2e-5),),
    )


class TestModelJson:
    def test_round_trip(self, tmp_path):
        path = tmp_path / "model.json"
        fileio.save_model(sample_model(), path)
        assert fileio.load_model(path) == sample_model()

    def test_field_names(self, tmp_path):
        path = tmp_path / "model.json"
        fileio.save_model(sample_model(), path)
        doc = json.loads(path.read_text())
        assert set(doc) == {"supply_voltage_v", "states", "transitions", "events"}
        assert doc["transitions"][0]["from"] == "sleep"
        assert doc["events"][0]["charge_c"] == 2e-5


class TestTimelineCsv:
    def test_round_trip_with_events(self, tmp_path):
        timeline = Timeline(
            (StateInterval("sleep", 0.5), StateInterval("tx", 0.5)),
            (("beacon", 0.1), ("beacon", 0.7)),
        )
        ip, ep = tmp_path / "t.csv", tmp_path / "e.csv"
        fileio.save_timeline(timeline, ip, ep)
        assert fileio.load_timeline(ip, ep) == timeline

    def test_intervals_only(self, tmp_path):
        timeline = Timeline((StateInterval("sleep", 1.25),))
        path = tmp_path / "t.csv"
        fileio.save_timeline(timeline, path)
        assert fileio.load_timeline(path) == timeline


class TestTraceCsv:
    def test_round_trip_with_sidecar(self, tmp_path):
        trace = CurrentTrace(0.001, np.array([1e-3, 2e-3, 3e-3, 2e-3]), 3.3)
        path = tmp_path / "trace.csv"
        fileio.save_trace(trace, path)
        loaded = fileio.load_trace(path)
        assert loaded.supply_voltage_v == 3.3
        assert loaded.sample_period_s == pytest.approx(0.001, rel=1e-9)
        assert np.allclose(loaded.samples, trace.samples)

    def test_voltage_flag_overrides_sidecar(self, tmp_path):
        trace = CurrentTrace(0.001, np.array([1e-3, 2e-3]), 3.3)
        path = tmp_path / "trace.csv"
        fileio.save_trace(trace, path)
        assert fileio.load_trace(path, supply_voltage_v=5.0).supply_voltage_v == 5.0

    def test_non_uniform_sampling_rejected(self, tmp_path):
        path = tmp_path / "trace.csv"
        path.write_text("time_s,current_a\n0.0,0.001\n0.001,0.002\n0.005,0.001\n")
        with pytest.raises(ValueError):
            fileio.load_trace(path, supply_voltage_v=3.0)

    def test_missing_sidecar_and_voltage_rejected(self, tmp_path):
        trace = CurrentTrace(0.001, np.array([1e-3, 2e-3]), 3.3)
        path = tmp_path / "trace.csv"
        fileio.save_trace(trace, path, write_sidecar=False)
        with pytest.raises(ValueError):
            fileio.load_trace(path)


class TestObservationsCsv:
    def test_round_trip(self, tmp_path):
        obs = [
            Observation(
                {"sleep": 1.0, "tx": 0.5},
                {("sleep", "tx"): 3.0},
                {"beacon": 7.0},
                0.123,
            ),
            Observation(
                {"sleep": 2.0, "tx": 0.25},
                {("sleep", "tx"): 1.0},
                {"beacon": 2.0},
                0.456,
            ),
        ]
        path = tmp_path / "obs.csv"
        fileio.save_observations(obs, path)
        assert fileio.load_observations(path) == obs

    def test_header_convention(self, tmp_path):
        path = tmp_path / "obs.csv"
        fileio.save_observations(
            [Observation({"sleep": 1.0}, {("a", "b"): 1.0}, {"beacon": 1.0}, 0.1)], path
        )
        header = path.read_text().splitlines()[0]
        assert header == "t_sleep,n_a__b,n_ev_beacon,energy_j"


class TestCalibrationJson:
    def test_fit_block_appended(self, tmp_path):
        model = EnergyModel(3.0, (PowerState("on", 0.0),))
        result = fit_ols([Observation({"on": 1.0}, {}, {}, 3.0)], model)
        path = tmp_path / "fit.json"
        fileio.save_calibration(result, model, path)
        doc = json.loads(path.read_text())
        assert doc["fit"]["residual_rms_j"] == pytest.approx(0.0, abs=1e-12)
        assert doc["states"][0]["avg_current_a"] == pytest.approx(1.0)


class TestCurveCsv:
    def test_header_and_rows(self):
        from dataclasses import replace

        config = replace(demo_sweep_config(), rates_pps=(2.0,), runs_per_rate=2)
        text = fileio.curve_to_csv(run_sweep(config))
        lines = text.strip().splitlines()
        assert lines[0] == (
            "rate_pps,err_naive_pct,err_naive_lo,err_naive_hi,"
            "err_improved_pct,err_improved_lo,err_improved_hi"
        )
        assert len(lines) == 2
        assert lines[1].startswith("2.0,")


class TestSweepConfigJson:
    def test_demo_fixture_loads(self):
        config = fileio.load_sweep_config("fixtures/demo_sweep.json")
        assert config == demo_sweep_config()


class TestReportDict:
    def test_keys_and_total(self):
        model = sample_model()
        timeline = Timeline(
            (StateInterval("sleep", 0.5), StateInterval("tx", 0.5)), (("beacon", 0.25),)
        )
        doc = fileio.report_to_dict(estimate_with_events(model, timeline))
        assert doc["per_transition_j"]["sleep->tx"] == pytest.approx(3 * 0.1 * 5e-3)
        assert doc["total_j"] == pytest.approx(
            sum(doc["per_state_j"].values())
            + sum(doc["per_transition_j"].values())
            + sum(doc["per_event_j"].values())
        )
