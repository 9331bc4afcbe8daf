import json
import math
import os
from pathlib import Path

import pytest

import hrrm

SCENARIOS = Path(os.environ.get("HRRM_SCENARIO_DIR", Path(__file__).resolve().parents[2] / "scenarios"))


def test_link_rate_is_additive():
    one = hrrm.link_rate(10.0, 1, 0.75)
    assert hrrm.link_rate(10.0, 4, 0.75) == 4 * one
    assert hrrm.link_rate(40.0, 1, 0.75) == hrrm.link_rate(30.0, 1, 0.75)


def test_describe_cell():
    d = hrrm.describe_cell(3.5e9, 100, 1, cell_class="small")
    assert d["latency_class"] == "low"
    assert d["coverage_class"] == "local"
    assert d["supports_duplication"]
    assert not hrrm.describe_cell(5.2e9, 20, 0, cell_class="ap")["supports_duplication"]


def test_common_units():
    assert hrrm.to_common_unit("rsrp_dbm", -100.0) == ("signal_db", 40.0)
    unit, value = hrrm.to_common_unit("queue_occupancy", 30.0, 120.0)
    assert unit == "load_fraction" and value == pytest.approx(0.25)
    with pytest.raises(hrrm.UnknownKindError):
        hrrm.to_common_unit("volts", 1.0)


def test_fairness():
    assert hrrm.compute_fairness([5.0, 5.0, 5.0]) == pytest.approx(1.0)
    assert hrrm.compute_fairness([1.0, 0.0]) == pytest.approx(0.5)


def test_partition_and_split():
    plan = hrrm.partition_resources([("gold", 30), ("bronze", 10), ("idle", 0)], 20)
    sizes = {label: end - begin for label, begin, end in plan}
    assert sizes == {"gold": 15, "bronze": 5, "idle": 0}
    assert hrrm.split_portions([20, 60], 100) == [25, 75]
    with pytest.raises(hrrm.InsufficientResourcesError):
        hrrm.partition_resources([("a", 1), ("b", 1), ("c", 1)], 2, min_guarantee=1)


def test_schedule_dynamic_prefers_ratio():
    grants = hrrm.schedule_dynamic(0, 3, [(1, 1e9, 100.0, 10.0), (2, 1e9, 50.0, 1.0)])
    assert [ue for _, ue, _ in grants] == [2, 2, 2]


def test_one_shot_rate():
    trials = 4000
    wins = sum(hrrm.one_shot_trial(2, 4, seed)["success"] for seed in range(trials))
    assert wins / (2 * trials) == pytest.approx(0.75, abs=0.03)


def test_receiver_reorders():
    rx = hrrm.Receiver()
    assert rx.receive(1, 0) == []
    assert rx.receive(0, 1) == [0, 1]
    assert rx.receive(0, 2) == []
    assert rx.state.duplicates == 1
    assert rx.receive(3, 3) == []
    assert rx.expire(60) == [3]
    assert rx.state.lost == 1


def test_scenario_round_trip():
    text = (SCENARIOS / "minimal.json").read_text()
    normal = hrrm.normalize_scenario(text)
    assert hrrm.normalize_scenario(normal) == normal
    with pytest.raises(hrrm.ValidationError):
        hrrm.normalize_scenario('{"unknown": 1}')
    with pytest.raises(hrrm.ParseError):
        hrrm.normalize_scenario("{")


def test_simulate_is_deterministic():
    text = (SCENARIOS / "minimal.json").read_text()
    a = hrrm.simulate(text, 3)
    b = hrrm.simulate(text, 3)
    assert a == b
    summary = json.loads(a["summary_json"])
    assert summary["seed"] == 3
    assert a["metrics_csv"].startswith("epoch,end_slot,flow")


def test_run_scenario_and_command(tmp_path):
    summary = hrrm.run_scenario(SCENARIOS / "aggregation_two_leg.json")
    assert summary["total_delivered_bits"] > 0
    code, _, err = hrrm.run_command(["run", str(SCENARIOS / "minimal.json"), "--out", str(tmp_path)])
    assert code == 0, err
    assert sorted(p.name for p in tmp_path.iterdir()) == ["events.log", "metrics.csv", "summary.json"]
    code, _, err = hrrm.run_command(["validate", str(tmp_path / "nothing.json")])
    assert code == 1 and err
