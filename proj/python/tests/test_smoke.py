import os
from pathlib import Path

import pytest

import tsnpdc

SCENARIOS = Path(os.environ.get("TSNPDC_SCENARIO_DIR", Path(__file__).resolve().parents[2] / "scenarios"))
FIG3 = str(SCENARIOS / "fig3.scenario")


def test_parse_duration():
    assert tsnpdc.parse_duration("17.1ms") == 17_100_000
    assert tsnpdc.parse_duration("500us") == 500_000


def test_scenario_info():
    info = tsnpdc.scenario_info(FIG3)
    assert info["name"] == "fig3"
    assert [s["id"] for s in info["streams"]] == ["F1", "F2", "F3", "F4"]


def test_schedule_verifies():
    sched = tsnpdc.schedule(FIG3, residence="pdc", pdc="timestamp")
    assert sched["hypercycle_ns"] == 20_000_000
    assert tsnpdc.verify(sched, FIG3, residence="pdc", pdc="timestamp") == []
    # Moving one window onto another stream's breaks the schedule.
    sched["streams"][1]["hops"][1]["offset_ns"] = sched["streams"][0]["hops"][1]["offset_ns"]
    assert tsnpdc.verify(sched, FIG3, residence="pdc", pdc="timestamp")


def test_run_pdc_has_no_misses():
    report = tsnpdc.run(FIG3, seed=3, cycles=200, residence="pdc", pdc="timestamp")
    assert report["hypercycles"] == 200
    for s in report["streams"]:
        assert s["deadline_misses"] == 0
        assert s["injected"] == s["delivered"] + s["dropped_late"] + s["in_flight"]


def test_run_max_misses_and_is_deterministic():
    a = tsnpdc.run(FIG3, seed=42, cycles=300)
    b = tsnpdc.run(FIG3, seed=42, cycles=300)
    assert a == b
    assert sum(s["deadline_misses"] for s in a["streams"]) > 0


def test_errors():
    with pytest.raises(tsnpdc.ValidationError):
        tsnpdc.run(FIG3, residence="pdc", pdc="off")
    with pytest.raises(tsnpdc.Error):
        tsnpdc.scenario_info(str(SCENARIOS / "missing.scenario"))


def test_sweep_and_histogram():
    r = tsnpdc.sweep(FIG3, slots=["10us", "500us"], sets=2, threads=1)
    assert [row["slot_ns"] for row in r["summary"]] == [10_000, 500_000]
    csv = tsnpdc.synth_histogram("6.38ms", "14ms")
    assert csv.splitlines()[0] == "upper_edge_ns,probability"
    assert csv.splitlines()[-1].startswith("14000000,")
