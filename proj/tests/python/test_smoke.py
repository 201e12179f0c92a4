from pathlib import Path

import pytest

import hrmv

CORPUS = Path(__file__).resolve().parents[2] / "corpus"


def test_check_counter_is_valid():
    report = hrmv.check(CORPUS / "counter.lus")
    assert report["schema"] == "hrmv-report/1"
    assert report["verdict"] == "valid"
    assert report["exit_code"] == 0


def test_abstract_loop_is_flagged():
    report = hrmv.abstract(CORPUS / "two_counters_strict.lus")
    assert report["verdict"] == "falsified"
    assert "spurious" in report["obligations"][0]["note"]


def test_compose_counter_delay():
    report = hrmv.compose(CORPUS / "counter_delay.lus", max_k=10)
    assert report["verdict"] == "valid"
    assert report["guarantees"] == 5


def test_decompose_manifest():
    lus, manifest = hrmv.decompose(CORPUS / "counter_delay.lus")
    assert "Counter0_i2" in lus
    assert manifest["schema"] == "hrmv-manifest/1"
    assert [o["kind"] for o in manifest["obligations"]] == ["leaf", "leaf", "adapter"]


def test_simulate_counter():
    out = hrmv.simulate(CORPUS / "counter.lus", "true 1\nfalse 0\ntrue 2\n")
    assert out.splitlines()[-1] == "2: i1=true i2=2 -> o1=true o2=3"


def test_graph_is_dot():
    assert hrmv.graph(CORPUS / "counter.lus").startswith("digraph")


def test_errors_raise():
    with pytest.raises(hrmv.HrmvError):
        hrmv.check(CORPUS / "missing.lus")
