"""Experiment batches: seeding, aggregation, and stable reports."""

import json
import math

import pytest

from rfs.errors import ContractViolation
from rfs.harness import (PRESETS, ExperimentConfig, ResultRow, derive_seed,
                         emit_report, render_report, run_experiment,
                         summarize, wilson_interval)


def test_derive_seed_is_stable_and_spread():
    assert derive_seed("verifier", 0, 0) == derive_seed("verifier", 0, 0)
    seeds = {derive_seed("verifier", 0, t) for t in range(100)}
    assert len(seeds) == 100
    assert derive_seed("prover", 0, 0) != derive_seed("verifier", 0, 0)


def test_config_validation():
    with pytest.raises(ContractViolation):
        ExperimentConfig(n=2, l=1, mode="bogus")
    with pytest.raises(ContractViolation):
        ExperimentConfig(n=2, l=1, trials=0)
    with pytest.raises(ContractViolation):
        ExperimentConfig(n=2, l=1, out_format="xml")
    with pytest.raises(ContractViolation):
        ExperimentConfig(n=2, l=1, prover="bogus")
    with pytest.raises(ContractViolation):
        ExperimentConfig(n=2, l=2, prover="level-flip:5")


def test_wilson_interval():
    assert wilson_interval(0, 0) == (0.0, 1.0)
    lo, hi = wilson_interval(0, 50)
    assert lo == 0.0 and 0 < hi < 0.1
    lo, hi = wilson_interval(25, 100)
    z = 1.96
    denom = 1 + z * z / 100
    center = (0.25 + z * z / 200) / denom
    half = z * math.sqrt(0.25 * 0.75 / 100 + z * z / 40000) / denom
    assert lo == pytest.approx(center - half)
    assert hi == pytest.approx(center + half)
    assert lo < 0.25 < hi


def test_classical_rows_exact():
    cfg = ExperimentConfig(n=4, l=2, mode="classical", trials=10)
    rows, summary = run_experiment(cfg)
    assert len(rows) == 10
    assert all(r.correct and r.classical_queries == 16 for r in rows)
    assert summary["accept_correct"]["count"] == 10
    assert summary["classical_queries"] == {"min": 16, "max": 16, "mean": 16.0}


def test_qrfs_rows_exact():
    cfg = ExperimentConfig(n=2, l=2, mode="qrfs", trials=5)
    rows, _ = run_experiment(cfg)
    assert all(r.correct and r.quantum_queries == 4 for r in rows)


def test_summary_matches_rows():
    cfg = ExperimentConfig(n=2, l=2, mode="verifier", prover="root-flip",
                           trials=300)
    rows, summary = run_experiment(cfg)
    wrong = sum(1 for r in rows if r.outcome == "accept" and not r.correct)
    aborts = sum(1 for r in rows if r.aborted)
    assert summary["accept_wrong"]["count"] == wrong
    assert summary["abort"]["count"] == aborts
    assert summary["accept_wrong"]["freq"] == wrong / 300
    assert summary["trials"] == 300
    lo, hi = wilson_interval(wrong, 300)
    assert summary["accept_wrong"]["wilson_lo"] == lo
    assert summary["accept_wrong"]["wilson_hi"] == hi


def test_rows_are_reproducible():
    cfg = ExperimentConfig(n=3, l=2, mode="verifier", prover="random-lie:0.5",
                           trials=40, rng_seed=11)
    rows_a, sum_a = run_experiment(cfg)
    rows_b, sum_b = run_experiment(cfg)
    assert [r.to_dict() for r in rows_a] == [r.to_dict() for r in rows_b]
    assert sum_a == sum_b


def test_reports_are_byte_identical():
    cfg = ExperimentConfig(n=2, l=2, mode="verifier", prover="root-flip",
                           trials=25)
    docs = []
    for fmt in ("json", "csv"):
        texts = set()
        for _ in range(2):
            rows, summary = run_experiment(cfg)
            texts.add(render_report(cfg, rows, summary, fmt))
        assert len(texts) == 1
        docs.append(texts.pop())
    parsed = json.loads(docs[0])
    assert parsed["config"]["prover"] == "root-flip"
    assert len(parsed["rows"]) == 25
    assert "wall" not in docs[0]  # timing never leaks into reports
    lines = docs[1].splitlines()
    assert lines[0].split(",") == list(ResultRow.FIELDS)
    assert len(lines) == 26


def test_emit_report_to_file(tmp_path):
    cfg = ExperimentConfig(n=2, l=1, mode="classical", trials=2,
                           out_format="csv")
    rows, summary = run_experiment(cfg)
    target = tmp_path / "report.csv"
    text = emit_report(cfg, rows, summary, path=str(target))
    assert target.read_text() == text
    with pytest.raises(ContractViolation):
        emit_report(cfg, [], summary)
    with pytest.raises(OSError):
        emit_report(cfg, rows, summary, path=str(tmp_path / "no" / "dir.csv"))


def test_per_row_error_capture():
    # extraction at the root of an n=8, l=3 tree exceeds the qubit cap;
    # the batch must record that per row instead of crashing
    cfg = ExperimentConfig(n=8, l=3, mode="verifier", prover="honest-quantum",
                           trials=2)
    rows, summary = run_experiment(cfg)
    assert len(rows) == 2
    assert all(r.outcome == "error" for r in rows)
    assert all("ContractViolation" in r.error for r in rows)
    assert summary["errors"] == 2


def test_presets_are_valid_and_runnable():
    for name, cfg in PRESETS.items():
        assert isinstance(cfg, ExperimentConfig), name
    small = PRESETS["qrfs-n2"]
    rows, summary = run_experiment(small)
    assert summary["accept_correct"]["count"] == small.trials


def test_fixed_instance_seed_mode():
    cfg = ExperimentConfig(n=2, l=2, mode="verifier", prover="honest-lookup",
                           trials=4, sweep_instance_seed=False, instance_seed=9)
    rows, _ = run_experiment(cfg)
    assert {r.instance_seed for r in rows} == {9}
    assert all(r.correct for r in rows)
