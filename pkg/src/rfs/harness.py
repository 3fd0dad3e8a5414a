"""Batch experiment runner with deterministic seeding and flat-file reports.

Per-trial seeds are derived as sha256("{purpose}|{base_seed}|{trial}")
truncated to 64 bits, so any single trial can be replayed externally.
A config plus this build fully determines every row; wall times are kept
on the in-memory rows for operators but never serialized, so reports are
byte-identical across re-runs.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field

from .bits import GVariant
from .classical import solve
from .errors import ContractViolation
from .instance import RfsInstance
from .oracle import CountingOracle
from .protocol import VerifierConfig, run_verifier
from .provers import ProverKind, make_prover
from .quantum import qrfs_run

MODES = ("classical", "qrfs", "verifier")


def derive_seed(purpose: str, base_seed: int, trial: int) -> int:
    """64-bit per-trial seed; documented so single trials can be replayed."""
    digest = hashlib.sha256(f"{purpose}|{base_seed}|{trial}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


@dataclass
class ExperimentConfig:
    n: int
    l: int
    mode: str = "verifier"
    g_variant: GVariant = GVariant.HAMMING_MOD3
    instance_seed: int = 0
    sweep_instance_seed: bool = True  # trial t uses instance_seed + t
    prover: str = "honest-lookup"
    repetitions: int = 3
    trials: int = 1
    rng_seed: int = 0
    out_format: str = "json"
    out_path: str | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ContractViolation(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.trials < 1:
            raise ContractViolation("trials must be >= 1")
        if self.out_format not in ("json", "csv"):
            raise ContractViolation(f"format must be json or csv, got {self.out_format!r}")
        kind = ProverKind.parse(self.prover)  # fail fast on bad selectors
        if kind.tag == "level-flip" and not 0 <= kind.level < self.l:
            raise ContractViolation(
                f"flip level {kind.level} outside [0, {self.l - 1}]")

    def to_dict(self) -> dict:
        return {
            "n": self.n, "l": self.l, "mode": self.mode,
            "g_variant": GVariant(self.g_variant).value,
            "instance_seed": self.instance_seed,
            "sweep_instance_seed": self.sweep_instance_seed,
            "prover": self.prover, "repetitions": self.repetitions,
            "trials": self.trials, "rng_seed": self.rng_seed,
        }


@dataclass
class ResultRow:
    trial: int
    instance_seed: int
    outcome: str           # "accept" | "abort" | "error"
    answer: int | None
    correct: bool | None
    classical_queries: int
    quantum_queries: int
    prover_queries: int
    aborted: bool
    wall_time_s: float
    error: str | None = None

    FIELDS = ("trial", "instance_seed", "outcome", "answer", "correct",
              "classical_queries", "quantum_queries", "prover_queries",
              "aborted", "error")

    def to_dict(self) -> dict:
        # wall time deliberately excluded: reports must be byte-stable
        return {name: getattr(self, name) for name in self.FIELDS}


def wilson_interval(successes: int, trials: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson 95% score interval for a binomial frequency."""
    if trials == 0:
        return (0.0, 1.0)
    p = successes / trials
    denom = 1 + z * z / trials
    center = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


def _run_trial(config: ExperimentConfig, trial: int) -> ResultRow:
    inst_seed = config.instance_seed + trial if config.sweep_instance_seed \
        else config.instance_seed
    instance = RfsInstance(config.n, config.l, config.g_variant, inst_seed)
    oracle = CountingOracle(instance)
    truth = instance.root_answer()
    start = time.perf_counter()
    if config.mode == "classical":
        result = solve(oracle)
        row = ResultRow(trial, inst_seed, "accept", result.answer,
                        result.answer == truth, oracle.classical_queries,
                        oracle.quantum_queries, 0, False, 0.0)
    elif config.mode == "qrfs":
        answer = qrfs_run(oracle)
        row = ResultRow(trial, inst_seed, "accept", answer, answer == truth,
                        oracle.classical_queries, oracle.quantum_queries,
                        0, False, 0.0)
    else:
        prover = make_prover(config.prover, instance, oracle,
                             rng_seed=derive_seed("prover", config.rng_seed, trial))
        vconfig = VerifierConfig(config.repetitions,
                                 derive_seed("verifier", config.rng_seed, trial))
        transcript = run_verifier(oracle, prover, vconfig)
        row = ResultRow(trial, inst_seed,
                        "accept" if transcript.accepted else "abort",
                        transcript.answer,
                        transcript.answer == truth if transcript.accepted else None,
                        oracle.classical_queries, oracle.quantum_queries,
                        transcript.prover_queries, not transcript.accepted, 0.0)
    row.wall_time_s = time.perf_counter() - start
    return row


def summarize(rows: list[ResultRow]) -> dict:
    """Aggregate frequencies (with Wilson 95% intervals) and query stats."""
    trials = len(rows)
    accept_correct = sum(1 for r in rows if r.outcome == "accept" and r.correct)
    accept_wrong = sum(1 for r in rows if r.outcome == "accept" and not r.correct)
    aborts = sum(1 for r in rows if r.aborted)
    errors = sum(1 for r in rows if r.outcome == "error")

    def freq_block(count: int) -> dict:
        lo, hi = wilson_interval(count, trials)
        return {"count": count, "freq": count / trials,
                "wilson_lo": lo, "wilson_hi": hi}

    def stats(values: list[int]) -> dict:
        return {"min": min(values), "max": max(values),
                "mean": sum(values) / len(values)}

    return {
        "trials": trials,
        "errors": errors,
        "accept_correct": freq_block(accept_correct),
        "accept_wrong": freq_block(accept_wrong),
        "abort": freq_block(aborts),
        "classical_queries": stats([r.classical_queries for r in rows]),
        "quantum_queries": stats([r.quantum_queries for r in rows]),
        "prover_queries": stats([r.prover_queries for r in rows]),
    }


def run_experiment(config: ExperimentConfig) -> tuple[list[ResultRow], dict]:
    rows = []
    for t in range(config.trials):
        try:
            rows.append(_run_trial(config, t))
        except Exception as exc:  # a bad trial must not sink the sweep
            inst_seed = config.instance_seed + t if config.sweep_instance_seed \
                else config.instance_seed
            rows.append(ResultRow(t, inst_seed, "error", None, None, 0, 0, 0,
                                  False, 0.0, f"{type(exc).__name__}: {exc}"))
    return rows, summarize(rows)


def render_report(config: ExperimentConfig, rows: list[ResultRow],
                  summary: dict, fmt: str) -> str:
    """Serialize a finished experiment; stable bytes for a given config."""
    if fmt == "json":
        doc = {"config": config.to_dict(),
               "rows": [r.to_dict() for r in rows],
               "summary": summary}
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(ResultRow.FIELDS)
        for r in rows:
            writer.writerow([r.to_dict()[name] for name in ResultRow.FIELDS])
        return buf.getvalue()
    raise ContractViolation(f"unknown report format {fmt!r}")


def emit_report(config: ExperimentConfig, rows: list[ResultRow], summary: dict,
                fmt: str | None = None, path: str | None = None) -> str:
    """Write the report to `path` (stdout when None); returns the text."""
    if not rows:
        raise ContractViolation("refusing to emit an empty report")
    fmt = config.out_format if fmt is None else fmt
    path = config.out_path if path is None else path
    text = render_report(config, rows, summary, fmt)
    if path is None:
        sys.stdout.write(text)
    else:
        try:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise IOError(f"cannot write report to {path}: {exc}") from exc
    return text


# Standard parameter points: the usual regime couples depth to width as
# l = log2(n); the quantum-prover presets stay at sizes whose extraction
# fits the simulator budget (a width-8 depth-3 root extraction would need
# 27 qubits, one over the cap, so that point pairs depth 3 with the
# lookup prover and keeps the quantum prover at depth 2).
PRESETS: dict[str, ExperimentConfig] = {
    "classical-n2": ExperimentConfig(n=2, l=1, mode="classical", trials=10),
    "classical-n4": ExperimentConfig(n=4, l=2, mode="classical", trials=10),
    "classical-n8": ExperimentConfig(n=8, l=3, mode="classical", trials=5),
    "qrfs-n2": ExperimentConfig(n=2, l=1, mode="qrfs", trials=10),
    "qrfs-n4": ExperimentConfig(n=4, l=2, mode="qrfs", trials=10),
    "qrfs-n8": ExperimentConfig(n=8, l=2, mode="qrfs", trials=3),
    "verifier-honest-n8": ExperimentConfig(
        n=8, l=3, mode="verifier", prover="honest-lookup", trials=100),
    "verifier-quantum-n4": ExperimentConfig(
        n=4, l=2, mode="verifier", prover="honest-quantum", trials=10),
    "verifier-quantum-n8": ExperimentConfig(
        n=8, l=2, mode="verifier", prover="honest-quantum", trials=3),
    "soundness-n4": ExperimentConfig(
        n=4, l=2, mode="verifier", prover="random-lie:1.0", trials=10000),
}
