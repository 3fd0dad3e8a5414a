"""Recursive Fourier sampling: instances, solvers, and the interactive
verifier, with exact query accounting on a simulated leaf oracle."""

from .bits import BitString, GVariant, g_eval, inner_product, unit_string
from .classical import SolveResult, solve, solve_classical
from .errors import ContractViolation, SimulationIntegrityError
from .instance import (NodePath, PromiseReport, RfsInstance, ROOT,
                       check_promise, new_instance)
from .oracle import CountingOracle
from .protocol import (ExactOutcome, Transcript, VerifierConfig,
                       exact_outcome_analysis, expected_oracle_queries,
                       expected_prover_queries, run_verifier)
from .provers import (GPreservingLie, HonestLookup, HonestQuantum, LevelFlip,
                      ProverKind, RandomLie, RootFlip, adversary_kinds,
                      honest_lookup, honest_quantum, make_adversary,
                      make_prover)
from .quantum import extract_subtree_secret, qrfs_run

__all__ = [
    "BitString", "GVariant", "g_eval", "inner_product", "unit_string",
    "SolveResult", "solve", "solve_classical",
    "ContractViolation", "SimulationIntegrityError",
    "NodePath", "PromiseReport", "RfsInstance", "ROOT", "check_promise",
    "new_instance",
    "CountingOracle",
    "ExactOutcome", "Transcript", "VerifierConfig", "exact_outcome_analysis",
    "expected_oracle_queries", "expected_prover_queries", "run_verifier",
    "GPreservingLie", "HonestLookup", "HonestQuantum", "LevelFlip",
    "ProverKind", "RandomLie", "RootFlip", "adversary_kinds",
    "honest_lookup", "honest_quantum", "make_adversary", "make_prover",
    "extract_subtree_secret", "qrfs_run",
]

__version__ = "0.1.0"
