"""Interactive proof: classical verifier, transcripts, exact outcome analysis.

The verifier never trusts a claimed secret outright. At each node it asks
the prover for the secret, then spot-checks it `repetitions` times: draw a
uniform challenge x, recursively obtain the subtree answer for x, and
compare it with the claimed secret's inner product against x. Any mismatch
aborts the whole run immediately. A run that survives to the top returns g
of the claimed root secret.

A wrong claimed secret disagrees with the true one on inner products for
exactly half of all challenges, which is what gives the protocol its
soundness; drawing challenges uniformly over the full cube (the all-zero
string included) is what makes that "half" exact.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Protocol

from .bits import BitString, GVariant, g_eval, inner_product
from .errors import ContractViolation
from .instance import ROOT, NodePath, RfsInstance
from .oracle import CountingOracle


class ProverEndpoint(Protocol):
    """Anything that maps a non-leaf node path to a claimed width-n secret.

    Endpoints may keep state and randomness of their own; they never see
    oracle counters or the verifier's challenge stream.
    """

    def answer(self, path: NodePath) -> BitString: ...


@dataclass
class VerifierConfig:
    repetitions: int = 3
    rng_seed: int = 0

    def __post_init__(self):
        if self.repetitions < 1:
            raise ContractViolation("repetitions must be >= 1")


# --- transcript events -----------------------------------------------------

@dataclass(frozen=True)
class ProverQuery:
    path: NodePath
    response: Optional[BitString]  # None when the prover broke the wire format

    def to_dict(self) -> dict:
        return {"type": "prover_query", "path": self.path.text(),
                "response": None if self.response is None else self.response.text()}


@dataclass(frozen=True)
class OracleQuery:
    path: NodePath
    bit: int

    def to_dict(self) -> dict:
        return {"type": "oracle_query", "path": self.path.text(), "bit": self.bit}


@dataclass(frozen=True)
class Descend:
    path: NodePath

    def to_dict(self) -> dict:
        return {"type": "descend", "path": self.path.text()}


@dataclass(frozen=True)
class Check:
    path: NodePath
    challenge: Optional[BitString]  # None for a malformed prover response
    subcall_bit: Optional[int]
    claimed_bit: Optional[int]
    passed: bool

    def to_dict(self) -> dict:
        return {
            "type": "check",
            "path": self.path.text(),
            "challenge": None if self.challenge is None else self.challenge.text(),
            "subcall_bit": self.subcall_bit,
            "claimed_bit": self.claimed_bit,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class Return:
    path: NodePath
    bit: int

    def to_dict(self) -> dict:
        return {"type": "return", "path": self.path.text(), "bit": self.bit}


@dataclass
class Transcript:
    """Ordered event log plus the outcome of one verifier run."""

    events: list = field(default_factory=list)
    accepted: bool = False
    answer: Optional[int] = None
    abort_path: Optional[NodePath] = None
    abort_repetition: Optional[int] = None
    oracle_queries: int = 0
    prover_queries: int = 0
    instance_seed: int = 0
    verifier_seed: int = 0

    def to_dict(self) -> dict:
        if self.accepted:
            outcome = {"type": "accept", "bit": self.answer}
        else:
            outcome = {
                "type": "abort",
                "path": self.abort_path.text() if self.abort_path is not None else None,
                "repetition": self.abort_repetition,
            }
        return {
            "events": [e.to_dict() for e in self.events],
            "outcome": outcome,
            "oracle_queries": self.oracle_queries,
            "prover_queries": self.prover_queries,
            "seeds": {"instance": self.instance_seed,
                      "verifier": self.verifier_seed},
        }


class _Abort(Exception):
    def __init__(self, path: NodePath, repetition: int):
        self.path = path
        self.repetition = repetition


def run_verifier(oracle: CountingOracle, prover: ProverEndpoint,
                 config: VerifierConfig, g_variant: GVariant | None = None,
                 l: int | None = None, path: NodePath = ROOT) -> Transcript:
    """One interactive run starting at `path` (the root by default).

    Challenge randomness comes solely from config.rng_seed, independent of
    the instance seed. The prover is asked for a node's secret before any
    challenge for that node is drawn, so it cannot condition on them. An
    abort anywhere unwinds the entire run.
    """
    inst = oracle.instance
    if g_variant is None:
        g_variant = inst.g_variant
    if l is None:
        l = inst.l
    n = inst.n
    rng = random.Random(config.rng_seed)
    transcript = Transcript(instance_seed=inst.seed, verifier_seed=config.rng_seed)
    oracle_before = oracle.classical_queries

    def verify(node: NodePath) -> int:
        if node.depth == l:
            bit = oracle.classical_query(node)
            transcript.events.append(OracleQuery(node, bit))
            return bit
        response = prover.answer(node)
        if not isinstance(response, BitString) or response.width != n:
            transcript.events.append(ProverQuery(node, None))
            transcript.events.append(Check(node, None, None, None, False))
            raise _Abort(node, -1)
        transcript.events.append(ProverQuery(node, response))
        transcript.prover_queries += 1
        for rep in range(config.repetitions):
            x = BitString(n, rng.getrandbits(n))
            child = node.child(x)
            transcript.events.append(Descend(child))
            a = verify(child)
            claimed = inner_product(response, x)
            passed = a == claimed
            transcript.events.append(Check(node, x, a, claimed, passed))
            if not passed:
                raise _Abort(node, rep)
        bit = g_eval(response, g_variant)
        transcript.events.append(Return(node, bit))
        return bit

    if path.depth > l:
        raise ContractViolation(f"start path depth {path.depth} exceeds {l}")
    try:
        answer = verify(path)
        transcript.accepted = True
        transcript.answer = answer
    except _Abort as abort:
        transcript.accepted = False
        transcript.abort_path = abort.path
        transcript.abort_repetition = abort.repetition
    transcript.oracle_queries = oracle.classical_queries - oracle_before
    return transcript


def expected_oracle_queries(l: int, repetitions: int = 3) -> int:
    """Leaf queries a non-aborting run makes: repetitions^l."""
    return repetitions ** l


def expected_prover_queries(l: int, repetitions: int = 3) -> int:
    """Prover queries a non-aborting run makes: q_k = 1 + c*q_{k+1}, q_l = 0."""
    q = 0
    for _ in range(l):
        q = 1 + repetitions * q
    return q


@dataclass
class ExactOutcome:
    """Exact probabilities over all verifier challenge draws (they sum to 1)."""

    p_accept_correct: Fraction
    p_accept_wrong: Fraction
    p_abort: Fraction

    def to_dict(self) -> dict:
        return {
            "p_accept_correct": str(self.p_accept_correct),
            "p_accept_wrong": str(self.p_accept_wrong),
            "p_abort": str(self.p_abort),
            "p_accept_correct_float": float(self.p_accept_correct),
            "p_accept_wrong_float": float(self.p_accept_wrong),
            "p_abort_float": float(self.p_abort),
        }


def exact_outcome_analysis(instance: RfsInstance, prover: ProverEndpoint,
                           g_variant: GVariant | None = None,
                           config: VerifierConfig | None = None,
                           path: NodePath = ROOT) -> ExactOutcome:
    """Exact run-outcome distribution for a deterministic, stateless prover.

    Every challenge draw is uniform over 2^n strings, so outcome
    probabilities are dyadic rationals; they are accumulated exactly with
    Fraction arithmetic by recursing over the protocol tree. Correctness
    is judged against g of the true secret at `path`.
    """
    if config is None:
        config = VerifierConfig()
    if g_variant is None:
        g_variant = instance.g_variant
    if not getattr(prover, "is_deterministic", False):
        raise ContractViolation(
            "exact analysis requires a prover declaring is_deterministic = True"
        )
    n, l, reps = instance.n, instance.l, config.repetitions
    if n * reps * (l - path.depth) > 20:
        raise ContractViolation(
            f"enumeration bound exceeded: (2^{n})^({reps}*{l - path.depth}) > 2^20"
        )

    memo: dict[NodePath, tuple[dict[int, Fraction], Fraction]] = {}

    def node_dist(node: NodePath) -> tuple[dict[int, Fraction], Fraction]:
        """(return-bit probabilities, abort probability) for a subtree run."""
        if node in memo:
            return memo[node]
        if node.depth == l:
            bit = g_eval(instance.secret_at(node), instance.g_variant)
            result = ({bit: Fraction(1)}, Fraction(0))
        else:
            claimed_secret = prover.answer(node)
            p_pass = Fraction(0)
            for v in range(1 << n):
                x = BitString(n, v)
                child_returns, _ = node_dist(node.child(x))
                claimed = inner_product(claimed_secret, x)
                p_pass += child_returns.get(claimed, Fraction(0))
            p_pass /= 1 << n
            p_survive = p_pass ** reps
            result = ({g_eval(claimed_secret, g_variant): p_survive},
                      1 - p_survive)
        memo[node] = result
        return result

    returns, p_abort = node_dist(path)
    truth = g_eval(instance.secret_at(path), instance.g_variant)
    p_correct = returns.get(truth, Fraction(0))
    p_wrong = sum((p for b, p in returns.items() if b != truth), Fraction(0))
    return ExactOutcome(p_correct, p_wrong, p_abort)
