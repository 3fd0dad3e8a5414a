"""Provers: honest lookup, honest quantum, and adversaries for soundness runs.

The honest quantum prover answers every secret request by running the
subtree extraction on the counted oracle, so its cumulative query cost
over a whole verifier run can be measured against the 3^l * 2^l budget.
Adversaries lie in controlled ways so soundness experiments can probe the
1/4 bound from several directions.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .bits import BitString, GVariant, g_eval
from .errors import ContractViolation
from .instance import NodePath, RfsInstance
from .oracle import CountingOracle
from .quantum import extract_subtree_secret


@dataclass(frozen=True)
class ProverKind:
    """Parsed prover selector, e.g. "honest-quantum" or "level-flip:1"."""

    tag: str
    level: int | None = None
    p: float | None = None

    TAGS = ("honest-lookup", "honest-quantum", "root-flip", "level-flip",
            "random-lie", "g-preserving")

    @classmethod
    def parse(cls, text: str) -> "ProverKind":
        tag, _, arg = text.partition(":")
        if tag not in cls.TAGS:
            raise ContractViolation(f"unknown prover kind {text!r}")
        if tag == "level-flip":
            if not arg:
                raise ContractViolation("level-flip needs a level, e.g. level-flip:1")
            try:
                level = int(arg)
            except ValueError:
                raise ContractViolation(f"bad flip level {arg!r}") from None
            return cls(tag, level=level)
        if tag == "random-lie":
            if not arg:
                raise ContractViolation("random-lie needs a probability, e.g. random-lie:0.5")
            try:
                p = float(arg)
            except ValueError:
                raise ContractViolation(f"bad lie probability {arg!r}") from None
            if not 0.0 <= p <= 1.0:
                raise ContractViolation(f"lie probability {p} outside [0, 1]")
            return cls(tag, p=p)
        if arg:
            raise ContractViolation(f"prover kind {tag!r} takes no argument")
        return cls(tag)

    def text(self) -> str:
        if self.tag == "level-flip":
            return f"level-flip:{self.level}"
        if self.tag == "random-lie":
            return f"random-lie:{self.p:g}"
        return self.tag


class HonestLookup:
    """Omniscient prover: reads secrets straight off the shared instance."""

    is_deterministic = True

    def __init__(self, instance: RfsInstance):
        self.instance = instance

    def answer(self, path: NodePath) -> BitString:
        return self.instance.secret_at(path)


class HonestQuantum:
    """Honest prover that earns each secret through counted oracle queries.

    Every request is re-derived from scratch (the budget argument assumes
    no caching); pass cache=True for a faster mode that is excluded from
    budget assertions.
    """

    is_deterministic = True

    def __init__(self, oracle: CountingOracle, g_variant: GVariant | None = None,
                 l: int | None = None, cache: bool = False):
        self.oracle = oracle
        self.g_variant = oracle.instance.g_variant if g_variant is None else g_variant
        self.l = oracle.instance.l if l is None else l
        self.cache: dict[NodePath, BitString] | None = {} if cache else None

    def answer(self, path: NodePath) -> BitString:
        if self.cache is not None and path in self.cache:
            return self.cache[path]
        secret = extract_subtree_secret(self.oracle, self.g_variant, self.l, path)
        if self.cache is not None:
            self.cache[path] = secret
        return secret


def _flip_string(instance: RfsInstance, path: NodePath) -> BitString:
    """First string (ascending value) whose g differs from the node's secret."""
    true = instance.secret_at(path)
    wrong_class = instance.preimage_classes[1 - g_eval(true, instance.g_variant)]
    return BitString(instance.n, int(wrong_class[0]))


class RootFlip:
    """Lies only at the root, with a fixed g-flipping string; honest below."""

    is_deterministic = True

    def __init__(self, instance: RfsInstance):
        self.instance = instance

    def answer(self, path: NodePath) -> BitString:
        if path.depth == 0:
            return _flip_string(self.instance, path)
        return self.instance.secret_at(path)


class LevelFlip:
    """Same flip as RootFlip, applied at every node of one fixed level."""

    is_deterministic = True

    def __init__(self, instance: RfsInstance, level: int):
        if not 0 <= level < instance.l:
            raise ContractViolation(
                f"flip level {level} outside [0, {instance.l - 1}]"
            )
        self.instance = instance
        self.level = level

    def answer(self, path: NodePath) -> BitString:
        if path.depth == self.level:
            return _flip_string(self.instance, path)
        return self.instance.secret_at(path)


class RandomLie:
    """With probability p, replaces the honest answer by a uniform string."""

    def __init__(self, instance: RfsInstance, p: float, rng_seed: int = 0):
        self.instance = instance
        self.p = p
        self.rng = random.Random(rng_seed)
        self.is_deterministic = p == 0.0

    def answer(self, path: NodePath) -> BitString:
        if self.rng.random() < self.p:
            return BitString(self.instance.n, self.rng.getrandbits(self.instance.n))
        return self.instance.secret_at(path)


class GPreservingLie:
    """Lies without changing g: wrong string, same g-value, when one exists.

    Such a prover can be aborted but never makes the verifier accept a
    wrong answer, since the returned bit is g of the claimed string.
    """

    is_deterministic = True

    def __init__(self, instance: RfsInstance):
        self.instance = instance

    def answer(self, path: NodePath) -> BitString:
        true = self.instance.secret_at(path)
        same_class = self.instance.preimage_classes[
            g_eval(true, self.instance.g_variant)]
        for v in same_class[:2]:
            if int(v) != true.value:
                return BitString(self.instance.n, int(v))
        return true


def honest_lookup(instance: RfsInstance) -> HonestLookup:
    return HonestLookup(instance)


def honest_quantum(oracle: CountingOracle, g_variant: GVariant | None = None,
                   l: int | None = None, cache: bool = False) -> HonestQuantum:
    return HonestQuantum(oracle, g_variant, l, cache)


def make_adversary(kind: ProverKind | str, instance: RfsInstance,
                   rng_seed: int = 0):
    """Build one of the lying provers; honest kinds are rejected here."""
    if isinstance(kind, str):
        kind = ProverKind.parse(kind)
    if kind.tag == "root-flip":
        return RootFlip(instance)
    if kind.tag == "level-flip":
        return LevelFlip(instance, kind.level)
    if kind.tag == "random-lie":
        return RandomLie(instance, kind.p, rng_seed)
    if kind.tag == "g-preserving":
        return GPreservingLie(instance)
    raise ContractViolation(f"{kind.tag!r} is not an adversary kind")


def make_prover(kind: ProverKind | str, instance: RfsInstance,
                oracle: CountingOracle | None = None, rng_seed: int = 0):
    """Build any prover kind; honest-quantum needs the counted oracle."""
    if isinstance(kind, str):
        kind = ProverKind.parse(kind)
    if kind.tag == "honest-lookup":
        return HonestLookup(instance)
    if kind.tag == "honest-quantum":
        if oracle is None:
            raise ContractViolation("honest-quantum needs a counting oracle")
        return HonestQuantum(oracle)
    return make_adversary(kind, instance, rng_seed)


def adversary_kinds(l: int) -> list[ProverKind]:
    """The standard zoo for soundness sweeps at depth l."""
    kinds = [ProverKind("root-flip")]
    kinds += [ProverKind("level-flip", level=k) for k in range(l)]
    kinds += [ProverKind("random-lie", p=0.5), ProverKind("random-lie", p=1.0)]
    kinds.append(ProverKind("g-preserving"))
    return kinds
