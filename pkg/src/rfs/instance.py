"""Seed-deterministic secret trees for recursive Fourier sampling.

A tree instance assigns an n-bit secret to every node of the depth-l tree
in which each internal node has 2^n children. Child secrets always satisfy
the promise

    g(secret(parent path + x)) == secret(parent path) . x   (mod 2)

The full tree has (2^n)^l leaves, far too many to materialize, so secrets
are derived lazily: the secret of a node is a pure function of
(seed, n, l, g_variant, path), produced by hashing the path into an index
into the precomputed preimage class that the promise forces the secret
into. Re-deriving any node therefore always yields the same string, and
only queried paths ever exist in memory.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field

import numpy as np

from .bits import BitString, GVariant, g_eval, g_table, inner_product
from .errors import ContractViolation

PRG_ID = "sha256-path-index-v1"

# exhaustive promise checks walk every non-root node; cap the walk size
EXHAUSTIVE_NODE_BOUND = 1 << 20


@dataclass(frozen=True)
class NodePath:
    """A tree node address: the sequence of child coordinates from the root."""

    parts: tuple[BitString, ...] = ()

    @classmethod
    def root(cls) -> "NodePath":
        return cls(())

    @property
    def depth(self) -> int:
        return len(self.parts)

    def parent(self) -> "NodePath":
        if not self.parts:
            raise ContractViolation("root has no parent")
        return NodePath(self.parts[:-1])

    def child(self, x: BitString) -> "NodePath":
        return NodePath(self.parts + (x,))

    def text(self) -> str:
        """Slash-joined big-endian coordinates; the root is the empty string."""
        return "/".join(p.text() for p in self.parts)

    @classmethod
    def from_text(cls, text: str) -> "NodePath":
        if text == "":
            return cls.root()
        return cls(tuple(BitString.from_text(part) for part in text.split("/")))

    def __iter__(self):
        return iter(self.parts)


ROOT = NodePath.root()


@dataclass
class PromiseReport:
    checked: int
    violations: int


class RfsInstance:
    """Lazily materialized secret tree with memoized, reproducible node secrets.

    Concurrency: secret derivation is idempotent, so concurrent readers and
    concurrent inserts of identical memo values are harmless; workers that
    want full isolation can build their own instance from the same seed.
    """

    def __init__(self, n: int, l: int, g_variant: GVariant = GVariant.HAMMING_MOD3,
                 seed: int = 0):
        if not 1 <= n <= 24:
            raise ContractViolation(f"n must be in [1, 24], got {n}")
        if not 1 <= l <= 24:
            raise ContractViolation(f"l must be in [1, 24], got {l}")
        self.n = n
        self.l = l
        self.g_variant = GVariant(g_variant)
        self.seed = int(seed)
        table = g_table(n, self.g_variant)
        # value arrays, ascending, one per g-output; jointly all 2^n values
        self.preimage_classes = (
            np.nonzero(table == 0)[0].astype(np.uint32),
            np.nonzero(table == 1)[0].astype(np.uint32),
        )
        if len(self.preimage_classes[0]) == 0 or len(self.preimage_classes[1]) == 0:
            raise ContractViolation(
                f"g variant {self.g_variant.value} has an empty preimage class at n={n}"
            )
        self.memo: dict[NodePath, BitString] = {}

    def descriptor(self) -> dict:
        """The five-tuple that fully determines this instance. No secrets."""
        return {
            "n": self.n,
            "l": self.l,
            "g_variant": self.g_variant.value,
            "seed": self.seed,
            "prg_id": PRG_ID,
        }

    def _draw(self, path: NodePath) -> int:
        """256-bit deterministic stream value for one node."""
        key = f"{PRG_ID}|{self.seed}|{self.n}|{self.l}|{self.g_variant.value}|{path.text()}"
        return int.from_bytes(hashlib.sha256(key.encode()).digest(), "big")

    def _validate_path(self, path: NodePath, max_depth: int | None = None) -> None:
        limit = self.l if max_depth is None else max_depth
        if path.depth > limit:
            raise ContractViolation(f"path depth {path.depth} exceeds {limit}")
        for part in path:
            if part.width != self.n:
                raise ContractViolation(
                    f"path part width {part.width} != instance width {self.n}"
                )

    def secret_at(self, path: NodePath) -> BitString:
        """The node's secret string, derived on first use and memoized."""
        self._validate_path(path)
        cached = self.memo.get(path)
        if cached is not None:
            return cached
        if path.depth == 0:
            # the root is unconstrained: uniform over all 2^n strings
            value = self._draw(path) % (1 << self.n)
        else:
            parent_secret = self.secret_at(path.parent())
            b = inner_product(parent_secret, path.parts[-1])
            cls = self.preimage_classes[b]
            value = int(cls[self._draw(path) % len(cls)])
        secret = BitString(self.n, value)
        self.memo[path] = secret
        return secret

    def root_answer(self) -> int:
        """Ground truth g(root secret), the bit every solver must produce."""
        return g_eval(self.secret_at(ROOT), self.g_variant)


def new_instance(n: int, l: int, g_variant: GVariant = GVariant.HAMMING_MOD3,
                 seed: int = 0) -> RfsInstance:
    return RfsInstance(n, l, g_variant, seed)


def _check_node(instance: RfsInstance, path: NodePath) -> bool:
    """True iff the promise holds at one non-root node."""
    got = g_eval(instance.secret_at(path), instance.g_variant)
    want = inner_product(instance.secret_at(path.parent()), path.parts[-1])
    return got == want


def check_promise(instance: RfsInstance, mode: str = "exhaustive",
                  count: int = 1000, rng_seed: int = 0) -> PromiseReport:
    """Verify the parent/child promise at every node or at sampled nodes.

    mode "exhaustive" walks all non-root nodes (requires (2^n)^l <= 2^20);
    mode "sampled" checks `count` nodes drawn uniformly from all non-root
    nodes using an RNG seeded independently of the instance.
    """
    n, l = instance.n, instance.l
    if mode == "exhaustive":
        if (1 << (n * l)) > EXHAUSTIVE_NODE_BOUND:
            raise ContractViolation(
                f"exhaustive check infeasible: (2^{n})^{l} > 2^20 nodes"
            )
        checked = violations = 0

        def walk(path: NodePath) -> None:
            nonlocal checked, violations
            for v in range(1 << n):
                child = path.child(BitString(n, v))
                checked += 1
                if not _check_node(instance, child):
                    violations += 1
                if child.depth < l:
                    walk(child)

        walk(ROOT)
        return PromiseReport(checked, violations)

    if mode == "sampled":
        rng = random.Random(rng_seed)
        # node counts per level as exact ints so deep trees stay exact
        level_sizes = [(1 << n) ** k for k in range(1, l + 1)]
        total = sum(level_sizes)
        checked = violations = 0
        for _ in range(count):
            r = rng.randrange(total)
            k = 1
            while r >= level_sizes[k - 1]:
                r -= level_sizes[k - 1]
                k += 1
            path = NodePath(tuple(BitString(n, rng.getrandbits(n)) for _ in range(k)))
            checked += 1
            if not _check_node(instance, path):
                violations += 1
        return PromiseReport(checked, violations)

    raise ContractViolation(f"unknown check mode {mode!r}")
