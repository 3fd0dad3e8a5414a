"""The leaf oracle with query accounting, classical and as a reversible gate.

The oracle answers g(secret) for leaf nodes only; asking it about an
internal node is a hard error rather than garbage, which catches solver
bugs early. Classical and quantum uses are counted separately. One gate
application over a superposition counts as one quantum query, the
standard query-model accounting.
"""

from __future__ import annotations

import itertools

import numpy as np

from .bits import BitString, g_eval
from .errors import ContractViolation
from .instance import NodePath, RfsInstance
from .quantum import Statevector, apply_controlled_flip


class CountingOracle:
    """Query-counted access to the leaf values of one instance.

    Answers depend only on the instance, never on query history. Counters
    are plain monotone ints; concurrent workers should hold their own
    oracle over a shared instance and sum counters afterwards.
    """

    def __init__(self, instance: RfsInstance):
        self.instance = instance
        self.classical_queries = 0
        self.quantum_queries = 0

    def counters(self) -> dict:
        return {
            "classical_queries": self.classical_queries,
            "quantum_queries": self.quantum_queries,
        }

    def classical_query(self, path: NodePath) -> int:
        """g(leaf secret) for a full-depth path; one counted classical query."""
        if path.depth != self.instance.l:
            raise ContractViolation(
                f"oracle is defined for leaves only: path depth {path.depth}, "
                f"tree depth {self.instance.l}"
            )
        self.classical_queries += 1
        return g_eval(self.instance.secret_at(path), self.instance.g_variant)

    def quantum_apply(self, state: Statevector, fixed_prefix: NodePath,
                      x_reg_ids: list[str], target_id: str) -> Statevector:
        """Apply the leaf oracle as a reversible XOR gate on a statevector.

        The leaf coordinates are the classical `fixed_prefix` followed by
        the decoded values of the x registers (level order); the oracle
        bit is XORed into the 1-qubit target on every basis branch. One
        invocation is one counted quantum query regardless of how wide
        the superposition is.
        """
        inst = self.instance
        n = inst.n
        if fixed_prefix.depth + len(x_reg_ids) != inst.l:
            raise ContractViolation(
                f"prefix depth {fixed_prefix.depth} plus {len(x_reg_ids)} registers "
                f"must equal tree depth {inst.l}"
            )
        for part in fixed_prefix:
            if part.width != n:
                raise ContractViolation(f"prefix part width {part.width} != {n}")
        for reg_id in x_reg_ids:
            if state.layout.register(reg_id).qubits != n:
                raise ContractViolation(
                    f"x register {reg_id!r} must have {n} qubits"
                )
        shape = (1 << n,) * len(x_reg_ids)
        table = np.zeros(shape, dtype=np.uint8)
        flat = table.reshape(-1)
        for i, combo in enumerate(itertools.product(range(1 << n),
                                                    repeat=len(x_reg_ids))):
            leaf = NodePath(fixed_prefix.parts
                            + tuple(BitString(n, v) for v in combo))
            flat[i] = g_eval(inst.secret_at(leaf), inst.g_variant)
        self.quantum_queries += 1
        return apply_controlled_flip(state, list(x_reg_ids), target_id, table)
