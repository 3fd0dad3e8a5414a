"""Classical recursive solver: n^l leaf queries, no shortcuts.

The secret at a node is reconstructed bit by bit: bit j equals the
subtree answer at child coordinate unit_string(j, n), so each level costs
n recursive solves and the root solve costs exactly n^l oracle queries.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bits import BitString, GVariant, g_eval, unit_string
from .errors import ContractViolation
from .instance import ROOT, NodePath
from .oracle import CountingOracle


@dataclass
class SolveResult:
    answer: int
    oracle_queries: int


def solve_classical(oracle: CountingOracle, g_variant: GVariant | None = None,
                    l: int | None = None, path: NodePath = ROOT) -> int:
    """Return g(secret at `path`) using leaf queries only.

    At a leaf this is a single oracle query; above, the n child solves at
    unit coordinates are run in order j = 1..n with no memoization across
    sibling subtrees, so the query count is exactly n^(l - depth).
    """
    inst = oracle.instance
    if g_variant is None:
        g_variant = inst.g_variant
    if l is None:
        l = inst.l
    if path.depth > l:
        raise ContractViolation(f"path depth {path.depth} exceeds {l}")
    if path.depth == l:
        return oracle.classical_query(path)
    n = inst.n
    bits = [
        solve_classical(oracle, g_variant, l, path.child(unit_string(j, n)))
        for j in range(1, n + 1)
    ]
    return g_eval(BitString.from_bits(bits), g_variant)


def solve(oracle: CountingOracle, g_variant: GVariant | None = None,
          l: int | None = None, path: NodePath = ROOT) -> SolveResult:
    """solve_classical plus the query count the call actually used."""
    before = oracle.classical_queries
    answer = solve_classical(oracle, g_variant, l, path)
    return SolveResult(answer, oracle.classical_queries - before)
