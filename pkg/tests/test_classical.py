"""The recursive classical solver and its query count."""

import random

import pytest

from rfs.bits import BitString, g_eval
from rfs.classical import solve, solve_classical
from rfs.errors import ContractViolation
from rfs.instance import NodePath, ROOT, RfsInstance
from rfs.oracle import CountingOracle


@pytest.mark.parametrize("n,l", [(2, 1), (2, 2), (3, 2), (4, 2), (3, 3)])
def test_solves_correctly_with_exact_count(n, l):
    for seed in range(5):
        inst = RfsInstance(n, l, seed=seed)
        oracle = CountingOracle(inst)
        result = solve(oracle)
        assert result.answer == inst.root_answer()
        assert result.oracle_queries == n ** l
        assert oracle.quantum_queries == 0


def test_random_instances():
    rng = random.Random(123)
    for _ in range(30):
        n = rng.randrange(2, 6)
        l = rng.randrange(1, 3)
        inst = RfsInstance(n, l, seed=rng.randrange(10_000))
        oracle = CountingOracle(inst)
        result = solve(oracle)
        assert result.answer == inst.root_answer()
        assert result.oracle_queries == n ** l


def test_subtree_solve():
    inst = RfsInstance(3, 2, seed=42)
    oracle = CountingOracle(inst)
    path = ROOT.child(BitString(3, 6))
    result = solve(oracle, path=path)
    assert result.answer == g_eval(inst.secret_at(path), inst.g_variant)
    assert result.oracle_queries == 3  # n^(l - depth)


def test_leaf_solve_is_one_query():
    inst = RfsInstance(3, 1, seed=1)
    oracle = CountingOracle(inst)
    leaf = ROOT.child(BitString(3, 2))
    result = solve(oracle, path=leaf)
    assert result.oracle_queries == 1
    assert result.answer == g_eval(inst.secret_at(leaf), inst.g_variant)


def test_overdeep_path_rejected():
    inst = RfsInstance(3, 1, seed=1)
    oracle = CountingOracle(inst)
    too_deep = NodePath((BitString(3, 0), BitString(3, 0)))
    with pytest.raises(ContractViolation):
        solve_classical(oracle, path=too_deep)
