"""The counting oracle: classical answers, the reversible gate, accounting."""

import numpy as np
import pytest

from rfs.bits import BitString, g_eval
from rfs.errors import ContractViolation
from rfs.instance import NodePath, ROOT, RfsInstance
from rfs.oracle import CountingOracle
from rfs.quantum import (InitKind, empty_state, init_register,
                         measure_register)

UNITARY_TOL = 1e-12


def _leaf(inst, *values):
    return NodePath(tuple(BitString(inst.n, v) for v in values))


def test_counters_start_at_zero():
    oracle = CountingOracle(RfsInstance(3, 2, seed=0))
    assert oracle.counters() == {"classical_queries": 0, "quantum_queries": 0}


def test_classical_query_answers_g_of_leaf_secret():
    inst = RfsInstance(3, 2, seed=11)
    oracle = CountingOracle(inst)
    leaf = _leaf(inst, 5, 2)
    assert oracle.classical_query(leaf) == g_eval(inst.secret_at(leaf),
                                                  inst.g_variant)
    assert oracle.classical_queries == 1
    assert oracle.quantum_queries == 0


def test_classical_query_rejects_non_leaves():
    inst = RfsInstance(3, 2, seed=11)
    oracle = CountingOracle(inst)
    for path in (ROOT, _leaf(inst, 5)):
        with pytest.raises(ContractViolation):
            oracle.classical_query(path)
    assert oracle.classical_queries == 0


def _basis_state(n, x_value, y_value=0):
    """|x>|y> with an n-qubit source register and a 1-qubit target."""
    state = init_register(empty_state(), "x", n, InitKind.ZEROS)
    state = init_register(state, "y", 1, InitKind.ZEROS)
    amps = np.zeros_like(state.amplitudes)
    amps[x_value * 2 + y_value] = 1.0
    state.amplitudes = amps
    return state


def test_quantum_apply_on_basis_states_matches_classical():
    inst = RfsInstance(3, 1, seed=4)
    oracle = CountingOracle(inst)
    for v in range(1 << inst.n):
        state = oracle.quantum_apply(_basis_state(inst.n, v), ROOT, ["x"], "y")
        got, mass = measure_register(state, "y")
        assert mass == pytest.approx(1.0)
        assert got == g_eval(inst.secret_at(_leaf(inst, v)), inst.g_variant)
    assert oracle.quantum_queries == 1 << inst.n
    assert oracle.classical_queries == 0


def test_quantum_apply_with_fixed_prefix():
    inst = RfsInstance(2, 2, seed=9)
    oracle = CountingOracle(inst)
    prefix = ROOT.child(BitString(2, 3))
    for v in range(4):
        state = oracle.quantum_apply(_basis_state(2, v), prefix, ["x"], "y")
        got, _ = measure_register(state, "y")
        leaf = prefix.child(BitString(2, v))
        assert got == g_eval(inst.secret_at(leaf), inst.g_variant)


def test_one_gate_over_superposition_counts_once():
    inst = RfsInstance(3, 1, seed=4)
    oracle = CountingOracle(inst)
    state = init_register(empty_state(), "x", 3, InitKind.UNIFORM)
    state = init_register(state, "y", 1, InitKind.ZEROS)
    oracle.quantum_apply(state, ROOT, ["x"], "y")
    assert oracle.quantum_queries == 1


def test_gate_is_self_inverse():
    inst = RfsInstance(2, 1, seed=8)
    oracle = CountingOracle(inst)
    state = init_register(empty_state(), "x", 2, InitKind.UNIFORM)
    state = init_register(state, "y", 1, InitKind.MINUS)
    original = state.amplitudes.copy()
    state = oracle.quantum_apply(state, ROOT, ["x"], "y")
    state = oracle.quantum_apply(state, ROOT, ["x"], "y")
    assert np.max(np.abs(state.amplitudes - original)) <= UNITARY_TOL


def test_gate_matrix_is_unitary():
    inst = RfsInstance(2, 1, seed=8)
    oracle = CountingOracle(inst)
    dim = (1 << 2) * 2
    columns = []
    for idx in range(dim):
        state = oracle.quantum_apply(_basis_state(2, idx // 2, idx % 2),
                                     ROOT, ["x"], "y")
        columns.append(state.amplitudes)
    mat = np.column_stack(columns)
    assert np.max(np.abs(mat.conj().T @ mat - np.eye(dim))) <= UNITARY_TOL


def test_gate_two_level_table_matches_leaves():
    inst = RfsInstance(2, 2, seed=3)
    oracle = CountingOracle(inst)
    state = init_register(empty_state(), "x1", 2, InitKind.ZEROS)
    state = init_register(state, "x2", 2, InitKind.ZEROS)
    state = init_register(state, "y", 1, InitKind.ZEROS)
    for v1 in range(4):
        for v2 in range(4):
            amps = np.zeros_like(state.amplitudes)
            amps[(v1 * 4 + v2) * 2] = 1.0
            state.amplitudes = amps
            out = oracle.quantum_apply(state, ROOT, ["x1", "x2"], "y")
            got, _ = measure_register(out, "y")
            leaf = _leaf(inst, v1, v2)
            assert got == g_eval(inst.secret_at(leaf), inst.g_variant)


def test_quantum_apply_validates_shape():
    inst = RfsInstance(3, 2, seed=0)
    oracle = CountingOracle(inst)
    state = _basis_state(3, 0)
    with pytest.raises(ContractViolation):
        oracle.quantum_apply(state, ROOT, ["x"], "y")  # depth 0 + 1 != 2
    narrow = _basis_state(2, 0)
    prefix = ROOT.child(BitString(3, 1))
    with pytest.raises(ContractViolation):
        oracle.quantum_apply(narrow, prefix, ["x"], "y")  # register too narrow
    assert oracle.quantum_queries == 0


def test_random_leaves_classical_quantum_agreement():
    import random
    rng = random.Random(77)
    inst = RfsInstance(3, 2, seed=21)
    oracle = CountingOracle(inst)
    for _ in range(100):
        prefix = ROOT.child(BitString(3, rng.randrange(8)))
        v = rng.randrange(8)
        state = oracle.quantum_apply(_basis_state(3, v), prefix, ["x"], "y")
        q_bit, _ = measure_register(state, "y")
        c_bit = oracle.classical_query(prefix.child(BitString(3, v)))
        assert q_bit == c_bit
    assert oracle.classical_queries == 100
    assert oracle.quantum_queries == 100
