"""Minimal statevector simulator for the exact recursive sampling algorithm.

Only what the algorithm needs: register allocation in three initial states,
register-wide Hadamards, classically controlled XOR gates (the oracle gate
and the g gate), checked ancilla discard, and deterministic measurement.
The gate set never produces complex phases, so every state reachable here
has real amplitudes that are multiples of +-2^(-m/2).

Register convention: the layout is an ordered list of named registers; the
first register holds the most significant bits of the basis index, and a
register holding the bit string x contributes the integer x.value, so
basis indices agree with the big-endian text convention in `bits`.

A run's ancestor coordinates (the fixed prefix) stay classical: when the
top-level input is a basis state those registers are never in
superposition, so simulating them would only pad the state with zeros.
Peak simulated width for a depth-(l-k) run is n*(l-k) + (l-k) + 1 qubits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .bits import BitString, GVariant, g_table
from .errors import ContractViolation, SimulationIntegrityError
from .instance import ROOT, NodePath

MAX_QUBITS = 26
NORM_TOL = 1e-9       # L2 norm drift allowed at operation boundaries
STATE_TOL = 1e-9      # amplitude-by-amplitude state comparisons
MEASURE_TOL = 1e-6    # mass the majority outcome must hold to count as exact
UNITARY_TOL = 1e-12   # single-gate unitarity checks (tests)

_INV_SQRT2 = 1.0 / math.sqrt(2.0)


class InitKind(str, Enum):
    ZEROS = "zeros"
    UNIFORM = "uniform"
    MINUS = "minus"


@dataclass(frozen=True)
class Register:
    id: str
    qubits: int
    init: InitKind


@dataclass(frozen=True)
class RegisterLayout:
    registers: tuple[Register, ...] = ()

    def __post_init__(self):
        ids = [r.id for r in self.registers]
        if len(set(ids)) != len(ids):
            raise ContractViolation(f"duplicate register ids in {ids}")
        if self.total_qubits > MAX_QUBITS:
            raise ContractViolation(
                f"layout needs {self.total_qubits} qubits, cap is {MAX_QUBITS}"
            )

    @property
    def total_qubits(self) -> int:
        return sum(r.qubits for r in self.registers)

    def axis(self, reg_id: str) -> int:
        for i, r in enumerate(self.registers):
            if r.id == reg_id:
                return i
        raise ContractViolation(f"no register {reg_id!r} in layout")

    def register(self, reg_id: str) -> Register:
        return self.registers[self.axis(reg_id)]

    def qubit_offset(self, reg_id: str) -> int:
        off = 0
        for r in self.registers:
            if r.id == reg_id:
                return off
            off += r.qubits
        raise ContractViolation(f"no register {reg_id!r} in layout")

    def dims(self) -> tuple[int, ...]:
        return tuple(1 << r.qubits for r in self.registers)


@dataclass
class Statevector:
    layout: RegisterLayout
    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def empty_state() -> Statevector:
    """The trivial state on zero registers (a single unit amplitude)."""
    return Statevector(RegisterLayout(), np.ones(1, dtype=complex))


def _init_vector(kind: InitKind, qubits: int) -> np.ndarray:
    dim = 1 << qubits
    if kind is InitKind.ZEROS:
        vec = np.zeros(dim, dtype=complex)
        vec[0] = 1.0
        return vec
    if kind is InitKind.UNIFORM:
        return np.full(dim, 1.0 / math.sqrt(dim), dtype=complex)
    if kind is InitKind.MINUS:
        if qubits != 1:
            raise ContractViolation("minus init requires a 1-qubit register")
        return np.array([_INV_SQRT2, -_INV_SQRT2], dtype=complex)
    raise ContractViolation(f"unknown init kind {kind!r}")


def _checked(state: Statevector) -> Statevector:
    if abs(state.norm() - 1.0) > NORM_TOL:
        raise SimulationIntegrityError(f"statevector norm drifted to {state.norm()}")
    return state


def init_register(state: Statevector, reg_id: str, qubits: int,
                  kind: InitKind) -> Statevector:
    """Allocate a fresh register in the given initial state.

    The register is appended to the layout (least significant block); its
    init kind is remembered so discard can verify the uncompute contract.
    """
    if qubits < 1:
        raise ContractViolation("register needs at least one qubit")
    layout = RegisterLayout(state.layout.registers + (Register(reg_id, qubits, kind),))
    amps = np.kron(state.amplitudes, _init_vector(kind, qubits))
    return _checked(Statevector(layout, amps))


def hadamard_all(state: Statevector, reg_id: str) -> Statevector:
    """Apply H to every qubit of one register (the Fourier sandwich step)."""
    reg = state.layout.register(reg_id)
    total = state.layout.total_qubits
    nd = state.amplitudes.copy().reshape([2] * total)
    off = state.layout.qubit_offset(reg_id)
    for ax in range(off, off + reg.qubits):
        head = (slice(None),) * ax
        a0 = nd[head + (0,)]
        a1 = nd[head + (1,)]
        h0 = (a0 + a1) * _INV_SQRT2
        h1 = (a0 - a1) * _INV_SQRT2
        nd[head + (0,)] = h0
        nd[head + (1,)] = h1
    return _checked(Statevector(state.layout, nd.reshape(-1)))


def apply_controlled_flip(state: Statevector, source_ids: list[str],
                          target_id: str, table: np.ndarray) -> Statevector:
    """XOR a classical function of the source registers into a 1-qubit target.

    `table` holds the function's bit for every joint source value, shaped
    (2^q1, ..., 2^qm) in source_ids order. This is the common core of the
    leaf oracle gate and the g gate: a self-inverse basis permutation.
    """
    layout = state.layout
    if layout.register(target_id).qubits != 1:
        raise ContractViolation("flip target must be a 1-qubit register")
    if target_id in source_ids:
        raise ContractViolation("target register cannot also be a source")
    src_axes = [layout.axis(s) for s in source_ids]
    t_axis = layout.axis(target_id)
    expected_shape = tuple(1 << layout.registers[a].qubits for a in src_axes)
    if tuple(table.shape) != expected_shape:
        raise ContractViolation(
            f"table shape {table.shape} does not match source dims {expected_shape}"
        )
    nd = state.amplitudes.copy().reshape(layout.dims())
    other_axes = [i for i in range(nd.ndim) if i != t_axis and i not in src_axes]
    view = nd.transpose(src_axes + other_axes + [t_axis])
    if not source_ids:
        if int(table):
            view[...] = view[..., ::-1]
    else:
        mask = table.astype(bool)
        if mask.any():
            view[mask] = view[mask][..., ::-1]
    return _checked(Statevector(layout, nd.reshape(-1)))


def g_gate(state: Statevector, src_reg: str, target: str,
           variant: GVariant = GVariant.HAMMING_MOD3) -> Statevector:
    """XOR g(source register) into the target qubit."""
    n = state.layout.register(src_reg).qubits
    return apply_controlled_flip(state, [src_reg], target, g_table(n, variant))


def measure_register(state: Statevector, reg_id: str,
                     tol: float = MEASURE_TOL) -> tuple[int, float]:
    """Read out a register that must hold a single basis value.

    Returns (value, mass). The algorithm simulated here is exact, so the
    marginal must put all but `tol` of its mass on one value; anything
    else is an integrity failure, not a sampling situation.
    """
    layout = state.layout
    ax = layout.axis(reg_id)
    probs = np.abs(state.amplitudes) ** 2
    nd = probs.reshape(layout.dims())
    marginal = nd.sum(axis=tuple(i for i in range(nd.ndim) if i != ax))
    value = int(np.argmax(marginal))
    mass = float(marginal[value])
    if mass < 1.0 - tol:
        raise SimulationIntegrityError(
            f"register {reg_id!r} is not deterministic: top mass {mass}"
        )
    return value, mass


def _split_off(state: Statevector, reg_ids: list[str]):
    """Reshape into (kept, dropped) matrix S plus expected dropped-state e."""
    layout = state.layout
    drop_axes = [layout.axis(r) for r in reg_ids]
    if len(set(drop_axes)) != len(drop_axes):
        raise ContractViolation("duplicate register in discard list")
    keep_axes = [i for i in range(len(layout.registers)) if i not in drop_axes]
    nd = state.amplitudes.reshape(layout.dims())
    mat = nd.transpose(keep_axes + drop_axes)
    keep_dim = math.prod(layout.dims()[i] for i in keep_axes)
    drop_dim = math.prod(layout.dims()[i] for i in drop_axes)
    mat = mat.reshape(keep_dim, drop_dim)
    expected = np.ones(1, dtype=complex)
    for ax in drop_axes:
        reg = layout.registers[ax]
        expected = np.kron(expected, _init_vector(reg.init, reg.qubits))
    kept = tuple(layout.registers[i] for i in keep_axes)
    return mat, expected, kept


def verify_discard(state: Statevector, reg_ids: list[str]) -> bool:
    """True iff the registers are a product factor equal to their init states.

    This is the uncompute guarantee made checkable: a register may only be
    dropped once it is back in exactly the state it was allocated in,
    unentangled with everything kept.
    """
    mat, expected, _ = _split_off(state, reg_ids)
    rest = mat @ expected.conj()
    residue = mat - np.outer(rest, expected)
    return float(np.max(np.abs(residue))) <= STATE_TOL


def discard(state: Statevector, reg_ids: list[str]) -> Statevector:
    """Remove ancilla registers, verifying the uncompute contract first."""
    mat, expected, kept = _split_off(state, reg_ids)
    rest = mat @ expected.conj()
    residue = mat - np.outer(rest, expected)
    worst = float(np.max(np.abs(residue)))
    if worst > STATE_TOL:
        raise SimulationIntegrityError(
            f"registers {reg_ids} carry entangled or displaced residue ({worst:.3e}); "
            "discard is not legal"
        )
    return _checked(Statevector(RegisterLayout(kept), rest.reshape(-1)))


def qrfs_apply(oracle, state: Statevector, prefix: NodePath, x_ids: list[str],
               y_id: str, g_variant: GVariant, l: int) -> Statevector:
    """Apply the recursive sampler's unitary for one subtree to `state`.

    `prefix` holds the classical ancestor coordinates and `x_ids` the
    simulated coordinate registers below them, so the current level is
    prefix.depth + len(x_ids). At the bottom level this is one counted
    oracle gate; above it, the level body allocates a coordinate register
    in uniform superposition plus a phase-kickback ancilla, recurses,
    Hadamard-sandwiches the g gate into the caller's target, recurses
    again to uncompute, and discards both ancillas (checked).
    """
    k = prefix.depth + len(x_ids)
    if k > l:
        raise ContractViolation(f"level {k} exceeds depth {l}")
    if k == l:
        return oracle.quantum_apply(state, prefix, x_ids, y_id)
    n = oracle.instance.n
    xid = f"x{k + 1}"
    ypid = f"yp{k + 1}"
    state = init_register(state, xid, n, InitKind.UNIFORM)
    state = init_register(state, ypid, 1, InitKind.MINUS)
    state = qrfs_apply(oracle, state, prefix, x_ids + [xid], ypid, g_variant, l)
    state = hadamard_all(state, xid)
    state = g_gate(state, xid, y_id, g_variant)
    state = hadamard_all(state, xid)
    state = qrfs_apply(oracle, state, prefix, x_ids + [xid], ypid, g_variant, l)
    return discard(state, [xid, ypid])


def _resolve(oracle, g_variant, l):
    inst = oracle.instance
    return (inst.g_variant if g_variant is None else GVariant(g_variant),
            inst.l if l is None else l)


def _validate_prefix(oracle, prefix: NodePath, l: int) -> None:
    n = oracle.instance.n
    for part in prefix:
        if part.width != n:
            raise ContractViolation(f"prefix part width {part.width} != {n}")
    if prefix.depth > l:
        raise ContractViolation(f"prefix depth {prefix.depth} exceeds {l}")


def qrfs_run(oracle, g_variant: GVariant | None = None, l: int | None = None,
             fixed_prefix: NodePath = ROOT) -> int:
    """Simulate the full sampler for the subtree at `fixed_prefix`.

    Returns g(secret at the prefix), read from a deterministic output
    qubit; costs exactly 2^(l - k) counted oracle gates for a prefix of
    depth k.
    """
    g_variant, l = _resolve(oracle, g_variant, l)
    _validate_prefix(oracle, fixed_prefix, l)
    n = oracle.instance.n
    k = fixed_prefix.depth
    active = n * (l - k) + (l - k) + 1
    if active > MAX_QUBITS:
        raise ContractViolation(
            f"run would need {active} simulated qubits, cap is {MAX_QUBITS}"
        )
    state = init_register(empty_state(), "out", 1, InitKind.ZEROS)
    state = qrfs_apply(oracle, state, fixed_prefix, [], "out", g_variant, l)
    value, _ = measure_register(state, "out")
    return value


def extract_subtree_secret(oracle, g_variant: GVariant | None = None,
                           l: int | None = None, path: NodePath = ROOT) -> BitString:
    """Recover the secret string at `path` (depth k < l) quantumly.

    Runs the level body only up to the Hadamard that maps the phase state
    to the secret, then reads the coordinate register, which must hold a
    single basis value. Stopping there skips the uncompute recursion, so
    the cost is 2^(l - k - 1) counted oracle gates.
    """
    g_variant, l = _resolve(oracle, g_variant, l)
    _validate_prefix(oracle, path, l)
    n = oracle.instance.n
    k = path.depth
    if k >= l:
        raise ContractViolation("secret extraction needs a non-leaf node (depth < l)")
    active = n * (l - k) + (l - k)
    if active > MAX_QUBITS:
        raise ContractViolation(
            f"extraction would need {active} simulated qubits, cap is {MAX_QUBITS}"
        )
    xid = f"x{k + 1}"
    ypid = f"yp{k + 1}"
    state = init_register(empty_state(), xid, n, InitKind.UNIFORM)
    state = init_register(state, ypid, 1, InitKind.MINUS)
    state = qrfs_apply(oracle, state, path, [xid], ypid, g_variant, l)
    state = hadamard_all(state, xid)
    value, _ = measure_register(state, xid)
    return BitString(n, value)


def dump_state(state: Statevector, threshold: float = 1e-12,
               max_nonzeros: int = 4096) -> dict:
    """JSON-ready snapshot: layout plus (index, re, im) for nonzero amplitudes."""
    amps = state.amplitudes
    idx = np.nonzero(np.abs(amps) > threshold)[0]
    if len(idx) > max_nonzeros:
        raise ContractViolation(
            f"state has {len(idx)} nonzero amplitudes, dump cap is {max_nonzeros}"
        )
    return {
        "layout": [
            {"id": r.id, "qubits": r.qubits, "init": r.init.value}
            for r in state.layout.registers
        ],
        "amplitudes": [
            [int(i), float(amps[i].real), float(amps[i].imag)] for i in idx
        ],
    }
