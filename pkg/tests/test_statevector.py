"""Register simulator: gate semantics vs dense matrices, projection, dumps."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from openbethe import (
    CapacityError,
    Gate,
    ImpossibleOutcomeError,
    ValidationError,
    apply_circuit,
    apply_gate,
    dump_state,
    hadamard,
    init_register,
    load_state,
    overlap,
    pauli_x,
    phase_shift,
    project_subregister,
    rotation_y,
    subspace_rotation,
    swap,
)

_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
_H = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / math.sqrt(2.0)


def _ry(angle):
    c, s = math.cos(angle / 2.0), math.sin(angle / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def _phase(angle):
    return np.diag([1.0, np.exp(1j * angle)]).astype(complex)


def _dense_unitary(gate, n):
    """Independent dense matrix for a gate on an n-qubit register."""
    dim = 1 << n
    mat = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        bits = [(col >> q) & 1 for q in range(n)]
        if any(bits[q] == 0 for q in gate.controls_on) or any(
            bits[q] == 1 for q in gate.controls_off
        ):
            mat[col, col] = 1.0
            continue
        if gate.kind in ("PauliX", "Hadamard", "PhaseShift", "RotationY"):
            t = gate.targets[0]
            u = {
                "PauliX": _X,
                "Hadamard": _H,
                "PhaseShift": _phase(gate.angle),
                "RotationY": _ry(gate.angle),
            }[gate.kind]
            flipped = col ^ (1 << t)
            mat[col if bits[t] == 0 else flipped, col] += u[0, bits[t]]
            mat[flipped if bits[t] == 0 else col, col] += u[1, bits[t]]
        elif gate.kind == "Swap":
            a, b = gate.targets
            row = col
            if bits[a] != bits[b]:
                row = col ^ (1 << a) ^ (1 << b)
            mat[row, col] = 1.0
        elif gate.kind == "SubspaceRotation":
            pattern = tuple(bits[q] for q in gate.targets)
            c, s = math.cos(gate.angle), math.sin(gate.angle)
            if pattern == gate.u_bits:
                xor = 0
                for q, ub, vb in zip(gate.targets, gate.u_bits, gate.v_bits):
                    if ub != vb:
                        xor |= 1 << q
                mat[col, col] = c
                mat[col ^ xor, col] = s
            elif pattern == gate.v_bits:
                xor = 0
                for q, ub, vb in zip(gate.targets, gate.u_bits, gate.v_bits):
                    if ub != vb:
                        xor |= 1 << q
                mat[col, col] = c
                mat[col ^ xor, col] = -s
            else:
                mat[col, col] = 1.0
    return mat


def _random_state(rng, n):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return (v / np.linalg.norm(v)).astype(np.complex128)


def _gate_pool(n, rng):
    qs = list(range(n))
    rng.shuffle(qs)
    t, c1, c2 = qs[0], qs[1], qs[2]
    return [
        pauli_x(t),
        pauli_x(t, controls_on=(c1,)),
        pauli_x(t, controls_on=(c1,), controls_off=(c2,)),
        hadamard(t),
        hadamard(t, controls_off=(c2,)),
        phase_shift(0.77, t, controls_on=(c1, c2)),
        phase_shift(-2.1, t, controls_off=(c1,)),
        rotation_y(1.3, t, controls_on=(c2,)),
        swap(t, c1, controls_on=(c2,)),
        swap(t, c1, controls_off=(c2,)),
        subspace_rotation(0.6, (t, c1), (0, 1), (1, 0), controls_on=(c2,)),
        subspace_rotation(-0.9, (t, c1, c2), (0, 1, 1), (1, 0, 0)),
    ]


def test_gates_match_dense_matrices():
    """Every kind, with on/off controls, against an independent dense build."""
    rng = np.random.default_rng(3)
    n = 4
    for trial in range(30):
        for gate in _gate_pool(n, rng):
            state = _random_state(rng, n)
            expected = _dense_unitary(gate, n) @ state
            actual = apply_gate(state.copy(), gate)
            assert np.max(np.abs(actual - expected)) < 1e-13, gate


def test_subspace_rotation_convention():
    # |u> -> cos a |u> + sin a |v> on a two-qubit register
    state = init_register(2)
    state[:] = 0
    state[0b01] = 1.0  # qubit0 = 1, qubit1 = 0
    gate = subspace_rotation(0.4, (0, 1), (1, 0), (0, 1))
    apply_gate(state, gate)
    assert abs(state[0b01] - math.cos(0.4)) < 1e-15
    assert abs(state[0b10] - math.sin(0.4)) < 1e-15
    # and |v> -> -sin a |u> + cos a |v>
    state = init_register(2)
    state[:] = 0
    state[0b10] = 1.0
    apply_gate(state, gate)
    assert abs(state[0b01] + math.sin(0.4)) < 1e-15
    assert abs(state[0b10] - math.cos(0.4)) < 1e-15


def test_gate_inverses_round_trip():
    rng = np.random.default_rng(5)
    state = _random_state(rng, 4)
    gates = _gate_pool(4, rng)
    forward = state.copy()
    apply_circuit(forward, gates)
    apply_circuit(forward, [g.inverse() for g in reversed(gates)])
    assert np.max(np.abs(forward - state)) < 1e-12


@settings(max_examples=50, deadline=None)
@given(st.integers(min_value=0, max_value=2**31 - 1))
def test_random_circuits_preserve_norm(seed):
    rng = np.random.default_rng(seed)
    state = _random_state(rng, 4)
    apply_circuit(state, _gate_pool(4, rng))
    assert abs(np.linalg.norm(state) - 1.0) < 1e-12


def test_determinism_bit_identical():
    def run():
        rng = np.random.default_rng(99)
        state = init_register(5)
        for _ in range(3):
            apply_circuit(state, _gate_pool(5, rng))
        return state.tobytes()

    assert run() == run()


def test_init_register_capacity():
    with pytest.raises(CapacityError):
        init_register(0)
    with pytest.raises(CapacityError):
        init_register(31)
    state = init_register(3)
    assert state[0] == 1.0 and np.sum(np.abs(state)) == 1.0


def test_gate_validation():
    with pytest.raises(ValidationError):
        Gate("Sideflip", (0,))
    with pytest.raises(ValidationError):
        pauli_x(0, controls_on=(0,))
    with pytest.raises(ValidationError):
        subspace_rotation(0.3, (0, 1), (0, 1), (0, 1))
    with pytest.raises(ValidationError):
        apply_gate(init_register(2), pauli_x(5))


def test_projection_probability_and_collapse():
    state = init_register(2)
    apply_gate(state, hadamard(0))
    collapsed, prob = project_subregister(state, (0,), (1,))
    assert abs(prob - 0.5) < 1e-14
    assert abs(collapsed[0b01] - 1.0) < 1e-14
    assert abs(np.linalg.norm(collapsed) - 1.0) < 1e-14


def test_projection_impossible_outcome():
    state = init_register(2)
    with pytest.raises(ImpossibleOutcomeError):
        project_subregister(state, (0,), (1,))


def test_overlap_and_global_phase():
    rng = np.random.default_rng(17)
    a = _random_state(rng, 3)
    b = np.exp(1j * 0.7) * a
    assert abs(abs(overlap(a, b)) - 1.0) < 1e-13
    assert abs(overlap(a, a) - 1.0) < 1e-13


def test_bfsv_round_trip(tmp_path):
    rng = np.random.default_rng(23)
    state = _random_state(rng, 6)
    path = tmp_path / "state.bfsv"
    dump_state(state, path)
    raw = path.read_bytes()
    assert raw[:4] == b"BFSV"
    assert len(raw) == 16 + (1 << 6) * 16
    loaded = load_state(path)
    assert np.array_equal(loaded, state)


def test_bfsv_rejects_corrupt_header(tmp_path):
    path = tmp_path / "bad.bfsv"
    path.write_bytes(b"NOPE" + b"\x00" * 28)
    with pytest.raises(ValidationError):
        load_state(path)
