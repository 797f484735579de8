"""Dense little-endian statevector simulator with natively controlled gates.

Registers are numpy ``complex128`` arrays of length ``2^n`` for up to 30
qubits; basis index bit ``q`` is the state of qubit ``q``.  Gates carry
arbitrary on/off control sets that are honored exactly (no ancilla
decomposition), so circuit-level resource counts stay faithful to the
abstract construction.  All updates are in place and deterministic:
repeating a run on equal inputs reproduces the amplitudes bit for bit.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, replace

import numpy as np

from .errors import CapacityError, ImpossibleOutcomeError, ValidationError

__all__ = [
    "Gate",
    "pauli_x",
    "hadamard",
    "phase_shift",
    "rotation_y",
    "swap",
    "subspace_rotation",
    "init_register",
    "apply_gate",
    "apply_circuit",
    "project_subregister",
    "overlap",
    "dump_state",
    "load_state",
]

_MAX_QUBITS = 30

_KINDS = frozenset(
    ["PauliX", "Hadamard", "PhaseShift", "RotationY", "Swap", "SubspaceRotation"]
)

_SQRT_HALF = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True)
class Gate:
    """One primitive operation.

    ``kind`` selects the action; ``targets`` are the acted-on qubits
    (one for the single-qubit kinds, two for ``Swap``, any number for
    ``SubspaceRotation``).  ``controls_on`` / ``controls_off`` gate the
    action on those qubits being 1 / 0.  ``angle`` feeds the rotation
    kinds.  ``u_bits`` / ``v_bits`` are the two basis patterns of a
    ``SubspaceRotation``, which acts as the Givens rotation

        |u> -> cos(a) |u> + sin(a) |v>,
        |v> -> -sin(a) |u> + cos(a) |v>

    on the targets and as identity on every other pattern.
    """

    kind: str
    targets: tuple
    angle: float = 0.0
    controls_on: tuple = ()
    controls_off: tuple = ()
    u_bits: tuple = ()
    v_bits: tuple = ()

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValidationError(f"unknown gate kind {self.kind!r}")
        object.__setattr__(self, "targets", tuple(int(q) for q in self.targets))
        object.__setattr__(
            self, "controls_on", tuple(int(q) for q in self.controls_on)
        )
        object.__setattr__(
            self, "controls_off", tuple(int(q) for q in self.controls_off)
        )
        object.__setattr__(self, "u_bits", tuple(int(b) for b in self.u_bits))
        object.__setattr__(self, "v_bits", tuple(int(b) for b in self.v_bits))
        touched = self.targets + self.controls_on + self.controls_off
        if len(set(touched)) != len(touched):
            raise ValidationError(
                f"targets and controls overlap in {self.kind}: {touched}"
            )
        expected = {"Swap": 2}.get(self.kind, 1)
        if self.kind == "SubspaceRotation":
            if not self.targets:
                raise ValidationError("SubspaceRotation needs at least one target")
            if (
                len(self.u_bits) != len(self.targets)
                or len(self.v_bits) != len(self.targets)
            ):
                raise ValidationError(
                    "u_bits / v_bits must match the SubspaceRotation targets"
                )
            if self.u_bits == self.v_bits:
                raise ValidationError(
                    "SubspaceRotation basis patterns must differ"
                )
            if not all(b in (0, 1) for b in self.u_bits + self.v_bits):
                raise ValidationError("basis patterns must be 0/1 tuples")
        elif len(self.targets) != expected:
            raise ValidationError(
                f"{self.kind} takes {expected} target(s), got {self.targets}"
            )

    def inverse(self):
        """Gate undoing this one (angle negation for the rotation kinds)."""
        if self.kind in ("PhaseShift", "RotationY", "SubspaceRotation"):
            return replace(self, angle=-self.angle)
        return self

    def qubits(self):
        return self.targets + self.controls_on + self.controls_off


def pauli_x(target, controls_on=(), controls_off=()):
    return Gate("PauliX", (target,), 0.0, tuple(controls_on), tuple(controls_off))


def hadamard(target, controls_on=(), controls_off=()):
    return Gate("Hadamard", (target,), 0.0, tuple(controls_on), tuple(controls_off))


def phase_shift(angle, target, controls_on=(), controls_off=()):
    return Gate(
        "PhaseShift", (target,), float(angle), tuple(controls_on), tuple(controls_off)
    )


def rotation_y(angle, target, controls_on=(), controls_off=()):
    return Gate(
        "RotationY", (target,), float(angle), tuple(controls_on), tuple(controls_off)
    )


def swap(target_a, target_b, controls_on=(), controls_off=()):
    return Gate(
        "Swap", (target_a, target_b), 0.0, tuple(controls_on), tuple(controls_off)
    )


def subspace_rotation(angle, targets, u_bits, v_bits, controls_on=(), controls_off=()):
    return Gate(
        "SubspaceRotation",
        tuple(targets),
        float(angle),
        tuple(controls_on),
        tuple(controls_off),
        tuple(u_bits),
        tuple(v_bits),
    )


# ---------------------------------------------------------------------------
# register operations


def init_register(num_qubits):
    """All-zeros register |0...0> on ``num_qubits`` qubits."""
    if int(num_qubits) != num_qubits or not 1 <= num_qubits <= _MAX_QUBITS:
        raise CapacityError(
            f"register size must be in 1..{_MAX_QUBITS}, got {num_qubits!r}"
        )
    state = np.zeros(1 << int(num_qubits), dtype=np.complex128)
    state[0] = 1.0
    return state


def _num_qubits(state):
    n = int(np.log2(len(state)) + 0.5)
    if (1 << n) != len(state):
        raise ValidationError(f"state length {len(state)} is not a power of two")
    return n


def _free_index_array(num_qubits, fixed_bits):
    """Indices of every basis state matching ``fixed_bits`` (qubit -> 0/1).

    Enumerates the ``2^(n - len(fixed_bits))`` matching indices by
    spreading a dense counter over the free bit positions; no length-2^n
    scratch array is ever allocated.
    """
    free = [q for q in range(num_qubits) if q not in fixed_bits]
    base = 0
    for q, b in fixed_bits.items():
        base |= int(b) << q
    r = np.arange(1 << len(free), dtype=np.int64)
    idx = np.full(len(r), base, dtype=np.int64)
    for i, q in enumerate(free):
        idx += ((r >> i) & 1) << q
    return idx


def _check_qubits(gate, n):
    for q in gate.qubits():
        if not 0 <= q < n:
            raise ValidationError(
                f"gate {gate.kind} touches qubit {q} outside register of size {n}"
            )


def apply_gate(state, gate):
    """Apply one gate in place; returns the same array for chaining."""
    n = _num_qubits(state)
    _check_qubits(gate, n)
    ctrl = {q: 1 for q in gate.controls_on}
    ctrl.update({q: 0 for q in gate.controls_off})
    if gate.kind == "PhaseShift":
        idx = _free_index_array(n, {**ctrl, gate.targets[0]: 1})
        state[idx] *= np.exp(1j * gate.angle)
        return state
    if gate.kind in ("PauliX", "Hadamard", "RotationY"):
        t = gate.targets[0]
        i0 = _free_index_array(n, {**ctrl, t: 0})
        i1 = i0 + (1 << t)
        a0 = state[i0]
        a1 = state[i1]
        if gate.kind == "PauliX":
            state[i0] = a1
            state[i1] = a0
        elif gate.kind == "Hadamard":
            state[i0] = (a0 + a1) * _SQRT_HALF
            state[i1] = (a0 - a1) * _SQRT_HALF
        else:
            c = np.cos(0.5 * gate.angle)
            s = np.sin(0.5 * gate.angle)
            state[i0] = c * a0 - s * a1
            state[i1] = s * a0 + c * a1
        return state
    if gate.kind == "Swap":
        a, b = gate.targets
        i01 = _free_index_array(n, {**ctrl, a: 0, b: 1})
        i10 = i01 + (1 << a) - (1 << b)
        tmp = state[i01]
        state[i01] = state[i10]
        state[i10] = tmp
        return state
    # SubspaceRotation
    fixed = dict(ctrl)
    xor_mask = 0
    for q, ub, vb in zip(gate.targets, gate.u_bits, gate.v_bits):
        fixed[q] = ub
        if ub != vb:
            xor_mask |= 1 << q
    iu = _free_index_array(n, fixed)
    iv = iu ^ xor_mask
    au = state[iu]
    av = state[iv]
    c = np.cos(gate.angle)
    s = np.sin(gate.angle)
    state[iu] = c * au - s * av
    state[iv] = s * au + c * av
    return state


def apply_circuit(state, gates):
    """Apply an iterable of gates in order (in place)."""
    for g in gates:
        apply_gate(state, g)
    return state


def project_subregister(state, qubits, bits):
    """Project onto the given subregister outcome and renormalize.

    Returns ``(collapsed_state, probability)`` where the collapsed state
    is a fresh array that is zero outside the matching indices.  Raises
    ``ImpossibleOutcomeError`` when the outcome probability is below
    1e-15 (the projection would amplify numerical noise).
    """
    n = _num_qubits(state)
    qubits = tuple(int(q) for q in qubits)
    bits = tuple(int(b) for b in bits)
    if len(qubits) != len(bits) or len(set(qubits)) != len(qubits):
        raise ValidationError("qubit/outcome lists must align and be distinct")
    for q in qubits:
        if not 0 <= q < n:
            raise ValidationError(f"projection qubit {q} outside register")
    idx = _free_index_array(n, dict(zip(qubits, bits)))
    kept = state[idx]
    prob = float(np.sum(np.abs(kept) ** 2))
    if prob < 1e-15:
        raise ImpossibleOutcomeError(
            f"outcome {bits} on qubits {qubits} has probability {prob:.3e}"
        )
    collapsed = np.zeros_like(state)
    collapsed[idx] = kept / np.sqrt(prob)
    return collapsed, prob


def overlap(state_a, state_b):
    """Inner product <a|b>."""
    if len(state_a) != len(state_b):
        raise ValidationError("states live on different registers")
    return complex(np.vdot(state_a, state_b))


# ---------------------------------------------------------------------------
# binary serialization

_MAGIC = b"BFSV"
_HEADER = struct.Struct("<4sIII")


def dump_state(state, path):
    """Write the register to ``path`` in the BFSV binary layout.

    16-byte header: magic ``BFSV``, format version 1, qubit count,
    reserved word; then ``2^n`` little-endian complex128 amplitudes.
    """
    n = _num_qubits(state)
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(_MAGIC, 1, n, 0))
        fh.write(np.ascontiguousarray(state, dtype="<c16").tobytes())


def load_state(path):
    """Read a register previously written by ``dump_state``."""
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
        magic, version, n, _reserved = _HEADER.unpack(raw)
        if magic != _MAGIC:
            raise ValidationError(f"not a BFSV file: magic {magic!r}")
        if version != 1:
            raise ValidationError(f"unsupported BFSV version {version}")
        body = fh.read()
    expected = (1 << n) * 16
    if len(body) != expected:
        raise ValidationError(
            f"BFSV payload has {len(body)} bytes, expected {expected}"
        )
    return np.frombuffer(body, dtype="<c16").astype(np.complex128)
