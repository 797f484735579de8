"""OPENQASM 2.0 serialization of preparation circuits.

Lowers the native gate set (including multi-controlled and
two-subregister operations) onto the ``qelib1.inc`` vocabulary:
``x/cx/ccx``, ``h/ch``, ``u1/cu1``, ``ry`` and ``cu3`` (a ``cu3`` with
vanishing phase angles is exactly a controlled y-rotation).  Two scratch
qubits beyond the simulated register support Toffoli chains for three
and four controls; larger control counts fall back to the standard
halving recursions, which are scratch-free at a gate-count cost.  The
exported file reproduces the simulated unitary on the non-scratch
qubits, with segment boundaries marked by barriers.
"""

from __future__ import annotations

import math

from .errors import ValidationError

__all__ = ["export_qasm"]


class _Emitter:
    def __init__(self, num_qubits, work):
        self.lines = []
        self.num_qubits = num_qubits
        self.work = work

    def op(self, name, qubits, angles=()):
        args = ", ".join(f"q[{q}]" for q in qubits)
        if angles:
            params = ",".join(_fmt(a) for a in angles)
            self.lines.append(f"{name}({params}) {args};")
        else:
            self.lines.append(f"{name} {args};")

    def barrier(self):
        self.lines.append("barrier q;")

    def comment(self, text):
        self.lines.append(f"// {text}")


def _fmt(x):
    if x == math.pi:
        return "pi"
    if x == -math.pi:
        return "-pi"
    return repr(float(x))


def _mcx(em, controls, target):
    controls = list(controls)
    c = len(controls)
    if c == 0:
        em.op("x", [target])
    elif c == 1:
        em.op("cx", [controls[0], target])
    elif c == 2:
        em.op("ccx", [controls[0], controls[1], target])
    elif c == 3:
        w0 = em.work[0]
        em.op("ccx", [controls[0], controls[1], w0])
        em.op("ccx", [controls[2], w0, target])
        em.op("ccx", [controls[0], controls[1], w0])
    elif c == 4:
        w0, w1 = em.work
        em.op("ccx", [controls[0], controls[1], w0])
        em.op("ccx", [controls[2], controls[3], w1])
        em.op("ccx", [w0, w1, target])
        em.op("ccx", [controls[2], controls[3], w1])
        em.op("ccx", [controls[0], controls[1], w0])
    else:
        em.op("h", [target])
        _mcp(em, math.pi, controls, target)
        em.op("h", [target])


def _mcp(em, angle, controls, target):
    controls = list(controls)
    c = len(controls)
    if c == 0:
        em.op("u1", [target], (angle,))
    elif c == 1:
        em.op("cu1", [controls[0], target], (angle,))
    else:
        last, rest = controls[-1], controls[:-1]
        em.op("cu1", [last, target], (angle / 2,))
        _mcx(em, rest, last)
        em.op("cu1", [last, target], (-angle / 2,))
        _mcx(em, rest, last)
        _mcp(em, angle / 2, rest, target)


def _mcry(em, angle, controls, target):
    controls = list(controls)
    c = len(controls)
    if c == 0:
        em.op("ry", [target], (angle,))
    elif c == 1:
        em.op("cu3", [controls[0], target], (angle, 0.0, 0.0))
    else:
        last, rest = controls[-1], controls[:-1]
        em.op("cu3", [last, target], (angle / 2, 0.0, 0.0))
        _mcx(em, rest, last)
        em.op("cu3", [last, target], (-angle / 2, 0.0, 0.0))
        _mcx(em, rest, last)
        _mcry(em, angle / 2, rest, target)


def _with_off_controls(em, gate_controls_off, emit):
    """Emit ``emit()`` conjugated by X on the off-polarity controls.

    The conjugated region must treat those qubits as ordinary (on)
    controls; callers pass them along in their control lists.
    """
    for q in gate_controls_off:
        em.op("x", [q])
    emit()
    for q in gate_controls_off:
        em.op("x", [q])


def _lower(em, gate):
    on = list(gate.controls_on)
    off = list(gate.controls_off)
    ctrls = on + off
    kind = gate.kind
    if kind == "PauliX":
        _with_off_controls(em, off, lambda: _mcx(em, ctrls, gate.targets[0]))
    elif kind == "Hadamard":
        if len(ctrls) == 0:
            em.op("h", [gate.targets[0]])
        elif len(ctrls) == 1:
            _with_off_controls(
                em, off, lambda: em.op("ch", [ctrls[0], gate.targets[0]])
            )
        else:
            raise ValidationError(
                "Hadamard with more than one control is not serializable"
            )
    elif kind == "PhaseShift":
        _with_off_controls(
            em, off, lambda: _mcp(em, gate.angle, ctrls, gate.targets[0])
        )
    elif kind == "RotationY":
        _with_off_controls(
            em, off, lambda: _mcry(em, gate.angle, ctrls, gate.targets[0])
        )
    elif kind == "Swap":
        a, b = gate.targets

        def emit_swap():
            em.op("cx", [b, a])
            _mcx(em, ctrls + [a], b)
            em.op("cx", [b, a])

        _with_off_controls(em, off, emit_swap)
    elif kind == "SubspaceRotation":
        _lower_subspace(em, gate)
    else:  # pragma: no cover - Gate validation forbids unknown kinds
        raise ValidationError(f"cannot serialize gate kind {kind!r}")


def _lower_subspace(em, gate):
    """Reduce a two-pattern rotation to one multi-controlled ry.

    A CX fan-out from a pivot qubit maps the two basis patterns onto a
    pair differing at the pivot only; there the rotation is a plain
    y-rotation by twice the angle (sign set by the pivot bit of the
    first pattern), controlled on every other target qubit sitting at
    the transformed pattern value plus the gate's own controls.
    """
    diff = [
        q for q, ub, vb in zip(gate.targets, gate.u_bits, gate.v_bits) if ub != vb
    ]
    pivot = diff[0]
    chain = [d for d in diff[1:]]
    u_map = dict(zip(gate.targets, gate.u_bits))
    pivot_bit = u_map[pivot]
    for d in chain:
        em.op("cx", [pivot, d])
    controls_on = list(gate.controls_on)
    controls_off = list(gate.controls_off)
    for q in gate.targets:
        if q == pivot:
            continue
        bit = u_map[q] ^ (pivot_bit if q in chain else 0)
        if bit:
            controls_on.append(q)
        else:
            controls_off.append(q)
    angle = 2.0 * gate.angle if pivot_bit == 0 else -2.0 * gate.angle
    _with_off_controls(
        em,
        controls_off,
        lambda: _mcry(em, angle, controls_on + controls_off, pivot),
    )
    for d in reversed(chain):
        em.op("cx", [pivot, d])


def export_qasm(circuit, destination=None):
    """Serialize a circuit; returns the text and optionally writes it.

    ``destination`` may be a filesystem path or a writable text stream.
    The declared register is the simulated one plus the two scratch
    qubits, which every lowered gate returns to |0>.
    """
    layout = circuit.layout
    total = layout.num_qubits + 2
    em = _Emitter(total, layout.work_qubits)
    for name, gates in circuit.segments:
        em.comment(f"segment: {name}")
        for gate in gates:
            _lower(em, gate)
        em.barrier()
    block_note = f"// qubits: system q[0..{layout.length - 1}]"
    if layout.num_down:
        block_note += (
            f", labels q[{layout.label_qubits[0]}..{layout.label_qubits[-1]}]"
            f", faucets q[{layout.faucet_qubits[0]}..{layout.faucet_qubits[-1]}]"
        )
    block_note += f", scratch q[{total - 2}..{total - 1}]"
    header = [
        f"// eigenstate preparation: L={layout.length} sites, "
        f"M={layout.num_down} down spins",
        block_note,
        "OPENQASM 2.0;",
        'include "qelib1.inc";',
        f"qreg q[{total}];",
    ]
    text = "\n".join(header + em.lines) + "\n"
    if destination is not None:
        if hasattr(destination, "write"):
            destination.write(text)
        else:
            with open(destination, "w", encoding="utf-8") as fh:
                fh.write(text)
    return text
