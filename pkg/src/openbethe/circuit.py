"""Gate-level preparation of open-chain eigenstates.

The register holds three blocks (little-endian bit order throughout):

* system qubits ``0 .. L-1``, one per chain site;
* M label subregisters of ``M + 1`` qubits each: M "hot" qubits carrying
  a one-hot momentum value plus one reflection (sign) qubit;
* M faucet qubits that meter how many plane-wave phase increments each
  labeled momentum has received during the site sweep.

The full preparation runs in four gate segments separated by barriers:
a uniform weight-M superposition on the system block; a label
superposition over all signed momentum arrangements with the
closed-form coefficient ratios imprinted as relative phases; a sweep
over chain sites that writes the position-dependent plane-wave phases
and shuts each faucet at its particle's site; and the phase-free
uncomputation of the label block.  Projecting the label block onto
all-zeros afterwards leaves the system block in the eigenstate, with
the closed-form success probability.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .bethe import BetheSolution, ModelParams, phi, theta
from .errors import ValidationError
from .statevector import (
    Gate,
    apply_circuit,
    hadamard,
    init_register,
    overlap,
    pauli_x,
    phase_shift,
    project_subregister,
    rotation_y,
    subspace_rotation,
)
from .wavefunction import direct_bethe_state

__all__ = [
    "QubitLayout",
    "Circuit",
    "RunReport",
    "make_layout",
    "build_dicke_prep",
    "build_label_prep",
    "build_faucet_stage",
    "assemble_full",
    "run_and_project",
]


@dataclass(frozen=True)
class QubitLayout:
    """Mapping from the register blocks to absolute qubit indices.

    The simulated register has ``L + M^2 + 2M`` qubits; the two scratch
    qubits reported by ``work_qubits`` exist only in serialized-circuit
    output and are never simulated.
    """

    length: int
    num_down: int

    def __post_init__(self):
        if self.length < 2:
            raise ValidationError(f"need at least 2 sites, got {self.length}")
        if not 0 <= self.num_down <= self.length // 2:
            raise ValidationError(
                f"num_down must be in 0..floor(L/2), got {self.num_down}"
            )

    @property
    def num_qubits(self):
        m = self.num_down
        return self.length + m * m + 2 * m

    @property
    def system_qubits(self):
        return tuple(range(self.length))

    def subregister_base(self, j):
        return self.length + j * (self.num_down + 1)

    def hot(self, j, value):
        """Qubit that is 1 when label subregister ``j`` holds ``value``."""
        if not (0 <= j < self.num_down and 0 <= value < self.num_down):
            raise ValidationError(f"no hot qubit ({j}, {value})")
        return self.subregister_base(j) + value

    def reflection(self, j):
        """Sign qubit of subregister ``j``; 1 marks a negated momentum."""
        if not 0 <= j < self.num_down:
            raise ValidationError(f"no reflection qubit {j}")
        return self.subregister_base(j) + self.num_down

    def subregister_qubits(self, j):
        base = self.subregister_base(j)
        return tuple(range(base, base + self.num_down + 1))

    def faucet(self, j):
        """Phase-metering qubit of subregister ``j``; 1 while flowing."""
        if not 0 <= j < self.num_down:
            raise ValidationError(f"no faucet qubit {j}")
        return self.length + self.num_down * (self.num_down + 1) + j

    @property
    def label_qubits(self):
        m = self.num_down
        return tuple(range(self.length, self.length + m * (m + 1)))

    @property
    def faucet_qubits(self):
        return tuple(self.faucet(j) for j in range(self.num_down))

    @property
    def work_qubits(self):
        return (self.num_qubits, self.num_qubits + 1)


def make_layout(length, num_down):
    return QubitLayout(int(length), int(num_down))


@dataclass(frozen=True)
class Circuit:
    """Named gate segments on a fixed layout, with barriers between them."""

    layout: QubitLayout
    segments: tuple  # ((name, (Gate, ...)), ...)

    @property
    def gates(self):
        return tuple(g for _, gates in self.segments for g in gates)

    @property
    def num_gates(self):
        return sum(len(gates) for _, gates in self.segments)

    def segment(self, name):
        for seg_name, gates in self.segments:
            if seg_name == name:
                return gates
        raise ValidationError(f"no segment named {name!r}")


@dataclass(frozen=True)
class RunReport:
    """Diagnostics of one simulated preparation.

    ``success_probability`` is the measured weight of the all-zeros
    label outcome; ``eigen_residual`` is ``||H v - E v||`` for the
    projected, normalized system state ``v``; ``oracle_fidelity`` is
    the global-phase-free overlap magnitude ``|<oracle|v>|`` against the
    closed-form reference state.
    """

    quantum_numbers: tuple
    roots: tuple
    energy: float
    success_probability: float
    eigen_residual: float
    oracle_fidelity: float
    wall_time: float


def _roots_of(solution):
    if isinstance(solution, BetheSolution):
        return solution.roots
    return tuple(float(r) for r in solution)


# ---------------------------------------------------------------------------
# segment 1: uniform weight-M superposition on the system block


def _dicke_block(n, m):
    """Three-gate split step acting on qubits < n (offset m from the top)."""
    angle = 2.0 * math.acos(math.sqrt(m / n))
    top = n - 1
    if m == 1:
        tgt = n - 2
        return (
            pauli_x(top, controls_on=(tgt,)),
            rotation_y(angle, tgt, controls_on=(top,)),
            pauli_x(top, controls_on=(tgt,)),
        )
    split, shift = n - m - 1, n - m
    return (
        pauli_x(top, controls_on=(split,)),
        rotation_y(angle, split, controls_on=(top, shift)),
        pauli_x(top, controls_on=(split,)),
    )


def _dicke_scs(n, k):
    gates = []
    for m in range(1, k + 1):
        gates.extend(_dicke_block(n, m))
    return gates


def _dicke_unitary(n, k):
    if k <= 0 or (n == 1 and k == 1):
        return []
    if n == k:
        return _dicke_scs(k, k - 1) + _dicke_unitary(k - 1, k - 1)
    return _dicke_scs(n, k) + _dicke_unitary(n - 1, k)


def build_dicke_prep(length, num_down):
    """Gates taking |0..0> to the uniform weight-``num_down`` state.

    Seeds the top ``num_down`` system qubits and runs the recursive
    split-and-cyclic-shift cascade over shrinking prefixes.
    """
    if not 0 <= num_down <= length:
        raise ValidationError(
            f"cannot place {num_down} down spins on {length} sites"
        )
    gates = [pauli_x(q) for q in range(length - num_down, length)]
    gates.extend(_dicke_unitary(length, num_down))
    return tuple(gates)


# ---------------------------------------------------------------------------
# segment 2: label superposition over signed arrangements


def _one_hot(value, width):
    return tuple(1 if b == value else 0 for b in range(width))


def build_label_prep(solution, params, with_phases=True, layout=None):
    """Gates creating the uniform signed-arrangement label state.

    Subregister ``j`` starts holding value ``j`` (momentum ``k_j``); a
    Hadamard on each reflection qubit splits every momentum into its
    +/- branches; an insertion network of two-subregister rotations then
    spreads the values over all ``M!`` orders with uniform magnitude
    ``(2^M M!)^{-1/2}``.

    With ``with_phases`` the reflection branches and each insertion swap
    also acquire the phase of the corresponding closed-form coefficient
    ratio (a reflection factor, and a two-momentum scattering factor per
    transposition, each with the fermionic sign), so the final branch
    phases equal ``sign * A(arrangement) / A(identity)``.  The phase-free
    variant is the one whose inverse disentangles the labels at the end.
    """
    roots = _roots_of(solution)
    m = params.num_down
    if len(roots) != m:
        raise ValidationError(f"expected {m} roots, got {len(roots)}")
    if layout is None:
        layout = make_layout(params.length, m)
    gates = []
    for j in range(m):
        gates.append(pauli_x(layout.hot(j, j)))
    for j in range(m):
        gates.append(hadamard(layout.reflection(j)))
    if with_phases:
        two_l_plus_2 = 2.0 * params.length + 2.0
        for j in range(m):
            angle = (
                roots[j] * two_l_plus_2
                + phi(roots[j], params.h_prime, params.delta)
                + sum(
                    theta(-roots[j], roots[l], params.delta)
                    + theta(roots[l], roots[j], params.delta)
                    for l in range(j + 1, m)
                )
                + math.pi
            )
            gates.append(phase_shift(angle, layout.reflection(j)))
    for s in range(1, m):
        for d in range(s):
            a, b = s - d - 1, s - d
            angle = math.acos(1.0 / math.sqrt(s + 1 - d))
            targets = layout.subregister_qubits(a) + layout.subregister_qubits(b)
            for v in range(s):
                for r_s in (0, 1):
                    for r_v in (0, 1):
                        u_bits = _one_hot(v, m) + (r_v,) + _one_hot(s, m) + (r_s,)
                        v_bits = _one_hot(s, m) + (r_s,) + _one_hot(v, m) + (r_v,)
                        gates.append(
                            subspace_rotation(angle, targets, u_bits, v_bits)
                        )
                        if with_phases:
                            ks = -roots[s] if r_s else roots[s]
                            kv = -roots[v] if r_v else roots[v]
                            on = [layout.hot(b, v)]
                            off = []
                            (on if r_s else off).append(layout.reflection(a))
                            (on if r_v else off).append(layout.reflection(b))
                            gates.append(
                                phase_shift(
                                    theta(ks, kv, params.delta) + math.pi,
                                    layout.hot(a, s),
                                    controls_on=tuple(on),
                                    controls_off=tuple(off),
                                )
                            )
    return tuple(gates)


# ---------------------------------------------------------------------------
# segment 3: plane-wave phases metered by faucets


def build_faucet_stage(solution, params, layout=None):
    """Site sweep writing ``e^{i (sign) k (x+1)}`` per labeled momentum.

    All faucets open first.  At each site, every open subregister
    receives one increment of its signed momentum phase; then, if the
    site carries a down spin, the lowest open faucet shuts.  The shut-off
    is a single multi-controlled flip per faucet whose controls read the
    site qubit, all lower faucets closed, and the next faucet still open
    — conditions met only by the lowest open faucet, so each occupied
    site closes exactly one.  After the last site the faucet block is
    identically zero again on every weight-M branch.
    """
    roots = _roots_of(solution)
    m = params.num_down
    if len(roots) != m:
        raise ValidationError(f"expected {m} roots, got {len(roots)}")
    if layout is None:
        layout = make_layout(params.length, m)
    if m == 0:
        return ()
    gates = [pauli_x(layout.faucet(j)) for j in range(m)]
    for site in range(params.length):
        for j in range(m):
            for value in range(m):
                gates.append(
                    phase_shift(
                        roots[value],
                        layout.hot(j, value),
                        controls_on=(layout.faucet(j),),
                        controls_off=(layout.reflection(j),),
                    )
                )
                gates.append(
                    phase_shift(
                        -roots[value],
                        layout.hot(j, value),
                        controls_on=(layout.faucet(j), layout.reflection(j)),
                    )
                )
        for j in range(m - 1, -1, -1):
            on = [site]
            if j < m - 1:
                on.append(layout.faucet(j + 1))
            off = [layout.faucet(l) for l in range(j)]
            gates.append(
                pauli_x(
                    layout.faucet(j),
                    controls_on=tuple(on),
                    controls_off=tuple(off),
                )
            )
    return tuple(gates)


# ---------------------------------------------------------------------------
# assembly and execution


def assemble_full(solution, params):
    """Complete preparation circuit in barrier-separated segments."""
    layout = make_layout(params.length, params.num_down)
    label = build_label_prep(solution, params, with_phases=True, layout=layout)
    plain = build_label_prep(solution, params, with_phases=False, layout=layout)
    uncompute = tuple(g.inverse() for g in reversed(plain))
    return Circuit(
        layout=layout,
        segments=(
            ("dicke", build_dicke_prep(params.length, params.num_down)),
            ("label", label),
            ("faucet", build_faucet_stage(solution, params, layout=layout)),
            ("uncompute", uncompute),
        ),
    )


def _max_amplitude_outside(state, zero_qubits):
    """Largest |amplitude| on basis states where any listed qubit is 1."""
    from .statevector import _free_index_array, _num_qubits

    n = _num_qubits(state)
    mags = np.abs(state)
    mags[_free_index_array(n, {q: 0 for q in zero_qubits})] = 0.0
    return float(mags.max())


def run_and_project(circuit, solution, params):
    """Simulate the circuit, post-select the label outcome, and grade it.

    Projects every label qubit onto 0 (the faucet block is verified to
    be there already), slices out the system block, and reports the
    success probability together with the eigenstate residual and the
    overlap against the closed-form reference state.  Returns
    ``(report, system_state)`` with the state normalized on ``2^L``
    amplitudes.
    """
    from .hamiltonian import build_hamiltonian

    if not isinstance(solution, BetheSolution):
        raise ValidationError("run_and_project needs a solved BetheSolution")
    layout = circuit.layout
    if layout.length != params.length or layout.num_down != params.num_down:
        raise ValidationError("circuit layout does not match the parameters")
    started = time.perf_counter()
    state = init_register(layout.num_qubits)
    apply_circuit(state, circuit.gates)
    if layout.num_down:
        leak = _max_amplitude_outside(state, layout.faucet_qubits)
        if leak > 1e-14:
            raise ValidationError(
                f"faucet block failed to disentangle (amplitude {leak:.3e})"
            )
        state, probability = project_subregister(
            state, layout.label_qubits, (0,) * len(layout.label_qubits)
        )
    else:
        probability = 1.0
    system_state = np.array(state[: 1 << layout.length])
    norm = np.linalg.norm(system_state)
    system_state = system_state / norm
    energy = solution.energy
    hamiltonian = build_hamiltonian(params)
    residual = float(
        np.linalg.norm(hamiltonian @ system_state - energy * system_state)
    )
    oracle = direct_bethe_state(solution, params).to_statevector(params.length)
    fidelity = abs(overlap(oracle, system_state))
    elapsed = time.perf_counter() - started
    return (
        RunReport(
            quantum_numbers=solution.quantum_numbers.values,
            roots=solution.roots,
            energy=energy,
            success_probability=float(probability),
            eigen_residual=residual,
            oracle_fidelity=float(fidelity),
            wall_time=elapsed,
        ),
        system_state,
    )
