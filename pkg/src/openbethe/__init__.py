"""Exact eigenstate preparation for the open anisotropic spin chain.

The package solves the momentum (Bethe) equations of the spin-1/2 chain
with anisotropic nearest-neighbor coupling and diagonal boundary fields,
builds the closed-form eigenstates as classical references, and
simulates a gate-level circuit that prepares the same states
probabilistically, verifying the outcome against the Hamiltonian.

Typical use::

    from openbethe import ModelParams, solve_bethe_roots, assemble_full, run_and_project

    params = ModelParams(delta=0.5, h=0.1, h_prime=0.3, length=4, num_down=2)
    solution = solve_bethe_roots((1, 3), params)
    report, state = run_and_project(assemble_full(solution, params), solution, params)
"""

from .bethe import (
    BetheSolution,
    ModelParams,
    QuantumNumbers,
    counting_function,
    energy,
    phi,
    recover_quantum_numbers,
    solve_bethe_roots,
    theta,
)
from .cli import cli_main
from .circuit import (
    Circuit,
    QubitLayout,
    RunReport,
    assemble_full,
    build_dicke_prep,
    build_faucet_stage,
    build_label_prep,
    make_layout,
    run_and_project,
)
from .errors import (
    CapacityError,
    ConvergenceError,
    DegenerateSolutionError,
    ImpossibleOutcomeError,
    NullStateError,
    OpenBetheError,
    SingularPhaseError,
    ValidationError,
)
from .hamiltonian import (
    EigenstateCheck,
    build_hamiltonian,
    dense_spectrum,
    verify_eigenstate,
)
from .qasm import export_qasm
from .statevector import (
    Gate,
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
from .sweep import SweepRow, SweepTable, sweep_spectrum, write_csv
from .wavefunction import (
    OracleState,
    SignedRootSequence,
    SpinConfiguration,
    amplitude_A,
    classical_success_probability,
    direct_bethe_state,
    signed_arrangements,
    wavefunction_f,
)

__version__ = "0.1.0"

__all__ = [
    "BetheSolution",
    "ModelParams",
    "QuantumNumbers",
    "counting_function",
    "energy",
    "phi",
    "recover_quantum_numbers",
    "solve_bethe_roots",
    "theta",
    "cli_main",
    "Circuit",
    "QubitLayout",
    "RunReport",
    "assemble_full",
    "build_dicke_prep",
    "build_faucet_stage",
    "build_label_prep",
    "make_layout",
    "run_and_project",
    "CapacityError",
    "ConvergenceError",
    "DegenerateSolutionError",
    "ImpossibleOutcomeError",
    "NullStateError",
    "OpenBetheError",
    "SingularPhaseError",
    "ValidationError",
    "EigenstateCheck",
    "build_hamiltonian",
    "dense_spectrum",
    "verify_eigenstate",
    "export_qasm",
    "Gate",
    "apply_circuit",
    "apply_gate",
    "dump_state",
    "hadamard",
    "init_register",
    "load_state",
    "overlap",
    "pauli_x",
    "phase_shift",
    "project_subregister",
    "rotation_y",
    "subspace_rotation",
    "swap",
    "SweepRow",
    "SweepTable",
    "sweep_spectrum",
    "write_csv",
    "OracleState",
    "SignedRootSequence",
    "SpinConfiguration",
    "amplitude_A",
    "classical_success_probability",
    "direct_bethe_state",
    "signed_arrangements",
    "wavefunction_f",
    "__version__",
]
