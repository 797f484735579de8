"""Spectrum sweeps: prepare every momentum sector and tabulate the results.

A sweep enumerates all quantum-number subsets of {1, ..., L} of size M
in lexicographic order, solves each, simulates the preparation circuit,
and collects one row per converged subset with the measured success
probability and verification scores.  Subsets whose root search fails
(unreachable levels, collisions) are recorded with the failure reason
rather than aborting the sweep; an empty result table is an error.

The delimited output is deterministic byte for byte: rows are sorted by
(energy, quantum numbers) and all floats are printed with %.17g, which
round-trips IEEE doubles exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .bethe import solve_bethe_roots
from .circuit import assemble_full, run_and_project
from .errors import (
    ConvergenceError,
    DegenerateSolutionError,
    NullStateError,
    SingularPhaseError,
)

__all__ = ["SweepRow", "SweepTable", "sweep_spectrum", "write_csv"]

CSV_HEADER = (
    "J_set,k_roots,energy,success_prob,eigen_residual,oracle_fidelity,iterations"
)

_SKIPPABLE = (
    ConvergenceError,
    DegenerateSolutionError,
    SingularPhaseError,
    NullStateError,
)


@dataclass(frozen=True)
class SweepRow:
    quantum_numbers: tuple
    roots: tuple
    energy: float
    success_probability: float
    eigen_residual: float
    oracle_fidelity: float
    iterations: int


@dataclass(frozen=True)
class SweepTable:
    """Converged rows (sorted by energy, then labels) plus skip records."""

    length: int
    num_down: int
    rows: tuple
    skipped: tuple  # ((quantum_numbers, reason), ...)

    def min_success_probability(self):
        return min(r.success_probability for r in self.rows)


def sweep_spectrum(params, tol=1e-12, max_iter=500):
    """Solve and simulate every size-M subset of {1, ..., L}.

    Returns a ``SweepTable``; raises ``ConvergenceError`` when not a
    single subset produced a state.
    """
    rows = []
    skipped = []
    for subset in combinations(range(1, params.length + 1), params.num_down):
        try:
            solution = solve_bethe_roots(subset, params, tol=tol, max_iter=max_iter)
            circuit = assemble_full(solution, params)
            report, _state = run_and_project(circuit, solution, params)
        except _SKIPPABLE as exc:
            skipped.append((subset, f"{type(exc).__name__}: {exc}"))
            continue
        rows.append(
            SweepRow(
                quantum_numbers=subset,
                roots=solution.roots,
                energy=report.energy,
                success_probability=report.success_probability,
                eigen_residual=report.eigen_residual,
                oracle_fidelity=report.oracle_fidelity,
                iterations=solution.iterations,
            )
        )
    if not rows:
        raise ConvergenceError(
            f"no subset of size {params.num_down} converged for L={params.length}"
        )
    rows.sort(key=lambda r: (r.energy, r.quantum_numbers))
    return SweepTable(
        length=params.length,
        num_down=params.num_down,
        rows=tuple(rows),
        skipped=tuple(skipped),
    )


def _g17(x):
    return "%.17g" % float(x)


def write_csv(table, destination):
    """Write the sweep rows as delimited text (LF line endings, UTF-8).

    Momentum lists and quantum-number lists are semicolon-joined inside
    their comma-separated field.  Accepts a path or a text stream;
    returns the rendered text.
    """
    lines = [CSV_HEADER]
    for r in table.rows:
        lines.append(
            ",".join(
                [
                    ";".join(str(j) for j in r.quantum_numbers),
                    ";".join(_g17(k) for k in r.roots),
                    _g17(r.energy),
                    _g17(r.success_probability),
                    _g17(r.eigen_residual),
                    _g17(r.oracle_fidelity),
                    str(r.iterations),
                ]
            )
        )
    text = "\n".join(lines) + "\n"
    if destination is not None:
        if hasattr(destination, "write"):
            destination.write(text)
        else:
            with open(destination, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
    return text
