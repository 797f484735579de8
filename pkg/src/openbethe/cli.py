"""Command-line front end.

Subcommands::

    solve        solve the momentum equations for one label set
    prepare      simulate the full preparation and grade the output state
    sweep        run every label set at fixed L, M; write delimited rows
    export-qasm  serialize the preparation circuit to OPENQASM 2.0
    selftest     quick built-in consistency checks

Exit codes: 0 success, 1 invalid input, 2 numerical failure
(non-convergence, degeneracies, vanishing states or outcomes),
3 capacity overrun.  Failures additionally emit one JSON line on
stderr with the error class and message.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bethe import ModelParams, solve_bethe_roots, theta
from .circuit import assemble_full, run_and_project
from .errors import (
    CapacityError,
    ConvergenceError,
    OpenBetheError,
    ValidationError,
)
from .qasm import export_qasm
from .statevector import dump_state
from .sweep import sweep_spectrum, write_csv
from .wavefunction import classical_success_probability

__all__ = ["cli_main", "main"]


class _Parser(argparse.ArgumentParser):
    """Argument parser that reports problems as ValidationError (exit 1)."""

    def error(self, message):
        raise ValidationError(message)


def _add_model_flags(sub, with_labels):
    sub.add_argument("--L", type=int, required=True, help="number of chain sites")
    sub.add_argument("--M", type=int, required=True, help="number of down spins")
    sub.add_argument("--delta", type=float, default=0.5, help="anisotropy")
    sub.add_argument("--h", type=float, default=0.1, help="left boundary field")
    sub.add_argument("--hprime", type=float, default=0.3, help="right boundary field")
    sub.add_argument("--tol", type=float, default=1e-12, help="solver tolerance")
    sub.add_argument("--max-iter", type=int, default=500, help="solver sweep limit")
    if with_labels:
        sub.add_argument(
            "--J",
            required=True,
            help="comma-separated quantum numbers, e.g. --J 1,3",
        )


def _build_parser():
    parser = _Parser(prog="openbethe", description=__doc__.splitlines()[0])
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    solve = commands.add_parser("solve", help="solve the momentum equations")
    _add_model_flags(solve, with_labels=True)
    prepare = commands.add_parser("prepare", help="simulate the preparation")
    _add_model_flags(prepare, with_labels=True)
    prepare.add_argument("--out", help="write the projected state (binary) here")
    sweep = commands.add_parser("sweep", help="tabulate every label set")
    _add_model_flags(sweep, with_labels=False)
    sweep.add_argument("--out", help="write delimited rows here (stdout if absent)")
    sweep.add_argument(
        "--no-figures",
        action="store_true",
        help="skip rendering the companion figure next to --out",
    )
    qasm = commands.add_parser("export-qasm", help="serialize the circuit")
    _add_model_flags(qasm, with_labels=True)
    qasm.add_argument("--out", help="write the program here (stdout if absent)")
    commands.add_parser("selftest", help="run built-in consistency checks")
    return parser


def _model_params(ns):
    return ModelParams(
        delta=ns.delta,
        h=ns.h,
        h_prime=ns.hprime,
        length=ns.L,
        num_down=ns.M,
    )


def _quantum_numbers(ns):
    try:
        values = tuple(int(tok) for tok in ns.J.split(",") if tok.strip() != "")
    except ValueError:
        raise ValidationError(f"--J must be comma-separated integers, got {ns.J!r}")
    if not values and ns.M:
        raise ValidationError("--J must not be empty")
    return values


def _solve(ns):
    return solve_bethe_roots(
        _quantum_numbers(ns), _model_params(ns), tol=ns.tol, max_iter=ns.max_iter
    )


def _print_solution(solution, out):
    print("quantum_numbers =", ",".join(str(j) for j in solution.quantum_numbers.values), file=out)
    print("roots =", ", ".join("%.17g" % k for k in solution.roots), file=out)
    print("energy = %.17g" % solution.energy, file=out)
    print("iterations =", solution.iterations, file=out)
    print("residual = %.3e" % solution.residual, file=out)


def _cmd_solve(ns, out):
    _print_solution(_solve(ns), out)
    return 0


def _cmd_prepare(ns, out):
    params = _model_params(ns)
    solution = _solve(ns)
    circuit = assemble_full(solution, params)
    report, state = run_and_project(circuit, solution, params)
    _print_solution(solution, out)
    print("qubits =", circuit.layout.num_qubits, file=out)
    print("gates =", circuit.num_gates, file=out)
    print("success_probability = %.17g" % report.success_probability, file=out)
    print("eigen_residual = %.3e" % report.eigen_residual, file=out)
    print("oracle_fidelity = %.17g" % report.oracle_fidelity, file=out)
    print("wall_time = %.3f s" % report.wall_time, file=out)
    if ns.out:
        dump_state(state, ns.out)
        print("state written to", ns.out, file=out)
    return 0


def _figure_path(csv_path):
    stem = csv_path[:-4] if csv_path.lower().endswith(".csv") else csv_path
    return stem + ".png"


def _render_figure(table, path):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    energies = [r.energy for r in table.rows]
    probs = [r.success_probability for r in table.rows]
    ax.plot(energies, probs, "o-", color="tab:blue", markersize=6)
    for r in table.rows:
        ax.annotate(
            ",".join(str(j) for j in r.quantum_numbers),
            (r.energy, r.success_probability),
            textcoords="offset points",
            xytext=(4, 4),
            fontsize=7,
        )
    ax.set_xlabel("energy")
    ax.set_ylabel("success probability")
    ax.set_title(f"L = {table.length}, M = {table.num_down}")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _cmd_sweep(ns, out):
    params = _model_params(ns)
    table = sweep_spectrum(params, tol=ns.tol, max_iter=ns.max_iter)
    if ns.out:
        write_csv(table, ns.out)
        print("table written to", ns.out, file=out)
        if not ns.no_figures:
            figure = _figure_path(ns.out)
            _render_figure(table, figure)
            print("figure written to", figure, file=out)
    else:
        out.write(write_csv(table, None))
    for subset, reason in table.skipped:
        print(
            "skipped J=%s (%s)" % (",".join(str(j) for j in subset), reason),
            file=sys.stderr,
        )
    return 0


def _cmd_export_qasm(ns, out):
    params = _model_params(ns)
    solution = _solve(ns)
    circuit = assemble_full(solution, params)
    text = export_qasm(circuit)
    if ns.out:
        with open(ns.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print("program written to", ns.out, file=out)
    else:
        out.write(text)
    return 0


def _cmd_selftest(ns, out):
    checks = []
    params = ModelParams(delta=0.5, h=0.1, h_prime=0.3, length=4, num_down=2)
    solution = solve_bethe_roots((1, 3), params)
    reference = (0.872565564051321, 1.8281634727285403)
    checks.append(
        (
            "two-momentum solve at the standard couplings",
            max(abs(a - b) for a, b in zip(solution.roots, reference)) < 1e-9,
        )
    )
    anti = abs(theta(0.7, 1.9, 0.5) + theta(1.9, 0.7, 0.5))
    checks.append(("scattering phase antisymmetry", anti < 1e-14))
    p1 = ModelParams(delta=0.5, h=0.1, h_prime=0.3, length=4, num_down=1)
    s1 = solve_bethe_roots((2,), p1)
    report, _ = run_and_project(assemble_full(s1, p1), s1, p1)
    checks.append(("circuit eigenstate residual", report.eigen_residual < 1e-8))
    checks.append(("circuit oracle overlap", report.oracle_fidelity > 1 - 1e-10))
    checks.append(
        (
            "measured vs closed-form success probability",
            abs(
                report.success_probability
                - classical_success_probability(s1, p1)
            )
            < 1e-10,
        )
    )
    failures = 0
    for name, ok in checks:
        print(("ok: " if ok else "FAIL: ") + name, file=out)
        failures += 0 if ok else 1
    if failures:
        raise ConvergenceError(f"{failures} selftest check(s) failed")
    print(f"all {len(checks)} checks passed", file=out)
    return 0


_COMMANDS = {
    "solve": _cmd_solve,
    "prepare": _cmd_prepare,
    "sweep": _cmd_sweep,
    "export-qasm": _cmd_export_qasm,
    "selftest": _cmd_selftest,
}


def _error_payload(exc, code):
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    if isinstance(exc, ConvergenceError):
        if exc.last_roots is not None:
            payload["last_roots"] = list(exc.last_roots)
        if exc.iterations is not None:
            payload["iterations"] = exc.iterations
    return payload


def cli_main(argv=None, out=None):
    """Run one command; returns the process exit code."""
    out = sys.stdout if out is None else out
    parser = _build_parser()
    try:
        ns = parser.parse_args(argv)
        if ns.command is None:
            parser.print_help(out)
            return 0
        return _COMMANDS[ns.command](ns, out)
    except OpenBetheError as exc:
        if isinstance(exc, ValidationError):
            code = 1
        elif isinstance(exc, CapacityError):
            code = 3
        else:
            code = 2
        print(json.dumps(_error_payload(exc, code)), file=sys.stderr)
        return code


def main():
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
