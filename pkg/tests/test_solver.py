"""Momentum solver: frozen roots, label recovery, and failure taxonomy."""

import math
import time

import numpy as np
import pytest

from openbethe import (
    BetheSolution,
    ConvergenceError,
    DegenerateSolutionError,
    ModelParams,
    QuantumNumbers,
    ValidationError,
    counting_function,
    energy,
    recover_quantum_numbers,
    solve_bethe_roots,
)

PARAMS_4_2 = ModelParams(delta=0.5, h=0.1, h_prime=0.3, length=4, num_down=2)

# Converged to 60-digit precision with an independent extended-precision
# Newton iteration, then rounded to the nearest double.
TRUE_ROOTS_4_2 = (0.872565564051321, 1.8281634727285403)
TRUE_ENERGY_4_2 = 0.2733436152639963
# Independent high-resolution bisection of the single-momentum equation.
TRUE_ROOT_6_1_J1 = 0.40059731111547775
TRUE_ENERGY_6_1_J1 = -2.291656451607914


def test_two_momentum_frozen_roots():
    solution = solve_bethe_roots((1, 3), PARAMS_4_2)
    assert isinstance(solution, BetheSolution)
    assert abs(solution.roots[0] - TRUE_ROOTS_4_2[0]) < 1e-12
    assert abs(solution.roots[1] - TRUE_ROOTS_4_2[1]) < 1e-12
    assert abs(solution.energy - TRUE_ENERGY_4_2) < 1e-12
    assert solution.residual < 1e-12


def test_single_momentum_frozen_root():
    params = ModelParams(delta=0.5, h=0.1, h_prime=0.3, length=6, num_down=1)
    solution = solve_bethe_roots((1,), params)
    assert abs(solution.roots[0] - TRUE_ROOT_6_1_J1) < 1e-11
    assert abs(solution.energy - TRUE_ENERGY_6_1_J1) < 1e-11


def test_solver_is_fast():
    started = time.perf_counter()
    solve_bethe_roots((1, 3), PARAMS_4_2)
    assert time.perf_counter() - started < 1.0


def test_roots_satisfy_counting_equation():
    solution = solve_bethe_roots((1, 3), PARAMS_4_2)
    z = counting_function(np.array(solution.roots), solution.roots, PARAMS_4_2)
    levels = 2.0 * math.pi * np.array([1.0, 3.0])
    assert np.max(np.abs(z - levels)) < 1e-10


def test_counting_function_is_odd_and_anchored():
    solution = solve_bethe_roots((1, 3), PARAMS_4_2)
    roots = solution.roots
    assert counting_function(0.0, roots, PARAMS_4_2) == 0.0
    for k in (0.3, 1.1, 2.5):
        plus = counting_function(k, roots, PARAMS_4_2)
        minus = counting_function(-k, roots, PARAMS_4_2)
        assert abs(plus + minus) < 1e-12


def test_counting_function_monotone_on_grid():
    solution = solve_bethe_roots((1, 3), PARAMS_4_2)
    grid = np.linspace(1e-6, math.pi - 1e-6, 401)
    z = counting_function(grid, solution.roots, PARAMS_4_2)
    assert np.all(np.diff(z) > 0)


def test_label_recovery_round_trip():
    solution = solve_bethe_roots((1, 3), PARAMS_4_2)
    recovered = recover_quantum_numbers(solution.roots, PARAMS_4_2)
    assert recovered.values == (1, 3)


def test_roots_sorted_regardless_of_label_order():
    a = solve_bethe_roots((3, 1), PARAMS_4_2)
    b = solve_bethe_roots((1, 3), PARAMS_4_2)
    assert a.roots == b.roots
    assert a.quantum_numbers.values == (1, 3)


def test_energy_closed_form():
    params = ModelParams(delta=0.7, h=-0.2, h_prime=0.4, length=5, num_down=2)
    roots = (0.6, 1.9)
    expected = -0.5 * (4 * 0.7 - 0.2 + 0.4) + 2 * (
        (0.7 - math.cos(0.6)) + (0.7 - math.cos(1.9))
    )
    assert abs(energy(roots, params) - expected) < 1e-14


def test_energy_even_in_each_momentum():
    params = ModelParams(delta=0.5, h=0.1, h_prime=0.3, length=6, num_down=2)
    assert energy((-0.5, 1.2), params) == energy((0.5, 1.2), params)
    assert energy((0.5, -1.2), params) == energy((0.5, 1.2), params)


def test_empty_sector_solution():
    params = ModelParams(delta=0.5, h=0.1, h_prime=0.3, length=4, num_down=0)
    solution = solve_bethe_roots((), params)
    assert solution.roots == ()
    assert abs(solution.energy - (-0.5 * (3 * 0.5 + 0.1 + 0.3))) < 1e-14


def test_unreachable_level_raises_with_last_iterate():
    with pytest.raises(ConvergenceError) as excinfo:
        solve_bethe_roots((2, 3), PARAMS_4_2)
    assert excinfo.value.last_roots is not None
    assert len(excinfo.value.last_roots) == 2


def test_duplicate_labels_rejected():
    with pytest.raises(ValidationError):
        solve_bethe_roots((2, 2), PARAMS_4_2)


def test_out_of_range_labels_rejected():
    with pytest.raises(ValidationError):
        solve_bethe_roots((0, 3), PARAMS_4_2)
    with pytest.raises(ValidationError):
        solve_bethe_roots((1, 5), PARAMS_4_2)


def test_wrong_label_count_rejected():
    with pytest.raises(ValidationError):
        solve_bethe_roots((1,), PARAMS_4_2)


def test_quantum_numbers_type_validation():
    with pytest.raises(ValidationError):
        QuantumNumbers((1, 1))
    qn = QuantumNumbers((3, 1))
    assert qn.values == (3, 1)


def test_model_params_validation():
    with pytest.raises(ValidationError):
        ModelParams(delta=0.5, h=0.1, h_prime=0.3, length=4, num_down=3)
    with pytest.raises(ValidationError):
        ModelParams(delta=0.5, h=0.1, h_prime=0.3, length=1, num_down=0)
    with pytest.raises(ValidationError):
        ModelParams(delta=float("nan"), h=0.1, h_prime=0.3, length=4, num_down=1)


def test_bad_tolerance_rejected():
    with pytest.raises(ValidationError):
        solve_bethe_roots((1, 3), PARAMS_4_2, tol=0.0)


def test_counting_rejects_wrong_root_count():
    with pytest.raises(ValidationError):
        counting_function(0.5, (0.4,), PARAMS_4_2)


def test_all_single_momentum_sectors_converge():
    """Every label in {1, ..., L-1} gives a real momentum at these couplings."""
    for length in (4, 5, 6):
        params = ModelParams(
            delta=0.5, h=0.1, h_prime=0.3, length=length, num_down=1
        )
        for label in range(1, length):
            solution = solve_bethe_roots((label,), params)
            assert 0.0 < solution.roots[0] < math.pi
            assert solution.residual < 1e-10
