"""Position-phase stage: per-branch plane-wave factors and faucet bookkeeping."""

from itertools import combinations, permutations, product

import numpy as np

from openbethe import (
    ModelParams,
    apply_circuit,
    build_faucet_stage,
    init_register,
    make_layout,
    solve_bethe_roots,
)


def _stage_setup(length, num_down, labels):
    params = ModelParams(
        delta=0.5, h=0.1, h_prime=0.3, length=length, num_down=num_down
    )
    solution = solve_bethe_roots(labels, params)
    layout = make_layout(length, num_down)
    return params, solution, layout, build_faucet_stage(solution, params)


def test_branch_phases_and_no_leakage():
    """On each (sites, ordering, reflections) basis branch the stage applies
    exactly exp(i * sum_j eps_j k_{perm(j)} (x_j + 1)) and nothing else."""
    length, num_down = 4, 2
    _, solution, layout, stage = _stage_setup(length, num_down, (1, 3))
    worst = 0.0
    for sites in combinations(range(length), num_down):
        for perm in permutations(range(num_down)):
            for signs in product((0, 1), repeat=num_down):
                idx = 0
                for x in sites:
                    idx |= 1 << x
                for j in range(num_down):
                    idx |= 1 << layout.hot(j, perm[j])
                    if signs[j]:
                        idx |= 1 << layout.reflection(j)
                state = np.zeros(1 << layout.num_qubits, dtype=np.complex128)
                state[idx] = 1.0
                apply_circuit(state, stage)
                expected = np.exp(
                    1j
                    * sum(
                        (-1.0 if signs[j] else 1.0)
                        * solution.roots[perm[j]]
                        * (sites[j] + 1)
                        for j in range(num_down)
                    )
                )
                worst = max(worst, abs(state[idx] - expected))
                state[idx] = 0.0
                worst = max(worst, float(np.max(np.abs(state))))
    assert worst < 1e-12


def test_faucets_return_to_zero_for_three_down_spins():
    """The marker qubits must uncompute themselves on every branch (three
    markers exercise the multi-step shutoff chain)."""
    length, num_down = 6, 3
    _, _, layout, stage = _stage_setup(length, num_down, (1, 2, 3))
    rng = np.random.default_rng(7)
    picks = rng.choice(
        len(list(combinations(range(length), num_down))), size=6, replace=False
    )
    all_sites = list(combinations(range(length), num_down))
    for pick in picks:
        sites = all_sites[pick]
        for perm in [tuple(rng.permutation(num_down)) for _ in range(2)]:
            signs = tuple(int(b) for b in rng.integers(0, 2, size=num_down))
            idx = 0
            for x in sites:
                idx |= 1 << x
            for j in range(num_down):
                idx |= 1 << layout.hot(j, perm[j])
                if signs[j]:
                    idx |= 1 << layout.reflection(j)
            state = np.zeros(1 << layout.num_qubits, dtype=np.complex128)
            state[idx] = 1.0
            apply_circuit(state, stage)
            # support stays on the original index -> faucets ended where they
            # started (off) and no marker residue is left behind
            amp = state[idx]
            assert abs(abs(amp) - 1.0) < 1e-12
            state[idx] = 0.0
            assert float(np.max(np.abs(state))) < 1e-12


def test_stage_is_empty_for_zero_down_spins():
    params = ModelParams(delta=0.5, h=0.1, h_prime=0.3, length=4, num_down=0)
    solution = solve_bethe_roots((), params)
    assert build_faucet_stage(solution, params) == ()
