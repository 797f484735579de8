"""Uniform fixed-weight superposition builder."""

import math

import numpy as np
import pytest

from openbethe import ValidationError, apply_circuit, build_dicke_prep, init_register


def _weights(length):
    return np.array([bin(x).count("1") for x in range(1 << length)])


@pytest.mark.parametrize("length", range(2, 9))
def test_uniform_weight_sectors(length):
    """Every weight-m basis state carries amplitude 1/sqrt(C(L, m))."""
    for num_down in range(0, min(3, length) + 1):
        state = init_register(length)
        apply_circuit(state, build_dicke_prep(length, num_down))
        target = 1.0 / math.sqrt(math.comb(length, num_down))
        in_sector = _weights(length) == num_down
        assert np.max(np.abs(state[in_sector] - target)) < 1e-12
        assert np.max(np.abs(state[~in_sector])) < 1e-12 if (~in_sector).any() else True


def test_full_and_empty_sectors():
    for length in (2, 4):
        state = init_register(length)
        apply_circuit(state, build_dicke_prep(length, length))
        assert abs(state[(1 << length) - 1] - 1.0) < 1e-14
        state = init_register(length)
        apply_circuit(state, build_dicke_prep(length, 0))
        assert abs(state[0] - 1.0) < 1e-14


def test_reverse_uncomputes():
    state = init_register(5)
    gates = build_dicke_prep(5, 2)
    apply_circuit(state, gates)
    apply_circuit(state, [g.inverse() for g in reversed(gates)])
    assert abs(state[0] - 1.0) < 1e-12
    assert np.max(np.abs(state[1:])) < 1e-12


def test_rejects_overfull_sector():
    with pytest.raises(ValidationError):
        build_dicke_prep(3, 4)
