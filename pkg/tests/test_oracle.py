"""Dense state-vector oracle checks at small qubit counts."""

import math

import numpy as np
import pytest

from ghzsampling import GhzSpec, MeasurementPlan, build_state, expect_pauli_string, oracle_A
from ghzsampling.oracle import sigma_theta


def test_build_state_amplitudes():
    state = build_state(GhzSpec(2, 0.0))
    amps = state.amplitudes
    assert amps[0] == pytest.approx(1 / math.sqrt(2))
    assert amps[3] == pytest.approx(1 / math.sqrt(2))
    assert amps[1] == amps[2] == 0.0
    state = build_state(GhzSpec(2, math.pi))
    assert state.amplitudes[0] == pytest.approx(-1 / math.sqrt(2))


def test_build_state_norm_and_cap():
    for M in (1, 5, 10):
        assert build_state(GhzSpec(M, 0.3)).norm() == pytest.approx(1.0)
    with pytest.raises(MemoryError):
        build_state(GhzSpec(20, 0.0))
    # the cap is adjustable for callers who accept the memory cost
    assert build_state(GhzSpec(15, 0.0), max_qubits=15).M == 15


def test_sigma_theta_interpolates():
    np.testing.assert_allclose(sigma_theta(0.0), [[0, 1], [1, 0]], atol=1e-15)
    np.testing.assert_allclose(sigma_theta(math.pi / 2), [[0, 1j], [-1j, 0]], atol=1e-15)


def test_pauli_string_values():
    state = build_state(GhzSpec(2, 0.0))
    assert expect_pauli_string(state, "XX") == pytest.approx(1.0)
    assert expect_pauli_string(state, "ZZ") == pytest.approx(1.0)
    assert expect_pauli_string(state, "ZI") == pytest.approx(0.0)
    assert expect_pauli_string(state, "YY") == pytest.approx(-1.0)
    state = build_state(GhzSpec(2, math.pi))
    assert expect_pauli_string(state, "XX") == pytest.approx(-1.0)
    assert expect_pauli_string(state, "YY") == pytest.approx(1.0)


def test_pauli_string_phase_dependence():
    # <XX...X> on an even register equals cos(phi) up to the branch sign
    for phi in (0.0, 0.4, 1.3, 2.9):
        state = build_state(GhzSpec(4, phi))
        assert expect_pauli_string(state, "XXXX") == pytest.approx(math.cos(phi))
        assert expect_pauli_string(state, "ZZZZ") == pytest.approx(1.0)


def test_pauli_string_angles_match_letters():
    state = build_state(GhzSpec(3, 0.8))
    a = expect_pauli_string(state, [0.0, math.pi / 2, "Z"])
    b = expect_pauli_string(state, ["X", "Y", "Z"])
    assert a == pytest.approx(b)


def test_pauli_string_hermitian_strings_are_real():
    rng = np.random.default_rng(11)
    state = build_state(GhzSpec(5, 1.9))
    letters = np.array(list("IXYZ"))
    for _ in range(20):
        string = "".join(rng.choice(letters, 5))
        val = expect_pauli_string(state, string)
        assert abs(val.imag) < 1e-12


def test_pauli_string_validation():
    state = build_state(GhzSpec(2, 0.0))
    with pytest.raises(ValueError):
        expect_pauli_string(state, "X")
    with pytest.raises(ValueError):
        expect_pauli_string(state, "XQ")


def test_oracle_A_mermin():
    for M in (1, 3, 5, 7, 9):
        spec = GhzSpec(M, math.pi / 2)
        plan = MeasurementPlan((0.0,) * M, (1,) * M)
        a = oracle_A(build_state(spec), plan)
        assert abs(a - 1j * 2.0 ** (M - 1)) < 1e-9 * 2.0 ** (M - 1)


def test_oracle_A_ardehali():
    for M in (2, 4, 6, 8):
        spec = GhzSpec(M, math.pi)
        plan = MeasurementPlan((0.0,) * (M - 1) + (math.pi / 4,), (-1,) * M)
        a = oracle_A(build_state(spec), plan)
        assert abs(a.real + a.imag) == pytest.approx(2.0 ** (M - 0.5), rel=1e-12)


def test_oracle_A_mixed_signs_vanish():
    spec = GhzSpec(4, 0.9)
    plan = MeasurementPlan((0.1, 0.7, 0.2, 1.4), (1, 1, -1, 1))
    assert abs(oracle_A(build_state(spec), plan)) < 1e-12


def test_oracle_A_plan_mismatch():
    state = build_state(GhzSpec(3, 0.0))
    with pytest.raises(ValueError):
        oracle_A(state, MeasurementPlan((0.0,) * 2, (1,) * 2))
