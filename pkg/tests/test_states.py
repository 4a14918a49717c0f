import math

import numpy as np
import pytest

from conftest import random_hermitian, random_state
from oracles import series_expm

from manyworlds.errors import CapacityError, ShapeError, ValidationError
from manyworlds.states import (
    HermitianOperator,
    StateVector,
    UnitaryOperator,
    apply_unitary,
    evolve,
    evolve_reverse,
    fidelity,
    inner_product,
    tensor_product,
)

INV_SQRT2 = 1.0 / math.sqrt(2.0)


class TestStateVector:
    def test_basis_state(self):
        st = StateVector.basis(2, 3)
        assert st.num_qubits == 2
        np.testing.assert_array_equal(st.amplitudes, [0, 0, 0, 1])

    def test_rejects_non_power_of_two(self):
        with pytest.raises(ShapeError):
            StateVector(np.array([1.0, 0.0, 0.0]))

    def test_rejects_matrix_input(self):
        with pytest.raises(ShapeError):
            StateVector(np.eye(2))

    def test_renormalizes_small_drift(self):
        drift = 1.0 + 3e-10
        st = StateVector(np.array([drift, 0.0]))
        assert abs(np.vdot(st.amplitudes, st.amplitudes).real - 1.0) < 1e-12

    def test_rejects_large_norm_deviation(self):
        with pytest.raises(ValidationError):
            StateVector(np.array([1.0, 1.0]))

    def test_amplitudes_are_immutable(self):
        st = StateVector.basis(1, 0)
        with pytest.raises(ValueError):
            st.amplitudes[0] = 0.0

    def test_to_pairs_round_trip(self):
        st = StateVector(np.array([0.6, 0.8j]))
        assert st.to_pairs() == [[0.6, 0.0], [0.0, 0.8]]


class TestOperators:
    def test_hermitian_rejects_non_hermitian(self):
        with pytest.raises(ValidationError):
            HermitianOperator(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_unitary_rejects_non_unitary(self):
        with pytest.raises(ValidationError):
            UnitaryOperator(np.array([[1.0, 0.0], [0.0, 2.0]]))

    def test_operators_must_be_square(self):
        with pytest.raises(ShapeError):
            HermitianOperator(np.zeros((2, 3)))


class TestTensorProduct:
    def test_basis_times_basis(self):
        out = tensor_product([StateVector.basis(1, 0), StateVector.basis(1, 0)])
        np.testing.assert_array_equal(out.amplitudes, [1, 0, 0, 0])

    def test_single_factor_identity(self):
        st = StateVector(np.array([0.6, 0.8]))
        assert tensor_product([st]) is st

    def test_amplitude_products(self):
        st = StateVector(np.array([0.6, 0.8]))
        out = tensor_product([st, st])
        np.testing.assert_allclose(out.amplitudes, [0.36, 0.48, 0.48, 0.64], atol=1e-15)

    def test_capacity_error(self):
        factors = [StateVector.basis(1, 0)] * 5
        with pytest.raises(CapacityError):
            tensor_product(factors, max_qubits=4)

    def test_empty_list_rejected(self):
        with pytest.raises(ValidationError):
            tensor_product([])


class TestEvolve:
    def test_zero_hamiltonian_is_identity(self, rng):
        st = random_state(rng, 2)
        out = evolve(st, HermitianOperator(np.zeros((4, 4))), t=1.7)
        np.testing.assert_allclose(out.amplitudes, st.amplitudes, atol=1e-14)

    def test_pauli_z_phase(self):
        pauli_z = HermitianOperator(np.diag([1.0, -1.0]))
        out = evolve(StateVector.basis(1, 0), pauli_z, t=math.pi)
        np.testing.assert_allclose(out.amplitudes, [-1.0, 0.0], atol=1e-14)

    def test_matches_series_oracle_two_qubits(self, rng):
        h = random_hermitian(rng, 4)
        st = random_state(rng, 2)
        t = 0.37
        out = evolve(st, h, t)
        expected = series_expm(-1j * h.matrix * t) @ st.amplitudes
        assert np.max(np.abs(out.amplitudes - expected)) < 1e-10

    @pytest.mark.parametrize("dim", [2, 4, 8, 16])
    def test_matches_series_oracle_all_dims(self, rng, dim):
        h = random_hermitian(rng, dim)
        st = random_state(rng, dim.bit_length() - 1)
        t = rng.uniform(-2.0, 2.0)
        out = evolve(st, h, t)
        expected = series_expm(-1j * h.matrix * t) @ st.amplitudes
        assert np.max(np.abs(out.amplitudes - expected)) < 1e-10

    def test_dimension_mismatch(self, rng):
        with pytest.raises(ShapeError):
            evolve(StateVector.basis(1, 0), HermitianOperator(np.zeros((4, 4))), 1.0)

    def test_norm_preserved(self, rng):
        for _ in range(20):
            h = random_hermitian(rng, 8)
            st = random_state(rng, 3)
            out = evolve(st, h, rng.uniform(-5, 5))
            assert abs(np.vdot(out.amplitudes, out.amplitudes).real - 1.0) < 1e-12

    def test_linearity(self, rng):
        # combine normalized states, evolve, and rescale: the raw superposition
        # alpha a + beta b need not be normalized itself
        h = random_hermitian(rng, 4)
        a, b = random_state(rng, 2), random_state(rng, 2)
        alpha, beta = 0.3 - 0.2j, 1.1 + 0.4j
        combo = alpha * a.amplitudes + beta * b.amplitudes
        scale = np.linalg.norm(combo)
        t = 0.83
        lhs = evolve(StateVector(combo / scale), h, t).amplitudes * scale
        rhs = alpha * evolve(a, h, t).amplitudes + beta * evolve(b, h, t).amplitudes
        assert np.max(np.abs(lhs - rhs)) < 1e-10


class TestEvolveReverse:
    def test_round_trip_fidelity(self, rng):
        for _ in range(20):
            h = random_hermitian(rng, 8)
            st = random_state(rng, 3)
            t = rng.uniform(-3.0, 3.0)
            back = evolve_reverse(evolve(st, h, t), h, t)
            assert fidelity(back, st) >= 1.0 - 1e-10

    def test_zero_time_identity(self, rng):
        st = random_state(rng, 2)
        out = evolve_reverse(st, HermitianOperator(np.eye(4)), 0.0)
        np.testing.assert_allclose(out.amplitudes, st.amplitudes, atol=1e-14)

    def test_pauli_z_closed_form(self):
        pauli_z = HermitianOperator(np.diag([1.0, -1.0]))
        st = StateVector(np.array([INV_SQRT2, INV_SQRT2]))
        out = evolve_reverse(st, pauli_z, math.pi / 2.0)
        expected = np.array([np.exp(1j * math.pi / 2), np.exp(-1j * math.pi / 2)]) * INV_SQRT2
        np.testing.assert_allclose(out.amplitudes, expected, atol=1e-14)


class TestApplyUnitary:
    def test_identity_leaves_state(self, rng):
        st = random_state(rng, 3)
        out = apply_unitary(st, UnitaryOperator(np.eye(2)), [1])
        np.testing.assert_allclose(out.amplitudes, st.amplitudes, atol=1e-14)

    def test_bit_flip_on_msb(self):
        x = UnitaryOperator(np.array([[0, 1], [1, 0]]))
        out = apply_unitary(StateVector.basis(2, 0), x, [0])
        np.testing.assert_array_equal(out.amplitudes, [0, 0, 1, 0])

    def test_bell_pair_circuit(self):
        hadamard = UnitaryOperator(np.array([[1, 1], [1, -1]]) * INV_SQRT2)
        cnot = UnitaryOperator(
            np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
        )
        st = apply_unitary(StateVector.basis(2, 0), hadamard, [0])
        st = apply_unitary(st, cnot, [0, 1])
        np.testing.assert_allclose(
            st.amplitudes, [INV_SQRT2, 0, 0, INV_SQRT2], atol=1e-14
        )

    def test_two_qubit_gate_arbitrary_targets(self, rng):
        # applying on reversed targets must equal applying the swapped matrix
        st = random_state(rng, 3)
        raw = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        q, _ = np.linalg.qr(raw)
        u = UnitaryOperator(q)
        swap = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
        u_swapped = UnitaryOperator(swap @ q @ swap)
        a = apply_unitary(st, u, [2, 0])
        b = apply_unitary(st, u_swapped, [0, 2])
        np.testing.assert_allclose(a.amplitudes, b.amplitudes, atol=1e-12)

    def test_bad_indices(self):
        x = UnitaryOperator(np.array([[0, 1], [1, 0]]))
        st = StateVector.basis(2, 0)
        with pytest.raises(IndexError):
            apply_unitary(st, x, [2])
        cnot = UnitaryOperator(
            np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
        )
        with pytest.raises(IndexError):
            apply_unitary(st, cnot, [0, 0])

    def test_dimension_mismatch(self):
        x = UnitaryOperator(np.array([[0, 1], [1, 0]]))
        with pytest.raises(ShapeError):
            apply_unitary(StateVector.basis(2, 0), x, [0, 1])

    def test_norm_preserved(self, rng):
        st = random_state(rng, 4)
        raw = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        q, _ = np.linalg.qr(raw)
        out = apply_unitary(st, UnitaryOperator(q), [1, 3])
        assert abs(np.vdot(out.amplitudes, out.amplitudes).real - 1.0) < 1e-12


class TestInnerProductAndFidelity:
    def test_self_overlap(self, rng):
        st = random_state(rng, 3)
        assert abs(inner_product(st, st) - 1.0) < 1e-12
        assert fidelity(st, st) == 1.0

    def test_orthogonal_states(self):
        a, b = StateVector.basis(2, 1), StateVector.basis(2, 2)
        assert inner_product(a, b) == 0.0
        assert fidelity(a, b) == 0.0

    def test_real_overlap_value(self):
        a = StateVector(np.array([0.6, 0.8]))
        b = StateVector(np.array([0.8, 0.6]))
        assert abs(inner_product(a, b) - 0.96) < 1e-15

    def test_fidelity_against_basis(self):
        b = StateVector(np.array([0.6, 0.8]))
        assert abs(fidelity(StateVector.basis(1, 0), b) - 0.36) < 1e-15

    def test_dimension_mismatch(self):
        with pytest.raises(ShapeError):
            inner_product(StateVector.basis(1, 0), StateVector.basis(2, 0))
