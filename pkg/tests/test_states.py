import math

import numpy as np
import pytest

import qinfo as qi
from qinfo.exceptions import DimensionMismatchError, ValidationError
from qinfo.random_objects import (
    random_density_operator,
    random_state_vector,
    random_unitary,
)
from qinfo.rng import substream

KET0 = qi.StateVector(np.array([1.0, 0.0]))
KET1 = qi.StateVector(np.array([0.0, 1.0]))
PLUS = qi.StateVector(np.array([1.0, 1.0]) / math.sqrt(2))


class TestTypes:
    def test_state_vector_norm_enforced(self):
        with pytest.raises(ValidationError):
            qi.StateVector(np.array([1.0, 1.0]))

    def test_density_trace_enforced(self):
        with pytest.raises(ValidationError):
            qi.DensityOperator(np.eye(2))

    def test_density_hermiticity_enforced(self):
        with pytest.raises(ValidationError):
            qi.DensityOperator(np.array([[0.5, 0.5], [0.0, 0.5]]))

    def test_density_positivity_enforced(self):
        with pytest.raises(ValidationError):
            qi.DensityOperator(np.array([[1.5, 0.0], [0.0, -0.5]]))

    def test_factorization_must_multiply_out(self):
        with pytest.raises(ValidationError):
            qi.StateVector(np.array([1.0, 0, 0, 0]), dims=(2, 3))

    def test_spectral_reconstruction(self):
        rng = substream(201, 0)
        for _ in range(10):
            rho = random_density_operator(4, rng)
            spec = rho.spectral()
            assert np.max(np.abs(spec.reconstruct() - rho.matrix)) < 1e-9
            assert spec.eigenvalues.sum() == pytest.approx(1.0, abs=1e-9)

    def test_json_roundtrip(self):
        rng = substream(202, 0)
        psi = random_state_vector(4, rng, dims=(2, 2))
        back = qi.StateVector.from_json(psi.to_json())
        assert np.allclose(back.amps, psi.amps)
        assert back.dims == (2, 2)
        rho = random_density_operator(3, rng)
        back = qi.DensityOperator.from_json(rho.to_json())
        assert np.allclose(back.matrix, rho.matrix)


class TestTensor:
    def test_basis_composition(self):
        assert np.allclose(qi.tensor(KET0, KET1).amps, [0, 1, 0, 0])

    def test_mixed_composition(self):
        half = qi.DensityOperator.maximally_mixed(2)
        quarter = qi.tensor(half, half)
        assert np.allclose(quarter.matrix, np.eye(4) / 4)
        assert quarter.dims == (2, 2)

    def test_ordering_against_direct_multiplication(self):
        rng = substream(203, 0)
        for _ in range(20):
            a = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
            b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
            x = rng.standard_normal(2) + 1j * rng.standard_normal(2)
            y = rng.standard_normal(3) + 1j * rng.standard_normal(3)
            lhs = np.kron(a, b) @ np.kron(x, y)
            rhs = np.kron(a @ x, b @ y)
            assert np.max(np.abs(lhs - rhs)) < 1e-10

    def test_kind_mismatch_rejected(self):
        with pytest.raises(ValidationError):
            qi.tensor(KET0, KET0.density())


class TestPartialTrace:
    def test_singlet_reduction_is_maximally_mixed(self):
        psi_minus = qi.StateVector(np.array([0, 1, -1, 0]) / math.sqrt(2), dims=(2, 2))
        reduced = qi.partial_trace(psi_minus.density(), keep=0)
        assert np.allclose(reduced.matrix, np.eye(2) / 2, atol=1e-12)

    def test_product_reduction_returns_factor(self):
        rng = substream(204, 0)
        rho_a = random_density_operator(2, rng)
        rho_b = random_density_operator(3, rng)
        joint = qi.tensor(rho_a, rho_b)
        assert np.allclose(qi.partial_trace(joint, keep=0).matrix, rho_a.matrix, atol=1e-12)
        assert np.allclose(qi.partial_trace(joint, keep=1).matrix, rho_b.matrix, atol=1e-12)

    def test_double_trace_is_full_trace(self):
        rng = substream(205, 0)
        rho = random_density_operator(6, rng, dims=(2, 3))
        once = qi.partial_trace(rho, keep=1)
        twice = qi.partial_trace(qi.DensityOperator(once.matrix, dims=(3, 1)), keep=1)
        assert twice.matrix.shape == (1, 1)
        assert twice.matrix[0, 0] == pytest.approx(1.0, abs=1e-10)

    def test_component_formula(self):
        # reduced[a, b] = sum_nu rho[(a, nu), (b, nu)] by explicit loops
        rng = substream(206, 0)
        rho = random_density_operator(6, rng, dims=(2, 3))
        t = rho.matrix.reshape(2, 3, 2, 3)
        byhand = np.zeros((2, 2), dtype=complex)
        for a in range(2):
            for b in range(2):
                for nu in range(3):
                    byhand[a, b] += t[a, nu, b, nu]
        assert np.allclose(qi.partial_trace(rho, keep=0).matrix, byhand, atol=1e-12)

    def test_missing_factorization_rejected(self):
        with pytest.raises(ValidationError):
            qi.partial_trace(qi.DensityOperator.maximally_mixed(4), keep=0)


class TestPurify:
    def test_pure_state_purifies_trivially(self):
        psi = PLUS
        purified = qi.purify(psi.density())
        assert purified.dims == (2, 1)
        assert abs(np.vdot(np.kron(psi.amps, [1.0]), purified.amps)) == pytest.approx(1.0, abs=1e-10)

    def test_maximally_mixed_gives_maximal_entanglement(self):
        purified = qi.purify(qi.DensityOperator.maximally_mixed(2))
        form = qi.schmidt_decompose(purified)
        assert form.coefficients == pytest.approx([1 / math.sqrt(2)] * 2, abs=1e-10)

    def test_roundtrip_random_rank3_qutrit(self):
        rng = substream(207, 0)
        for _ in range(10):
            rho = random_density_operator(3, rng, rank=3)
            purified = qi.purify(rho)
            assert purified.dims[1] == 3
            back = qi.partial_trace(purified.density(), keep=0)
            assert np.max(np.abs(back.matrix - rho.matrix)) < 1e-9

    def test_ancilla_dimension_is_rank(self):
        rng = substream(208, 0)
        rho = random_density_operator(4, rng, rank=2)
        assert qi.purify(rho).dims[1] == 2


class TestSchmidt:
    def test_product_state_has_number_one(self):
        psi = qi.tensor(PLUS, KET1)
        assert qi.schmidt_decompose(psi).schmidt_number == 1

    def test_bell_state_coefficients(self):
        phi_plus = qi.StateVector(np.array([1, 0, 0, 1]) / math.sqrt(2), dims=(2, 2))
        form = qi.schmidt_decompose(phi_plus)
        assert form.coefficients == pytest.approx([1 / math.sqrt(2)] * 2, abs=1e-12)

    def test_already_schmidt_form(self):
        psi = qi.StateVector(
            math.sqrt(0.9) * np.array([1, 0, 0, 0]) + math.sqrt(0.1) * np.array([0, 0, 0, 1]),
            dims=(2, 2),
        )
        form = qi.schmidt_decompose(psi)
        assert form.coefficients == pytest.approx([math.sqrt(0.9), math.sqrt(0.1)], abs=1e-12)

    def test_reconstruction_and_reduction_spectra(self):
        rng = substream(209, 0)
        for _ in range(10):
            psi = random_state_vector(12, rng, dims=(3, 4))
            form = qi.schmidt_decompose(psi)
            assert np.max(np.abs(form.reconstruct() - psi.amps)) < 1e-9
            lam = np.sort(form.coefficients**2)[::-1]
            for keep in (0, 1):
                reduced = qi.partial_trace(psi.density(), keep=keep)
                spectrum = np.sort(np.linalg.eigvalsh(reduced.matrix))[::-1]
                assert np.max(np.abs(spectrum[: lam.size] - lam)) < 1e-9


class TestVonNeumannEntropy:
    def test_pure_states_have_zero_entropy(self):
        rng = substream(210, 0)
        for _ in range(10):
            psi = random_state_vector(4, rng)
            assert qi.von_neumann_entropy(psi.density()) == pytest.approx(0.0, abs=1e-9)

    def test_maximally_mixed_qubit_is_one_bit(self):
        assert qi.von_neumann_entropy(qi.DensityOperator.maximally_mixed(2)) == pytest.approx(1.0)

    def test_photon_ensemble_spectrum_value(self):
        rho = qi.DensityOperator(np.diag([0.8536, 0.1464]))
        assert qi.von_neumann_entropy(rho) == pytest.approx(0.6008, abs=2e-4)

    def test_unitary_invariance(self):
        rng = substream(211, 0)
        for _ in range(10):
            rho = random_density_operator(3, rng)
            u = random_unitary(3, rng)
            rotated = qi.DensityOperator(u @ rho.matrix @ u.conj().T)
            assert qi.von_neumann_entropy(rotated) == pytest.approx(
                qi.von_neumann_entropy(rho), abs=1e-9
            )

    def test_concavity(self):
        rng = substream(212, 0)
        for _ in range(20):
            lams = rng.dirichlet(np.ones(3))
            rhos = [random_density_operator(3, rng) for _ in range(3)]
            mix = qi.DensityOperator(sum(l * r.matrix for l, r in zip(lams, rhos)))
            assert qi.von_neumann_entropy(mix) >= sum(
                l * qi.von_neumann_entropy(r) for l, r in zip(lams, rhos)
            ) - 1e-9

    def test_additivity(self):
        rng = substream(213, 0)
        rho_a = random_density_operator(2, rng)
        rho_b = random_density_operator(3, rng)
        joint = qi.tensor(rho_a, rho_b)
        assert qi.von_neumann_entropy(joint) == pytest.approx(
            qi.von_neumann_entropy(rho_a) + qi.von_neumann_entropy(rho_b), abs=1e-9
        )


class TestFidelityAndDistances:
    def test_self_fidelity(self):
        rng = substream(214, 0)
        rho = random_density_operator(3, rng)
        assert qi.fidelity(rho, rho) == pytest.approx(1.0, abs=1e-10)

    def test_orthogonal_pure_states(self):
        assert qi.fidelity(KET0.density(), KET1.density()) == pytest.approx(0.0, abs=1e-12)

    def test_h_versus_diagonal(self):
        f = qi.fidelity(KET0.density(), PLUS.density())
        assert f == pytest.approx(0.5, abs=1e-12)
        assert qi.statistical_overlap(KET0.density(), PLUS.density()) == pytest.approx(
            1 / math.sqrt(2), abs=1e-10
        )

    def test_pure_state_fidelity_is_squared_overlap(self):
        rng = substream(215, 0)
        for _ in range(10):
            a = random_state_vector(3, rng)
            b = random_state_vector(3, rng)
            assert qi.fidelity(a.density(), b.density()) == pytest.approx(
                abs(a.overlap(b)) ** 2, abs=1e-9
            )

    def test_symmetry(self):
        rng = substream(216, 0)
        a = random_density_operator(4, rng)
        b = random_density_operator(4, rng)
        assert qi.fidelity(a, b) == pytest.approx(qi.fidelity(b, a), abs=1e-10)

    def test_trace_distance_self(self):
        rng = substream(217, 0)
        rho = random_density_operator(3, rng)
        assert qi.trace_distance(rho, rho) == pytest.approx(0.0, abs=1e-12)

    def test_trace_distance_orthogonal_pure_is_two(self):
        # eigenvalues of the difference are +1 and -1
        assert qi.trace_distance(KET0.density(), KET1.density()) == pytest.approx(2.0, abs=1e-12)

    def test_triangle_inequality(self):
        rng = substream(218, 0)

        def eig_sum_distance(x, y):
            return float(np.abs(np.linalg.eigvalsh(x.matrix - y.matrix)).sum())

        for _ in range(20):
            a, b, c = (random_density_operator(3, rng) for _ in range(3))
            assert qi.trace_distance(a, c) <= (
                eig_sum_distance(a, b) + eig_sum_distance(b, c) + 1e-10
            )

    def test_hilbert_angle(self):
        assert qi.hilbert_angle(KET0, KET0) == pytest.approx(0.0, abs=1e-10)
        assert qi.hilbert_angle(KET0, KET1) == pytest.approx(math.pi / 2, abs=1e-12)
        assert qi.hilbert_angle(KET0, PLUS) == pytest.approx(math.pi / 4, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            qi.fidelity(KET0.density(), qi.DensityOperator.maximally_mixed(3))
