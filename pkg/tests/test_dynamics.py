import math

import numpy as np
import pytest

import qinfo as qi
from qinfo.dynamics import choi_matrix
from qinfo.exceptions import DimensionMismatchError, ValidationError
from qinfo.random_objects import (
    random_density_operator,
    random_kraus_channel_operators,
    random_state_vector,
)
from qinfo.rng import substream

Z_MEAS = qi.ProjectiveMeasurement.computational(2)
KET0 = qi.StateVector(np.array([1.0, 0.0]))
PLUS = qi.StateVector(np.array([1.0, 1.0]) / math.sqrt(2))


def trine_povm():
    elements = []
    for k in range(3):
        theta = 2 * math.pi * k / 3
        v = np.array([math.cos(theta), math.sin(theta)])
        elements.append(2 / 3 * np.outer(v, v))
    return qi.Povm(elements)


class TestMeasurementTypes:
    def test_projectors_must_be_orthogonal(self):
        p = np.array([[1.0, 0.0], [0.0, 0.0]])
        with pytest.raises(ValidationError):
            qi.ProjectiveMeasurement([p, p])

    def test_projectors_must_complete(self):
        p = np.array([[1.0, 0.0], [0.0, 0.0]])
        with pytest.raises(ValidationError):
            qi.ProjectiveMeasurement([p])

    def test_povm_elements_must_be_psd(self):
        with pytest.raises(ValidationError):
            qi.Povm([np.diag([1.5, 1.0]), np.diag([-0.5, 0.0])])

    def test_povm_must_complete(self):
        with pytest.raises(ValidationError):
            qi.Povm([np.diag([0.5, 0.5])])

    def test_kraus_completeness(self):
        with pytest.raises(ValidationError):
            qi.KrausChannel([np.eye(2) * 0.5])

    def test_povm_json_roundtrip(self):
        povm = trine_povm()
        back = qi.Povm.from_json(povm.to_json())
        for a, b in zip(back.elements, povm.elements):
            assert np.allclose(a, b)


class TestMeasureProbabilities:
    def test_maximally_mixed_in_z(self):
        probs = qi.measure_probabilities(qi.DensityOperator.maximally_mixed(2), Z_MEAS)
        assert probs.probs == pytest.approx([0.5, 0.5], abs=1e-12)

    def test_basis_state_in_z(self):
        probs = qi.measure_probabilities(KET0.density(), Z_MEAS)
        assert probs.probs == pytest.approx([1.0, 0.0], abs=1e-12)

    def test_trine_on_first_state(self):
        # direct trace oracle: (2/3) |<psi_k|psi_0>|^2 with 120-degree spacing
        expected = [2 / 3 * math.cos(2 * math.pi * k / 3) ** 2 for k in range(3)]
        probs = qi.measure_probabilities(
            qi.StateVector(np.array([1.0, 0.0])).density(), trine_povm()
        )
        assert probs.probs == pytest.approx(expected, abs=1e-12)
        assert probs.probs == pytest.approx([2 / 3, 1 / 6, 1 / 6], abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatchError):
            qi.measure_probabilities(qi.DensityOperator.maximally_mixed(3), Z_MEAS)

    def test_povm_probabilities_real_and_nonnegative(self):
        rng = substream(301, 0)
        for _ in range(20):
            rho = random_density_operator(3, rng)
            ops = random_kraus_channel_operators(3, 3, rng)
            povm = qi.Povm([op.conj().T @ op for op in ops])
            probs = qi.measure_probabilities(rho, povm)
            assert np.all(probs.probs >= 0)
            assert probs.probs.sum() == pytest.approx(1.0, abs=1e-10)


class TestProjectiveUpdate:
    def test_conditioned_update(self):
        post = qi.projective_update(PLUS.density(), Z_MEAS, outcome=0)
        assert np.allclose(post.matrix, KET0.density().matrix, atol=1e-12)

    def test_unread_update_dephases(self):
        post = qi.projective_update(PLUS.density(), Z_MEAS, outcome=None)
        assert np.allclose(post.matrix, np.eye(2) / 2, atol=1e-12)

    def test_repeatability_on_eigenstates(self):
        post = qi.projective_update(KET0.density(), Z_MEAS, outcome=0)
        assert np.allclose(post.matrix, KET0.density().matrix, atol=1e-12)

    def test_zero_probability_outcome_rejected(self):
        with pytest.raises(ValidationError):
            qi.projective_update(KET0.density(), Z_MEAS, outcome=1)

    def test_unread_never_decreases_entropy(self):
        rng = substream(302, 0)
        for _ in range(20):
            rho = random_density_operator(2, rng)
            psi = random_state_vector(2, rng)
            basis = qi.ProjectiveMeasurement.from_basis(
                [psi.amps, np.array([-psi.amps[1].conjugate(), psi.amps[0].conjugate()])]
            )
            post = qi.projective_update(rho, basis, outcome=None)
            assert qi.von_neumann_entropy(post) >= qi.von_neumann_entropy(rho) - 1e-9


class TestApplyChannel:
    def test_identity_channel(self):
        rng = substream(303, 0)
        rho = random_density_operator(2, rng)
        out = qi.apply_channel(rho, qi.KrausChannel.identity(2))
        assert np.allclose(out.matrix, rho.matrix)

    def test_full_depolarizing_sends_to_maximally_mixed(self):
        rng = substream(304, 0)
        for _ in range(5):
            rho = random_density_operator(2, rng)
            # direct Kraus summation oracle
            ch = qi.KrausChannel.depolarizing(1.0)
            byhand = sum(op @ rho.matrix @ op.conj().T for op in ch.operators)
            assert np.allclose(byhand, np.eye(2) / 2, atol=1e-12)
            assert np.allclose(qi.apply_channel(rho, ch).matrix, np.eye(2) / 2, atol=1e-12)

    def test_full_dephasing_kills_coherence(self):
        out = qi.apply_channel(PLUS.density(), qi.KrausChannel.dephasing(1.0))
        assert np.allclose(out.matrix, np.eye(2) / 2, atol=1e-12)

    def test_trace_and_positivity_preserved(self):
        rng = substream(305, 0)
        for _ in range(20):
            rho = random_density_operator(3, rng)
            ops = random_kraus_channel_operators(3, 4, rng)
            out = qi.apply_channel(rho, qi.KrausChannel(ops))
            assert out.matrix.trace().real == pytest.approx(1.0, abs=1e-10)
            assert np.linalg.eigvalsh(out.matrix).min() > -1e-10

    def test_linearity_over_mixtures(self):
        rng = substream(306, 0)
        ch = qi.KrausChannel(random_kraus_channel_operators(2, 3, rng))
        for _ in range(10):
            lam = rng.random()
            a = random_density_operator(2, rng)
            b = random_density_operator(2, rng)
            mix = qi.DensityOperator(lam * a.matrix + (1 - lam) * b.matrix)
            lhs = qi.apply_channel(mix, ch).matrix
            rhs = lam * qi.apply_channel(a, ch).matrix + (1 - lam) * qi.apply_channel(b, ch).matrix
            assert np.max(np.abs(lhs - rhs)) < 1e-12


def transpose_action_matrix() -> np.ndarray:
    """Row-major action matrix of the qubit transpose map."""
    t = np.zeros((4, 4))
    for i in range(2):
        for j in range(2):
            t[2 * j + i, 2 * i + j] = 1.0
    return t


class TestCompletePositivity:
    def test_any_kraus_channel_is_cp(self):
        rng = substream(307, 0)
        for _ in range(10):
            ch = qi.KrausChannel(random_kraus_channel_operators(2, 3, rng))
            assert qi.is_completely_positive(ch).is_cp

    def test_identity_map_is_cp(self):
        assert qi.is_completely_positive(np.eye(4)).is_cp

    def test_transpose_map_witness(self):
        res = qi.is_completely_positive(transpose_action_matrix())
        assert not res.is_cp
        # eigen-decomposition oracle: the Choi matrix is SWAP/2
        choi = choi_matrix(transpose_action_matrix())
        swap = np.zeros((4, 4))
        for i in range(2):
            for j in range(2):
                swap[2 * j + i, 2 * i + j] = 1.0
        assert np.allclose(choi, swap / 2)
        assert res.min_eigenvalue == pytest.approx(-0.5, abs=1e-12)
        assert res.witness is not None
        # the witness is a -1/2 eigenvector of the Choi matrix
        assert np.allclose(choi @ res.witness, -0.5 * res.witness, atol=1e-10)

    def test_action_matrix_agrees_with_kraus_form(self):
        rng = substream(308, 0)
        for _ in range(10):
            ops = random_kraus_channel_operators(2, 2, rng)
            action = np.zeros((4, 4), dtype=complex)
            for i in range(2):
                for j in range(2):
                    unit = np.zeros((2, 2), dtype=complex)
                    unit[i, j] = 1.0
                    out = sum(op @ unit @ op.conj().T for op in ops)
                    action[:, 2 * i + j] = out.reshape(-1)
            res = qi.is_completely_positive(action)
            assert res.is_cp
            assert np.allclose(choi_matrix(action), choi_matrix(qi.KrausChannel(ops)))


class TestPovmViaAncilla:
    def test_projective_measurement_realization(self):
        povm = qi.Povm([p.astype(complex) for p in Z_MEAS.projectors])
        real = qi.povm_via_ancilla(povm)
        assert real.ancilla_dim == 2
        for rec, orig in zip(real.recovered_elements, povm.elements):
            assert np.max(np.abs(rec - orig)) < 1e-12

    def test_trine_realization(self):
        povm = trine_povm()
        real = qi.povm_via_ancilla(povm)
        assert real.ancilla_dim == 3
        u = real.unitary
        assert np.max(np.abs(u.conj().T @ u - np.eye(6))) < 1e-9
        for rec, orig in zip(real.recovered_elements, povm.elements):
            assert np.max(np.abs(rec - orig)) < 1e-9

    def test_single_element_povm(self):
        povm = qi.Povm([np.eye(3, dtype=complex)])
        real = qi.povm_via_ancilla(povm)
        assert real.ancilla_dim == 1
        assert np.max(np.abs(real.recovered_elements[0] - np.eye(3))) < 1e-12

    def test_probabilities_match_on_composite(self):
        # Born rule upstairs reproduces Tr(E rho) downstairs
        rng = substream(309, 0)
        povm = trine_povm()
        real = qi.povm_via_ancilla(povm)
        for _ in range(5):
            rho = random_density_operator(2, rng)
            anc = np.zeros((3, 3), dtype=complex)
            anc[0, 0] = 1.0
            composite = np.kron(rho.matrix, anc)
            lifted = real.unitary @ composite @ real.unitary.conj().T
            upstairs = qi.measure_probabilities(
                qi.DensityOperator(lifted, dims=(2, 3)), real.measurement
            )
            downstairs = qi.measure_probabilities(rho, povm)
            assert upstairs.probs == pytest.approx(downstairs.probs, abs=1e-10)
