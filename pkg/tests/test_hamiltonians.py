import numpy as np
import pytest

from qlss import (GapModel, GeneratorSpec, QlspInstance, build_embedding,
                  build_general_embedding, build_indefinite_embedding,
                  build_pd_embedding, gap_lower_bound, gap_model,
                  generate_nonhermitian, generate_pd, interpolate)
from qlss.errors import NotHermitian, OutOfRange, WrongClass
from qlss.linalg import spectral_norm

from conftest import hermitian_indefinite_instance

SZ = np.diag([1.0, -1.0]).astype(complex)


def assert_embedding_invariants(emb, tol=1e-10):
    np.testing.assert_allclose(emb.h0 @ emb.initial_state, 0.0, atol=tol)
    np.testing.assert_allclose(emb.h0 @ emb.dark_state, 0.0, atol=tol)
    np.testing.assert_allclose(emb.h1 @ emb.target_state, 0.0, atol=tol)
    np.testing.assert_allclose(emb.h1 @ emb.dark_state, 0.0, atol=tol)
    assert abs(np.vdot(emb.dark_state, emb.initial_state)) <= 1e-12
    assert spectral_norm(emb.h0) <= 1.0 + 1e-8
    assert spectral_norm(emb.h1) <= 1.0 + 1e-8
    for state in (emb.initial_state, emb.target_state, emb.dark_state):
        assert abs(np.linalg.norm(state) - 1.0) <= 1e-12


class TestPdEmbedding:
    def test_identity_matrix_collapses(self):
        inst = QlspInstance(a=np.eye(2, dtype=complex),
                            b=np.array([1.0, 0.0], dtype=complex),
                            kappa=1.0, matrix_class="hermitian_pd", n_dim=2)
        emb = build_pd_embedding(inst)
        np.testing.assert_allclose(emb.h0, emb.h1, atol=1e-15)
        np.testing.assert_allclose(emb.initial_state, emb.target_state, atol=1e-15)

    def test_diagonal_null_space(self):
        inst = QlspInstance(a=np.diag([1.0, 0.5]).astype(complex),
                            b=np.array([1.0, 0.0], dtype=complex),
                            kappa=2.0, matrix_class="hermitian_pd", n_dim=2)
        emb = build_pd_embedding(inst)
        member = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
        np.testing.assert_allclose(emb.h1 @ member, 0.0, atol=1e-12)

    def test_generated_instance_invariants(self, pd_n4_k10):
        emb = build_pd_embedding(pd_n4_k10)
        assert emb.dim == 8
        assert emb.ancilla_qubits == 1
        assert emb.gap_prefactor == 1.0
        assert_embedding_invariants(emb)

    def test_wrong_class(self, nonh_n8_k10):
        with pytest.raises(WrongClass):
            build_pd_embedding(nonh_n8_k10)

    def test_dark_initial_exactly_orthogonal(self, pd_n4_k10):
        emb = build_pd_embedding(pd_n4_k10)
        assert np.vdot(emb.dark_state, emb.initial_state) == 0.0


class TestIndefiniteEmbedding:
    def test_sigma_z_target_by_hand(self):
        b = np.array([1.0, 0.0], dtype=complex)
        emb = build_indefinite_embedding(SZ, b, kappa=1.0)
        expected = np.zeros(8, dtype=complex)
        expected[0] = expected[2] = 1.0 / np.sqrt(2)  # |0,+> x (1,0)
        np.testing.assert_allclose(emb.target_state, expected, atol=1e-12)
        assert emb.dim == 8
        assert emb.ancilla_qubits == 2
        assert emb.gap_prefactor == pytest.approx(1.0 / np.sqrt(2))

    def test_indefinite_instance_invariants(self):
        inst = hermitian_indefinite_instance(4, 10.0)
        emb = build_indefinite_embedding(inst.a, inst.b, inst.kappa)
        assert_embedding_invariants(emb)

    def test_ancilla_orthogonality_exact(self):
        inst = hermitian_indefinite_instance(4, 5.0)
        emb = build_indefinite_embedding(inst.a, inst.b, inst.kappa)
        assert np.vdot(emb.dark_state, emb.initial_state) == 0.0

    def test_not_hermitian(self, nonh_n8_k10):
        with pytest.raises(NotHermitian):
            build_indefinite_embedding(nonh_n8_k10.a, nonh_n8_k10.b, 10.0)


class TestGeneralEmbedding:
    def test_dilation_spectrum(self, pd_n4_k10):
        a = pd_n4_k10.a
        z = np.zeros_like(a)
        dilation = np.block([[z, a], [a.conj().T, z]])
        sv = np.linalg.svd(a, compute_uv=False)
        expected = np.sort(np.concatenate([-sv, sv]))
        np.testing.assert_allclose(np.linalg.eigvalsh(dilation), expected, atol=1e-10)

    def test_hermitian_matrix_symmetric_blocks(self):
        # A = A† makes the two solution blocks of the dilated system equal
        inst = QlspInstance(a=np.diag([1.0, 0.5]).astype(complex),
                            b=np.array([1.0, 0.0], dtype=complex),
                            kappa=2.0, matrix_class="general", n_dim=2)
        emb = build_general_embedding(inst)
        frak_x = emb.target_state[:4] * np.sqrt(2)  # strip |0,+> ancillas
        np.testing.assert_allclose(frak_x[:2], frak_x[2:], atol=1e-12)

    def test_condition_number_preserved(self):
        inst = generate_nonhermitian(
            GeneratorSpec(n_dim=32, kappa=10.0, family="nonhermitian_laplacian"))
        z = np.zeros_like(inst.a)
        dilation = np.block([[z, inst.a], [inst.a.conj().T, z]])
        sv = np.linalg.svd(dilation, compute_uv=False)
        assert abs(sv[0] / sv[-1] - 10.0) <= 1e-8

    def test_generated_instance_invariants(self, nonh_n8_k10):
        emb = build_general_embedding(nonh_n8_k10)
        assert emb.dim == 64
        assert emb.ancilla_qubits == 3
        assert_embedding_invariants(emb)

    def test_dispatch(self, pd_n8_k10, nonh_n8_k10):
        assert build_embedding(pd_n8_k10).dim == 16
        assert build_embedding(nonh_n8_k10).dim == 64
        inst = hermitian_indefinite_instance(4, 5.0)
        assert build_embedding(inst).dim == 16


class TestInterpolateAndGap:
    def test_endpoints_and_midpoint(self, pd_n4_k10):
        emb = build_pd_embedding(pd_n4_k10)
        np.testing.assert_allclose(interpolate(emb, 0.0), emb.h0, atol=1e-15)
        np.testing.assert_allclose(interpolate(emb, 1.0), emb.h1, atol=1e-15)
        np.testing.assert_allclose(interpolate(emb, 0.5),
                                   0.5 * (emb.h0 + emb.h1), atol=1e-15)
        with pytest.raises(OutOfRange):
            interpolate(emb, 1.5)

    def test_gap_lower_bound_values(self):
        assert gap_lower_bound(GapModel(kappa=10.0, prefactor=1.0), 0.0) == 1.0
        assert gap_lower_bound(GapModel(kappa=10.0, prefactor=1.0), 1.0) == pytest.approx(0.1)
        assert gap_lower_bound(GapModel(kappa=10.0, prefactor=1.0 / np.sqrt(2)), 0.5) \
            == pytest.approx(0.55 / np.sqrt(2))
        with pytest.raises(OutOfRange):
            gap_lower_bound(GapModel(kappa=10.0, prefactor=1.0), -0.1)

    def test_model_is_monotone(self):
        model = GapModel(kappa=10.0, prefactor=1.0)
        f = np.linspace(0, 1, 101)
        vals = np.array([gap_lower_bound(model, x) for x in f])
        assert np.all(np.diff(vals) < 0)
        assert vals.min() > 0

    @pytest.mark.parametrize("builder", ["pd", "indefinite", "general"])
    def test_spectral_gap_property(self, builder, pd_n8_k10, nonh_n8_k10):
        if builder == "pd":
            emb = build_pd_embedding(pd_n8_k10)
        elif builder == "indefinite":
            inst = hermitian_indefinite_instance(4, 10.0)
            emb = build_indefinite_embedding(inst.a, inst.b, inst.kappa)
        else:
            emb = build_general_embedding(
                generate_nonhermitian(GeneratorSpec(4, 10.0, "nonhermitian_laplacian")))
        model = gap_model(emb)
        for f in np.linspace(0.0, 1.0, 11):
            w = np.linalg.eigvalsh(interpolate(emb, f))
            null_count = int((np.abs(w) < 1e-10).sum())
            assert null_count == 2
            nonzero = np.abs(w)[np.abs(w) > 1e-10]
            assert nonzero.min() >= gap_lower_bound(model, f) - 1e-9
            np.testing.assert_allclose(interpolate(emb, f) @ emb.dark_state,
                                       0.0, atol=1e-12)
