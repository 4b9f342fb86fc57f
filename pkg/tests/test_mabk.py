from __future__ import annotations

import numpy as np
import pytest

from ctxcert import linalg, mabk
from ctxcert.pauli import PauliString


class TestBuildOperator:
    def test_three_qubit_terms(self):
        inst = mabk.build_mabk(3)
        assert [str(t) for t in inst.terms] == ["+YXX", "+XYX", "+XXY", "-YYY"]
        assert inst.classical_bound == pytest.approx(2.0)
        assert inst.quantum_bound == pytest.approx(4.0)

    def test_ghz_expectation_saturates(self):
        inst = mabk.build_mabk(3)
        ghz = mabk.ghz_state(3)
        val = (ghz.conj() @ inst.operator @ ghz).real
        assert val == pytest.approx(4.0, abs=1e-12)

    def test_flipped_ghz_minimizes(self):
        inst = mabk.build_mabk(3)
        flipped = mabk.ghz_state(3, flipped=True)
        val = (flipped.conj() @ inst.operator @ flipped).real
        assert val == pytest.approx(-4.0, abs=1e-12)

    @pytest.mark.parametrize("n", [3, 5])
    def test_extreme_eigenvalue_is_quantum_bound(self, n):
        inst = mabk.build_mabk(n)
        assert len(inst.terms) == 2 ** (n - 1)
        eigs = np.linalg.eigvalsh(inst.operator)
        assert eigs[-1] == pytest.approx(inst.quantum_bound, abs=1e-8)

    @pytest.mark.parametrize("n", [2, 4, 1, 9])
    def test_bad_n_rejected(self, n):
        with pytest.raises(ValueError):
            mabk.build_mabk(n)

    def test_term_count_formula(self):
        for n in (3, 5):
            assert len(mabk.build_mabk(n).terms) == 2 ** (n - 1)


class TestGhzState:
    @pytest.mark.parametrize("n", [1, 2, 3, 5])
    def test_unit_norm(self, n):
        assert np.linalg.norm(mabk.ghz_state(n)) == pytest.approx(1.0)
        assert np.linalg.norm(mabk.ghz_state(n, flipped=True)) == pytest.approx(1.0)

    def test_flip_is_first_qubit_z(self):
        z_first = PauliString("ZII").matrix()
        assert np.allclose(z_first @ mabk.ghz_state(3), mabk.ghz_state(3, flipped=True))


class TestMuFamily:
    def test_counts(self, family3):
        assert family3.n_events == 16
        assert [len(c) for c in family3.contexts] == [4, 4, 4, 4]
        assert family3.ambient_dim == 8

    def test_five_qubit_counts(self, family5):
        assert family5.n_events == 256
        assert len(family5.contexts) == 16

    def test_context_members_orthogonal(self, family3):
        family3.validate(tol=1e-10)

    def test_context_sums_below_identity(self, family3):
        for ctx in family3.contexts:
            total = sum(family3.projector(k) for k in ctx)
            eigs = np.linalg.eigvalsh(total)
            assert eigs[-1] <= 1.0 + 1e-10

    def test_first_context_matches_layout(self, family3):
        # First event: -y, +y, +y product state.
        expected = linalg.sign_projector_ray(("Y", "Y", "Y"), (-1, 1, 1))
        overlap = abs(np.vdot(expected, family3.rays[0]))
        assert overlap == pytest.approx(1.0, abs=1e-12)


class TestMuValue:
    def test_ghz_reaches_quantum_maximum(self, family3):
        assert mabk.mu_value(mabk.ghz_state(3), family3) == pytest.approx(4.0, abs=1e-10)

    def test_flipped_ghz_vanishes(self, family3):
        assert mabk.mu_value(mabk.ghz_state(3, flipped=True), family3) < 1e-12

    def test_maximally_mixed_average(self, family3):
        # Basis average emulates the maximally mixed input: 16 / 8 = 2.
        avg = np.mean([mabk.mu_value(e, family3) for e in np.eye(8)])
        assert avg == pytest.approx(2.0, abs=1e-10)

    def test_operator_identity_on_random_kets(self, family3):
        inst = mabk.build_mabk(3)
        rng = np.random.default_rng(5)
        for _ in range(100):
            psi = rng.normal(size=8) + 1j * rng.normal(size=8)
            psi /= np.linalg.norm(psi)
            lhs = mabk.mu_value(psi, family3)
            rhs = (psi.conj() @ inst.operator @ psi).real / 2.0 + 2.0
            assert abs(lhs - rhs) < 1e-9

    def test_dimension_mismatch(self, family3):
        with pytest.raises(ValueError, match="dimension"):
            mabk.mu_value(np.ones(4) / 2.0, family3)


class TestHardyProbabilities:
    def test_ghz_saturates_every_context(self, family3):
        result = mabk.hardy_probabilities(mabk.ghz_state(3), family3)
        for value in result.context_sums:
            assert value == pytest.approx(1.0, abs=1e-12)
        assert result.p_success == pytest.approx(1.0, abs=1e-12)

    def test_flipped_ghz_annihilated(self, family3):
        result = mabk.hardy_probabilities(mabk.ghz_state(3, flipped=True), family3)
        assert all(value < 1e-12 for value in result.context_sums)

    def test_every_event_annihilated_individually(self, family3):
        flipped = mabk.ghz_state(3, flipped=True)
        probs = np.abs(family3.rays.conj() @ flipped) ** 2
        assert probs.max() < 1e-12

    def test_context_sums_are_probabilities(self, family3):
        rng = np.random.default_rng(6)
        for _ in range(20):
            psi = rng.normal(size=8) + 1j * rng.normal(size=8)
            psi /= np.linalg.norm(psi)
            result = mabk.hardy_probabilities(psi, family3)
            assert all(-1e-12 <= v <= 1 + 1e-12 for v in result.context_sums)


class TestConcentration:
    def test_rank_seven_for_three_qubits(self, family3):
        cert = mabk.concentration_certificate(family3)
        assert cert.rank == 7
        assert len(cert.kernel) == 1
        assert cert.compressed_rays.shape == (16, 7)

    def test_kernel_is_flipped_state(self, family3):
        cert = mabk.concentration_certificate(family3)
        target = PauliString("ZII").matrix() @ mabk.ghz_state(3)
        assert abs(np.vdot(cert.null_ket, target)) > 1.0 - 1e-10

    def test_rank_thirty_one_for_five_qubits(self, family5):
        cert = mabk.concentration_certificate(family5)
        assert cert.rank == 31

    def test_gram_magnitudes_preserved(self, family3):
        cert = mabk.concentration_certificate(family3)
        assert cert.gram_deviation < 1e-10

    def test_isometry_columns_orthonormal(self, family3):
        cert = mabk.concentration_certificate(family3)
        w = cert.isometry
        assert np.allclose(w.conj().T @ w, np.eye(cert.rank), atol=1e-12)

    def test_bad_tol(self, family3):
        with pytest.raises(ValueError, match="tol"):
            mabk.concentration_certificate(family3, tol=0.0)


class TestClassicalWitness:
    def test_best_assignment_value(self):
        _, value = mabk.best_classical_assignment(3)
        assert value == 2

    def test_witness_is_independent(self, family3, graph3):
        assignment, value = mabk.best_classical_assignment(3)
        events = mabk.classical_witness_events(family3, assignment)
        # One event per satisfied term: (term count + best value) / 2.
        assert len(events) == (4 + value) // 2 == 3
        edge_set = graph3.edge_set()
        for a in events:
            for b in events:
                if a < b:
                    assert (a, b) not in edge_set
