from __future__ import annotations

import numpy as np
import pytest

from ctxcert import experiment, mabk
from ctxcert.experiment import (CountTable, NoiseModel, luders_update,
                                sequential_probabilities, simulate_counts,
                                standard_plan, stream_rng)


@pytest.fixture(scope="module")
def reference_family(reference):
    return mabk.ProjectorFamily(
        rays=reference.rays.astype(complex),
        contexts=reference.contexts,
        ambient_dim=7)


class TestLudersUpdate:
    def test_repeatability(self):
        ray = np.zeros(4, dtype=complex)
        ray[1] = 1.0
        out = luders_update(ray, ray, 1)
        assert abs(abs(np.vdot(out, ray)) - 1.0) < 1e-14

    def test_orthogonal_state_unchanged_by_outcome_zero(self):
        state = np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)
        ray = np.array([0.0, 1.0, 0.0, 0.0], dtype=complex)
        out = luders_update(state, ray, 0)
        assert abs(abs(np.vdot(out, state)) - 1.0) < 1e-14

    def test_reference_outcome_zero_ray(self, reference):
        # Removing the first ray from the input state leaves the uniform
        # superposition of components 2..4.
        out = luders_update(reference.state.astype(complex),
                            reference.rays[0].astype(complex), 0)
        expected = np.zeros(7)
        expected[1:4] = 1.0 / np.sqrt(3.0)
        assert abs(abs(np.vdot(out, expected)) - 1.0) < 1e-12

    def test_post_zero_conditionals_are_one_third(self, reference, reference_graph):
        state = reference.state.astype(complex)
        neighbors = [j for i, j in reference_graph.edges if i == 0]
        out = luders_update(state, reference.rays[0].astype(complex), 0)
        for j in neighbors:
            p = abs(np.vdot(reference.rays[j], out)) ** 2
            assert p == pytest.approx(1.0 / 3.0, abs=1e-12)

    def test_projector_matrix_accepted(self):
        ray = np.array([1.0, 1.0], dtype=complex) / np.sqrt(2)
        proj = np.outer(ray, ray.conj())
        state = np.array([1.0, 0.0], dtype=complex)
        out = luders_update(state, proj, 1)
        assert abs(abs(np.vdot(out, ray)) - 1.0) < 1e-14

    def test_impossible_outcomes_rejected(self):
        ray = np.array([1.0, 0.0], dtype=complex)
        ortho = np.array([0.0, 1.0], dtype=complex)
        with pytest.raises(ValueError, match="impossible"):
            luders_update(ortho, ray, 1)
        with pytest.raises(ValueError, match="impossible"):
            luders_update(ray, ray, 0)

    def test_output_unit_norm(self, reference):
        rng = np.random.default_rng(21)
        for _ in range(20):
            psi = rng.normal(size=7) + 1j * rng.normal(size=7)
            psi /= np.linalg.norm(psi)
            k = int(rng.integers(16))
            for outcome in (0, 1):
                out = luders_update(psi, reference.rays[k].astype(complex), outcome)
                assert np.linalg.norm(out) == pytest.approx(1.0, abs=1e-12)


class TestSequentialProbabilities:
    def test_exact_orthogonality_kills_joint(self, reference, reference_family):
        state = reference.state.astype(complex)
        for i, j in reference.edges[:10]:
            probs = sequential_probabilities(state, i, j, reference_family)
            assert probs.p11 < 1e-24

    def test_first_vertex_probability(self, reference, reference_family):
        probs = sequential_probabilities(
            reference.state.astype(complex), 0, 1, reference_family)
        assert probs.p1_first == pytest.approx(0.25, abs=1e-12)

    def test_vertex_sum_is_quantum_maximum(self, reference):
        state = reference.state.astype(complex)
        total = sum(abs(np.vdot(ray, state)) ** 2 for ray in reference.rays)
        assert total == pytest.approx(4.0, abs=1e-12)

    def test_completeness(self, reference, reference_family):
        rng = np.random.default_rng(22)
        state = rng.normal(size=7) + 1j * rng.normal(size=7)
        state /= np.linalg.norm(state)
        for i, j in [(0, 4), (2, 9), (5, 11)]:
            probs = sequential_probabilities(state, i, j, reference_family)
            total = probs.p11 + probs.p10 + probs.p01 + probs.p00
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_no_signaling_analytic(self, reference, reference_family):
        # The repreparation procedure is non-disturbing by construction:
        # marginal of the second measurement equals its direct probability.
        state = reference.state.astype(complex)
        for i, j in reference.edges[:20]:
            probs = sequential_probabilities(state, i, j, reference_family)
            p1 = probs.p1_first
            remainder = luders_update(state, reference.rays[i].astype(complex), 0)
            marginal = (p1 * abs(np.vdot(reference.rays[j], reference.rays[i])) ** 2
                        + (1 - p1) * abs(np.vdot(reference.rays[j], remainder)) ** 2)
            direct = abs(np.vdot(reference.rays[j], state)) ** 2
            assert abs(marginal - direct) < 1e-12

    def test_same_index_rejected(self, reference_family, reference):
        with pytest.raises(ValueError, match="differ"):
            sequential_probabilities(
                reference.state.astype(complex), 3, 3, reference_family)


class TestSimulateCounts:
    def test_seed_reproducibility(self, reference):
        plan = standard_plan(reference.rays, reference.state, reference.edges[:5])
        noise = NoiseModel(seed=42)
        t1 = simulate_counts(plan, shots=2000, noise=noise)
        t2 = simulate_counts(plan, shots=2000, noise=noise)
        assert t1.records == t2.records

    def test_extending_plan_preserves_draws(self, reference):
        plan_small = standard_plan(reference.rays, reference.state,
                                   reference.edges[:2])
        plan_big = standard_plan(reference.rays, reference.state,
                                 reference.edges[:4])
        noise = NoiseModel(seed=9)
        small = simulate_counts(plan_small, shots=1000, noise=noise)
        big = simulate_counts(plan_big, shots=1000, noise=noise)
        for key, counts in small.records.items():
            assert big.records[key] == counts

    def test_noiseless_matches_analytic_within_4_sigma(self, reference):
        plan = [experiment.Setting("psi", experiment.vertex_id(k),
                                   reference.state, reference.rays[k])
                for k in range(16)]
        shots = 100_000
        table = simulate_counts(plan, shots=shots, noise=NoiseModel(seed=3))
        state = reference.state
        for k in range(16):
            p = abs(np.vdot(reference.rays[k], state)) ** 2
            c1, c0 = table.records[("psi", experiment.vertex_id(k))]
            estimate = c1 / (c1 + c0)
            sigma = np.sqrt(p * (1 - p) / shots)
            assert abs(estimate - p) < 4 * sigma

    def test_dark_rate_lifts_zero_probability(self, reference):
        plan = [experiment.Setting("post1:v1", "v2",
                                   reference.rays[0], reference.rays[1])]
        noise = NoiseModel(visibility=1.0, dark_rate=0.05, seed=1)
        table = simulate_counts(plan, shots=50_000, noise=noise)
        c1, c0 = table.records[("post1:v1", "v2")]
        assert c1 / (c1 + c0) == pytest.approx(0.05, rel=0.2)

    def test_duplicate_setting_rejected(self, reference):
        setting = experiment.Setting("psi", "v1", reference.state,
                                     reference.rays[0])
        with pytest.raises(ValueError, match="duplicate"):
            simulate_counts([setting, setting], shots=10, noise=NoiseModel())

    def test_bad_shots(self, reference):
        with pytest.raises(ValueError, match="shots"):
            simulate_counts([], shots=0, noise=NoiseModel())


class TestPlanAndIds:
    def test_plan_size(self, reference):
        plan = standard_plan(reference.rays, reference.state, reference.edges)
        assert len(plan) == 16 + 4 * 72

    def test_plan_spec_roundtrip(self, reference):
        plan = standard_plan(reference.rays, reference.state,
                             reference.edges[:3])
        specs = experiment.plan_to_specs(plan)
        assert specs[0] == {"prep": "psi", "meas": 0}
        assert {"prep": {"ray": reference.edges[0][0], "outcome": 0},
                "meas": reference.edges[0][1]} in specs
        back = experiment.plan_from_specs(specs, reference.rays, reference.state)
        assert [(s.prep_id, s.meas_id) for s in back] == \
            [(s.prep_id, s.meas_id) for s in plan]
        for a, b in zip(plan, back):
            assert np.allclose(a.prep_ray, b.prep_ray)
            assert np.allclose(a.meas_ray, b.meas_ray)

    def test_plan_spec_bare_ray_reference(self, reference):
        plan = experiment.plan_from_specs(
            [{"prep": 4, "meas": 8}], reference.rays, reference.state)
        assert plan[0].prep_id == "post1:v5" and plan[0].meas_id == "v9"

    def test_malformed_plan_entry(self, reference):
        with pytest.raises(ValueError, match="entry 0"):
            experiment.plan_from_specs([{"prep": {"ray": 1}}],
                                       reference.rays, reference.state)

    def test_vertex_id_roundtrip(self):
        for k in (0, 7, 15):
            assert experiment.parse_vertex_id(experiment.vertex_id(k)) == k

    def test_stream_independence(self):
        a = stream_rng(0, "psi", "v1").integers(1 << 30)
        b = stream_rng(0, "psi", "v2").integers(1 << 30)
        c = stream_rng(1, "psi", "v1").integers(1 << 30)
        assert len({int(a), int(b), int(c)}) == 3


class TestCountTable:
    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            CountTable(records={("psi", "v1"): (-1, 5)})

    def test_unknown_normalization_rejected(self):
        with pytest.raises(ValueError, match="normalization"):
            CountTable(records={}, normalization="weird")

    def test_probability_modes(self):
        table = CountTable(records={("psi", "v1"): (25, 75)},
                           shots_nominal=200, normalization="paired")
        assert table.probability(("psi", "v1")) == pytest.approx(0.25)
        table = CountTable(records={("psi", "v1"): (25, 75)},
                           shots_nominal=200, normalization="reference")
        assert table.probability(("psi", "v1")) == pytest.approx(0.125)

    def test_noise_model_validation(self):
        with pytest.raises(ValueError, match="visibility"):
            NoiseModel(visibility=1.2)
        with pytest.raises(ValueError, match="dark_rate"):
            NoiseModel(dark_rate=-0.1)
        with pytest.raises(ValueError, match="jitter"):
            NoiseModel(prep_angle_jitter=-1.0)
