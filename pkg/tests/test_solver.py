import time
import unittest

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from path_setup import ensure_src_path

ensure_src_path()

from errors import AlreadyCorrected, DimensionMismatch, InvalidHyperparameters, PhaseWalkError
from graph import WEIGHT_CONVENTIONS, build_chain_graph, build_laplacian
from phase_types import FeatureSequence, PriorMatrix, ProbabilityMatrix
from solver import (
    RandomWalkSystem,
    apply_correction,
    decode,
    gradient,
    objective,
    residual_norm,
    solve_all_phases,
    solve_phase,
)
from synth.oracles import dense_solve_oracle


def _random_laplacian(rng: np.random.Generator, frames: int):
    return build_laplacian(rng.uniform(0.05, 5.0, size=frames - 1))


class SolvePhaseTests(unittest.TestCase):
    def test_constant_prior_is_a_fixed_point(self) -> None:
        rng = np.random.default_rng(0)
        laplacian = _random_laplacian(rng, 40)
        for value in (0.0, 1.0, 0.3):
            with self.subTest(value=value):
                x = solve_phase(laplacian, 1e-3, np.full(40, value))
                assert_allclose(x, value, atol=1e-9)

    def test_large_gamma_reproduces_prior(self) -> None:
        rng = np.random.default_rng(1)
        laplacian = _random_laplacian(rng, 50)
        z = rng.uniform(0.0, 1.0, size=50)
        assert_allclose(solve_phase(laplacian, 1e9, z), z, atol=1e-6)

    def test_seven_frame_chain_matches_dense_oracle(self) -> None:
        laplacian = build_laplacian(np.array([1.0, 2.0, 1.0, 3.0, 1.0, 2.0]))
        z = np.eye(7)[3]
        expected = dense_solve_oracle(laplacian.to_dense(), 0.01, z)
        self.assertLessEqual(np.abs(solve_phase(laplacian, 0.01, z) - expected).max(), 1e-10)

    def test_random_systems_match_dense_oracle(self) -> None:
        rng = np.random.default_rng(2)
        started = time.perf_counter()
        for trial in range(100):
            frames = int(rng.integers(2, 501))
            features = FeatureSequence(rng.standard_normal((frames, 8)))
            convention = WEIGHT_CONVENTIONS[trial % 2]
            beta = float(rng.choice([1.0, 2.0]))
            gamma = float(rng.choice([1e-4, 1e-3, 1e-2]))
            laplacian = build_chain_graph(features, beta=beta, convention=convention).laplacian()
            z = rng.uniform(0.0, 1.0, size=frames)
            x = solve_phase(laplacian, gamma, z)
            expected = dense_solve_oracle(laplacian.to_dense(), gamma, z)
            with self.subTest(trial=trial, frames=frames, convention=convention, gamma=gamma):
                self.assertLessEqual(np.abs(x - expected).max(), 1e-9)
                bound = 1e-8 * max(1.0, gamma * np.abs(z).max())
                self.assertLessEqual(residual_norm(laplacian, gamma, x, z), bound)
        self.assertLess(time.perf_counter() - started, 5.0)

    def test_solution_is_stationary_point_of_objective(self) -> None:
        rng = np.random.default_rng(3)
        for trial in range(10):
            frames = int(rng.integers(2, 300))
            laplacian = _random_laplacian(rng, frames)
            gamma = float(rng.choice([1e-4, 1e-3, 1e-2]))
            z = (rng.uniform(size=frames) < 0.1).astype(float)
            x = solve_phase(laplacian, gamma, z)
            bound = 1e-7 * max(1.0, gamma * np.abs(z).max())
            with self.subTest(trial=trial, frames=frames, gamma=gamma):
                self.assertLessEqual(np.abs(gradient(laplacian, gamma, x, z)).max(), bound)

    def test_gradient_matches_central_differences(self) -> None:
        rng = np.random.default_rng(8)
        frames, gamma, step = 120, 1e-2, 1e-4
        laplacian = _random_laplacian(rng, frames)
        z = (rng.uniform(size=frames) < 0.1).astype(float)
        # away from the minimum so the gradient is not just rounding noise
        point = solve_phase(laplacian, gamma, z) + rng.uniform(-0.1, 0.1, size=frames)
        analytic = gradient(laplacian, gamma, point, z)
        for index in rng.choice(frames, size=20, replace=False):
            shift = np.zeros(frames)
            shift[index] = step
            numeric = (
                objective(laplacian, gamma, point + shift, z) - objective(laplacian, gamma, point - shift, z)
            ) / (2.0 * step)
            with self.subTest(index=int(index)):
                assert_allclose(numeric, analytic[index], rtol=1e-4, atol=1e-8)

    def test_no_nearby_point_has_lower_energy(self) -> None:
        rng = np.random.default_rng(9)
        frames, gamma = 120, 1e-2
        laplacian = _random_laplacian(rng, frames)
        z = (rng.uniform(size=frames) < 0.1).astype(float)
        x = solve_phase(laplacian, gamma, z)
        best = objective(laplacian, gamma, x, z)
        for _ in range(1000):
            delta = rng.uniform(-0.1, 0.1, size=frames)
            self.assertGreaterEqual(objective(laplacian, gamma, x + delta, z), best)

    def test_solution_respects_prior_range(self) -> None:
        rng = np.random.default_rng(4)
        for _ in range(20):
            laplacian = _random_laplacian(rng, 80)
            z = rng.uniform(0.2, 0.9, size=80)
            x = solve_phase(laplacian, float(rng.uniform(1e-3, 1.0)), z)
            self.assertGreaterEqual(x.min(), z.min() - 1e-12)
            self.assertLessEqual(x.max(), z.max() + 1e-12)

    def test_invalid_inputs(self) -> None:
        laplacian = build_laplacian(np.ones(3))
        with self.assertRaises(InvalidHyperparameters):
            solve_phase(laplacian, 0.0, np.ones(4))
        with self.assertRaises(DimensionMismatch):
            solve_phase(laplacian, 1e-3, np.ones(5))
        with self.assertRaises(PhaseWalkError):
            solve_phase(laplacian, 1e-3, np.array([1.0, -1.0, 0.0, 0.0]))

    def test_system_reuses_factor_for_blocks(self) -> None:
        rng = np.random.default_rng(5)
        laplacian = _random_laplacian(rng, 30)
        system = RandomWalkSystem(laplacian, 0.05)
        block = rng.uniform(size=(30, 4))
        solved = system.solve(block)
        for column in range(4):
            assert_allclose(solved[:, column], system.solve(block[:, column]), atol=1e-14)


class SolveAllPhasesTests(unittest.TestCase):
    def _setup(self, frames: int = 60, phases: int = 4):
        rng = np.random.default_rng(6)
        features = FeatureSequence(rng.standard_normal((frames, 8)) + 0.5)
        graph = build_chain_graph(features, beta=5.0, convention="distance")
        values = np.zeros((phases, frames))
        for s in range(phases):
            values[s, s * (frames // phases)] = 1.0
        return graph.laplacian(), PriorMatrix(values)

    def test_rows_match_single_phase_solves(self) -> None:
        laplacian, prior = self._setup()
        probs = solve_all_phases(laplacian, 1e-3, prior)
        self.assertFalse(probs.corrected)
        for s in range(prior.num_phases):
            assert_allclose(probs.values[s], solve_phase(laplacian, 1e-3, prior.values[s]), atol=1e-12)

    def test_threaded_equals_sequential(self) -> None:
        laplacian, prior = self._setup()
        sequential = solve_all_phases(laplacian, 1e-3, prior)
        threaded = solve_all_phases(laplacian, 1e-3, prior, max_workers=4)
        assert_allclose(threaded.values, sequential.values, atol=1e-14)

    def test_frame_count_mismatch(self) -> None:
        laplacian, _ = self._setup(frames=60)
        with self.assertRaises(DimensionMismatch):
            solve_all_phases(laplacian, 1e-3, PriorMatrix(np.ones((2, 59))))

    def test_long_video_is_fast(self) -> None:
        rng = np.random.default_rng(7)
        frames, phases = 100_000, 7
        laplacian = _random_laplacian(rng, frames)
        values = np.zeros((phases, frames))
        values[np.arange(phases), rng.choice(frames, size=phases, replace=False)] = 1.0
        prior = PriorMatrix(values)
        started = time.perf_counter()
        probs = solve_all_phases(laplacian, 1e-3, prior)
        elapsed = time.perf_counter() - started
        self.assertEqual(probs.values.shape, (phases, frames))
        self.assertLess(elapsed, 1.0)


class CorrectionAndDecodeTests(unittest.TestCase):
    def test_correction_restores_unit_column_sums(self) -> None:
        probs = ProbabilityMatrix(np.array([[0.2], [0.2]]))
        corrected = apply_correction(probs)
        self.assertTrue(corrected.corrected)
        assert_allclose(corrected.values, [[0.5], [0.5]])

    def test_correction_keeps_ordering_and_may_go_negative(self) -> None:
        probs = ProbabilityMatrix(np.array([[0.9, 0.0], [0.8, 0.1], [0.1, 0.3]]))
        corrected = apply_correction(probs)
        assert_allclose(corrected.values.sum(axis=0), 1.0, atol=1e-12)
        self.assertLess(corrected.values[2, 0], 0.0)
        assert_array_equal(decode(corrected).labels, decode(probs).labels)

    def test_correction_twice_is_rejected(self) -> None:
        corrected = apply_correction(ProbabilityMatrix(np.array([[0.1, 0.2], [0.3, 0.4]])))
        with self.assertRaises(AlreadyCorrected):
            apply_correction(corrected)

    def test_random_matrix_keeps_frame_argmax(self) -> None:
        probs = ProbabilityMatrix(np.random.default_rng(10).uniform(size=(7, 100)))
        assert_array_equal(decode(apply_correction(probs)).labels, decode(probs).labels)

    def test_random_seven_phase_instances(self) -> None:
        rng = np.random.default_rng(11)
        for trial in range(50):
            frames = int(rng.integers(2, 300))
            features = FeatureSequence(rng.standard_normal((frames, 8)))
            convention = WEIGHT_CONVENTIONS[trial % 2]
            gamma = float(rng.choice([1e-4, 1e-3, 1e-2]))
            laplacian = build_chain_graph(features, beta=2.0, convention=convention).laplacian()
            prior = PriorMatrix(rng.uniform(0.0, 1.0, size=(7, frames)))
            raw = solve_all_phases(laplacian, gamma, prior)
            corrected = apply_correction(raw)
            with self.subTest(trial=trial, frames=frames, convention=convention, gamma=gamma):
                lower = prior.values.min(axis=1, keepdims=True) - 1e-10
                upper = prior.values.max(axis=1, keepdims=True) + 1e-10
                self.assertTrue(np.all(raw.values >= lower))
                self.assertTrue(np.all(raw.values <= upper))
                self.assertLessEqual(np.abs(corrected.values.sum(axis=0) - 1.0).max(), 1e-12)
                assert_array_equal(decode(corrected).labels, decode(raw).labels)

    def test_decode_picks_smallest_phase_on_ties(self) -> None:
        probs = ProbabilityMatrix(np.array([[0.5, 0.1, 0.4], [0.5, 0.7, 0.4], [0.0, 0.2, 0.4]]))
        labels = decode(probs)
        assert_array_equal(labels.labels, [0, 1, 0])
        self.assertEqual(labels.num_phases, 3)


if __name__ == "__main__":
    unittest.main()
