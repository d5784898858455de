import unittest

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from path_setup import ensure_src_path

ensure_src_path()

from errors import InvalidHyperparameters, PhaseWalkError
from graph import cosine_similarities
from synth import (
    SynthConfig,
    dense_solve_oracle,
    f1_bruteforce_oracle,
    generate_dataset,
    generate_video,
    phase_durations,
    phase_means,
)


def _small_config(**overrides) -> SynthConfig:
    values = dict(num_phases=4, dim=8, num_videos=3, min_frames=200, max_frames=260, seed=7)
    values.update(overrides)
    return SynthConfig(**values)


class SynthConfigTests(unittest.TestCase):
    def test_defaults_are_valid(self) -> None:
        cfg = SynthConfig()
        self.assertEqual((cfg.num_phases, cfg.dim), (7, 16))

    def test_dict_round_trip_ignores_unknown_keys(self) -> None:
        cfg = _small_config(separation=3.5)
        payload = {**cfg.to_dict(), "first_seed": 4}
        self.assertEqual(SynthConfig.from_dict(payload), cfg)

    def test_invalid_values(self) -> None:
        cases = [
            dict(num_phases=1),
            dict(dim=1),
            dict(min_frames=3),
            dict(max_frames=100),
            dict(separation=-1.0),
            dict(noise=0.0),
            dict(duration_min_ratio=1.5),
            dict(seed=-1),
        ]
        for overrides in cases:
            with self.subTest(**overrides):
                with self.assertRaises(InvalidHyperparameters):
                    _small_config(**overrides)


class GenerateVideoTests(unittest.TestCase):
    def test_same_seeds_give_identical_output(self) -> None:
        cfg = _small_config()
        f1, l1 = generate_video(cfg, 3)
        f2, l2 = generate_video(cfg, 3)
        self.assertEqual(f1.data.tobytes(), f2.data.tobytes())
        assert_array_equal(l1.labels, l2.labels)
        f3, _ = generate_video(cfg, 4)
        self.assertNotEqual(f1.data.tobytes(), f3.data.tobytes())

    def test_phases_appear_once_in_order(self) -> None:
        cfg = _small_config()
        for video_seed in range(10):
            features, labels = generate_video(cfg, video_seed)
            values = labels.labels
            self.assertTrue(cfg.min_frames <= labels.frames <= cfg.max_frames)
            self.assertEqual(features.frames, labels.frames)
            self.assertTrue(np.all(np.diff(values) >= 0))
            assert_array_equal(np.unique(values), np.arange(cfg.num_phases))

    def test_means_are_equidistant(self) -> None:
        cfg = _small_config(separation=5.0, noise=2.0)
        means = phase_means(cfg)
        distances = [
            np.linalg.norm(means[a] - means[b])
            for a in range(cfg.num_phases)
            for b in range(a + 1, cfg.num_phases)
        ]
        assert_allclose(distances, 10.0)

    def test_means_depend_on_config_seed_only(self) -> None:
        assert_array_equal(phase_means(_small_config()), phase_means(_small_config(num_videos=9)))
        self.assertFalse(np.array_equal(phase_means(_small_config()), phase_means(_small_config(seed=8))))

    def test_zero_separation_shares_one_distribution(self) -> None:
        cfg = _small_config(separation=0.0)
        assert_array_equal(phase_means(cfg), 0.0)
        features, _ = generate_video(cfg, 0)
        self.assertTrue(np.isfinite(features.data).all())

    def test_boundaries_show_up_in_cosine_similarity(self) -> None:
        cfg = _small_config(num_phases=2, min_frames=10, max_frames=10, separation=200.0)
        features, labels = generate_video(cfg, 0)
        cosines = cosine_similarities(features)
        boundary = int(np.flatnonzero(np.diff(labels.labels))[0])
        within = np.delete(cosines, boundary)
        self.assertGreater(within.min(), 0.99)
        self.assertLess(cosines[boundary], 0.5)

    def test_phase_means_are_recovered(self) -> None:
        cfg = _small_config(num_phases=7, dim=8, min_frames=500, max_frames=500)
        features, labels = generate_video(cfg, 1)
        means = phase_means(cfg)
        for phase in range(cfg.num_phases):
            empirical = features.data[labels.labels == phase].mean(axis=0)
            assert_allclose(empirical, means[phase], atol=0.4)

    def test_durations_sum_to_frames(self) -> None:
        cfg = _small_config()
        rng = np.random.default_rng(0)
        for frames in (4, 5, 17, 230):
            durations = phase_durations(cfg, frames, rng)
            self.assertEqual(int(durations.sum()), frames)
            self.assertTrue(np.all(durations >= 1))

    def test_dataset_ids_follow_seeds(self) -> None:
        videos = generate_dataset(_small_config(), first_seed=5)
        self.assertEqual([v.video_id for v in videos], ["video005", "video006", "video007"])
        with self.assertRaises(InvalidHyperparameters):
            generate_dataset(_small_config(), count=0)


class OracleTests(unittest.TestCase):
    def test_scalar_system(self) -> None:
        assert_allclose(dense_solve_oracle(np.zeros((1, 1)), 0.3, np.array([0.7])), [0.7])

    def test_constant_prior(self) -> None:
        laplacian = np.array([[1.0, -1.0, 0.0], [-1.0, 3.0, -2.0], [0.0, -2.0, 2.0]])
        assert_allclose(dense_solve_oracle(laplacian, 0.01, np.full(3, 0.4)), 0.4)

    def test_size_limit(self) -> None:
        with self.assertRaises(PhaseWalkError):
            dense_solve_oracle(np.zeros((501, 501)), 1.0, np.zeros(501))
        with self.assertRaises(PhaseWalkError):
            f1_bruteforce_oracle([0] * 51, [0] * 51, 0.5)

    def test_f1_oracle_trivial_cases(self) -> None:
        self.assertEqual(f1_bruteforce_oracle([0, 1, 1], [0, 1, 1], 0.5), 100.0)
        self.assertEqual(f1_bruteforce_oracle([0, 0], [1, 1], 0.1), 0.0)


if __name__ == "__main__":
    unittest.main()
