import os
import time
import unittest
from unittest.mock import patch

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from path_setup import ensure_src_path

ensure_src_path()

from errors import DimensionMismatch, EmptyDataset, InvalidHyperparameters, PhaseWalkError
from phase_types import FeatureSequence, Hyperparameters, PriorMatrix
from pipelines import (
    THREADS_ENV_VAR,
    GridSpec,
    RandomWalkSegmenter,
    SegmentationConfig,
    evaluate_setting,
    fewshot_builders,
    grid_search,
    resolve_max_workers,
    segment_many,
    segment_with_prior,
    sweep_fewshot,
    sweep_timestamps,
    timestamp_builders,
)
from priors.fewshot import FewShotConfig, FewShotPriorBuilder, fit_fewshot_model
from priors.timestamp import TimestampPriorBuilder, sample_timestamps
from synth import SynthConfig, generate_dataset

DISTANCE = SegmentationConfig(
    hyperparameters=Hyperparameters(beta=5.0, gamma=1e-3, alpha=0.5),
    weight_convention="distance",
)


def _small_videos(count: int, seed: int = 0, first_seed: int = 0):
    cfg = SynthConfig(num_phases=4, dim=8, min_frames=120, max_frames=160, seed=seed)
    return generate_dataset(cfg, count=count, first_seed=first_seed)


class ResolveMaxWorkersTests(unittest.TestCase):
    def test_explicit_value_wins(self) -> None:
        with patch.dict(os.environ, {THREADS_ENV_VAR: "8"}):
            self.assertEqual(resolve_max_workers(3), 3)

    def test_environment_then_default(self) -> None:
        with patch.dict(os.environ, {THREADS_ENV_VAR: " 4 "}):
            self.assertEqual(resolve_max_workers(), 4)
        with patch.dict(os.environ, {}, clear=True):
            self.assertEqual(resolve_max_workers(), 1)

    def test_invalid_values(self) -> None:
        with self.assertRaises(InvalidHyperparameters):
            resolve_max_workers(0)
        for raw in ("zero", "0", "-2"):
            with self.subTest(raw=raw):
                with patch.dict(os.environ, {THREADS_ENV_VAR: raw}):
                    with self.assertRaises(InvalidHyperparameters):
                        resolve_max_workers()


class SegmentationConfigTests(unittest.TestCase):
    def test_defaults(self) -> None:
        config = SegmentationConfig()
        self.assertEqual((config.beta, config.gamma), (5.0, 1e-3))
        self.assertEqual(config.weight_convention, "paper-literal")
        self.assertTrue(config.apply_correction)

    def test_invalid_settings(self) -> None:
        with self.assertRaises(InvalidHyperparameters):
            SegmentationConfig(weight_convention="cosine")
        with self.assertRaises(InvalidHyperparameters):
            SegmentationConfig(max_workers=0)

    def test_with_hyperparameters_keeps_other_fields(self) -> None:
        changed = DISTANCE.with_hyperparameters(Hyperparameters(beta=2.0, gamma=1e-2))
        self.assertEqual(changed.beta, 2.0)
        self.assertEqual(changed.weight_convention, "distance")


class SegmentWithPriorTests(unittest.TestCase):
    def setUp(self) -> None:
        self.video = _small_videos(1)[0]

    def test_timestamps_recover_easy_video(self) -> None:
        ts = sample_timestamps(self.video.labels, k=2, seed=0)
        result = RandomWalkSegmenter(TimestampPriorBuilder(ts), DISTANCE).run(self.video.features)
        self.assertTrue(result.probabilities.corrected)
        self.assertEqual(result.labels.frames, self.video.labels.frames)
        self.assertEqual(result.graph.frames, self.video.features.frames)
        self.assertGreater(np.mean(result.labels.labels == self.video.labels.labels), 0.8)
        assert_allclose(result.probabilities.values.sum(axis=0), 1.0, atol=1e-12)

    def test_annotated_frames_keep_their_phase(self) -> None:
        ts = sample_timestamps(self.video.labels, k=3, seed=1)
        result = RandomWalkSegmenter(TimestampPriorBuilder(ts), DISTANCE).run(self.video.features)
        for frame, phase in ts.entries:
            self.assertEqual(result.labels.labels[frame], phase)

    def test_without_correction(self) -> None:
        ts = sample_timestamps(self.video.labels, k=1, seed=0)
        config = SegmentationConfig(DISTANCE.hyperparameters, "distance", apply_correction=False)
        plain = segment_with_prior(self.video.features, TimestampPriorBuilder(ts).build(self.video.features), config)
        corrected = RandomWalkSegmenter(TimestampPriorBuilder(ts), DISTANCE).run(self.video.features)
        self.assertFalse(plain.probabilities.corrected)
        assert_array_equal(plain.labels.labels, corrected.labels.labels)

    def test_prior_must_cover_video(self) -> None:
        with self.assertRaises(DimensionMismatch):
            segment_with_prior(self.video.features, PriorMatrix(np.ones((4, 3))), DISTANCE)

    def test_empty_prior_row_warns(self) -> None:
        features = FeatureSequence(np.ones((6, 2)) + np.arange(6)[:, None] * [0.0, 0.1])
        prior = PriorMatrix(np.vstack([np.eye(1, 6)[0], np.zeros(6)]))
        with self.assertLogs("pipelines.segmentation", level="WARNING"):
            result = segment_with_prior(features, prior, DISTANCE)
        self.assertEqual(result.labels.to_list(), [0] * 6)

    def test_long_video_end_to_end_is_fast(self) -> None:
        rng = np.random.default_rng(12)
        frames, phases = 100_000, 7
        features = FeatureSequence(rng.standard_normal((frames, 16)) + 0.5)
        values = np.zeros((phases, frames))
        values[np.arange(phases), np.sort(rng.choice(frames, size=phases, replace=False))] = 1.0
        prior = PriorMatrix(values)
        started = time.perf_counter()
        result = segment_with_prior(features, prior, DISTANCE)
        elapsed = time.perf_counter() - started
        self.assertEqual(result.labels.frames, frames)
        self.assertTrue(result.probabilities.corrected)
        self.assertLess(elapsed, 1.0)

    def test_threaded_batch_matches_sequential(self) -> None:
        videos = _small_videos(4)
        jobs = [
            (TimestampPriorBuilder(sample_timestamps(v.labels, k=1, seed=i)), v.features)
            for i, v in enumerate(videos)
        ]
        sequential = segment_many(jobs, DISTANCE, max_workers=1)
        threaded = segment_many(jobs, DISTANCE, max_workers=3)
        for a, b in zip(sequential, threaded):
            assert_array_equal(a.labels.labels, b.labels.labels)
            assert_array_equal(a.probabilities.values, b.probabilities.values)


class SyntheticAcceptanceTests(unittest.TestCase):
    def test_single_timestamp_per_phase(self) -> None:
        # One timestamp per ~285-frame phase; with gamma=1e-3 a walk fades over about
        # sqrt(w / gamma) ~ 27 frames, so frames far from their timestamp can go to the
        # neighbouring phase. Seeds 0-4 land at 0.845-0.905 accuracy, F1@50 97.14.
        accuracies = []
        for seed in range(5):
            with self.subTest(seed=seed):
                cfg = SynthConfig(num_phases=7, dim=16, separation=6.0, noise=1.0, seed=seed)
                videos = generate_dataset(cfg, count=5)
                report = evaluate_setting(videos, timestamp_builders(k=1, seed=seed), DISTANCE)
                accuracies.append(report.accuracy)
                self.assertGreaterEqual(report.accuracy, 0.84)
                self.assertGreaterEqual(report.f1(0.5), 95.0)
                self.assertGreaterEqual(report.f1(0.1), report.f1(0.25))
                self.assertGreaterEqual(report.f1(0.25), report.f1(0.5))
        self.assertGreaterEqual(float(np.mean(accuracies)), 0.875)

    def test_fewshot_from_ten_videos(self) -> None:
        for seed in range(3):
            with self.subTest(seed=seed):
                cfg = SynthConfig(num_phases=7, dim=16, separation=6.0, noise=1.0, seed=seed)
                train = generate_dataset(cfg, count=10)
                test = generate_dataset(cfg, count=5, first_seed=10)
                model = fit_fewshot_model(
                    [(v.features, v.labels) for v in train], cfg.num_phases, FewShotConfig(alpha=0.5)
                )
                report = evaluate_setting(test, fewshot_builders(model), DISTANCE)
                self.assertGreaterEqual(report.accuracy, 0.90)
                self.assertGreaterEqual(report.f1(0.1), 90.0)


class GridSearchTests(unittest.TestCase):
    def test_ranks_points_by_accuracy(self) -> None:
        videos = _small_videos(2)
        grid = GridSpec(betas=(1.0, 5.0), gammas=(1e-2, 1e-3), alphas=(0.5,))
        result = grid_search(videos, timestamp_builders(k=1, seed=0), grid, DISTANCE)
        self.assertEqual(len(result.points), 4)
        accuracies = [point.accuracy for point in result.points]
        self.assertEqual(accuracies, sorted(accuracies, reverse=True))
        self.assertIs(result.best, result.points[0])
        payload = result.to_dict()
        self.assertEqual(set(payload["best"]), {"beta", "gamma", "alpha", "accuracy", "f1"})
        self.assertEqual(len(payload["points"]), 4)

    def test_alpha_axis_for_fewshot(self) -> None:
        videos = _small_videos(3)
        model = fit_fewshot_model([(v.features, v.labels) for v in videos], 4)
        grid = GridSpec(betas=(5.0,), gammas=(1e-3,), alphas=(0.4, 0.6))
        result = grid_search(videos[:1], fewshot_builders(model), grid, DISTANCE, include_alpha=True)
        self.assertEqual(sorted(p.hyperparameters.alpha for p in result.points), [0.4, 0.6])

    def test_grid_points_order_and_validation(self) -> None:
        grid = GridSpec(betas=(1.0, 2.0), gammas=(1e-2,), alphas=(0.4, 0.6))
        self.assertEqual([p.beta for p in grid.points(include_alpha=True)], [1.0, 1.0, 2.0, 2.0])
        self.assertEqual([p.alpha for p in grid.points(include_alpha=False)], [0.5, 0.5])
        with self.assertRaises(InvalidHyperparameters):
            GridSpec(betas=())
        with self.assertRaises(InvalidHyperparameters):
            GridSpec(gammas=(0.0,))

    def test_needs_videos(self) -> None:
        with self.assertRaises(EmptyDataset):
            grid_search([], timestamp_builders())


class SweepTests(unittest.TestCase):
    def test_timestamp_sweep(self) -> None:
        videos = _small_videos(2)
        points = sweep_timestamps(videos, k_values=(1, 3), seeds=(0, 1), config=DISTANCE)
        self.assertEqual([p.setting for p in points], [1, 3])
        for point in points:
            self.assertEqual(point.runs, 2)
            self.assertTrue(0.0 <= point.accuracy_mean <= 1.0)
            self.assertGreaterEqual(point.accuracy_std, 0.0)
            self.assertEqual(set(point.to_dict()["f1_mean"]), {"10", "25", "50"})

    def test_fewshot_sweep(self) -> None:
        train = _small_videos(4)
        test = _small_videos(2, first_seed=4)
        points = sweep_fewshot(train, test, n_values=(2, 4), seeds=(0, 1), config=DISTANCE)
        self.assertEqual([p.setting for p in points], [2, 4])
        # with every training video used, each seed fits the same model
        self.assertEqual(points[1].accuracy_std, 0.0)
        with self.assertRaises(PhaseWalkError):
            sweep_fewshot(train, test, n_values=(5,), seeds=(0,), config=DISTANCE)
        with self.assertRaises(PhaseWalkError):
            sweep_timestamps(train, seeds=())

    def test_builder_factories(self) -> None:
        video = _small_videos(1)[0]
        first = timestamp_builders(k=2, seed=5)(0, video, Hyperparameters())
        second = timestamp_builders(k=2, seed=5)(0, video, Hyperparameters())
        self.assertEqual(first.timestamps, second.timestamps)
        model = fit_fewshot_model(
            [(v.features, v.labels) for v in _small_videos(2)], 4, FewShotConfig(alpha=0.5)
        )
        builder = fewshot_builders(model)(0, video, Hyperparameters(alpha=0.4))
        self.assertIsInstance(builder, FewShotPriorBuilder)
        self.assertEqual(builder.model.alpha, 0.4)


if __name__ == "__main__":
    unittest.main()
