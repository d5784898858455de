import unittest

import numpy as np
from numpy.testing import assert_array_equal

from path_setup import ensure_src_path

ensure_src_path()

from errors import DimensionMismatch, EmptyPhase, FrameOutOfRange, InvalidTimestampSet
from phase_types import FeatureSequence, LabelSequence, TimestampSet
from priors.base import time_bins
from priors.timestamp import TimestampPriorBuilder, sample_timestamps, timestamp_prior


class TimestampPriorTests(unittest.TestCase):
    def test_indicator_rows(self) -> None:
        ts = TimestampSet(((1, 0), (4, 2), (6, 1)), num_phases=3)
        prior = timestamp_prior(ts, frames=8, num_phases=3)
        self.assertEqual(prior.values.shape, (3, 8))
        expected = np.zeros((3, 8))
        expected[0, 1] = expected[2, 4] = expected[1, 6] = 1.0
        assert_array_equal(prior.values, expected)
        self.assertEqual(prior.values.sum(), len(ts))

    def test_missing_phase_gives_zero_row_and_warning(self) -> None:
        ts = TimestampSet(((0, 0), (5, 2)), num_phases=3)
        with self.assertLogs("priors.timestamp", level="WARNING") as logs:
            prior = timestamp_prior(ts, frames=6, num_phases=3)
        self.assertEqual(prior.empty_rows(), [1])
        self.assertIn("[1]", logs.output[0])

    def test_frame_outside_video(self) -> None:
        ts = TimestampSet(((0, 0), (10, 1)), num_phases=2)
        with self.assertRaises(FrameOutOfRange) as ctx:
            timestamp_prior(ts, frames=10, num_phases=2)
        self.assertEqual(ctx.exception.frame, 10)

    def test_phase_count_mismatch(self) -> None:
        ts = TimestampSet(((0, 0), (1, 1)), num_phases=2)
        with self.assertRaises(DimensionMismatch):
            timestamp_prior(ts, frames=4, num_phases=3)

    def test_builder_uses_video_length(self) -> None:
        builder = TimestampPriorBuilder(TimestampSet(((0, 0), (2, 1)), num_phases=2))
        features = FeatureSequence(np.ones((3, 2)))
        prior = builder.build(features)
        self.assertEqual(builder.num_phases, 2)
        assert_array_equal(prior.values, [[1.0, 0.0, 0.0], [0.0, 0.0, 1.0]])


class SampleTimestampsTests(unittest.TestCase):
    def setUp(self) -> None:
        self.labels = LabelSequence(np.repeat([0, 1, 2], [10, 3, 20]), num_phases=3)

    def test_draws_min_k_and_phase_size(self) -> None:
        ts = sample_timestamps(self.labels, k=5, seed=0)
        self.assertEqual(len(ts.frames_of(0)), 5)
        self.assertEqual(len(ts.frames_of(1)), 3)
        self.assertEqual(len(ts.frames_of(2)), 5)
        for frame, phase in ts.entries:
            self.assertEqual(self.labels.labels[frame], phase)

    def test_same_seed_same_draw(self) -> None:
        first = sample_timestamps(self.labels, k=2, seed=11)
        second = sample_timestamps(self.labels, k=2, seed=11)
        self.assertEqual(first, second)

    def test_single_timestamp_covers_every_phase(self) -> None:
        ts = sample_timestamps(self.labels, k=1, seed=3)
        self.assertEqual(len(ts), 3)
        self.assertTrue(ts.covers_all_phases)

    def test_absent_phase(self) -> None:
        labels = LabelSequence(np.array([0, 0, 2, 2]), num_phases=3)
        with self.assertLogs("priors.timestamp", level="WARNING"):
            ts = sample_timestamps(labels, k=1, seed=0)
        self.assertEqual(ts.missing_phases(), [1])
        with self.assertRaises(EmptyPhase) as ctx:
            sample_timestamps(labels, k=1, seed=0, require_all_phases=True)
        self.assertEqual(ctx.exception.phase, 1)

    def test_k_must_be_positive(self) -> None:
        with self.assertRaises(InvalidTimestampSet):
            sample_timestamps(self.labels, k=0, seed=0)


class TimeBinTests(unittest.TestCase):
    def test_bins_partition_frames_evenly(self) -> None:
        assert_array_equal(time_bins(4, 4), [0, 1, 2, 3])
        assert_array_equal(time_bins(8, 4), [0, 0, 1, 1, 2, 2, 3, 3])
        assert_array_equal(time_bins(5, 2), [0, 0, 0, 1, 1])

    def test_fewer_frames_than_bins(self) -> None:
        assert_array_equal(time_bins(3, 6), [0, 2, 4])


if __name__ == "__main__":
    unittest.main()
