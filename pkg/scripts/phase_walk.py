from __future__ import annotations

import argparse
import json
import logging
from pathlib import Path
import sys
from typing import Any, Sequence

EXIT_OK = 0
EXIT_DATA = 2
EXIT_USAGE = 64

TIMESTAMP_SUFFIX = ".timestamps.json"


def setup_logging(verbose: bool = False) -> None:
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(levelname)s - %(message)s",
        datefmt="%H:%M:%S",
        stream=sys.stderr,
    )


logger = logging.getLogger(__name__)


def _ensure_src_on_path() -> None:
    repo_root = Path(__file__).resolve().parents[1]
    src_path = repo_root / "src"
    if str(src_path) not in sys.path:
        sys.path.insert(0, str(src_path))


_ensure_src_on_path()

from errors import EmptyDataset, FormatError, FrameOutOfRange, LengthMismatch, PhaseWalkError
from evaluation import evaluate
from formats import (
    FEATURE_SUFFIX,
    LABEL_SUFFIX,
    PREDICTION_SUFFIX,
    dump_json,
    load_dataset,
    read_features,
    read_frame_matrix,
    read_labels,
    read_model,
    read_predictions,
    read_timestamps,
    read_with_context,
    save_video,
    split_ids,
    write_frame_matrix,
    write_model,
    write_predictions,
)
from formats.dataset import feature_paths
from graph import WEIGHT_CONVENTIONS
from phase_types import FeatureSequence, Hyperparameters
from pipelines import (
    GridSpec,
    SegmentationConfig,
    fewshot_builders,
    grid_search,
    resolve_max_workers,
    segment_many,
    sweep_fewshot,
    sweep_timestamps,
    timestamp_builders,
)
from plotting import write_prior_svg, write_ribbon_csv, write_ribbon_svg
from priors import FewShotConfig, FewShotPriorBuilder, TimestampPriorBuilder, fit_fewshot_model
from priors.base import PriorBuilder
from synth import SynthConfig, generate_dataset


class UsageError(Exception):
    """Flag misuse; maps to ``EXIT_USAGE``."""


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _float_list(raw: str) -> list[float]:
    try:
        return [float(item) for item in raw.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {raw!r}") from None


def _int_list(raw: str) -> list[int]:
    try:
        return [int(item) for item in raw.split(",") if item.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {raw!r}") from None


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--verbose", "-v",
        action="store_true",
        help="Enable verbose logging (DEBUG level).",
    )


def _add_walk_options(parser: argparse.ArgumentParser) -> None:
    defaults = Hyperparameters()
    parser.add_argument("--beta", type=float, default=defaults.beta, help="Edge weight sharpness.")
    parser.add_argument("--gamma", type=float, default=defaults.gamma, help="Prior strength.")
    parser.add_argument(
        "--alpha",
        type=float,
        default=None,
        help="Temporal prior threshold for few-shot mode (default: the model's alpha).",
    )
    parser.add_argument(
        "--weight-convention",
        type=str,
        default="paper-literal",
        choices=list(WEIGHT_CONVENTIONS),
        help="paper-literal: exp(-beta*cos); distance: exp(-beta*(1-cos)).",
    )
    parser.add_argument(
        "--no-correction",
        action="store_true",
        help="Skip the per-frame sum-to-one correction before arg-max.",
    )
    parser.add_argument(
        "--raw-spatial",
        action="store_true",
        help="Use unnormalized Gaussian densities as the few-shot spatial prior.",
    )
    parser.add_argument(
        "--threads",
        type=int,
        default=None,
        help="Videos processed in parallel. Same effect as setting PHASE_WALK_THREADS.",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="phase_walk",
        description="Surgical phase segmentation by random walks on a frame chain graph.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    fit = subparsers.add_parser("fit", help="Fit a few-shot model from a labelled dataset directory.")
    fit.add_argument("dataset_dir", type=Path)
    fit.add_argument("--alpha", type=float, default=Hyperparameters().alpha)
    fit.add_argument("--epsilon", type=float, default=None, help="Covariance shrinkage (default: 1e-3*trace/M).")
    fit.add_argument("--num-phases", type=int, default=None)
    fit.add_argument("--out", type=Path, required=True, help="Output model JSON.")
    _add_common(fit)
    fit.set_defaults(handler=cmd_fit, command_parser=fit)

    segment = subparsers.add_parser("segment", help="Segment one video or a directory of videos.")
    segment.add_argument("--features", type=Path, required=True, help="Feature file or directory.")
    segment.add_argument("--mode", choices=["timestamps", "fewshot"], default=None)
    segment.add_argument("--timestamps", type=Path, default=None, help="Timestamps JSON (or directory).")
    segment.add_argument("--model", type=Path, default=None, help="Few-shot model JSON from 'fit'.")
    segment.add_argument("--out", type=Path, required=True, help="Predictions CSV (or directory).")
    segment.add_argument("--probs", action="store_true", help="Append per-phase probability columns.")
    segment.add_argument("--prior-out", type=Path, default=None, help="Write the prior matrix as CSV.")
    segment.add_argument("--grid", type=Path, default=None, help="Validation directory for a grid search.")
    segment.add_argument("--grid-k", type=int, default=1, help="Timestamps per phase on validation videos.")
    segment.add_argument("--grid-seed", type=int, default=0)
    segment.add_argument("--grid-out", type=Path, default=None, help="Write every grid point as JSON.")
    _add_walk_options(segment)
    _add_common(segment)
    segment.set_defaults(handler=cmd_segment, command_parser=segment)

    evaluation = subparsers.add_parser("eval", help="Accuracy and segmental F1 of predictions.")
    evaluation.add_argument("--pred", type=Path, action="append", required=True, help="Prediction CSV or directory.")
    evaluation.add_argument("--gt", type=Path, action="append", required=True, help="Label CSV or directory.")
    evaluation.add_argument(
        "--overlap",
        type=_float_list,
        default=[10.0, 25.0, 50.0],
        help="Comma-separated IoU thresholds in percent (default: 10,25,50).",
    )
    evaluation.add_argument("--out", type=Path, default=None, help="Write the report JSON here too.")
    _add_common(evaluation)
    evaluation.set_defaults(handler=cmd_eval, command_parser=evaluation)

    synth = subparsers.add_parser("synth", help="Write a synthetic dataset directory.")
    synth_defaults = SynthConfig()
    synth.add_argument("--config", type=Path, default=None, help="SynthConfig JSON; flags override it.")
    synth.add_argument("--num-phases", type=int, default=None)
    synth.add_argument("--dim", type=int, default=None)
    synth.add_argument("--videos", type=int, default=None)
    synth.add_argument("--min-frames", type=int, default=None)
    synth.add_argument("--max-frames", type=int, default=None)
    synth.add_argument("--separation", type=float, default=None)
    synth.add_argument("--noise", type=float, default=None)
    synth.add_argument("--seed", type=int, default=None, help=f"Default {synth_defaults.seed}.")
    synth.add_argument("--first-seed", type=int, default=0, help="Seed of the first video.")
    synth.add_argument("--out", type=Path, required=True)
    _add_common(synth)
    synth.set_defaults(handler=cmd_synth, command_parser=synth)

    plot = subparsers.add_parser("plot", help="Phase ribbon (SVG or CSV) or prior heatmap (SVG).")
    plot.add_argument("--pred", type=Path, default=None)
    plot.add_argument("--gt", type=Path, default=None)
    plot.add_argument("--prior", type=Path, default=None, help="Prior CSV from 'segment --prior-out'.")
    plot.add_argument("--out", type=Path, required=True, help="Output .svg or .csv.")
    _add_common(plot)
    plot.set_defaults(handler=cmd_plot, command_parser=plot)

    sweep = subparsers.add_parser("sweep", help="Multi-seed sweep over the amount of supervision.")
    sweep.add_argument("--mode", choices=["timestamps", "fewshot"], required=True)
    sweep.add_argument("--data", type=Path, default=None, help="Dataset directory (default: synthetic).")
    sweep.add_argument("--videos", type=int, default=20, help="Synthetic videos when --data is omitted.")
    sweep.add_argument("--synth-seed", type=int, default=0)
    sweep.add_argument("--k", type=_int_list, default=[1, 2, 3, 5], help="Timestamps per phase.")
    sweep.add_argument("--n", type=_int_list, default=[5, 10], help="Few-shot training set sizes.")
    sweep.add_argument("--seeds", type=_int_list, default=[0, 1, 2])
    sweep.add_argument("--out", type=Path, required=True, help="Output JSON table.")
    _add_walk_options(sweep)
    _add_common(sweep)
    sweep.set_defaults(handler=cmd_sweep, command_parser=sweep)
    return parser


def _check_walk_args(parser: argparse.ArgumentParser, args: argparse.Namespace) -> None:
    if not args.beta > 0:
        parser.error(f"--beta must be positive, got {args.beta}")
    if not args.gamma > 0:
        parser.error(f"--gamma must be positive, got {args.gamma}")
    if args.alpha is not None and not 0 < args.alpha < 1:
        parser.error(f"--alpha must lie in (0, 1), got {args.alpha}")
    if args.threads is not None and args.threads < 1:
        parser.error(f"--threads must be at least 1, got {args.threads}")


def _segmentation_config(args: argparse.Namespace, alpha: float | None = None) -> SegmentationConfig:
    defaults = Hyperparameters()
    return SegmentationConfig(
        hyperparameters=Hyperparameters(
            beta=args.beta,
            gamma=args.gamma,
            alpha=alpha if alpha is not None else (args.alpha or defaults.alpha),
        ),
        weight_convention=args.weight_convention,
        apply_correction=not args.no_correction,
        normalize_spatial=not args.raw_spatial,
    )


def cmd_fit(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    if not 0 < args.alpha < 1:
        parser.error(f"--alpha must lie in (0, 1), got {args.alpha}")
    if args.epsilon is not None and not args.epsilon > 0:
        parser.error(f"--epsilon must be positive, got {args.epsilon}")
    records = load_dataset(args.dataset_dir, num_phases=args.num_phases)
    num_phases = args.num_phases or records[0].labels.num_phases
    model = fit_fewshot_model(
        [(record.features, record.labels) for record in records],
        num_phases,
        FewShotConfig(alpha=args.alpha, epsilon=args.epsilon),
    )
    args.out.parent.mkdir(parents=True, exist_ok=True)
    write_model(model, args.out)
    for phase, count in enumerate(model.gaussians.counts):
        print(f"phase {phase}: {int(count)} samples")
    logger.info(f"[CLI] wrote few-shot model ({num_phases} phases) to {args.out}")
    return EXIT_OK


def _segment_inputs(args: argparse.Namespace) -> list[tuple[str, Path]]:
    if args.features.is_dir():
        paths = feature_paths(args.features)
        if not paths:
            raise EmptyDataset(f"{args.features}: no '*{FEATURE_SUFFIX}' files")
        return list(paths.items())
    return [(args.features.name.removesuffix(FEATURE_SUFFIX), args.features)]


def _timestamp_path(args: argparse.Namespace, video_id: str) -> Path:
    if args.timestamps.is_dir():
        return args.timestamps / f"{video_id}{TIMESTAMP_SUFFIX}"
    return args.timestamps


def _resolve_mode(args: argparse.Namespace, parser: argparse.ArgumentParser) -> str:
    if args.timestamps is not None and args.model is not None:
        parser.error("--timestamps and --model are mutually exclusive")
    mode = args.mode or ("fewshot" if args.model is not None else "timestamps")
    if mode == "timestamps" and args.timestamps is None:
        parser.error("timestamps mode needs --timestamps")
    if mode == "fewshot" and args.model is None:
        parser.error("fewshot mode needs --model")
    return mode


def _grid_search(
    args: argparse.Namespace,
    mode: str,
    config: SegmentationConfig,
    model: Any,
) -> SegmentationConfig:
    validation = load_dataset(args.grid)
    if mode == "timestamps":
        factory = timestamp_builders(k=args.grid_k, seed=args.grid_seed)
    else:
        factory = fewshot_builders(model, normalize_spatial=config.normalize_spatial)
    result = grid_search(validation, factory, GridSpec(), config, include_alpha=mode == "fewshot")
    if args.grid_out is not None:
        dump_json(result.to_dict(), args.grid_out)
    return config.with_hyperparameters(result.best.hyperparameters)


def cmd_segment(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    _check_walk_args(parser, args)
    mode = _resolve_mode(args, parser)
    inputs = _segment_inputs(args)
    batch = args.features.is_dir()
    if args.prior_out is not None and batch:
        parser.error("--prior-out needs a single --features file")
    if batch and mode == "timestamps" and not args.timestamps.is_dir():
        parser.error(f"a --features directory needs a --timestamps directory of <id>{TIMESTAMP_SUFFIX} files")

    model = None
    if mode == "fewshot":
        model = read_with_context(args.model, read_model)
        config = _segmentation_config(args, alpha=args.alpha or model.alpha)
    else:
        config = _segmentation_config(args)
    if args.grid is not None:
        config = _grid_search(args, mode, config, model)

    jobs: list[tuple[PriorBuilder, FeatureSequence]] = []
    for video_id, path in inputs:
        features = read_with_context(path, read_features)
        if mode == "fewshot":
            builder: PriorBuilder = FewShotPriorBuilder(
                model.with_alpha(config.hyperparameters.alpha), config.normalize_spatial
            )
        else:
            ts_path = _timestamp_path(args, video_id)
            timestamps = read_with_context(ts_path, read_timestamps)
            try:
                timestamps.check_frames(features.frames)
            except FrameOutOfRange as exc:
                raise FormatError(f"{ts_path}: {exc} of {path.name}") from exc
            builder = TimestampPriorBuilder(timestamps)
        jobs.append((builder, features))

    results = segment_many(jobs, config, max_workers=resolve_max_workers(args.threads))
    if batch:
        args.out.mkdir(parents=True, exist_ok=True)
    else:
        args.out.parent.mkdir(parents=True, exist_ok=True)
    for (video_id, _), result in zip(inputs, results):
        out = args.out / f"{video_id}{PREDICTION_SUFFIX}" if batch else args.out
        write_predictions(result.labels, out, result.probabilities if args.probs else None)
        logger.info(f"[CLI] {video_id}: {result.labels.frames} frame(s) -> {out}")
    if args.prior_out is not None:
        write_frame_matrix(results[0].prior.values, args.prior_out)
    return EXIT_OK


def _pair_paths(preds: Sequence[Path], gts: Sequence[Path]) -> list[tuple[str, Path, Path]]:
    if len(preds) == 1 and len(gts) == 1 and preds[0].is_dir() and gts[0].is_dir():
        pred_paths = {
            path.name.removesuffix(PREDICTION_SUFFIX): path
            for path in sorted(preds[0].glob(f"*{PREDICTION_SUFFIX}"))
        }
        gt_paths = {
            path.name.removesuffix(LABEL_SUFFIX): path
            for path in sorted(gts[0].glob(f"*{LABEL_SUFFIX}"))
        }
        missing = sorted(set(pred_paths) - set(gt_paths))
        if missing:
            raise FormatError(f"{pred_paths[missing[0]]}: no matching ground-truth labels")
        return [(video_id, pred_paths[video_id], gt_paths[video_id]) for video_id in sorted(pred_paths)]
    if len(preds) != len(gts):
        raise LengthMismatch(len(preds), len(gts), what="--pred and --gt lists")
    return [(pred.name, pred, gt) for pred, gt in zip(preds, gts)]


def cmd_eval(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    overlaps = [value / 100.0 for value in args.overlap]
    if not overlaps or any(not 0 < overlap <= 1 for overlap in overlaps):
        parser.error("--overlap values must lie in (0, 100]")
    triples = _pair_paths(args.pred, args.gt)
    if not triples:
        raise EmptyDataset("no prediction files to evaluate")
    preds, gts, ids = [], [], []
    for video_id, pred_path, gt_path in triples:
        pred, _ = read_with_context(pred_path, read_predictions)
        gt = read_with_context(gt_path, read_labels)
        if pred.frames != gt.frames:
            raise FormatError(f"{pred_path}: {LengthMismatch(pred.frames, gt.frames, 'prediction and ground truth')}")
        preds.append(pred)
        gts.append(gt)
        ids.append(video_id)
    report = evaluate(preds, gts, overlaps, video_ids=ids)
    payload = report.to_dict()
    if args.out is not None:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        dump_json(payload, args.out)
    print(json.dumps(payload, ensure_ascii=False, indent=2, sort_keys=True))
    return EXIT_OK


def _synth_config(args: argparse.Namespace) -> SynthConfig:
    payload: dict[str, Any] = {}
    if args.config is not None:
        payload.update(read_with_context(args.config, lambda path: json.loads(path.read_text(encoding="utf-8"))))
    overrides = {
        "num_phases": args.num_phases,
        "dim": args.dim,
        "num_videos": args.videos,
        "min_frames": args.min_frames,
        "max_frames": args.max_frames,
        "separation": args.separation,
        "noise": args.noise,
        "seed": args.seed,
    }
    payload.update({key: value for key, value in overrides.items() if value is not None})
    return SynthConfig.from_dict(payload)


def cmd_synth(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    try:
        cfg = _synth_config(args)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{args.config}: invalid JSON ({exc})") from exc
    except PhaseWalkError as exc:
        if isinstance(exc, FormatError):
            raise
        parser.error(str(exc))
    if args.first_seed < 0:
        parser.error("--first-seed must be non-negative")
    videos = generate_dataset(cfg, first_seed=args.first_seed)
    args.out.mkdir(parents=True, exist_ok=True)
    for video in videos:
        save_video(args.out, video.video_id, video.features, video.labels)
    dump_json({**cfg.to_dict(), "first_seed": args.first_seed}, args.out / "config.json")
    logger.info(f"[CLI] wrote {len(videos)} synthetic video(s) to {args.out}")
    return EXIT_OK


def cmd_plot(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    suffix = args.out.suffix.lower()
    if suffix not in (".svg", ".csv"):
        parser.error("--out must end in .svg or .csv")
    if args.prior is not None:
        if args.pred is not None or args.gt is not None:
            parser.error("--prior cannot be combined with --pred/--gt")
        if suffix != ".svg":
            parser.error("a prior heatmap is written as .svg")
        values = read_with_context(args.prior, read_frame_matrix)
        args.out.parent.mkdir(parents=True, exist_ok=True)
        write_prior_svg(values, args.out, title=args.prior.name)
        return EXIT_OK
    if args.pred is None or args.gt is None:
        parser.error("a ribbon needs both --pred and --gt")
    pred, _ = read_with_context(args.pred, read_predictions)
    gt = read_with_context(args.gt, read_labels)
    if pred.frames != gt.frames:
        raise FormatError(f"{args.pred}: {LengthMismatch(pred.frames, gt.frames, 'prediction and ground truth')}")
    args.out.parent.mkdir(parents=True, exist_ok=True)
    if suffix == ".csv":
        write_ribbon_csv(gt, pred, args.out)
    else:
        write_ribbon_svg(gt, pred, args.out, num_phases=max(gt.num_phases, pred.num_phases))
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace, parser: argparse.ArgumentParser) -> int:
    _check_walk_args(parser, args)
    if not args.seeds:
        parser.error("--seeds needs at least one value")
    if args.data is not None:
        videos = load_dataset(args.data)
    else:
        videos = generate_dataset(SynthConfig(num_videos=args.videos, seed=args.synth_seed))
    config = _segmentation_config(args)
    if args.mode == "timestamps":
        points = sweep_timestamps(videos, args.k, args.seeds, config)
    else:
        by_id = {video.video_id: video for video in videos}
        train_ids, _, test_ids = split_ids(sorted(by_id), seed=args.synth_seed)
        train = [by_id[video_id] for video_id in train_ids]
        test = [by_id[video_id] for video_id in test_ids]
        fewshot = FewShotConfig(alpha=config.hyperparameters.alpha, normalize_spatial=config.normalize_spatial)
        n_values = [n for n in args.n if n <= len(train)]
        if len(n_values) < len(args.n):
            logger.warning(f"[CLI] dropping N > {len(train)} (training split size)")
        points = sweep_fewshot(train, test, n_values, args.seeds, config, fewshot)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    dump_json(
        {
            "mode": args.mode,
            "hyperparameters": config.hyperparameters.to_dict(),
            "weight_convention": config.weight_convention,
            "seeds": list(args.seeds),
            "points": [point.to_dict() for point in points],
        },
        args.out,
    )
    return EXIT_OK


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        # --help
        return int(exc.code or 0)
    setup_logging(verbose=args.verbose)
    try:
        return args.handler(args, args.command_parser)
    except UsageError as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PhaseWalkError, OSError) as exc:
        logger.error(f"[CLI] {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
