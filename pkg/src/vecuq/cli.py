"""Command-line interface: fit, rank, eval, and synth subcommands.

Exit codes: 0 for success (including convergence warnings), 1 for input
errors, 2 for internal numerical failures.  The optional VECUQ_THREADS
environment variable caps the thread count used when scoring query batches.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import metrics, model_io, rank, synth
from .errors import NumericalError
from .reference import Beta, Exponential
from .scores import ScoreMatrix, stack

EXIT_OK = 0
EXIT_INPUT_ERROR = 1
EXIT_NUMERICAL_ERROR = 2


def _thread_cap() -> int:
    raw = os.environ.get("VECUQ_THREADS")
    if raw is None:
        return 1
    try:
        threads = int(raw)
    except ValueError:
        raise ValueError(f"VECUQ_THREADS must be an integer, got {raw!r}") from None
    if threads < 1:
        raise ValueError("VECUQ_THREADS must be at least 1")
    return threads


def _family_from_args(args):
    if args.target == "beta":
        return Beta(args.alpha, args.beta)
    return Exponential(args.exp_rate)


def cmd_fit(args) -> int:
    names, values = model_io.read_scores_csv(args.calibration)
    if values.shape[0] == 0:
        raise ValueError(f"{args.calibration}: no data rows")
    calibration = stack(list(values.T), names)
    model = rank.fit(
        calibration,
        args.scaling,
        _family_from_args(args),
        rank.AnchorConfig(args.gamma),
        args.epsilon,
        max_iters=args.max_iters,
        tol=args.tol,
    )
    model_io.save_model(model, args.out)
    coupling = model.coupling
    n_anchors = coupling.n_source - calibration.n_samples
    print(f"measures: {calibration.n_measures}")
    print(f"source size: {coupling.n_source} ({n_anchors} anchors)")
    print(f"reference size: {model.reference.n_atoms}")
    print(f"sinkhorn iterations: {coupling.iterations_run}")
    print(f"sinkhorn residual: {coupling.marginal_residual:.3e}")
    if coupling.marginal_residual > args.tol:
        print(
            f"warning: coupling did not reach tol {args.tol:.1e} "
            f"(residual {coupling.marginal_residual:.3e})",
            file=sys.stderr,
        )
    print(f"model written to {args.out}")
    return EXIT_OK


def _reorder_query(model, names, values, path):
    """Match query columns to the model's measures by name."""
    if len(set(model.measure_names)) != len(model.measure_names):
        raise ValueError(
            "the model has duplicate measure names, so columns cannot be "
            "matched by name; refit with distinct names"
        )
    missing = [n for n in model.measure_names if n not in names]
    extra = [n for n in names if n not in model.measure_names]
    if missing or extra:
        parts = []
        if missing:
            parts.append(f"missing columns {missing}")
        if extra:
            parts.append(f"unexpected columns {extra}")
        raise ValueError(f"{path}: query columns do not match the model: " + "; ".join(parts))
    order = [names.index(n) for n in model.measure_names]
    return values[:, order]


def _score_rows(model, values, threads: int) -> np.ndarray:
    query = ScoreMatrix(values, model.measure_names)
    if threads <= 1 or values.shape[0] < 2 * threads:
        return rank.rank_score(model, query)
    chunks = np.array_split(np.arange(values.shape[0]), threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = pool.map(
            lambda idx: rank.rank_score(model, ScoreMatrix(values[idx], model.measure_names)),
            [c for c in chunks if c.size],
        )
    return np.concatenate(list(parts))


def cmd_rank(args) -> int:
    model = model_io.load_model(args.model)
    names, values = model_io.read_scores_csv(args.query)
    if values.shape[0] == 0:
        model_io.write_ranks_csv(args.out, np.empty(0))
        print(f"0 rows ranked; output written to {args.out}")
        return EXIT_OK
    values = _reorder_query(model, list(names), values, args.query)
    scores = _score_rows(model, values, _thread_cap())
    model_io.write_ranks_csv(args.out, scores)
    print(f"{scores.size} rows ranked; output written to {args.out}")
    return EXIT_OK


def _read_eval_scores(path) -> np.ndarray:
    names, values = model_io.read_scores_csv(path, require_nonnegative=False)
    if "rank_score" in names:
        return values[:, names.index("rank_score")]
    if len(names) != 1:
        raise ValueError(
            f"{path}: expected a single score column (or a 'rank_score' column), "
            f"got columns {list(names)}"
        )
    return values[:, 0]


def cmd_eval(args) -> int:
    scores = _read_eval_scores(args.scores)
    labels = model_io.read_labels_csv(args.labels)
    if scores.size != labels.size:
        raise ValueError(
            f"row count mismatch: {args.scores} has {scores.size} rows, "
            f"{args.labels} has {labels.size}"
        )
    if args.metric == "roc_auc":
        value = metrics.roc_auc(scores, labels.astype(int))
    elif args.metric == "acc_cov":
        value = metrics.accuracy_coverage_auc(scores, labels.astype(int))
    else:
        value = metrics.prr(scores, labels, args.max_rejection)
    print(f"{args.metric}: {value:.4f}")
    print(f"{args.metric},{value!r}")
    return EXIT_OK


def _write_toy_outputs(report: dict, out_dir: Path) -> None:
    cal = report["calibration"]
    model_io.write_scores_csv(
        out_dir / "toy_calibration_scores.csv",
        cal.measure_names,
        [cal.values[:, j] for j in range(cal.n_measures)],
    )
    for split in ("test", "ood"):
        scores = report[f"{split}_scores"]
        model_io.write_scores_csv(
            out_dir / f"toy_{split}_scores.csv",
            list(scores.keys()),
            list(scores.values()),
        )
    # test rows followed by ood rows, aligned with toy_ood_labels.csv
    methods = list(report["test_scores"].keys())
    model_io.write_scores_csv(
        out_dir / "toy_eval_scores.csv",
        methods,
        [
            np.concatenate([report["test_scores"][m], report["ood_scores"][m]])
            for m in methods
        ],
    )
    model_io.write_scores_csv(
        out_dir / "toy_test_miscls_labels.csv", ["label"], [report["miscls_labels"]]
    )
    model_io.write_scores_csv(
        out_dir / "toy_ood_labels.csv", ["label"], [report["ood_labels"]]
    )
    model_io.save_model(report["model"], out_dir / "toy_model.json")


def cmd_synth(args) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if args.experiment == "toy":
        report = synth.toy_experiment_report(args.seed, ood_mean=tuple(args.ood_mean))
        _write_toy_outputs(report, out_dir)
        print(f"{'method':>14} {'miscls':>8} {'ood':>8}")
        for method, aucs in report["aucs"].items():
            print(f"{method:>14} {aucs['miscls']:8.4f} {aucs['ood']:8.4f}")
        print(f"score files written to {out_dir}")
    else:
        report = synth.blobs_report(args.seed)
        model_io.write_scores_csv(
            out_dir / "blobs_points.csv",
            ["x", "y", "label"],
            [report["points"][:, 0], report["points"][:, 1], report["labels"]],
        )
        model_io.write_scores_csv(
            out_dir / "blobs_scores.csv",
            ["x", "y", "entropy", "mahalanobis", "vecuq"],
            [
                report["grid"][:, 0],
                report["grid"][:, 1],
                report["entropy"],
                report["mahalanobis"],
                report["vecuq"],
            ],
        )
        print(f"blobs score maps written to {out_dir}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vecuq",
        description="Aggregate uncertainty score vectors into one transport-rank ordering.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    fit = sub.add_parser("fit", help="fit a rank model from a calibration score CSV")
    fit.add_argument("calibration", help="CSV with a header of measure names")
    fit.add_argument("--scaling", choices=["featurewise", "global", "identity"],
                     default="featurewise")
    fit.add_argument("--target", choices=["beta", "exp"], default="beta")
    fit.add_argument("--alpha", type=float, default=1.0, help="beta target shape alpha")
    fit.add_argument("--beta", type=float, default=1.0, help="beta target shape beta")
    fit.add_argument("--lambda", dest="exp_rate", type=float, default=1.0,
                     help="exponential target rate")
    fit.add_argument("--gamma", type=float, default=5.0,
                     help="outer-anchor multiplier; 0 disables anchors")
    fit.add_argument("--epsilon", type=float, default=0.5)
    fit.add_argument("--tol", type=float, default=1e-6)
    fit.add_argument("--max-iters", type=int, default=10000)
    fit.add_argument("--out", default="model.json")
    fit.set_defaults(func=cmd_fit)

    rank_cmd = sub.add_parser("rank", help="score a query CSV with a fitted model")
    rank_cmd.add_argument("model")
    rank_cmd.add_argument("query")
    rank_cmd.add_argument("--out", default="ranks.csv")
    rank_cmd.set_defaults(func=cmd_rank)

    eval_cmd = sub.add_parser("eval", help="evaluate a metric on scores and labels")
    eval_cmd.add_argument("scores")
    eval_cmd.add_argument("labels")
    eval_cmd.add_argument("--metric", choices=["roc_auc", "acc_cov", "prr"],
                          default="roc_auc")
    eval_cmd.add_argument("--max-rejection", type=float, default=0.5)
    eval_cmd.set_defaults(func=cmd_eval)

    synth_cmd = sub.add_parser("synth", help="run a synthetic experiment")
    synth_cmd.add_argument("experiment", choices=["toy", "blobs"])
    synth_cmd.add_argument("--seed", type=int, default=0)
    synth_cmd.add_argument("--out-dir", default="synth_out")
    synth_cmd.add_argument("--ood-mean", type=float, nargs=2,
                           default=list(synth.TOY_OOD_MEAN),
                           metavar=("X", "Y"))
    synth_cmd.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except (NumericalError, FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL_ERROR


if __name__ == "__main__":
    sys.exit(main())
