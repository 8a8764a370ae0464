"""Command-line entry point.

Subcommands: synth, fit, predict, eval, cv, recover, bench. Every command
validates its flags before doing any work, exits nonzero with a one-line
diagnostic on failure, and removes whatever files it had already written.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import baselines, landmark
from .exceptions import (EmptySupportError, ModelFormatError, SingularSystemError,
                         SolverDivergedError, SVDConvergenceError)
from .experiments import bench, cv, metrics, recovery, synthetic
from .io import CSVFormatError, Outputs, format_csv, format_table, read_csv
from .landmark import Dataset

FAILURES = (ValueError, RuntimeError, OSError, EmptySupportError, ModelFormatError,
            SingularSystemError, SolverDivergedError, SVDConvergenceError, CSVFormatError)


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _nonneg_float(text):
    value = float(text)
    if not np.isfinite(value) or value < 0:
        raise argparse.ArgumentTypeError(f"expected a finite nonnegative number, got {text}")
    return value


def _positive_float(text):
    value = _nonneg_float(text)
    if value == 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return value


def _int_list(text):
    try:
        values = [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text}") from None
    if any(v < 1 for v in values):
        raise argparse.ArgumentTypeError(f"expected positive integers, got {text}")
    return values


def _float_list(text):
    try:
        values = [float(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text}") from None
    if any(not np.isfinite(v) or v < 0 for v in values):
        raise argparse.ArgumentTypeError(f"expected nonnegative numbers, got {text}")
    return values


def _dataset(args):
    return Dataset(read_csv(args.x), read_csv(args.y), args.task)


def _y_header(k):
    return [f"y{j}" for j in range(k)]


# ---------------------------------------------------------------- commands

def cmd_synth(args, out):
    spec = synthetic.SyntheticSpec(
        k=args.k, d=args.d, s=args.s, n_train=args.n_train, n_test=args.n_test,
        sigma_landmark=args.sigma_landmark, sigma_dependent=args.sigma_dependent,
        within_row_density=args.density, seed=args.seed)
    gen = (synthetic.gen_synthetic_regression if args.task == "regression"
           else synthetic.gen_synthetic_classification)
    train, test, planted = gen(spec)
    os.makedirs(args.out, exist_ok=True)
    for name, ds in (("train", train), ("test", test)):
        out.write(os.path.join(args.out, f"{name}_X.csv"),
                  format_csv(ds.X, [f"x{j}" for j in range(spec.d)]))
        out.write(os.path.join(args.out, f"{name}_Y.csv"), format_csv(ds.Y, _y_header(spec.k)))
    doc = {
        "task": args.task,
        "spec": {"k": spec.k, "d": spec.d, "s": spec.s, "n_train": spec.n_train,
                 "n_test": spec.n_test, "sigma_landmark": spec.sigma_landmark,
                 "sigma_dependent": spec.sigma_dependent,
                 "within_row_density": spec.within_row_density, "seed": spec.seed},
        "landmarks": list(planted.L_star),
        "A_star": planted.A_star.tolist(),
        "W_star": planted.W_star.tolist(),
    }
    out.write(os.path.join(args.out, "planted.json"), json.dumps(doc, indent=1) + "\n")
    print(f"wrote {spec.n_train} training and {spec.n_test} test rows to {args.out}")


def cmd_fit(args, out):
    ds = _dataset(args)
    if args.method == "moplms":
        if args.lambda1 is None:
            raise ValueError("--lambda1 is required for --method moplms")
        model = landmark.fit(ds, args.lambda1, args.lambda2, args.lambda_stage2,
                             propagate=args.propagate)
        out.write(args.out, landmark.save_model(model) + "\n")
        print(f"s = {len(model.landmarks)}")
        print(f"landmarks = {' '.join(str(i) for i in model.landmarks)}")
        print(f"objective = {model.objective:.17g}")
        print(f"iterations = {model.iterations}")
        return
    if args.lambda_reg is None:
        raise ValueError(f"--lambda is required for --method {args.method}")
    if args.method == "one_vs_all":
        model = baselines.fit_one_vs_all(ds, args.lambda_reg)
    elif args.method == "group_lasso":
        model = baselines.fit_group_lasso(ds, args.lambda_reg)
    else:
        model = baselines.fit_low_rank(ds, args.lambda_reg)
    out.write(args.out, baselines.save_baseline(model) + "\n")
    active = int(np.count_nonzero(np.any(model.B != 0, axis=1)))
    print(f"method = {model.kind}")
    print(f"active input rows = {active}")
    if model.rank is not None:
        print(f"rank = {model.rank}")


def _load_any(path):
    with open(path, encoding="utf-8") as fh:
        document = fh.read()
    doc = landmark.parse_document(document)
    if doc.get("kind") == "landmark":
        model = landmark.load_model(document)
        return lambda X: landmark.predict(model, X)
    model = baselines.load_baseline(document)
    return lambda X: baselines.predict_baseline(model, X)


def cmd_predict(args, out):
    predict = _load_any(args.model)
    Y_hat = predict(read_csv(args.x))
    out.write(args.out, format_csv(Y_hat, _y_header(Y_hat.shape[1])))
    print(f"wrote {Y_hat.shape[0]}x{Y_hat.shape[1]} predictions to {args.out}")


def cmd_eval(args, out):
    report = metrics.evaluate(read_csv(args.y), read_csv(args.y_hat), args.task)
    for name, value in report.rows():
        print(f"{name}: {value:.6f}")
    if args.out:
        out.write(args.out, format_table(("metric", "value"), report.rows()))


def cmd_cv(args, out):
    ds = _dataset(args)
    if args.method in ("group_lasso", "low_rank") and args.task != "regression":
        raise ValueError(f"{args.method} supports regression only")
    kwargs = {"fractions": args.fractions}
    if args.method == "moplms":
        kwargs.update(lambda2_fractions=args.lambda2_fractions, stage2=args.stage2_fractions)
    grid = cv.relative_grid(ds, args.method, **kwargs)
    result = cv.cross_validate(ds, grid, folds=args.folds, method=args.method, seed=args.seed)
    names = (("lambda1", "lambda2", "lambda_stage2") if args.method == "moplms"
             else ("lambda",))
    rows = [tuple(cell) + (score,) + tuple(folds)
            for cell, score, folds in zip(result.cells, result.scores, result.fold_scores)]
    header = names + ("mean_loss",) + tuple(f"fold{f}" for f in range(args.folds))
    out.write(args.out, format_table(header, rows))
    best = ", ".join(f"{n}={v:.6g}" for n, v in zip(names, result.best))
    print(f"best cell: {best}")


def cmd_recover(args, out):
    result = recovery.recovery_experiment(
        args.k, args.s, args.n_grid, args.trials, args.sigma, args.seed, scale=args.scale)
    rows = list(zip(result.n_grid, result.lambda1, result.recovery_rate))
    out.write(args.out, format_table(("n", "lambda1", "recovery_rate"), rows))
    print(f"phi_star = {result.phi_star:.6f}")
    for n, _, rate in rows:
        print(f"n = {n}: recovery rate {rate:.3f}")


def cmd_bench(args, out):
    rows = bench.run_bench(args.k, args.d, args.s, args.n_grid,
                           range(args.seed, args.seed + args.seeds), task=args.task,
                           n_test=args.n_test, methods=args.methods, folds=args.folds)
    rows += [(m, "", "", "", "not implemented (out of scope)") for m in bench.NOT_IMPLEMENTED]
    out.write(args.out, format_table(("method", "n", "seed", "metric", "value"), rows))
    for m in bench.NOT_IMPLEMENTED:
        print(f"{m}: not implemented (out of scope)")
    print(f"wrote {len(rows)} rows to {args.out}")


# ------------------------------------------------------------------ parser

def build_parser():
    parser = argparse.ArgumentParser(
        prog="moplms", description="Landmark selection for multi-output prediction.",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter, allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, help_text):
        p = sub.add_parser(name, help=help_text, allow_abbrev=False,
                           formatter_class=argparse.ArgumentDefaultsHelpFormatter)
        return p

    def task_flag(p):
        p.add_argument("--task", choices=landmark.TASKS, default="regression")

    def data_flags(p):
        p.add_argument("--x", required=True, help="input matrix CSV")
        p.add_argument("--y", required=True, help="output matrix CSV")
        task_flag(p)

    p = command("synth", "generate planted landmark data")
    p.add_argument("--k", type=_positive_int, required=True, help="number of outputs")
    p.add_argument("--d", type=_positive_int, required=True, help="number of inputs")
    p.add_argument("--s", type=_positive_int, required=True, help="number of landmarks")
    p.add_argument("--n-train", type=_positive_int, required=True)
    p.add_argument("--n-test", type=_positive_int, required=True)
    p.add_argument("--sigma-landmark", type=_nonneg_float, default=0.1)
    p.add_argument("--sigma-dependent", type=_nonneg_float, default=0.1)
    p.add_argument("--density", type=_positive_float, default=0.1,
                   help="fraction of dependents each landmark feeds")
    p.add_argument("--seed", type=int, default=0)
    task_flag(p)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(run=cmd_synth)

    p = command("fit", "fit a landmark model or a baseline")
    data_flags(p)
    p.add_argument("--method", choices=("moplms",) + baselines.KINDS, default="moplms")
    p.add_argument("--lambda1", type=_nonneg_float, help="group penalty (moplms)")
    p.add_argument("--lambda2", type=_nonneg_float, default=0.0,
                   help="elementwise penalty (moplms)")
    p.add_argument("--lambda-stage2", type=_positive_float, default=1.0,
                   help="stage-2 ridge weight (moplms)")
    p.add_argument("--lambda", dest="lambda_reg", type=_nonneg_float,
                   help="baseline penalty")
    p.add_argument("--propagate", choices=landmark.PROPAGATION_MODES, default="hard",
                   help="classification: push hard labels or probabilities")
    p.add_argument("--out", required=True, help="model JSON path")
    p.set_defaults(run=cmd_fit)

    p = command("predict", "predict with a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--x", required=True)
    p.add_argument("--out", required=True, help="prediction CSV path")
    p.set_defaults(run=cmd_predict)

    p = command("eval", "score predictions against the truth")
    p.add_argument("--y", required=True, help="true outputs CSV")
    p.add_argument("--y-hat", required=True, help="predicted outputs CSV")
    task_flag(p)
    p.add_argument("--out", help="optional metrics CSV path")
    p.set_defaults(run=cmd_eval)

    p = command("cv", "cross-validate a relative penalty grid")
    data_flags(p)
    p.add_argument("--method", choices=cv.METHODS, default="moplms")
    p.add_argument("--fractions", type=_float_list, default=[0.003, 0.01, 0.03, 0.1],
                   help="first penalty as fractions of its kill level")
    p.add_argument("--lambda2-fractions", type=_float_list, default=[0.0])
    p.add_argument("--stage2-fractions", type=_float_list, default=[0.003, 0.03, 0.3],
                   help="stage-2 ridge as fractions of the top eigenvalue of X^T X")
    p.add_argument("--folds", type=_positive_int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="per-cell scores CSV path")
    p.set_defaults(run=cmd_cv)

    p = command("recover", "landmark support recovery versus sample size")
    p.add_argument("--k", type=_positive_int, default=60)
    p.add_argument("--s", type=_positive_int, default=6)
    p.add_argument("--n-grid", type=_int_list, default=[30, 60, 120, 240])
    p.add_argument("--trials", type=_positive_int, default=20)
    p.add_argument("--sigma", type=_nonneg_float, default=0.1)
    p.add_argument("--scale", type=_positive_float, default=1.0,
                   help="constant inside the group penalty")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="rate table CSV path")
    p.set_defaults(run=cmd_recover)

    p = command("bench", "compare methods over training sizes")
    p.add_argument("--k", type=_positive_int, default=100)
    p.add_argument("--d", type=_positive_int, default=100)
    p.add_argument("--s", type=_positive_int, default=10)
    p.add_argument("--n-grid", type=_int_list, default=[50, 100, 200])
    p.add_argument("--n-test", type=_positive_int, default=200)
    p.add_argument("--seeds", type=_positive_int, default=3, help="number of seeds")
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--methods", type=lambda t: t.split(","),
                   help="comma-separated subset of methods (default: all for the task)")
    p.add_argument("--folds", type=_positive_int, default=3)
    task_flag(p)
    p.add_argument("--out", required=True, help="results CSV path")
    p.set_defaults(run=cmd_bench)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    out = Outputs()
    try:
        args.run(args, out)
    except FAILURES as exc:
        out.discard()
        message = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        print(f"moplms {args.command}: error: {message}", file=sys.stderr)
        return 1
    except BaseException:
        out.discard()
        raise
    return 0


if __name__ == "__main__":
    sys.exit(main())
