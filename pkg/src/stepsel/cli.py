"""Command-line front end.

    stepsel rank prices.csv --transform lift+ma --method hybrid --steps 5 --k 10 --output report.json
    stepsel experiment inversion --epsilon 1e-4 --output inversion.json
    stepsel transform prices.csv --transform lift --output lifts.csv

Exit codes: 0 success, 1 data error, 2 usage error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import asdict, dataclass

from . import experiments
from .core import DEFAULT_PIVOT_TOLERANCE, check_samples, correlation, rank, standardize
from .errors import DataError, NumericalError, StepselError, UsageError
from .oracle import projection_error_direct
from .pipeline import TRANSFORMS, apply_transform, load_csv

EXIT_OK, EXIT_DATA, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3
METHODS = ("forward", "reverse", "hybrid")
FORMATS = ("json", "csv")


@dataclass
class RunConfig:
    method: str = "forward"
    steps: int = 2
    k: int | None = None
    window: int | None = None
    transform: str = "none"
    seed: int = 0
    pivot_tolerance: float = DEFAULT_PIVOT_TOLERANCE
    output_format: str = "json"
    orientation: str = "columns_are_features"

    def __post_init__(self):
        if self.method not in METHODS:
            raise UsageError(f"unknown method {self.method!r}")
        if self.method == "hybrid" and self.steps < 2:
            raise UsageError("--steps must be >= 2 for the hybrid method")
        if self.k is not None and self.k < 1:
            raise UsageError("--k must be >= 1")
        if self.window is not None and self.window < 1:
            raise UsageError("--window must be >= 1")
        if self.transform not in TRANSFORMS:
            raise UsageError(f"unknown transform {self.transform!r}")
        if self.output_format not in FORMATS:
            raise UsageError(f"unknown format {self.output_format!r}")
        if not self.pivot_tolerance > 0:
            raise UsageError("--pivot-tol must be positive")


def build_rank_report(input_path, config: RunConfig) -> dict:
    table = load_csv(input_path, config.orientation)
    X = table if config.orientation == "rows_are_features" else apply_transform(table, config.transform, config.window)
    if config.orientation == "rows_are_features" and (config.transform != "none" or config.window):
        raise UsageError("transforms apply to column-oriented price tables only")
    check_samples(X)
    if config.k is not None and config.k > X.n:
        raise UsageError(f"--k {config.k} exceeds the number of features ({X.n})")
    Z = standardize(X)
    M = correlation(Z)
    result = rank(M, config.method, config.steps, config.pivot_tolerance)
    names = X.feature_names
    n = X.n

    report = {
        "config": asdict(config),
        "input": str(input_path),
        "n_features": n,
        "n_samples": X.m,
        "method": config.method,
    }
    if config.method == "hybrid":
        report["per_size"] = {
            str(k): {"set": [names[j] for j in entry.subset], "cost": entry.cost}
            for k, entry in sorted(result.per_size.items())
        }
        subset_at = lambda k: list(result.per_size[k].subset)  # noqa: E731
        added = [None] * n
    else:
        report["ordering"] = [names[j] for j in result.ordering]
        report["costs"] = result.costs
        subset_at = result.subset
        # the feature gained when growing the nested subsets from k-1 to k
        order = result.ordering if config.method == "forward" else result.ordering[::-1]
        added = [names[j] for j in order]

    report["curve"] = [
        {"size": k, "cost": result.cost_at(k), "variance_captured": 1.0 - result.cost_at(k) / n,
         "feature": added[k - 1] if added[k - 1] is not None else ";".join(names[j] for j in subset_at(k))}
        for k in range(1, n + 1)
    ]
    if config.k is not None:
        chosen = subset_at(config.k)
        report["subset"] = {
            "k": config.k,
            "features": [names[j] for j in chosen],
            "cost": result.cost_at(config.k),
            "oracle_cost": projection_error_direct(Z, chosen),
        }
    return report


def curve_csv(report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["size", "cost", "variance_captured", "feature"])
    for row in report["curve"]:
        w.writerow([row["size"], repr(row["cost"]), repr(row["variance_captured"]), row["feature"]])
    return buf.getvalue()


def _emit(text, output):
    if output:
        with open(output, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_rank(args) -> int:
    config = RunConfig(
        method=args.method, steps=args.steps, k=args.k, window=args.window, transform=args.transform,
        seed=args.seed, pivot_tolerance=args.pivot_tol, output_format=args.format,
        orientation=args.orientation,
    )
    report = build_rank_report(args.input, config)
    _emit(_json(report) if config.output_format == "json" else curve_csv(report), args.output)
    if args.output:
        last = report["curve"][min(len(report["curve"]), config.k or 10) - 1]
        print(f"{config.method}: size {last['size']} captures {last['variance_captured']:.1%} of variance")
    return EXIT_OK


def cmd_experiment(args) -> int:
    if args.name == "error-growth":
        report = experiments.error_growth_study(args.n or 400, args.m or 1600, args.runs, args.precision, args.seed)
        headline = f"fitted_slope={report.fitted_slope:.4f}"
    elif args.name == "inversion":
        report = experiments.inversion_study(args.n or 15, args.epsilon, args.trials, args.seed)
        headline = f"reversal_fraction={report.fraction:.4f}"
    else:
        report = experiments.complexity_benchmark(args.n_values, args.m_factor, args.repeats, args.seed, args.naive_n)
        headline = f"fitted_exponent={report.fitted_exponent:.4f}"
        if report.speedup is not None:
            headline += f" speedup={report.speedup:.1f}"
    payload = {"experiment": args.name, "parameters": _experiment_params(args), "report": report.to_dict()}
    if args.format == "csv":
        if not hasattr(report, "to_csv"):
            raise UsageError(f"{args.name} has no CSV form")
        if not args.output:
            raise UsageError("CSV output needs --output")
        report.to_csv(args.output)
    else:
        _emit(_json(payload), args.output)
    print(headline, file=sys.stderr if not args.output else sys.stdout)
    return EXIT_OK


def _experiment_params(args):
    keys = ("n", "m", "runs", "precision", "epsilon", "trials", "n_values", "m_factor", "repeats", "naive_n", "seed")
    return {k: getattr(args, k) for k in keys}


def cmd_transform(args) -> int:
    table = load_csv(args.input)
    X = apply_transform(table, args.transform, args.window)
    if args.output:
        X.to_csv(args.output)
    else:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(X.feature_names)
        w.writerows([[repr(float(v)) for v in col] for col in X.values.T])
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="stepsel", description="Unsupervised stepwise feature selection.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rank", help="rank the features of a CSV file")
    p.add_argument("input")
    p.add_argument("--method", choices=METHODS, default="forward")
    p.add_argument("--steps", type=int, default=2, help="forward steps per hybrid round")
    p.add_argument("--k", type=int, default=None, help="also report the best subset of this size")
    p.add_argument("--window", type=int, default=None, help="moving-average width")
    p.add_argument("--transform", choices=TRANSFORMS, default="none")
    p.add_argument("--orientation", choices=("columns_are_features", "rows_are_features"),
                   default="columns_are_features")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pivot-tol", type=float, default=DEFAULT_PIVOT_TOLERANCE)
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("experiment", help="run a numerical study")
    p.add_argument("name", choices=("error-growth", "inversion", "complexity"))
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--precision", choices=tuple(experiments.PRECISIONS), default="single")
    p.add_argument("--epsilon", type=float, default=1e-4)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--n-values", type=int, nargs="+", default=[100, 200, 400, 800])
    p.add_argument("--m-factor", type=int, default=2)
    p.add_argument("--repeats", type=int, default=3)
    p.add_argument("--naive-n", type=int, default=None)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--format", choices=FORMATS, default="json")
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("transform", help="write the transformed feature matrix as CSV")
    p.add_argument("input")
    p.add_argument("--transform", choices=TRANSFORMS, default="lift")
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--output", default=None)
    p.set_defaults(func=cmd_transform)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"stepsel: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DataError as exc:
        print(f"stepsel: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except NumericalError as exc:
        print(f"stepsel: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except StepselError as exc:  # pragma: no cover - every subclass is handled above
        print(f"stepsel: error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except OSError as exc:
        print(f"stepsel: cannot read/write file: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
