"""Fraction of weakly correlated instances where forward and reverse
selection produce exactly opposite importance rankings, versus epsilon."""
import argparse
import json

from stepsel.experiments import inversion_study

parser = argparse.ArgumentParser()
parser.add_argument("--n", type=int, default=15)
parser.add_argument("--trials", type=int, default=100)
parser.add_argument("--seed", type=int, default=0)
parser.add_argument("--eps", type=float, nargs="+", default=[1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 1e-4])
parser.add_argument("--json", default=None)
args = parser.parse_args()

reports = [inversion_study(args.n, eps, args.trials, args.seed) for eps in args.eps]
for r in reports:
    print(f"eps={r.epsilon:8.1e}  reversed {r.exact_reversal_count:4d}/{r.trials}")
if args.json:
    with open(args.json, "w") as fh:
        json.dump([r.to_dict() for r in reports], fh, indent=2)
