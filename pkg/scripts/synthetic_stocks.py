"""Representative-stock selection on a synthetic factor-driven market.

Builds cost-versus-size curves for UFS, and the improvement from URS and
UFRS relative to UFS, with and without a 5-day moving average on the daily
lifts.  Writes one CSV per window for plotting.
"""
import argparse
import csv


from stepsel.core import correlation, run_ufrs, run_ufs, run_urs, standardize
from stepsel.experiments import random_walk_panel
from stepsel.pipeline import moving_average, percentage_lift

parser = argparse.ArgumentParser()
parser.add_argument("--n", type=int, default=200)
parser.add_argument("--days", type=int, default=253)
parser.add_argument("--steps", type=int, default=50)
parser.add_argument("--seed", type=int, default=0)
parser.add_argument("--windows", type=int, nargs="+", default=[1, 5, 30])
parser.add_argument("--noise-reversion", type=float, default=0.3)
args = parser.parse_args()

table = random_walk_panel(args.n, args.days, seed=args.seed, noise_reversion=args.noise_reversion)
lifts = percentage_lift(table)
for window in args.windows:
    X = moving_average(lifts, window)
    if X.m <= X.n:
        print(f"window {window}: only {X.m} samples for {X.n} features, skipping")
        continue
    M = correlation(standardize(X))
    ufs, urs, ufrs = run_ufs(M), run_urs(M), run_ufrs(M, args.steps)
    path = f"stocks_window{window}.csv"
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["size", "ufs_cost", "urs_minus_ufs", "ufrs_minus_ufs", "variance_captured"])
        for k in range(1, args.n + 1):
            base = ufs.cost_at(k)
            w.writerow([k, base, urs.cost_at(k) - base, ufrs.cost_at(k) - base, 1 - base / args.n])
    tops = [k for k in (10, 25, 50, 100) if k <= args.n]
    summary = ", ".join(f"top {k}: {1 - ufs.cost_at(k) / args.n:.0%}" for k in tops)
    print(f"window {window:2d}: {summary}  -> {path}")
    print(f"           first picks: {[X.feature_names[j] for j in ufs.ordering[:5]]}")
