"""Round-off growth of the swept inverse along a reverse sweep.

    python scripts/error_growth.py --n 400 --m 1600 --runs 10 --precision single
    python scripts/error_growth.py --n 2000 --m 8000 --runs 10   # full size, slow
"""
import argparse
import json
from pathlib import Path

from stepsel.experiments import error_growth_study

parser = argparse.ArgumentParser()
parser.add_argument("--n", type=int, default=400)
parser.add_argument("--m", type=int, default=1600)
parser.add_argument("--runs", type=int, default=10)
parser.add_argument("--precision", choices=("single", "double"), default="single")
parser.add_argument("--seed", type=int, default=0)
parser.add_argument("--out", default="results")
args = parser.parse_args()

report = error_growth_study(args.n, args.m, args.runs, args.precision, args.seed)
out = Path(args.out)
out.mkdir(exist_ok=True)
stem = f"error_growth_n{args.n}_{args.precision}"
(out / f"{stem}.json").write_text(json.dumps(report.to_dict(), indent=2))
report.to_csv(out / f"{stem}.csv")
print(f"fitted slope {report.fitted_slope:.3f} (random-walk model: 0.5)")
for k in (1, args.n // 10, args.n // 2, 9 * args.n // 10):
    print(f"  step {k:5d}: max |R - R_direct| = {report.per_step_max_error[k - 1]:.3e}")
