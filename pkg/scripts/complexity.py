"""Runtime scaling of a full reverse ranking and the speedup over the naive greedy."""
import argparse
import json

from stepsel.experiments import complexity_benchmark

parser = argparse.ArgumentParser()
parser.add_argument("--n", type=int, nargs="+", default=[100, 200, 400, 800])
parser.add_argument("--m-factor", type=int, default=2)
parser.add_argument("--naive-n", type=int, default=150)
parser.add_argument("--json", default=None)
args = parser.parse_args()

report = complexity_benchmark(args.n, args.m_factor, repeats=3, naive_n=args.naive_n or None)
for n, s in zip(report.n_values, report.seconds):
    print(f"n={n:5d}  {s:8.4f} s")
print(f"fitted exponent {report.fitted_exponent:.2f}")
if report.speedup:
    print(f"n={report.naive_n}: fast {report.fast_seconds:.4f} s, naive {report.naive_seconds:.1f} s, "
          f"speedup {report.speedup:.0f}x")
if args.json:
    with open(args.json, "w") as fh:
        json.dump(report.to_dict(), fh, indent=2)
