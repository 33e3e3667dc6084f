"""Numerical studies of the sweep: round-off growth, forward/reverse
ordering inversion on weakly correlated features, and runtime scaling.

Each study returns a small report dataclass that serializes to JSON
(``to_dict``/``from_dict``) and, where there is a series, to CSV.
"""

from __future__ import annotations

import csv
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .core import (
    apply_reverse,
    correlation,
    correlation_from_data,
    init_state,
    run_ufs,
    run_urs,
    select_reverse,
    standardize,
)
from .errors import NotPositiveDefinite, SingularCorrelation, UsageError
from .oracle import naive_greedy
from .pipeline import PriceTable

PRECISIONS = {"single": np.float32, "double": np.float64}


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _fit_loglog(x, y):
    slope, _ = np.polyfit(np.log(x), np.log(y), 1)
    return float(slope)


def _write_csv(path, header, rows):
    with Path(path).open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


# -- round-off growth ----------------------------------------------------------

@dataclass
class ErrorGrowthReport:
    per_step_max_error: list[float]
    fitted_slope: float
    runs: int
    n: int
    m: int
    precision: str
    seed: int | None = None
    fit_steps: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d) -> ErrorGrowthReport:
        return cls(**d)

    def to_csv(self, path):
        _write_csv(path, ["step", "max_abs_error"],
                   [(k, repr(e)) for k, e in enumerate(self.per_step_max_error, start=1)])


def fit_window(n, n_points=30):
    """Steps used for the slope fit: log-spaced over the middle 80% of the sweep.

    Log spacing weights the fit evenly along the log-k axis instead of
    letting the densely sampled late steps dominate.
    """
    lo = max(1, int(np.ceil(n / 10)))
    hi = max(lo, min(n - 1, int(np.floor(9 * n / 10))))
    return sorted(set(np.round(np.geomspace(lo, hi, n_points)).astype(int).tolist()))


def reverse_sweep_errors(M, dtype=np.float64):
    """Max elementwise error of the swept inverse after each reverse step.

    The reference is a fresh double-precision inverse of the pruned block.
    Returns ``n - 1`` values (the last step leaves nothing to compare).
    """
    n = M.shape[0]
    state = init_state(M, "full", dtype=dtype)
    errors = np.empty(n - 1)
    for k in range(n - 1):
        d, _ = select_reverse(state)
        apply_reverse(state, d)
        s = np.flatnonzero(state.mask)
        block = np.ix_(s, s)
        direct = np.linalg.inv(M[block])
        errors[k] = np.max(np.abs(state.R[block].astype(np.float64) - direct))
    return errors


def error_growth_study(n=400, m=1600, runs=10, precision="single", seed=0, max_redraws=5) -> ErrorGrowthReport:
    """Average the per-step inverse error of the reverse sweep over ``runs`` random data sets."""
    if m <= n:
        raise UsageError(f"need m > n, got n={n}, m={m}")
    if runs < 1:
        raise UsageError("runs must be >= 1")
    if precision not in PRECISIONS:
        raise UsageError(f"precision must be one of {sorted(PRECISIONS)}")
    if n < 3:
        raise UsageError("need n >= 3 for a slope fit")
    rng = _rng(seed)
    total = np.zeros(n - 1)
    for _ in range(runs):
        for attempt in range(max_redraws + 1):
            M = correlation_from_data(rng.standard_normal((n, m)))
            try:
                total += reverse_sweep_errors(M, PRECISIONS[precision])
                break
            except SingularCorrelation:
                if attempt == max_redraws:
                    raise
    mean = total / runs
    steps = fit_window(n)
    err = mean[np.array(steps) - 1]
    # an exact zero (tiny n, double precision) cannot be fit on a log scale
    slope = _fit_loglog(steps, np.maximum(err, np.finfo(float).tiny))
    return ErrorGrowthReport(mean.tolist(), slope, runs, n, m, precision,
                             seed if isinstance(seed, int) else None, steps)


# -- forward / reverse ordering inversion -------------------------------------

def generate_weak_correlation(n, epsilon, seed=None) -> np.ndarray:
    """``I + epsilon * N`` with N symmetric, zero-diagonal, ``|N_ij|`` in [0.5, 1]."""
    rng = _rng(seed)
    iu = np.triu_indices(n, 1)
    mags = rng.uniform(0.5, 1.0, len(iu[0]))
    signs = rng.choice([-1.0, 1.0], len(iu[0]))
    N = np.zeros((n, n))
    N[iu] = mags * signs
    N = N + N.T
    M = np.eye(n) + epsilon * N
    if n > 1 and epsilon * (n - 1) >= 1:
        # Gershgorin does not certify it; fall back to the spectrum
        lo = np.linalg.eigvalsh(M)[0]
        if lo <= 0:
            raise NotPositiveDefinite(float(lo))
    return M


@dataclass
class InversionReport:
    epsilon: float
    trials: int
    exact_reversal_count: int
    n: int
    seed: int | None = None

    @property
    def fraction(self) -> float:
        return self.exact_reversal_count / self.trials if self.trials else float("nan")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d) -> InversionReport:
        return cls(**d)


def is_exact_reversal(forward, reverse) -> bool:
    """True when the two drivers rank importance in exactly opposite order.

    Forward orderings run most-important first while reverse orderings are
    pruning orders (least important first), so opposite importance rankings
    show up as identical lists.
    """
    return list(forward.ordering) == list(reverse.ordering)


def inversion_study(n=15, epsilon=1e-4, trials=100, seed=0) -> InversionReport:
    rng = _rng(seed)
    count = 0
    for _ in range(trials):
        M = generate_weak_correlation(n, epsilon, rng)
        count += is_exact_reversal(run_ufs(M), run_urs(M))
    return InversionReport(float(epsilon), trials, count, n, seed if isinstance(seed, int) else None)


# -- runtime scaling -----------------------------------------------------------

@dataclass
class ComplexityReport:
    n_values: list[int]
    seconds: list[float]
    fitted_exponent: float
    m_factor: int
    naive_n: int | None = None
    naive_seconds: float | None = None
    fast_seconds: float | None = None

    @property
    def speedup(self) -> float | None:
        if self.naive_seconds is None:
            return None
        return self.naive_seconds / self.fast_seconds

    def to_dict(self) -> dict:
        d = asdict(self)
        d["speedup"] = self.speedup
        return d

    @classmethod
    def from_dict(cls, d) -> ComplexityReport:
        d = {k: v for k, v in d.items() if k != "speedup"}
        return cls(**d)

    def to_csv(self, path):
        _write_csv(path, ["n", "seconds"], [(n, repr(s)) for n, s in zip(self.n_values, self.seconds)])


def _best_time(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def complexity_benchmark(n_values=(100, 200, 400, 800), m_factor=2, repeats=3, seed=0,
                         naive_n=None) -> ComplexityReport:
    """Time a full reverse ranking (correlation matrix precomputed) across sizes.

    The exponent is fit over sizes with ``n >= 2``.  With ``naive_n`` set,
    also time the from-scratch greedy oracle against the fast forward driver
    at that size.
    """
    n_values = [int(n) for n in n_values]
    if n_values != sorted(n_values):
        raise UsageError("n_values must be sorted ascending")
    rng = _rng(seed)
    seconds = []
    for n in n_values:
        M = np.ones((1, 1)) if n < 2 else correlation_from_data(rng.standard_normal((n, m_factor * n)))
        seconds.append(_best_time(lambda: run_urs(M), repeats))
    fit = [(n, s) for n, s in zip(n_values, seconds) if n >= 2]
    exponent = _fit_loglog(*zip(*fit)) if len(fit) >= 2 else float("nan")
    report = ComplexityReport(n_values, seconds, exponent, m_factor)
    if naive_n:
        Z = standardize(rng.standard_normal((naive_n, m_factor * naive_n)))
        M = correlation(Z)
        report.naive_n = naive_n
        report.fast_seconds = _best_time(lambda: run_ufs(M), repeats)
        report.naive_seconds = _best_time(lambda: naive_greedy(Z, "forward"), 1)
    return report


# -- synthetic market data ---------------------------------------------------

def random_walk_panel(n=50, m=252, seed=None, n_factors=3, factor_vol=0.01, idio_vol=0.015,
                      noise_reversion=0.0) -> PriceTable:
    """Correlated log-random-walk prices driven by a few common factors.

    ``noise_reversion`` in [0, 1) makes the idiosyncratic part of each daily
    return partly undo the previous day's shock.
    """
    rng = _rng(seed)
    loadings = rng.normal(0.0, 1.0, (n, n_factors))
    factors = rng.normal(0.0, factor_vol, (n_factors, m - 1))
    shocks = rng.normal(0.0, idio_vol, (n, m))
    returns = loadings @ factors + shocks[:, 1:] - noise_reversion * shocks[:, :-1]
    log_prices = np.cumsum(np.hstack([np.zeros((n, 1)), returns]), axis=1)
    prices = 100.0 * np.exp(log_prices)
    return PriceTable({f"S{i:03d}": prices[i] for i in range(n)}, [f"d{t:03d}" for t in range(m)])
