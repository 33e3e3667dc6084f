"""Slow reference implementations used to certify the fast sweep.

Nothing here touches the R/U/D machinery in :mod:`stepsel.core`.  Every
projection error is a fresh least-squares solve through an SVD-based
(rank-revealing) solver, so results are trustworthy even where the normal
equations would lose digits.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .core import Ranking, StandardizedMatrix
from .errors import SingularSubset, TooLarge, UsageError

EXHAUSTIVE_LIMIT = 15
_TIE = 1e-12


@dataclass
class SubsetScore:
    subset: tuple[int, ...]
    error: float


def _rows(Z):
    return Z.values if isinstance(Z, StandardizedMatrix) else np.asarray(Z, dtype=np.float64)


def projection_error_direct(Z, s) -> float:
    """Squared residual of projecting every feature row onto the rows in ``s``.

    ``Z`` holds standardized rows (features x samples).
    """
    Z = _rows(Z)
    s = sorted(set(int(j) for j in s))
    if not s:
        return float(np.sum(Z * Z))
    basis = Z[s].T
    coef, _, rank, _ = np.linalg.lstsq(basis, Z.T, rcond=None)
    if rank < len(s):
        raise SingularSubset(s)
    resid = Z.T - basis @ coef
    return float(np.sum(resid * resid))


def projection_error_gram(M, s) -> float:
    """Same quantity from the correlation matrix alone.

    Sums ``1 - M_js (M_ss)^-1 M_sj`` over features ``j`` outside ``s``.
    """
    M = np.asarray(M, dtype=np.float64)
    n = M.shape[0]
    s = sorted(set(int(j) for j in s))
    rest = [j for j in range(n) if j not in set(s)]
    if not s:
        return float(n)
    if not rest:
        return 0.0
    block = M[np.ix_(s, s)]
    cross = M[np.ix_(s, rest)]
    sol, _, rank, _ = np.linalg.lstsq(block, cross, rcond=None)
    if rank < len(s):
        raise SingularSubset(s)
    return float(len(rest) - np.sum(cross * sol))


def _error_fn(A, gram):
    return (lambda s: projection_error_gram(A, s)) if gram else (lambda s: projection_error_direct(A, s))


def _n(A, gram):
    return np.asarray(A).shape[0] if gram else _rows(A).shape[0]


def naive_greedy(A, direction="forward", gram=False) -> Ranking:
    """Greedy ranking that rescores every candidate from scratch.

    ``A`` is standardized data, or a correlation matrix when ``gram`` is true.
    Candidates whose subset is singular are skipped; near-ties resolve to the
    smallest index.
    """
    if direction not in ("forward", "reverse"):
        raise UsageError(f"unknown direction {direction!r}")
    error = _error_fn(A, gram)
    n = _n(A, gram)
    current = set() if direction == "forward" else set(range(n))
    ordering, costs = [], []
    for _ in range(n):
        pool = sorted(set(range(n)) - current) if direction == "forward" else sorted(current)
        scored = []
        for j in pool:
            trial = current | {j} if direction == "forward" else current - {j}
            try:
                scored.append((j, error(trial)))
            except SingularSubset:
                continue
        if not scored:
            raise SingularSubset(sorted(current))
        best = min(e for _, e in scored)
        tol = _TIE * max(1.0, abs(best))
        d, e = next((j, e) for j, e in scored if e <= best + tol)
        current = current | {d} if direction == "forward" else current - {d}
        ordering.append(d)
        costs.append(e)
    return Ranking(ordering, costs, direction)


def best_subset_exhaustive(A, k, gram=False) -> SubsetScore:
    """Optimal size-``k`` subset by enumeration, first in lexicographic order on ties."""
    n = _n(A, gram)
    if n > EXHAUSTIVE_LIMIT:
        raise TooLarge(n, EXHAUSTIVE_LIMIT)
    if not 0 <= k <= n:
        raise UsageError(f"subset size {k} outside [0, {n}]")
    error = _error_fn(A, gram)
    best = None
    for subset in itertools.combinations(range(n), k):
        try:
            e = error(subset)
        except SingularSubset:
            continue
        if best is None or e < best.error - _TIE * max(1.0, abs(best.error)):
            best = SubsetScore(subset, e)
    if best is None:
        raise SingularSubset(range(n))
    return best
