"""Fast unsupervised stepwise selection.

The sweep state carries four n x n matrices for a retained feature set ``s``:

* ``R`` -- inverse of the s x s block of the correlation matrix ``M``,
  embedded in an n x n array that is zero outside ``s``;
* ``U = M @ R @ M``;
* ``D = R @ M``;

plus the running projection error ``cost``.  Adding or removing one feature
is a rank-one (Woodbury) update of each matrix, so every step costs O(n^2)
and a full ranking of n features costs O(n^3) once ``M`` is known.

Candidate scores follow from the same matrices:

* adding ``j`` lowers the cost by ``|U_j - M_j|^2 / (1 - U_jj)``;
* removing ``j`` raises it by ``|D_j|^2 / R_jj``.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.linalg

from .errors import (
    DataError,
    DegeneratePivot,
    NoValidCandidate,
    NonFiniteInput,
    RankDeficientAt,
    SingularCorrelation,
    UsageError,
    ZeroVarianceFeature,
)

DEFAULT_PIVOT_TOLERANCE = 1e-10

# Scores within this relative distance of the best count as tied; the
# smallest index then wins.  Keeps orderings stable against last-bit noise.
TIE_TOLERANCE = 1e-12


# -- data --------------------------------------------------------------------

@dataclass
class DataMatrix:
    """Feature-by-sample matrix: ``values[j, k]`` is feature j in sample k."""

    values: np.ndarray
    feature_names: list[str] | None = None

    def __post_init__(self):
        self.values = np.array(self.values, dtype=np.float64, ndmin=2)
        if self.values.ndim != 2:
            raise DataError(f"expected a 2-d matrix, got {self.values.ndim} dimensions")
        n, m = self.values.shape
        if n < 2 or m < 1:
            raise DataError(f"need at least 2 features and 1 sample, got {n} x {m}")
        if not np.all(np.isfinite(self.values)):
            raise NonFiniteInput("data matrix")
        if self.feature_names is None:
            self.feature_names = [f"x{j}" for j in range(n)]
        self.feature_names = [str(name) for name in self.feature_names]
        if len(self.feature_names) != n:
            raise DataError(f"{len(self.feature_names)} names for {n} features")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]

    def to_csv(self, path):
        """Write samples as rows under a header of feature names."""
        lines = [",".join(self.feature_names)]
        for column in self.values.T:
            lines.append(",".join(repr(float(v)) for v in column))
        Path(path).write_text("\n".join(lines) + "\n")


@dataclass
class StandardizedMatrix:
    values: np.ndarray
    source: DataMatrix | None = None

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.values.shape[1]


def standardize(X) -> StandardizedMatrix:
    """Center each feature row and scale it to unit Euclidean norm.

    Unit norm (rather than unit sample variance) makes ``Z @ Z.T`` exactly
    the correlation matrix with a unit diagonal.
    """
    if not isinstance(X, DataMatrix):
        X = DataMatrix(X)
    centered = X.values - X.values.mean(axis=1, keepdims=True)
    norms = np.linalg.norm(centered, axis=1)
    scale = np.abs(X.values).max(axis=1)
    for j in range(X.n):
        # a constant row leaves only round-off after centering
        if norms[j] <= 1e-12 * scale[j] * np.sqrt(X.m):
            raise ZeroVarianceFeature(j, X.feature_names[j])
    return StandardizedMatrix(centered / norms[:, None], source=X)


def correlation(Z) -> np.ndarray:
    """Gram matrix of standardized feature rows."""
    values = Z.values if isinstance(Z, StandardizedMatrix) else np.asarray(Z, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise NonFiniteInput("standardized matrix")
    M = values @ values.T
    M = 0.5 * (M + M.T)
    np.fill_diagonal(M, 1.0)
    return M


def correlation_from_data(X) -> np.ndarray:
    return correlation(standardize(X))


def check_correlation(M, psd=False) -> np.ndarray:
    """Validate the correlation-matrix invariants and return ``M`` as an array."""
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise DataError(f"correlation matrix must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise NonFiniteInput("correlation matrix")
    if np.max(np.abs(M - M.T), initial=0.0) > 1e-12:
        raise DataError("correlation matrix is not symmetric")
    if np.max(np.abs(np.diag(M) - 1.0), initial=0.0) > 1e-9:
        raise DataError("correlation matrix must have a unit diagonal")
    if np.max(np.abs(M), initial=0.0) > 1 + 1e-9:
        raise DataError("correlation entries must lie in [-1, 1]")
    if psd and M.size and np.linalg.eigvalsh(M.astype(np.float64))[0] < -1e-8:
        raise DataError("correlation matrix is not positive semi-definite")
    return M


# -- results -----------------------------------------------------------------

@dataclass
class Ranking:
    """Features in the order a driver visited them and the cost after each step.

    For the forward driver ``ordering`` runs from most to least important; for
    the reverse driver it is the pruning order, least important first.
    """

    ordering: list[int]
    costs: list[float]
    direction: str | None = None

    def to_dict(self) -> dict:
        return {"ordering": [int(j) for j in self.ordering], "costs": [float(c) for c in self.costs]}

    @classmethod
    def from_dict(cls, d, direction=None) -> Ranking:
        return cls([int(j) for j in d["ordering"]], [float(c) for c in d["costs"]], direction)

    def subset(self, k: int) -> list[int]:
        """Retained feature set of size ``k`` implied by this ranking."""
        n = len(self.ordering)
        if self.direction == "reverse":
            return sorted(self.ordering[n - k:])
        return sorted(self.ordering[:k])

    def cost_at(self, k: int) -> float:
        """Projection error when ``k`` features are retained."""
        n = len(self.ordering)
        if k == 0:
            return float(n)
        if self.direction == "reverse":
            return self.costs[n - k - 1] if k < n else 0.0
        return self.costs[k - 1]


@dataclass
class SizedSubset:
    subset: tuple[int, ...]
    cost: float


@dataclass
class OptSets:
    """Best subset found at each size by the hybrid driver."""

    per_size: dict[int, SizedSubset] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            str(k): {"set": [int(j) for j in entry.subset], "cost": float(entry.cost)}
            for k, entry in sorted(self.per_size.items())
        }

    @classmethod
    def from_dict(cls, d) -> OptSets:
        return cls({int(k): SizedSubset(tuple(int(j) for j in v["set"]), float(v["cost"])) for k, v in d.items()})

    def cost_at(self, k: int) -> float:
        return self.per_size[k].cost


# -- sweep state -------------------------------------------------------------

@dataclass
class SweepState:
    retained: list[int]
    R: np.ndarray
    U: np.ndarray
    D: np.ndarray
    cost: float
    pivot_tolerance: float = DEFAULT_PIVOT_TOLERANCE
    mask: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        if self.mask is None:
            self.mask = np.zeros(self.R.shape[0], dtype=bool)
            self.mask[list(self.retained)] = True

    @property
    def n(self) -> int:
        return self.R.shape[0]

    @property
    def dtype(self):
        return self.R.dtype

    def copy(self) -> SweepState:
        return SweepState(
            list(self.retained), self.R.copy(), self.U.copy(), self.D.copy(),
            self.cost, self.pivot_tolerance, self.mask.copy(),
        )


def _invert(M, tol):
    """Invert ``M`` by LU, refusing when a pivot magnitude falls below ``tol``."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        try:
            lu, piv = scipy.linalg.lu_factor(M, check_finite=False)
        except (ValueError, np.linalg.LinAlgError) as exc:
            raise SingularCorrelation(str(exc)) from exc
    pivots = np.abs(np.diag(lu))
    if pivots.size and pivots.min() < tol:
        raise SingularCorrelation(f"LU pivot {pivots.min():.3e} below tolerance {tol:.1e}")
    inv = scipy.linalg.lu_solve((lu, piv), np.eye(M.shape[0]), check_finite=False)
    return 0.5 * (inv + inv.T)


def init_state(M, mode="empty", pivot_tolerance=DEFAULT_PIVOT_TOLERANCE, dtype=np.float64) -> SweepState:
    """Sweep state with nothing retained (``"empty"``) or everything (``"full"``).

    A full state needs ``M^-1``; it is computed in double precision and then
    cast to ``dtype``.
    """
    M = np.asarray(M)
    n = M.shape[0]
    if mode == "empty":
        zeros = lambda: np.zeros((n, n), dtype=dtype)  # noqa: E731
        return SweepState([], zeros(), zeros(), zeros(), float(n), pivot_tolerance)
    if mode == "full":
        R = _invert(M.astype(np.float64), pivot_tolerance).astype(dtype)
        return SweepState(
            list(range(n)), R, M.astype(dtype, copy=True), np.eye(n, dtype=dtype), 0.0, pivot_tolerance
        )
    raise UsageError(f"unknown init mode {mode!r}")


def _pick(scores, valid, maximize):
    """Index of the best valid score; near-ties go to the smallest index."""
    idx = np.flatnonzero(valid)
    vals = scores[idx]
    best = vals.max() if maximize else vals.min()
    tol = TIE_TOLERANCE * max(1.0, abs(float(best)))
    winners = idx[vals >= best - tol] if maximize else idx[vals <= best + tol]
    d = int(winners[0])
    return d, float(scores[d])


def forward_gains(state: SweepState, M) -> tuple[np.ndarray, np.ndarray]:
    """Cost decrease for adding each feature, plus the mask of valid candidates."""
    pivots = 1.0 - np.diag(state.U)
    valid = ~state.mask & (pivots >= state.pivot_tolerance)
    diff = state.U - M
    num = np.einsum("ij,ij->i", diff, diff)
    with np.errstate(divide="ignore", invalid="ignore"):
        gains = np.where(valid, num / np.where(valid, pivots, 1.0), np.nan)
    return gains, valid


def reverse_penalties(state: SweepState) -> tuple[np.ndarray, np.ndarray]:
    """Cost increase for removing each retained feature, plus the valid mask."""
    pivots = np.diag(state.R)
    valid = state.mask & (pivots >= state.pivot_tolerance)
    num = np.einsum("ij,ij->i", state.D, state.D)
    with np.errstate(divide="ignore", invalid="ignore"):
        penalties = np.where(valid, num / np.where(valid, pivots, 1.0), np.nan)
    return penalties, valid


def forward_gain(state: SweepState, M, j: int) -> float:
    if state.mask[j]:
        raise UsageError(f"feature {j} is already retained")
    pivot = 1.0 - state.U[j, j]
    if pivot < state.pivot_tolerance:
        raise DegeneratePivot(j, float(pivot))
    diff = state.U[j] - M[j]
    return float(diff @ diff / pivot)


def reverse_penalty(state: SweepState, j: int) -> float:
    if not state.mask[j]:
        raise UsageError(f"feature {j} is not retained")
    pivot = state.R[j, j]
    if pivot < state.pivot_tolerance:
        raise DegeneratePivot(j, float(pivot))
    return float(state.D[j] @ state.D[j] / pivot)


def select_forward(state: SweepState, M) -> tuple[int, float]:
    gains, valid = forward_gains(state, M)
    if not valid.any():
        raise NoValidCandidate("forward")
    return _pick(gains, valid, maximize=True)


def select_reverse(state: SweepState) -> tuple[int, float]:
    penalties, valid = reverse_penalties(state)
    if not valid.any():
        raise NoValidCandidate("reverse")
    return _pick(penalties, valid, maximize=False)


def apply_forward(state: SweepState, M, d: int) -> SweepState:
    """Add feature ``d`` to the retained set, updating the state in place."""
    if state.mask[d]:
        raise UsageError(f"feature {d} is already retained")
    pivot = 1.0 - state.U[d, d]
    if pivot < state.pivot_tolerance:
        raise DegeneratePivot(d, float(pivot))
    # snapshots: each update consumes pre-update rows
    v = state.D[:, d].copy()
    v[d] -= 1.0
    w = state.U[d] - M[d]
    gain = float(w @ w / pivot)
    v_scaled = v / pivot
    state.R += np.outer(v_scaled, v)
    state.D += np.outer(v_scaled, w)
    state.U += np.outer(w / pivot, w)
    state.cost -= gain
    state.retained.append(d)
    state.mask[d] = True
    return state


def apply_reverse(state: SweepState, d: int) -> SweepState:
    """Remove feature ``d`` from the retained set, updating the state in place."""
    if not state.mask[d]:
        raise UsageError(f"feature {d} is not retained")
    pivot = state.R[d, d]
    if pivot < state.pivot_tolerance:
        raise DegeneratePivot(d, float(pivot))
    r = state.R[d].copy()
    dd = state.D[d].copy()
    penalty = float(dd @ dd / pivot)
    state.U -= np.outer(dd / pivot, dd)
    state.D -= np.outer(r / pivot, dd)
    state.R -= np.outer(r / pivot, r)
    state.R[d, :] = 0.0
    state.R[:, d] = 0.0
    state.D[d, :] = 0.0
    state.cost += penalty
    state.retained.remove(d)
    state.mask[d] = False
    return state


def feature_costs(state: SweepState, M) -> np.ndarray:
    """Per-feature squared projection error ``1 - M_j R M_j``, computed from R."""
    M = np.asarray(M, dtype=state.dtype)
    return 1.0 - np.einsum("ij,jk,ik->i", M, state.R, M)


# -- drivers -----------------------------------------------------------------

def run_ufs(M, pivot_tolerance=DEFAULT_PIVOT_TOLERANCE, dtype=np.float64) -> Ranking:
    """Forward selection from the empty set; ordering is most important first.

    Raises :class:`RankDeficientAt` (carrying the partial ranking) when the
    remaining features are numerically spanned by those already chosen.
    """
    M = np.asarray(M, dtype=dtype)
    state = init_state(M, "empty", pivot_tolerance, dtype)
    ordering, costs = [], []
    for step in range(M.shape[0]):
        try:
            d, _ = select_forward(state, M)
        except NoValidCandidate as exc:
            raise RankDeficientAt(step, Ranking(ordering, costs, "forward")) from exc
        apply_forward(state, M, d)
        ordering.append(d)
        costs.append(float(state.cost))
    return Ranking(ordering, costs, "forward")


def run_urs(M, pivot_tolerance=DEFAULT_PIVOT_TOLERANCE, dtype=np.float64) -> Ranking:
    """Reverse selection from the full set; ordering is the pruning order."""
    M = np.asarray(M)
    state = init_state(M, "full", pivot_tolerance, dtype)
    ordering, costs = [], []
    for _ in range(M.shape[0]):
        d, _ = select_reverse(state)
        apply_reverse(state, d)
        ordering.append(d)
        costs.append(float(state.cost))
    return Ranking(ordering, costs, "reverse")


class _Hybrid:
    """Seesaw schedule: ``steps`` forward moves, then ``steps - 1`` back."""

    def __init__(self, M, pivot_tolerance, dtype):
        self.M = np.asarray(M, dtype=dtype)
        self.n = self.M.shape[0]
        self.state = init_state(self.M, "empty", pivot_tolerance, dtype)
        # start at inf so every size gets filled, even one whose best cost is n
        self.best = {k: SizedSubset((), float("inf")) for k in range(1, self.n + 1)}
        self.step = 0

    def record(self):
        k = len(self.state.retained)
        if k and self.state.cost < self.best[k].cost:
            self.best[k] = SizedSubset(tuple(sorted(self.state.retained)), float(self.state.cost))

    def forward(self):
        if len(self.state.retained) == self.n:
            return
        d, _ = select_forward(self.state, self.M)
        apply_forward(self.state, self.M, d)
        self.step += 1
        self.record()

    def reverse(self):
        d, _ = select_reverse(self.state)
        apply_reverse(self.state, d)
        self.step += 1
        self.record()


def run_ufrs(M, steps=2, pivot_tolerance=DEFAULT_PIVOT_TOLERANCE, dtype=np.float64) -> OptSets:
    """Hybrid forward-reverse selection.

    For each ``start`` in ``0..n-1`` take ``min(steps, n - start)`` forward
    steps and one fewer reverse steps, so the retained set grows by one per
    round.  The lowest cost seen at each subset size is kept.
    """
    if steps < 2:
        raise UsageError(f"steps must be >= 2, got {steps}")
    run = _Hybrid(M, pivot_tolerance, dtype)
    n = run.n
    try:
        for start in range(n):
            width = min(steps, n - start)
            for _ in range(width):
                run.forward()
            for _ in range(width - 1):
                run.reverse()
    except (DegeneratePivot, NoValidCandidate) as exc:
        exc.step = run.step
        exc.args = (f"{exc.args[0]} (hybrid step {run.step})",)
        raise
    return OptSets(run.best)


def rank(M, method="forward", steps=2, pivot_tolerance=DEFAULT_PIVOT_TOLERANCE):
    """Dispatch to one of the three drivers by name."""
    if method == "forward":
        return run_ufs(M, pivot_tolerance)
    if method == "reverse":
        return run_urs(M, pivot_tolerance)
    if method == "hybrid":
        return run_ufrs(M, steps, pivot_tolerance)
    raise UsageError(f"unknown method {method!r}")


def check_samples(X: DataMatrix):
    """Full rankings need linearly independent rows, hence more samples than features."""
    if X.m <= X.n:
        raise DataError(f"full ranking needs more samples than features (n={X.n}, m={X.m})")
