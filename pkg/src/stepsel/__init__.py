"""Unsupervised forward, reverse and hybrid stepwise feature selection."""

from .core import (
    DataMatrix,
    OptSets,
    Ranking,
    StandardizedMatrix,
    SweepState,
    apply_forward,
    apply_reverse,
    correlation,
    correlation_from_data,
    feature_costs,
    forward_gain,
    init_state,
    rank,
    reverse_penalty,
    run_ufrs,
    run_ufs,
    run_urs,
    select_forward,
    select_reverse,
    standardize,
)
from .oracle import best_subset_exhaustive, naive_greedy, projection_error_direct, projection_error_gram

__version__ = "0.1.0"
