"""Mutual information estimation for discrete, continuous and mixed data."""

from ._mimix import (
    Estimate,
    InputError,
    InvariantError,
    ParameterError,
    __version__,
    auroc,
    digamma,
    estimate,
    featsel,
    generate,
    ground_truth,
    mse_sweep,
    neighbor_profiles,
    rank_features,
    roc_curve,
)

__all__ = [
    "Estimate",
    "InputError",
    "InvariantError",
    "ParameterError",
    "auroc",
    "digamma",
    "estimate",
    "featsel",
    "generate",
    "ground_truth",
    "mse_sweep",
    "neighbor_profiles",
    "rank_features",
    "roc_curve",
]
