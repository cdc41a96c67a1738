"""Naive pooled rate estimators that ignore the missing zero-count studies.

Baselines for comparison: the plain events-over-exposure ratio (the
Poisson MLE of a common rate, equivalently the inverse-variance weighted
average of the study rates) and its log-scale counterpart.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import Dataset

__all__ = ["PooledEstimate", "pooled_rate_linear", "pooled_rate_log"]


@dataclass(frozen=True)
class PooledEstimate:
    """A pooled event rate per person-year."""

    rate: float
    method: str


def pooled_rate_linear(ds: Dataset) -> PooledEstimate:
    """Pooled rate sum(y_i) / sum(e_i)."""
    rate = float(np.sum(ds.events)) / float(np.sum(ds.exposures))
    return PooledEstimate(rate=rate, method="inverse-variance-linear")


def pooled_rate_log(ds: Dataset) -> PooledEstimate:
    """Pooled rate exp[sum(y_i log(y_i/e_i)) / sum(y_i)].

    Undefined when any study has zero events (its log rate diverges);
    the estimator presupposes the zero-truncated data situation.
    """
    y = ds.events.astype(float)
    if np.any(y == 0):
        raise ValueError("log-scale pooling requires every study to have >= 1 event")
    rate = float(np.exp(np.sum(y * np.log(y / ds.exposures)) / np.sum(y)))
    return PooledEstimate(rate=rate, method="inverse-variance-log")
