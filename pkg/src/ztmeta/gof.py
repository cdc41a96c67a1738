"""Goodness of fit for zero-truncated count models.

Compares observed frequencies of each count with the frequencies the
fitted model implies, then assesses the discrepancy with a grouped
chi-square test.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaincc

from .dataset import Dataset
from .distributions import Family, log_p0, log_prob_positive, logpmf
from .ztreg import FitResult, design_matrix

__all__ = ["FrequencyTable", "ChiSquareResult", "fitted_frequencies", "chi_square_test"]


@dataclass(frozen=True)
class FrequencyTable:
    """Observed and fitted frequencies, counts >= tail_threshold pooled."""

    bins: tuple[tuple[str, int, float], ...]  # (label, observed, fitted)
    tail_threshold: int


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    dof: int
    p_value: float


def _per_study_params(ds: Dataset, fit: FitResult):
    X = design_matrix(fit.spec.lp, np.nan_to_num(ds.prop_women), ds.usa)
    eta = X @ fit.beta
    if fit.spec.family is Family.BINOMIAL:
        trials = np.rint(ds.exposures)
        rho = 1.0 / (1.0 + np.exp(-eta))
        return {"trials": trials, "success_prob": rho}
    kw = {"mean": ds.exposures * np.exp(eta)}
    if fit.spec.family is Family.NEGBIN:
        kw["dispersion"] = fit.alpha
    return kw


def fitted_frequencies(ds: Dataset, fit: FitResult, tail_threshold: int = 4) -> FrequencyTable:
    """Fitted frequency of each count y under a zero-truncated fit.

    For y below the threshold, the fitted frequency sums the truncated
    pmf at y over studies; the tail bin takes the complement n minus the
    head bins, which keeps the total exactly n.
    """
    if not fit.spec.truncated:
        raise ValueError("fitted frequencies are defined for zero-truncated fits")
    if not fit.converged:
        raise ValueError("fit did not converge")
    if tail_threshold < 2:
        raise ValueError("tail_threshold must be at least 2")
    kw = _per_study_params(ds, fit)
    lpp = log_prob_positive(log_p0(fit.spec.family, **kw))
    y_obs = ds.events
    bins = []
    head_total = 0.0
    for y in range(1, tail_threshold):
        fitted = float(np.sum(np.exp(logpmf(fit.spec.family, y, **kw) - lpp)))
        head_total += fitted
        bins.append((str(y), int(np.sum(y_obs == y)), fitted))
    bins.append((f"{tail_threshold}+",
                 int(np.sum(y_obs >= tail_threshold)),
                 float(ds.n - head_total)))
    return FrequencyTable(bins=tuple(bins), tail_threshold=tail_threshold)


def chi_square_test(ft: FrequencyTable, n_params: int) -> ChiSquareResult:
    """Grouped chi-square test over the table's bins.

    Degrees of freedom are #bins - 1 - n_params; the p-value is the
    upper-tail chi-square probability via the regularized incomplete
    gamma function.
    """
    observed = np.array([b[1] for b in ft.bins], dtype=float)
    fitted = np.array([b[2] for b in ft.bins], dtype=float)
    if np.any(fitted <= 0):
        raise ValueError("every fitted bin frequency must be positive")
    dof = len(ft.bins) - 1 - n_params
    if dof <= 0:
        raise ValueError(f"non-positive degrees of freedom ({dof})")
    stat = float(np.sum((observed - fitted) ** 2 / fitted))
    p = float(gammaincc(dof / 2.0, stat / 2.0))
    return ChiSquareResult(statistic=stat, dof=dof, p_value=p)
