"""Horvitz-Thompson estimation of the missing (zero-count) studies.

Each observed study stands in for 1/(1 - p(0)) studies with the same
exposure and covariates, p(0) being the fitted probability of observing
no events.  Summing gives the estimated total number of studies; the
excess over the observed count estimates how many were excluded, both
overall and within covariate-defined sub-populations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .dataset import Dataset
from .distributions import Family, log_p0
from .ztreg import FitResult, design_matrix

__all__ = [
    "StratumDef",
    "StratumSummary",
    "PopulationEstimate",
    "default_strata",
    "ht_estimate",
    "stratify",
    "round_half_up",
]

# Approximate sample quartiles of the observed proportion of women; they
# bound the default sub-population intervals.
PROP_WOMEN_CUTS = (0.75, 0.80, 0.85)


@dataclass(frozen=True)
class StratumDef:
    """A sub-population: a country filter and a prop_women interval.

    The interval is [lo, hi) unless ``closed_right`` makes it [lo, hi].
    """

    country_filter: str  # "USA" | "other" | "all"
    lo: float
    hi: float
    closed_right: bool = False

    def __post_init__(self):
        if self.country_filter not in ("USA", "other", "all"):
            raise ValueError(f"country_filter must be USA/other/all, got {self.country_filter!r}")
        if not 0.0 <= self.lo < self.hi or self.hi > 1.0:
            raise ValueError(f"need 0 <= lo < hi <= 1, got [{self.lo}, {self.hi}]")

    @property
    def label(self) -> str:
        right = "]" if self.closed_right else ")"
        return f"{self.country_filter} [{self.lo:g},{self.hi:g}{right}"

    def contains(self, prop_women: float, usa: int) -> bool:
        if self.country_filter == "USA" and usa != 1:
            return False
        if self.country_filter == "other" and usa != 0:
            return False
        if self.closed_right:
            return self.lo <= prop_women <= self.hi
        return self.lo <= prop_women < self.hi


@dataclass(frozen=True)
class StratumSummary:
    stratum: StratumDef
    observed: int
    missing: float


@dataclass(frozen=True)
class PopulationEstimate:
    """Per-study and aggregated Horvitz-Thompson estimates."""

    per_study: tuple[tuple[str, float, float], ...]  # (id, N_i, M_i)
    total_N: float
    total_M: float
    strata: tuple[StratumSummary, ...] | None = None


def default_strata() -> tuple[StratumDef, ...]:
    """The eight default sub-populations: USA/other crossed with the
    quartile intervals of prop_women."""
    edges = (0.0,) + PROP_WOMEN_CUTS + (1.0,)
    out = []
    for country in ("USA", "other"):
        for lo, hi in zip(edges[:-1], edges[1:]):
            out.append(StratumDef(country, lo, hi, closed_right=(hi == 1.0)))
    return tuple(out)


def round_half_up(x: float) -> int:
    """Round a non-negative value half away from zero (presentation only)."""
    return int(math.floor(x + 0.5))


def ht_estimate(ds: Dataset, fit: FitResult,
                strata: tuple[StratumDef, ...] | None = None) -> PopulationEstimate:
    """Horvitz-Thompson totals under a zero-truncated count fit.

    N_i = 1 / (1 - p(0; mu_i, alpha)) with mu_i = e_i exp(h(x_i)'beta);
    M_i = N_i - 1 removes the observed study itself.  Pass ``strata`` to
    attach per-stratum summaries.
    """
    if not fit.spec.truncated:
        raise ValueError("population estimation needs a zero-truncated fit")
    if fit.spec.family is Family.BINOMIAL:
        raise ValueError("population estimation is defined for the count families only")
    if not fit.converged:
        raise ValueError("fit did not converge")
    X = design_matrix(fit.spec.lp, np.nan_to_num(ds.prop_women), ds.usa)
    mu = ds.exposures * np.exp(X @ fit.beta)
    kw = {"mean": mu}
    if fit.spec.family is Family.NEGBIN:
        kw["dispersion"] = fit.alpha
    lp0 = log_p0(fit.spec.family, **kw)
    denom = -np.expm1(lp0)  # 1 - p(0)
    if np.any(denom <= 0):
        raise ValueError("p(0) is numerically 1 for at least one study")
    N = 1.0 / denom
    M = N - 1.0
    pe = PopulationEstimate(
        per_study=tuple((r.id, float(Ni), float(Mi))
                        for r, Ni, Mi in zip(ds.records, N, M)),
        total_N=float(np.sum(N)),
        total_M=float(np.sum(N) - ds.n),
    )
    if strata is not None:
        pe = replace(pe, strata=stratify(pe, ds, strata))
    return pe


def stratum_masks(ds: Dataset, strata) -> np.ndarray:
    """Boolean membership matrix (stratum x study); strata must partition
    the dataset (every study in exactly one)."""
    masks = np.array([[s.contains(r.prop_women, r.usa) for r in ds.records]
                      for s in strata])
    hits = masks.sum(axis=0)
    if np.any(hits != 1):
        bad = [ds.records[i].id for i in np.nonzero(hits != 1)[0]]
        raise ValueError(f"strata must cover each study exactly once; offending: {bad}")
    return masks


def stratify(pe: PopulationEstimate, ds: Dataset, strata) -> tuple[StratumSummary, ...]:
    """Aggregate per-study missing counts over covariate strata."""
    ids = [s[0] for s in pe.per_study]
    if ids != [r.id for r in ds.records]:
        raise ValueError("population estimate does not match the dataset")
    masks = stratum_masks(ds, strata)
    M = np.array([s[2] for s in pe.per_study])
    return tuple(
        StratumSummary(stratum=s, observed=int(mask.sum()), missing=float(M[mask].sum()))
        for s, mask in zip(strata, masks)
    )
