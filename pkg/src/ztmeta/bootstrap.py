"""Model-averaged parametric bootstrap and the Wald baseline interval.

Each replicate draws a generating model with probability equal to its BIC
weight, simulates zero-truncated counts from that model's fitted
parameters, refits all ten candidate models, and records the quantities
of interest under the BIC-best refit: sub-population rates, the
Horvitz-Thompson total/missing study counts, and per-stratum missing
counts.  Percentile confidence intervals come from the empirical
quantiles over replicates.

Replicates are independent; each derives its random stream purely from
(seed, replicate index), so a run is bit-identical for a fixed seed no
matter how many worker processes execute it.
"""

from __future__ import annotations

import multiprocessing
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.stats import norm

from .dataset import Dataset
from .distributions import Family, log_p0, prepare_zt_sampler
from .population import StratumDef, default_strata, stratum_masks
from .ztreg import (
    FitResult,
    PreparedDesigns,
    count_model_grid,
    design_row,
    prepare_designs,
    refit_count_grid,
)

__all__ = [
    "BicWeights",
    "BootstrapConfig",
    "ReplicateDiagnostics",
    "BootstrapSummary",
    "DEFAULT_SUBPOPULATIONS",
    "bic_weights",
    "run_bootstrap",
    "wald_interval",
]

# The six covariate points of interest: (prop_women, usa) at the three
# approximate quartiles of prop_women, USA and elsewhere.
DEFAULT_SUBPOPULATIONS: tuple[tuple[float, int], ...] = (
    (0.75, 1), (0.75, 0), (0.80, 1), (0.80, 0), (0.85, 1), (0.85, 0),
)

_MAX_REDRAWS_PER_REPLICATE = 1000


@dataclass(frozen=True)
class BicWeights:
    """Normalised BIC weights aligned with the ten-model grid order
    (Poisson lp 1..5, then negative-binomial lp 1..5)."""

    weights: np.ndarray
    excluded: tuple[int, ...] = ()

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "weights", w)
        if w.shape != (10,):
            raise ValueError("expected 10 weights")
        if abs(float(w.sum()) - 1.0) > 1e-9 or np.any(w < 0):
            raise ValueError("weights must be non-negative and sum to 1")


@dataclass(frozen=True)
class BootstrapConfig:
    """Replicate count, seed, targets and confidence level."""

    n_replicates: int = 25000
    seed: int = 20130527
    subpopulations: tuple[tuple[float, int], ...] = DEFAULT_SUBPOPULATIONS
    strata: tuple[StratumDef, ...] | None = None
    confidence_level: float = 0.95

    def __post_init__(self):
        if self.n_replicates < 1:
            raise ValueError("n_replicates must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        if not 0.0 < self.confidence_level < 1.0:
            raise ValueError("confidence_level must lie in (0, 1)")
        if self.strata is None:
            object.__setattr__(self, "strata", default_strata())


@dataclass(frozen=True)
class ReplicateDiagnostics:
    """What happened across replicates: which models were sampled as the
    generator, which were selected after refitting, and failure counts."""

    sampled_counts: np.ndarray    # (10,) draws of the generating model
    selected_counts: np.ndarray   # (10,) BIC-best refit counts
    fit_failures: np.ndarray      # (10,) refit non-convergence counts
    redraws: int


@dataclass(frozen=True, eq=False)
class ReplicateArrays:
    """Raw per-replicate statistics (row b = replicate b)."""

    rates: np.ndarray        # (B, n_subpops)
    total_N: np.ndarray      # (B,)
    total_M: np.ndarray      # (B,)
    strata_M: np.ndarray     # (B, n_strata)
    selected: np.ndarray     # (B,) grid index of the BIC-best refit


@dataclass(frozen=True, eq=False)
class BootstrapSummary:
    """Percentile intervals for rates and missing-study counts."""

    confidence_level: float
    rate_intervals: tuple[tuple[tuple[float, int], tuple[float, float]], ...]
    N_interval_total: tuple[float, float]
    missing_interval_total: tuple[float, float]
    strata_intervals: tuple[tuple[str, tuple[float, float]], ...]
    replicate_diagnostics: ReplicateDiagnostics
    replicates: ReplicateArrays


def bic_weights(fits) -> BicWeights:
    """BIC weights w_l = exp(-Delta_l/2) / sum_k exp(-Delta_k/2).

    ``fits`` must be the ten count-model fits in grid order.  Fits that
    failed to converge get weight zero (and are flagged); the rest are
    renormalised.
    """
    fits = list(fits)
    grid = count_model_grid()
    if len(fits) != len(grid):
        raise ValueError(f"expected {len(grid)} fits, got {len(fits)}")
    for fit, spec in zip(fits, grid):
        if fit.spec != spec:
            raise ValueError(f"fits out of grid order: expected {spec}, got {fit.spec}")
    bics = np.array([f.bic for f in fits])
    ok = np.array([f.converged and np.isfinite(f.bic) for f in fits])
    if not ok.any():
        raise ValueError("all ten fits failed; no weights to compute")
    delta = bics - np.min(bics[ok])
    w = np.where(ok, np.exp(-0.5 * np.where(ok, delta, 0.0)), 0.0)
    w /= w.sum()
    return BicWeights(weights=w, excluded=tuple(int(i) for i in np.nonzero(~ok)[0]))


def wald_interval(fit: FitResult, confidence_level: float = 0.95) -> tuple[float, float]:
    """Wald interval exp[beta_hat -/+ z * se] for an intercept-only rate fit."""
    if fit.beta.shape[0] != 1:
        raise ValueError("the Wald interval is defined for intercept-only fits")
    if fit.se_beta is None or not np.all(np.isfinite(fit.se_beta)):
        raise ValueError("fit has no usable standard error")
    if not 0.0 < confidence_level < 1.0:
        raise ValueError("confidence_level must lie in (0, 1)")
    z = norm.ppf(1.0 - (1.0 - confidence_level) / 2.0)
    b, se = float(fit.beta[0]), float(fit.se_beta[0])
    return float(np.exp(b - z * se)), float(np.exp(b + z * se))


# ---------------------------------------------------------------------------
# replicate engine
# ---------------------------------------------------------------------------

_CTX: dict | None = None


def _init_worker(payload: dict) -> None:
    global _CTX
    _CTX = payload


def _replicate(b: int, ctx: dict):
    """Run replicate b from its own seed-derived stream."""
    rng = np.random.default_rng(np.random.SeedSequence(ctx["seed"], spawn_key=(b,)))
    designs: PreparedDesigns = ctx["designs"]
    n = designs.n
    redraws = 0
    failures = np.zeros(10, dtype=np.int64)
    while True:
        lstar = int(np.searchsorted(ctx["cum_weights"], rng.random(), side="right"))
        y_star = ctx["samplers"][lstar].sample(rng)
        refits = refit_count_grid(y_star, designs)
        ok = [i for i, f in enumerate(refits) if f.converged and np.isfinite(f.bic)]
        for i, f in enumerate(refits):
            if i not in ok:
                failures[i] += 1
        if ok:
            break
        redraws += 1
        if redraws > _MAX_REDRAWS_PER_REPLICATE:
            raise RuntimeError(f"replicate {b}: every refit failed repeatedly")
    j = min(ok, key=lambda i: (refits[i].bic, i))
    sel = refits[j]
    rates = np.exp(ctx["subpop_rows"][sel.lp] @ sel.beta)
    mu = designs.e * np.exp(designs.X[sel.lp] @ sel.beta)
    kw = {"mean": mu}
    if sel.family is Family.NEGBIN:
        kw["dispersion"] = sel.alpha
    N_i = 1.0 / (-np.expm1(log_p0(sel.family, **kw)))
    total_N = float(N_i.sum())
    strata_M = ctx["masks"] @ (N_i - 1.0)
    return lstar, j, rates, total_N, total_N - n, strata_M, redraws, failures


def _run_chunk(span):
    b0, b1 = span
    ctx = _CTX
    rows = b1 - b0
    rates = np.empty((rows, len(ctx["subpops"])))
    total_N = np.empty(rows)
    total_M = np.empty(rows)
    strata_M = np.empty((rows, ctx["masks"].shape[0]))
    sampled = np.zeros(10, dtype=np.int64)
    selected_counts = np.zeros(10, dtype=np.int64)
    selected = np.empty(rows, dtype=np.int64)
    redraws = 0
    failures = np.zeros(10, dtype=np.int64)
    for i, b in enumerate(range(b0, b1)):
        lstar, j, r, tn, tm, sm, rd, fl = _replicate(b, ctx)
        sampled[lstar] += 1
        selected_counts[j] += 1
        selected[i] = j
        rates[i] = r
        total_N[i] = tn
        total_M[i] = tm
        strata_M[i] = sm
        redraws += rd
        failures += fl
    return b0, rates, total_N, total_M, strata_M, selected, sampled, selected_counts, redraws, failures


def _quantile_pair(a: np.ndarray, level: float, axis=0):
    tail = (1.0 - level) / 2.0
    return np.quantile(a, [tail, 1.0 - tail], axis=axis, method="linear")


def run_bootstrap(ds: Dataset, fits, cfg: BootstrapConfig | None = None,
                  n_jobs: int = 1) -> BootstrapSummary:
    """Run the BIC-weighted parametric bootstrap.

    ``fits`` must be the ten zero-truncated count-model fits on the
    observed data, in grid order.  One pass records both the
    sub-population rates and the Horvitz-Thompson study counts for every
    replicate.  ``n_jobs`` only sets the number of worker processes; it
    never changes the result.
    """
    cfg = cfg or BootstrapConfig()
    weights = bic_weights(fits)
    designs = prepare_designs(ds)

    samplers = []
    for fit in fits:
        if fit.converged:
            mu = designs.e * np.exp(designs.X[fit.spec.lp] @ fit.beta)
            samplers.append(prepare_zt_sampler(
                fit.spec.family, mean=mu, dispersion=fit.alpha))
        else:  # weight is zero; never sampled
            samplers.append(None)

    payload = {
        "seed": int(cfg.seed),
        "cum_weights": np.cumsum(weights.weights),
        "designs": designs,
        "samplers": samplers,
        "subpops": tuple(cfg.subpopulations),
        "subpop_rows": {
            lp: np.vstack([design_row(lp, x1, x2) for x1, x2 in cfg.subpopulations])
            for lp in (1, 2, 3, 4, 5)
        },
        "masks": stratum_masks(ds, cfg.strata),
    }

    B = cfg.n_replicates
    n_jobs = max(1, int(n_jobs))
    chunk = max(1, min(512, -(-B // (n_jobs * 8))))
    spans = [(b, min(b + chunk, B)) for b in range(0, B, chunk)]

    if n_jobs == 1:
        _init_worker(payload)
        results = [_run_chunk(s) for s in spans]
    else:
        with multiprocessing.Pool(n_jobs, initializer=_init_worker,
                                  initargs=(payload,)) as pool:
            results = pool.map(_run_chunk, spans)
    results.sort(key=lambda r: r[0])

    rates = np.vstack([r[1] for r in results])
    total_N = np.concatenate([r[2] for r in results])
    total_M = np.concatenate([r[3] for r in results])
    strata_M = np.vstack([r[4] for r in results])
    selected = np.concatenate([r[5] for r in results])
    sampled = sum(r[6] for r in results)
    selected_counts = sum(r[7] for r in results)
    redraws = sum(r[8] for r in results)
    failures = sum(r[9] for r in results)

    if redraws > 0.01 * B:
        warnings.warn(f"{redraws} replicates required redraws (> 1% of B={B})",
                      RuntimeWarning, stacklevel=2)

    lvl = cfg.confidence_level
    rate_q = _quantile_pair(rates, lvl)
    strata_q = _quantile_pair(strata_M, lvl)
    nq = _quantile_pair(total_N, lvl)
    mq = _quantile_pair(total_M, lvl)

    return BootstrapSummary(
        confidence_level=lvl,
        rate_intervals=tuple(
            (sp, (float(rate_q[0, k]), float(rate_q[1, k])))
            for k, sp in enumerate(cfg.subpopulations)),
        N_interval_total=(float(nq[0]), float(nq[1])),
        missing_interval_total=(float(mq[0]), float(mq[1])),
        strata_intervals=tuple(
            (s.label, (float(strata_q[0, k]), float(strata_q[1, k])))
            for k, s in enumerate(cfg.strata)),
        replicate_diagnostics=ReplicateDiagnostics(
            sampled_counts=sampled, selected_counts=selected_counts,
            fit_failures=failures, redraws=int(redraws)),
        replicates=ReplicateArrays(
            rates=rates, total_N=total_N, total_M=total_M,
            strata_M=strata_M, selected=selected),
    )
