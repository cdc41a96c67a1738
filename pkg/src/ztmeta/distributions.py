"""Count distributions and their zero-truncated counterparts.

Poisson, negative-binomial and binomial probability functions, the
corresponding zero-truncated laws p(y)/(1 - p(0)), and samplers for the
truncated distributions.  Everything is evaluated in log space so that
exposures in the tens of thousands of person-years neither overflow nor
lose the truncation correction to cancellation.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.special import gammaln, xlog1py, xlogy

__all__ = [
    "Family",
    "CountParams",
    "ZtSampler",
    "pmf",
    "log_pmf",
    "zt_pmf",
    "zt_log_pmf",
    "sample_zt",
    "sample_zt_vector",
    "prepare_zt_sampler",
    "logpmf",
    "log_p0",
    "log_prob_positive",
    "log_rising_factorial",
]

# Untruncated means at or below this are sampled by inverse-CDF table
# lookup; above it a rejection sampler is used (zeros are then vanishingly
# rare, so rejection almost never loops).
_TABLE_MEAN_MAX = 50.0
_TABLE_TAIL_TOL = 1e-15


class Family(str, Enum):
    """Count distribution family."""

    POISSON = "poisson"
    NEGBIN = "negbin"
    BINOMIAL = "binomial"


@dataclass(frozen=True)
class CountParams:
    """Parameters for one count distribution.

    Exactly the fields the family requires must be set: ``mean`` for
    Poisson, ``mean`` and ``dispersion`` for the negative-binomial,
    ``trials`` and ``success_prob`` for the binomial.  The negative
    binomial is parameterised so that Var(Y) = mean + mean^2/dispersion.
    """

    mean: float | None = None
    dispersion: float | None = None
    trials: int | None = None
    success_prob: float | None = None


def _validate(family: Family, params: CountParams) -> None:
    family = Family(family)
    if family is Family.POISSON:
        if params.mean is None or not params.mean > 0:
            raise ValueError("Poisson requires mean > 0")
        if params.dispersion is not None or params.trials is not None:
            raise ValueError("Poisson takes only a mean")
    elif family is Family.NEGBIN:
        if params.mean is None or not params.mean > 0:
            raise ValueError("negative-binomial requires mean > 0")
        if params.dispersion is None or not params.dispersion > 0:
            raise ValueError("negative-binomial requires dispersion > 0")
        if params.trials is not None or params.success_prob is not None:
            raise ValueError("negative-binomial takes mean and dispersion only")
    else:
        if params.trials is None or params.trials < 1:
            raise ValueError("binomial requires trials >= 1")
        if params.success_prob is None or not 0.0 <= params.success_prob <= 1.0:
            raise ValueError("binomial requires success_prob in [0, 1]")
        if params.mean is not None or params.dispersion is not None:
            raise ValueError("binomial takes trials and success_prob only")


def log_rising_factorial(alpha: float, y) -> np.ndarray:
    """log[Gamma(alpha + y) / Gamma(alpha)] for integer y >= 0.

    Computed as sum_{j<y} log(alpha + j); unlike a difference of gammaln
    values this stays accurate when alpha is very large (dispersions of
    1e5 and beyond turn up routinely when the data are Poisson-like).
    """
    y = np.asarray(y, dtype=np.int64)
    ymax = int(y.max()) if y.size else 0
    if ymax == 0:
        return np.zeros(y.shape)
    steps = np.log(alpha + np.arange(ymax, dtype=float))
    cum = np.concatenate(([0.0], np.cumsum(steps)))
    return cum[y]


def digamma_rising_sum(alpha: float, y) -> np.ndarray:
    """digamma(alpha + y) - digamma(alpha) for integer y >= 0, via sum_{j<y} 1/(alpha+j)."""
    y = np.asarray(y, dtype=np.int64)
    ymax = int(y.max()) if y.size else 0
    if ymax == 0:
        return np.zeros(y.shape)
    steps = 1.0 / (alpha + np.arange(ymax, dtype=float))
    cum = np.concatenate(([0.0], np.cumsum(steps)))
    return cum[y]


def _poisson_logpmf(y, mu) -> np.ndarray:
    y = np.asarray(y)
    mu = np.asarray(mu, dtype=float)
    return xlogy(y, mu) - mu - gammaln(np.asarray(y, dtype=float) + 1.0)


def _negbin_logpmf(y, mu, alpha: float) -> np.ndarray:
    y = np.asarray(y)
    mu = np.asarray(mu, dtype=float)
    return (
        log_rising_factorial(alpha, y)
        - gammaln(np.asarray(y, dtype=float) + 1.0)
        - alpha * np.log1p(mu / alpha)
        + xlogy(y, mu)
        - xlogy(y, alpha + mu)
    )


def _binomial_logpmf(y, trials, p) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    n = np.asarray(trials, dtype=float)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = (
            gammaln(n + 1.0)
            - gammaln(y + 1.0)
            - gammaln(n - y + 1.0)
            + xlogy(y, p)
            + xlog1py(n - y, -p)
        )
    return np.where(y > n, -np.inf, out)


def logpmf(family: Family, y, *, mean=None, dispersion=None, trials=None,
           success_prob=None) -> np.ndarray:
    """Vectorised log-pmf; parameters broadcast against ``y``."""
    family = Family(family)
    if family is Family.POISSON:
        return _poisson_logpmf(y, mean)
    if family is Family.NEGBIN:
        return _negbin_logpmf(y, mean, dispersion)
    return _binomial_logpmf(y, trials, success_prob)


def log_p0(family: Family, *, mean=None, dispersion=None, trials=None,
           success_prob=None) -> np.ndarray:
    """Vectorised log p(0); the building block of every truncation correction."""
    family = Family(family)
    if family is Family.POISSON:
        return -np.asarray(mean, dtype=float)
    if family is Family.NEGBIN:
        return -dispersion * np.log1p(np.asarray(mean, dtype=float) / dispersion)
    return xlog1py(np.asarray(trials, dtype=float), -success_prob)


def log_prob_positive(logp0) -> np.ndarray:
    """log P(Y >= 1) = log(1 - p(0)) computed from log p(0).

    Uses expm1 so the result is accurate both when p(0) is tiny and when
    it is within a rounding error of 1 (where the result diverges to -inf).
    """
    with np.errstate(divide="ignore"):
        return np.log(-np.expm1(np.asarray(logp0, dtype=float)))


def _params_kwargs(params: CountParams) -> dict:
    return {
        "mean": params.mean,
        "dispersion": params.dispersion,
        "trials": params.trials,
        "success_prob": params.success_prob,
    }


def log_pmf(family: Family, y: int, params: CountParams) -> float:
    """log p(y) for a single count under the given family."""
    _validate(family, params)
    if y < 0 or y != int(y):
        raise ValueError(f"count must be a non-negative integer, got {y!r}")
    return float(logpmf(family, int(y), **_params_kwargs(params)))


def pmf(family: Family, y: int, params: CountParams) -> float:
    """p(y) for a single count; evaluated as exp(log pmf)."""
    return float(np.exp(log_pmf(family, y, params)))


def zt_log_pmf(family: Family, y: int, params: CountParams) -> float:
    """log of the zero-truncated pmf, log[p(y) / (1 - p(0))], for y >= 1."""
    _validate(family, params)
    if y < 1 or y != int(y):
        raise ValueError(f"zero-truncated support is y >= 1, got {y!r}")
    lpp = float(log_prob_positive(log_p0(family, **_params_kwargs(params))))
    if not np.isfinite(lpp):
        raise ValueError("degenerate truncation: p(0) is numerically 1")
    return float(logpmf(family, int(y), **_params_kwargs(params))) - lpp


def zt_pmf(family: Family, y: int, params: CountParams) -> float:
    """Zero-truncated pmf p(y)/(1 - p(0)) for y >= 1."""
    return float(np.exp(zt_log_pmf(family, y, params)))


def _untruncated_mean(family: Family, params: CountParams) -> float:
    if family is Family.BINOMIAL:
        return params.trials * params.success_prob
    return params.mean


def _rejection_draw(family: Family, params: CountParams, rng, shape) -> np.ndarray:
    if family is Family.POISSON:
        return rng.poisson(params.mean, shape)
    if family is Family.NEGBIN:
        a = params.dispersion
        return rng.negative_binomial(a, a / (a + params.mean), shape)
    return rng.binomial(params.trials, params.success_prob, shape)


def _zt_cumulative_table(family: Family, params: CountParams) -> np.ndarray:
    """Cumulative zero-truncated probabilities for y = 1, 2, ... until the
    tail mass drops below _TABLE_TAIL_TOL."""
    kw = _params_kwargs(params)
    lpp = float(log_prob_positive(log_p0(family, **kw)))
    if not np.isfinite(lpp):
        raise ValueError("degenerate truncation: p(0) is numerically 1")
    size = 64
    while True:
        y = np.arange(1, size + 1)
        cum = np.cumsum(np.exp(logpmf(family, y, **kw) - lpp))
        if cum[-1] >= 1.0 - _TABLE_TAIL_TOL or size >= 100_000:
            return cum
        if family is Family.BINOMIAL and size >= params.trials:
            return cum
        size *= 2


def sample_zt(family: Family, params: CountParams, rng: np.random.Generator,
              size: int | None = None):
    """Draw from the zero-truncated distribution.

    Inverse-CDF lookup on the truncated pmf for untruncated means up to
    50; above that, rejection from the untruncated sampler (redrawing
    zeros).  Deterministic given the state of ``rng``.

    Returns a Python int when ``size`` is None, else an int ndarray.
    """
    family = Family(family)
    _validate(family, params)
    shape = () if size is None else (int(size),)
    if _untruncated_mean(family, params) <= _TABLE_MEAN_MAX:
        cum = _zt_cumulative_table(family, params)
        u = rng.random(shape)
        idx = np.minimum(np.searchsorted(cum, u, side="right"), len(cum) - 1)
        out = idx + 1
    else:
        out = _rejection_draw(family, params, rng, shape)
        for _ in range(1000):
            zero = out == 0
            if not np.any(zero):
                break
            redrawn = _rejection_draw(family, params, rng, int(np.count_nonzero(zero)))
            if size is None:
                out = redrawn[0] if redrawn.shape else redrawn
            else:
                out[zero] = redrawn
        else:
            raise ValueError("rejection sampler failed to produce a positive count")
    if size is None:
        return int(out)
    return np.asarray(out, dtype=np.int64)


@dataclass(frozen=True, eq=False)
class ZtSampler:
    """Precomputed zero-truncated sampler for a vector of parameters.

    Rows with untruncated mean up to 50 share a cumulative-probability
    table (inverse-CDF lookup); larger rows fall back to per-row rejection
    sampling.  Preparing once and sampling repeatedly keeps the bootstrap
    from rebuilding identical tables for every replicate.
    """

    n: int
    small_idx: np.ndarray
    cum: np.ndarray | None                 # (len(small_idx), Y)
    large_idx: np.ndarray
    large_params: tuple
    family: Family

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        out = np.empty(self.n, dtype=np.int64)
        if self.cum is not None:
            u = rng.random(self.small_idx.shape[0])
            out[self.small_idx] = 1 + np.sum(self.cum < u[:, None], axis=1)
        for i, params in zip(self.large_idx, self.large_params):
            out[i] = sample_zt(self.family, params, rng)
        return out


def prepare_zt_sampler(family: Family, *, mean=None, dispersion=None,
                       trials=None, success_prob=None) -> ZtSampler:
    """Build a ZtSampler for per-row parameters (one draw per row)."""
    family = Family(family)
    if family is Family.BINOMIAL:
        n_tr = np.asarray(trials, dtype=float)
        p = np.asarray(success_prob, dtype=float)
        means = n_tr * p
        kw = {"trials": n_tr, "success_prob": p}
    else:
        means = np.asarray(mean, dtype=float)
        kw = {"mean": means}
        if family is Family.NEGBIN:
            kw["dispersion"] = dispersion
    if np.any(~np.isfinite(means)) or np.any(means <= 0):
        raise ValueError("means must be positive and finite")

    small = means <= _TABLE_MEAN_MAX
    cum = None
    if np.any(small):
        kw_small = {k: (v[small] if np.ndim(v) else v) for k, v in kw.items()}
        lpp = log_prob_positive(log_p0(family, **kw_small))
        if np.any(~np.isfinite(lpp)):
            raise ValueError("degenerate truncation: p(0) is numerically 1")
        mmax = float(means[small].max())
        ymax = int(np.ceil(mmax + 12.0 * np.sqrt(mmax + 1.0) + 20.0))
        while True:
            grid = np.arange(1, ymax + 1)
            logp = logpmf(family, grid[None, :],
                          **{k: (np.asarray(v)[:, None] if np.ndim(v) else v)
                             for k, v in kw_small.items()})
            cum = np.cumsum(np.exp(logp - lpp[:, None]), axis=1)
            if float(cum[:, -1].min()) >= 1.0 - 1e-12 or ymax >= 100_000 \
                    or (family is Family.BINOMIAL and ymax >= kw_small["trials"].max()):
                break
            ymax *= 2
    large_idx = np.nonzero(~small)[0]
    large_params = tuple(
        CountParams(
            mean=None if family is Family.BINOMIAL else float(means[i]),
            dispersion=float(dispersion) if family is Family.NEGBIN else None,
            trials=int(round(float(np.asarray(trials)[i])))
            if family is Family.BINOMIAL else None,
            success_prob=float(np.asarray(success_prob)[i])
            if family is Family.BINOMIAL else None,
        )
        for i in large_idx
    )
    return ZtSampler(n=means.shape[0], small_idx=np.nonzero(small)[0], cum=cum,
                     large_idx=large_idx, large_params=large_params, family=family)


def sample_zt_vector(family: Family, rng: np.random.Generator, *, mean=None,
                     dispersion=None, trials=None, success_prob=None) -> np.ndarray:
    """One zero-truncated draw per entry of the parameter vectors."""
    return prepare_zt_sampler(family, mean=mean, dispersion=dispersion,
                              trials=trials, success_prob=success_prob).sample(rng)
