"""Count regressions with exposure offsets, untruncated and zero-truncated.

Five linear predictors over (proportion of women, USA indicator) combine
with Poisson, negative-binomial and binomial response families.  Poisson
and negative-binomial models use a log link with log person-years as an
offset; the binomial uses a logistic link with person-years as the number
of trials.  Fitting is damped Newton ascent with analytic gradients and
Hessians; the negative-binomial dispersion is profiled out on the log
scale.  Zero-truncated variants subtract log(1 - p(0)) from every term of
the log-likelihood.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar
from scipy.special import expit, gammaln

from .dataset import Dataset
from .distributions import (
    Family,
    digamma_rising_sum,
    log_rising_factorial,
)

__all__ = [
    "ModelSpec",
    "FitResult",
    "design_row",
    "design_matrix",
    "count_model_grid",
    "full_model_grid",
    "fit_glm",
    "fit_zt",
    "fit_grid",
    "predict_rate",
    "loglik_gradient",
]

# Newton convergence targets.
_GRAD_TOL = 1e-8
_STEP_TOL = 1e-10
_MAX_ITER = 200

# The dispersion is profiled on the log scale over this grid, then
# polished by a bounded 1-D search around the grid argmax.  log(alpha) is
# capped at log(1e8): past that the model is numerically Poisson and the
# likelihood ridge is flat.
_ALPHA_GRID = (1e-2, 1e-1, 1.0, 10.0, 1e2, 1e4, 1e6, 1e8)
_ALPHA_CAP = 1e8
_ALPHA_FLOOR = 1e-4
# Cheap interior probes used by the bootstrap refits: if neither beats the
# capped (Poisson-equivalent) fit, the full profile search is skipped.
_ALPHA_PROBES = (10.0, 1e3)

_ETA_MAX = 700.0  # exp() overflow guard on the log-mean scale


@dataclass(frozen=True)
class ModelSpec:
    """One candidate model: response family, linear predictor, truncation."""

    family: Family
    lp: int
    truncated: bool

    def __post_init__(self):
        object.__setattr__(self, "family", Family(self.family))
        if self.lp not in (1, 2, 3, 4, 5):
            raise ValueError(f"linear predictor index must be 1..5, got {self.lp}")


@dataclass(frozen=True, eq=False)
class FitResult:
    """A fitted model: coefficients, dispersion, log-likelihood and BIC."""

    spec: ModelSpec
    beta: np.ndarray
    alpha: float | None
    loglik: float
    k: int
    bic: float
    converged: bool
    se_beta: np.ndarray | None
    n_obs: int
    dispersion_at_bound: bool = False
    message: str | None = None


def design_row(lp: int, x1: float, x2: float) -> np.ndarray:
    """Coefficient-aligned regression function h_lp(x) for one study."""
    if lp == 1:
        return np.array([1.0])
    if lp == 2:
        return np.array([1.0, x1])
    if lp == 3:
        return np.array([1.0, x2])
    if lp == 4:
        return np.array([1.0, x1, x2])
    if lp == 5:
        return np.array([1.0, x1, x2, x1 * x2])
    raise ValueError(f"linear predictor index must be 1..5, got {lp}")


def design_matrix(lp: int, x1: np.ndarray, x2: np.ndarray) -> np.ndarray:
    """Stacked design rows for a whole dataset."""
    x1 = np.asarray(x1, dtype=float)
    x2 = np.asarray(x2, dtype=float)
    one = np.ones(x2.shape[0])
    if lp == 1:
        return one[:, None].copy()
    if lp == 2:
        return np.column_stack([one, x1])
    if lp == 3:
        return np.column_stack([one, x2])
    if lp == 4:
        return np.column_stack([one, x1, x2])
    if lp == 5:
        return np.column_stack([one, x1, x2, x1 * x2])
    raise ValueError(f"linear predictor index must be 1..5, got {lp}")


def count_model_grid(truncated: bool = True) -> tuple[ModelSpec, ...]:
    """The ten competing count models: Poisson lp 1..5, then NB lp 1..5."""
    return tuple(ModelSpec(fam, lp, truncated)
                 for fam in (Family.POISSON, Family.NEGBIN)
                 for lp in (1, 2, 3, 4, 5))


def full_model_grid() -> tuple[ModelSpec, ...]:
    """The fifteen zero-truncated models, binomial variants included."""
    return count_model_grid() + tuple(
        ModelSpec(Family.BINOMIAL, lp, True) for lp in (1, 2, 3, 4, 5))


# ---------------------------------------------------------------------------
# per-family log-likelihood machinery
#
# For the log-link families, eta = X beta + log e and mu = exp(eta); then
# d ell / d beta = X' r with r = mu * dell/dmu, and the Hessian is
# -X' diag(w) X.  Each factory returns fgh(beta) -> (loglik, grad, Hessian)
# and f(beta) -> loglik, sharing the per-dataset constants.
# ---------------------------------------------------------------------------


def _pois_funcs(X, y, log_e, cy_sum, truncated):
    Xt = X.T

    def f(beta):
        with np.errstate(all="ignore"):
            log_mu = np.minimum(X @ beta + log_e, _ETA_MAX)
            mu = np.exp(log_mu)
            ll = y @ log_mu - mu.sum() - cy_sum
            if truncated:
                ll -= np.log(-np.expm1(-mu)).sum()
        return float(ll)

    def fgh(beta):
        with np.errstate(all="ignore"):
            log_mu = np.minimum(X @ beta + log_e, _ETA_MAX)
            mu = np.exp(log_mu)
            ll = y @ log_mu - mu.sum() - cy_sum
            r = y - mu
            w = mu
            if truncated:
                em = np.expm1(-mu)           # e^-mu - 1
                ll -= np.log(-em).sum()
                t = -(1.0 + em) / em         # 1/(e^mu - 1)
                mt = mu * t
                r = r - mt
                w = mu + mt - (mt * mt + mu * mt)
            g = Xt @ r
            H = -(X * w[:, None]).T @ X
        return float(ll), g, H

    return fgh, f


def _nb_funcs(X, y, log_e, cy_sum, alpha, truncated):
    Xt = X.T
    lr_sum = float(log_rising_factorial(alpha, y.astype(np.int64)).sum())

    def _core(beta):
        log_mu = np.minimum(X @ beta + log_e, _ETA_MAX)
        mu = np.exp(log_mu)
        am = alpha + mu
        l1p = np.log1p(mu / alpha)           # log((alpha+mu)/alpha)
        ll = lr_sum - cy_sum + y @ log_mu - y @ (np.log(alpha) + l1p) \
            - alpha * l1p.sum()
        s = mu / am
        if truncated:
            lp0 = -alpha * l1p
            em = np.expm1(lp0)               # p0 - 1
            ll -= np.log(-em).sum()
            q = -(1.0 + em) / em             # p0 / (1 - p0)
        else:
            q = 0.0
        return ll, mu, am, s, q

    def f(beta):
        with np.errstate(all="ignore"):
            ll = _core(beta)[0]
        return float(ll)

    def fgh(beta):
        with np.errstate(all="ignore"):
            ll, mu, am, s, q = _core(beta)
            aq = alpha * q
            r = y - s * (alpha + y) - s * aq
            a = alpha / am
            w = s * a * (alpha + y + aq)
            if truncated:
                w = w - (s * alpha) ** 2 * (q * (1.0 + q))
            g = Xt @ r
            H = -(X * w[:, None]).T @ X
        return float(ll), g, H

    return fgh, f


def _binom_funcs(X, y, trials, cb_sum, truncated):
    Xt = X.T

    def _core(beta):
        eta = X @ beta
        rho = expit(eta)
        log_rho = -np.logaddexp(0.0, -eta)
        log_1m = -np.logaddexp(0.0, eta)
        ll = cb_sum + y @ log_rho + (trials - y) @ log_1m
        if truncated:
            em = np.expm1(trials * log_1m)   # p0 - 1
            ll -= np.log(-em).sum()
            q = -(1.0 + em) / em
        else:
            q = 0.0
        return ll, rho, q

    def f(beta):
        with np.errstate(all="ignore"):
            ll = _core(beta)[0]
        return float(ll)

    def fgh(beta):
        with np.errstate(all="ignore"):
            ll, rho, q = _core(beta)
            nr = trials * rho
            r = y - nr * (1.0 + q)
            w = trials * (1.0 + q) * rho * ((1.0 - rho) - nr * q)
            g = Xt @ r
            H = -(X * w[:, None]).T @ X
        return float(ll), g, H

    return fgh, f


# ---------------------------------------------------------------------------
# Newton ascent
# ---------------------------------------------------------------------------


def _solve_step(H, g):
    """Newton ascent step -H^{-1} g, with tiny systems special-cased."""
    p = g.shape[0]
    if p == 1:
        h = H[0, 0]
        return g / (abs(h) + 1.0) if h == 0 else np.array([-g[0] / h])
    if p == 2:
        det = H[0, 0] * H[1, 1] - H[0, 1] * H[1, 0]
        if det != 0:
            return np.array([
                (-g[0] * H[1, 1] + g[1] * H[0, 1]) / det,
                (-g[1] * H[0, 0] + g[0] * H[1, 0]) / det,
            ])
        return g / (np.abs(H).max() + 1.0)
    try:
        return np.linalg.solve(H, -g)
    except np.linalg.LinAlgError:
        return g / (np.abs(H).max() + 1.0)


def _newton(fgh, f_only, beta0):
    """Maximise by damped Newton; returns (beta, loglik, grad, H, converged).

    The full Newton step is tried optimistically (its evaluation doubles
    as the next iteration's base point); backtracking kicks in only when
    the step fails to improve the log-likelihood.  Convergence is declared
    when the gradient max-norm is below _GRAD_TOL and the proposed step
    below _STEP_TOL.
    """
    beta = np.asarray(beta0, dtype=float).copy()
    f, g, H = fgh(beta)
    if not np.isfinite(f):
        return beta, f, g, H, False
    converged = False
    tol_f = 1e-12
    for _ in range(_MAX_ITER):
        step = _solve_step(H, g)
        if not np.all(np.isfinite(step)) or float(step @ g) <= 0.0:
            step = g / (np.abs(H).max() + 1.0)  # fall back to steepest ascent
        if float(np.abs(g).max()) < _GRAD_TOL and float(np.abs(step).max()) < _STEP_TOL:
            converged = True
            break
        f2, g2, H2 = fgh(beta + step)
        t = 1.0
        if not (np.isfinite(f2) and f2 >= f - tol_f * (1.0 + abs(f))):
            t = 0.5
            while t > 1e-12:
                f_try = f_only(beta + t * step)
                if np.isfinite(f_try) and f_try >= f - tol_f * (1.0 + abs(f)):
                    break
                t *= 0.5
            else:
                break
            f2, g2, H2 = fgh(beta + t * step)
        beta = beta + t * step
        f, g, H = f2, g2, H2
        if float(np.abs(t * step).max()) < 1e-14:
            break
    return beta, f, g, H, bool(converged or float(np.abs(g).max()) < _GRAD_TOL)


def _nb_dll_dlogalpha(beta, X, y, log_e, alpha, truncated):
    """d loglik / d log(alpha); used for gradient checks and the boundary
    test when the profiled dispersion reaches its cap."""
    with np.errstate(all="ignore"):
        mu = np.exp(np.minimum(X @ beta + log_e, _ETA_MAX))
        l1p = np.log1p(mu / alpha)
        dlda = (digamma_rising_sum(alpha, y.astype(np.int64)) - l1p
                + 1.0 - (alpha + y) / (alpha + mu))
        if truncated:
            lp0 = -alpha * l1p
            em = np.expm1(lp0)
            q = -(1.0 + em) / em
            dlda = dlda + q * (-l1p + mu / (alpha + mu))
        return alpha * float(np.sum(dlda))


def _profile_nb(X, y, log_e, cy_sum, truncated, beta0, fast=False):
    """Maximise over (beta, alpha) by profiling log(alpha).

    Full mode scans a coarse grid and polishes an interior argmax with a
    bounded 1-D search (or runs the analytic boundary test at the cap).
    Fast mode -- used for bootstrap refits -- evaluates the cap and two
    interior probes, falling back to the full search only when a probe
    beats the Poisson-equivalent fit.
    """
    def inner(alpha, start):
        fgh, f_only = _nb_funcs(X, y, log_e, cy_sum, alpha, truncated)
        beta, ll, _, _, conv = _newton(fgh, f_only, start)
        return ll, beta, conv

    if fast:
        ll_cap, beta_cap, conv_cap = inner(_ALPHA_CAP, beta0)
        improved = False
        for a in _ALPHA_PROBES:
            ll_p, _, _ = inner(a, beta0)
            if ll_p > ll_cap + 1e-9:
                improved = True
                break
        if not improved:
            return beta_cap, _ALPHA_CAP, ll_cap, conv_cap, True

    # polish effort: tight for observed-data fits, loose for bootstrap
    # refits (the likelihood is flat in log(alpha) near its maximum, and
    # refits only feed a BIC comparison)
    xatol, maxiter = (2e-2, 25) if fast else (1e-3, 40)
    cache = {}
    start = np.asarray(beta0, dtype=float)
    for a in _ALPHA_GRID:
        ll, b, conv = inner(a, start)
        cache[a] = (ll, b, conv)
        start = b
    alphas = list(_ALPHA_GRID)
    i = int(np.argmax([cache[a][0] for a in alphas]))

    at_bound = False
    if i == len(alphas) - 1:
        beta_cap = cache[_ALPHA_CAP][1]
        slope = _nb_dll_dlogalpha(beta_cap, X, y, log_e, _ALPHA_CAP, truncated)
        if slope >= -1e-8:
            at_bound = True
            alpha_hat = _ALPHA_CAP
        else:
            lo, hi = alphas[-2], _ALPHA_CAP
    elif i == 0:
        lo, hi = _ALPHA_FLOOR, alphas[1]
    else:
        lo, hi = alphas[i - 1], alphas[i + 1]

    if not at_bound:
        warm = {"beta": cache[alphas[i]][1]}

        def neg_profile(log_a):
            a = float(np.exp(log_a))
            ll, b, conv = inner(a, warm["beta"])
            warm["beta"] = b
            cache[a] = (ll, b, conv)
            return -ll

        res = minimize_scalar(neg_profile, bounds=(np.log(lo), np.log(hi)),
                              method="bounded",
                              options={"xatol": xatol, "maxiter": maxiter})
        alpha_hat = float(np.exp(res.x))
        if alpha_hat not in cache:
            neg_profile(res.x)
        # a bounded polish can end a hair short of the best point seen
        best_a = max(cache, key=lambda a: cache[a][0])
        if cache[best_a][0] > cache[alpha_hat][0]:
            alpha_hat = best_a
        at_bound = alpha_hat >= _ALPHA_CAP * (1.0 - 1e-9)

    ll, beta, conv = cache[alpha_hat]
    return beta, float(alpha_hat), ll, conv, at_bound


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------


def loglik_gradient(ds: Dataset, spec: ModelSpec, beta, alpha: float | None = None):
    """Log-likelihood and analytic gradient at the given parameters.

    For negative-binomial specs the returned gradient has the derivative
    with respect to log(alpha) appended; exposed so the analytic
    derivatives can be cross-checked against finite differences.
    """
    beta = np.asarray(beta, dtype=float)
    y = ds.events.astype(float)
    X = design_matrix(spec.lp, np.nan_to_num(ds.prop_women), ds.usa)
    if spec.family is Family.BINOMIAL:
        trials = np.rint(ds.exposures)
        cb_sum = float(np.sum(gammaln(trials + 1.0) - gammaln(y + 1.0)
                              - gammaln(trials - y + 1.0)))
        fgh, _ = _binom_funcs(X, y, trials, cb_sum, spec.truncated)
        ll, g, _ = fgh(beta)
        return ll, g
    log_e = np.log(ds.exposures)
    cy_sum = float(np.sum(gammaln(y + 1.0)))
    if spec.family is Family.POISSON:
        fgh, _ = _pois_funcs(X, y, log_e, cy_sum, spec.truncated)
        ll, g, _ = fgh(beta)
        return ll, g
    if alpha is None:
        raise ValueError("negative-binomial gradient needs alpha")
    fgh, _ = _nb_funcs(X, y, log_e, cy_sum, alpha, spec.truncated)
    ll, g, _ = fgh(beta)
    g_la = _nb_dll_dlogalpha(beta, X, y, log_e, alpha, spec.truncated)
    return ll, np.concatenate([g, [g_la]])


def _fd_hessian(grad_fn, theta, h=1e-5):
    theta = np.asarray(theta, dtype=float)
    p = theta.shape[0]
    H = np.empty((p, p))
    for j in range(p):
        hj = h * max(1.0, abs(theta[j]))
        up = theta.copy(); up[j] += hj
        dn = theta.copy(); dn[j] -= hj
        H[:, j] = (grad_fn(up) - grad_fn(dn)) / (2.0 * hj)
    return 0.5 * (H + H.T)


def _se_from_hessian(H, n_beta):
    try:
        cov = np.linalg.inv(-H)
    except np.linalg.LinAlgError:
        return None
    d = np.diag(cov)[:n_beta]
    if np.any(d <= 0) or not np.all(np.isfinite(d)):
        return None
    return np.sqrt(d)


def _arrays_for(ds: Dataset, lp: int):
    x1 = ds.prop_women
    if lp in (2, 4, 5) and np.any(np.isnan(x1)):
        raise ValueError(
            "prop_women has missing values; impute before fitting a model that uses it")
    X = design_matrix(lp, np.nan_to_num(x1), ds.usa)
    return X, ds.events.astype(float), ds.exposures


def _poisson_start(X, y, log_e, cy_sum):
    """Untruncated Poisson fit, started at the pooled-rate intercept."""
    rate = max(float(np.sum(y)) / float(np.sum(np.exp(log_e))), 1e-300)
    beta0 = np.zeros(X.shape[1])
    beta0[0] = np.log(rate)
    fgh, f_only = _pois_funcs(X, y, log_e, cy_sum, False)
    return _newton(fgh, f_only, beta0)


def _assemble(spec, beta, alpha, ll, converged, n, se_beta, at_bound=False,
              message=None):
    p = beta.shape[0]
    k = p + (1 if spec.family is Family.NEGBIN else 0)
    bic = -2.0 * ll + k * np.log(n)
    return FitResult(spec=spec, beta=beta, alpha=alpha, loglik=ll, k=k,
                     bic=float(bic), converged=converged, se_beta=se_beta,
                     n_obs=n, dispersion_at_bound=at_bound, message=message)


def _nb_se(ds, spec, X, beta, alpha, at_bound, y, log_e, cy_sum):
    if at_bound:
        fgh, _ = _nb_funcs(X, y, log_e, cy_sum, alpha, spec.truncated)
        return _se_from_hessian(fgh(beta)[2], X.shape[1])
    theta = np.concatenate([beta, [np.log(alpha)]])
    grad = lambda th: loglik_gradient(ds, spec, th[:-1], float(np.exp(th[-1])))[1]  # noqa: E731
    return _se_from_hessian(_fd_hessian(grad, theta), X.shape[1])


def fit_glm(ds: Dataset, spec: ModelSpec) -> FitResult:
    """Fit an untruncated Poisson or negative-binomial rate model."""
    if spec.truncated:
        raise ValueError("fit_glm fits untruncated models; use fit_zt")
    if spec.family is Family.BINOMIAL:
        raise ValueError("fit_glm supports Poisson and negative-binomial only")
    X, y, e = _arrays_for(ds, spec.lp)
    log_e = np.log(e)
    cy_sum = float(np.sum(gammaln(y + 1.0)))
    beta_p, ll_p, _, H_p, conv_p = _poisson_start(X, y, log_e, cy_sum)
    if spec.family is Family.POISSON:
        return _assemble(spec, beta_p, None, ll_p, conv_p, ds.n,
                         _se_from_hessian(H_p, X.shape[1]))
    beta, alpha, ll, conv, at_bound = _profile_nb(
        X, y, log_e, cy_sum, False, beta_p)
    se = _nb_se(ds, spec, X, beta, alpha, at_bound, y, log_e, cy_sum)
    return _assemble(spec, beta, alpha, ll, conv, ds.n, se, at_bound)


def fit_zt(ds: Dataset, spec: ModelSpec) -> FitResult:
    """Fit a zero-truncated model by maximum likelihood.

    Requires every event count to be at least 1.  Coefficients start at
    the untruncated fit's estimates; the negative-binomial dispersion is
    profiled on the log scale and capped at 1e8 (a capped fit is flagged
    ``dispersion_at_bound`` but still returned).
    """
    if not spec.truncated:
        raise ValueError("fit_zt fits zero-truncated models; use fit_glm")
    if np.any(ds.events < 1):
        raise ValueError("zero-truncated fits need every event count >= 1")
    X, y, e = _arrays_for(ds, spec.lp)
    if spec.family is Family.BINOMIAL:
        trials = np.rint(e)
        cb_sum = float(np.sum(gammaln(trials + 1.0) - gammaln(y + 1.0)
                              - gammaln(trials - y + 1.0)))
        rate = float(np.sum(y)) / float(np.sum(trials))
        start = np.zeros(X.shape[1])
        start[0] = np.log(rate / (1.0 - rate))
        fgh_u, f_u = _binom_funcs(X, y, trials, cb_sum, False)
        beta0, _, _, _, _ = _newton(fgh_u, f_u, start)
        fgh, f_only = _binom_funcs(X, y, trials, cb_sum, True)
        beta, ll, _, H, conv = _newton(fgh, f_only, beta0)
        return _assemble(spec, beta, None, ll, conv, ds.n,
                         _se_from_hessian(H, X.shape[1]))
    log_e = np.log(e)
    cy_sum = float(np.sum(gammaln(y + 1.0)))
    beta_p, _, _, _, _ = _poisson_start(X, y, log_e, cy_sum)
    if spec.family is Family.POISSON:
        fgh, f_only = _pois_funcs(X, y, log_e, cy_sum, True)
        beta, ll, _, H, conv = _newton(fgh, f_only, beta_p)
        return _assemble(spec, beta, None, ll, conv, ds.n,
                         _se_from_hessian(H, X.shape[1]))
    beta, alpha, ll, conv, at_bound = _profile_nb(
        X, y, log_e, cy_sum, True, beta_p)
    se = _nb_se(ds, spec, X, beta, alpha, at_bound, y, log_e, cy_sum)
    return _assemble(spec, beta, alpha, ll, conv, ds.n, se, at_bound)


def fit_grid(ds: Dataset, specs) -> list[FitResult]:
    """Fit each spec in turn; failures become unconverged placeholders."""
    specs = list(specs)
    if not specs:
        raise ValueError("no model specs given")
    out = []
    for spec in specs:
        try:
            out.append(fit_zt(ds, spec) if spec.truncated else fit_glm(ds, spec))
        except (ValueError, np.linalg.LinAlgError) as exc:
            p = design_row(spec.lp, 0.0, 0.0).shape[0]
            out.append(FitResult(
                spec=spec, beta=np.full(p, np.nan), alpha=None, loglik=np.nan,
                k=p + (1 if spec.family is Family.NEGBIN else 0), bic=np.nan,
                converged=False, se_beta=None, n_obs=ds.n, message=str(exc)))
    return out


def predict_rate(fit: FitResult, x1: float, x2: float) -> float:
    """Event rate at covariates x: exp(h(x)'beta), or the logistic inverse
    for binomial fits (a per-trial probability, trials being person-years)."""
    eta = float(design_row(fit.spec.lp, x1, x2) @ fit.beta)
    if fit.spec.family is Family.BINOMIAL:
        return float(expit(eta))
    return float(np.exp(eta))


# ---------------------------------------------------------------------------
# array-level fast path used by the bootstrap (design matrices are fixed
# across replicates; only the counts change)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PreparedDesigns:
    """Per-dataset immutables shared by every bootstrap refit."""

    X: dict
    log_e: np.ndarray
    e: np.ndarray
    n: int


def prepare_designs(ds: Dataset) -> PreparedDesigns:
    x1 = ds.prop_women
    if np.any(np.isnan(x1)):
        raise ValueError("prop_women has missing values; impute first")
    return PreparedDesigns(
        X={lp: design_matrix(lp, x1, ds.usa) for lp in (1, 2, 3, 4, 5)},
        log_e=np.log(ds.exposures),
        e=ds.exposures,
        n=ds.n,
    )


@dataclass(frozen=True, eq=False)
class LightFit:
    """Minimal refit record kept per bootstrap replicate."""

    family: Family
    lp: int
    beta: np.ndarray
    alpha: float | None
    loglik: float
    bic: float
    converged: bool


def refit_count_grid(y: np.ndarray, designs: PreparedDesigns) -> list[LightFit]:
    """Refit the ten zero-truncated count models to new counts.

    Mirrors fit_zt (untruncated Poisson start, profiled NB dispersion) but
    skips standard errors, uses the fast dispersion path, and reuses the
    prepared design matrices; this is the hot path of the bootstrap.
    """
    y = np.asarray(y, dtype=float)
    log_e, n = designs.log_e, designs.n
    cy_sum = float(np.sum(gammaln(y + 1.0)))
    log_n = np.log(n)
    out = []
    pois_beta = {}
    for lp in (1, 2, 3, 4, 5):
        X = designs.X[lp]
        beta_p, _, _, _, _ = _poisson_start(X, y, log_e, cy_sum)
        pois_beta[lp] = beta_p
        fgh, f_only = _pois_funcs(X, y, log_e, cy_sum, True)
        beta, ll, _, _, conv = _newton(fgh, f_only, beta_p)
        k = X.shape[1]
        out.append(LightFit(Family.POISSON, lp, beta, None, ll,
                            float(-2.0 * ll + k * log_n), conv))
    for lp in (1, 2, 3, 4, 5):
        X = designs.X[lp]
        beta, alpha, ll, conv, _ = _profile_nb(
            X, y, log_e, cy_sum, True, pois_beta[lp], fast=True)
        k = X.shape[1] + 1
        out.append(LightFit(Family.NEGBIN, lp, beta, alpha, ll,
                            float(-2.0 * ll + k * log_n), conv))
    return out
