"""Dev scratch: finite-difference validation of analytic gradients/Hessians."""
import numpy as np
from scipy.special import gammaln

from ztmeta import bundled_dataset_path, impute_prop_women, load_csv, Family, ModelSpec
from ztmeta.ztreg import (
    _binom_funcs, _nb_funcs, _pois_funcs, design_matrix, loglik_gradient,
    _nb_dll_dlogalpha,
)

ds, _ = impute_prop_women(load_csv(bundled_dataset_path()))
y = ds.events.astype(float)
log_e = np.log(ds.exposures)
cy_sum = float(np.sum(gammaln(y + 1.0)))
rng = np.random.default_rng(0)

def fd_grad(f, x, h=1e-6):
    g = np.empty_like(x)
    for j in range(len(x)):
        hj = h * max(1.0, abs(x[j]))
        up = x.copy(); up[j] += hj
        dn = x.copy(); dn[j] -= hj
        g[j] = (f(up) - f(dn)) / (2 * hj)
    return g

worst = 0.0
for lp in (1, 2, 3, 4, 5):
    X = design_matrix(lp, ds.prop_women, ds.usa)
    for trunc in (False, True):
        for trial in range(20):
            beta = np.concatenate([[rng.uniform(-10, -6)], rng.uniform(-1, 1, X.shape[1] - 1)])
            # poisson
            fgh, f = _pois_funcs(X, y, log_e, cy_sum, trunc)
            ll, g, H = fgh(beta)
            gf = fd_grad(f, beta)
            err = np.max(np.abs(g - gf)) / max(1.0, np.max(np.abs(g)))
            worst = max(worst, err)
            # hessian vs FD of analytic gradient
            Hf = np.column_stack([
                (fgh(beta + e)[1] - fgh(beta - e)[1]) / (2e-6)
                for e in np.eye(len(beta)) * 1e-6])
            herr = np.max(np.abs(H - Hf)) / max(1.0, np.max(np.abs(H)))
            worst = max(worst, herr)
            # negbin
            alpha = float(np.exp(rng.uniform(-1, 8)))
            fgh, f = _nb_funcs(X, y, log_e, cy_sum, alpha, trunc)
            ll, g, H = fgh(beta)
            gf = fd_grad(f, beta)
            err = np.max(np.abs(g - gf)) / max(1.0, np.max(np.abs(g)))
            worst = max(worst, err)
            Hf = np.column_stack([
                (fgh(beta + e)[1] - fgh(beta - e)[1]) / (2e-6)
                for e in np.eye(len(beta)) * 1e-6])
            herr = np.max(np.abs(H - Hf)) / max(1.0, np.max(np.abs(H)))
            worst = max(worst, herr)
            # nb logalpha derivative
            ll1, gfull = loglik_gradient(ds, ModelSpec(Family.NEGBIN, lp, trunc), beta, alpha)
            def f_la(la):
                return loglik_gradient(ds, ModelSpec(Family.NEGBIN, lp, trunc), beta, float(np.exp(la)))[0]
            la = np.log(alpha)
            fd_la = (f_la(la + 1e-6) - f_la(la - 1e-6)) / 2e-6
            err = abs(gfull[-1] - fd_la) / max(1.0, abs(gfull[-1]))
            worst = max(worst, err)
            # binomial
            trials = np.rint(ds.exposures)
            cb_sum = float(np.sum(gammaln(trials + 1) - gammaln(y + 1) - gammaln(trials - y + 1)))
            fgh, f = _binom_funcs(X, y, trials, cb_sum, trunc)
            ll, g, H = fgh(beta)
            gf = fd_grad(f, beta)
            err = np.max(np.abs(g - gf)) / max(1.0, np.max(np.abs(g)))
            worst = max(worst, err)
            Hf = np.column_stack([
                (fgh(beta + e)[1] - fgh(beta - e)[1]) / (2e-6)
                for e in np.eye(len(beta)) * 1e-6])
            herr = np.max(np.abs(H - Hf)) / max(1.0, np.max(np.abs(H)))
            worst = max(worst, herr)

print("worst relative derivative error:", worst)
