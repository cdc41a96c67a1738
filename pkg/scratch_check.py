"""Dev scratch: verify reproduced values against the published analysis."""
import time

import numpy as np

from ztmeta import (
    bic_weights, bundled_dataset_path, chi_square_test, count_model_grid,
    fit_glm, fit_grid, fit_zt, fitted_frequencies, full_model_grid,
    ht_estimate, impute_prop_women, load_csv, pooled_rate_linear,
    pooled_rate_log, predict_rate, wald_interval, ModelSpec, Family,
    default_strata, round_half_up,
)

ds0 = load_csv(bundled_dataset_path())
print("n =", ds0.n, " sum y =", ds0.events.sum(), " sum e =", ds0.exposures.sum())

ds, imp = impute_prop_women(ds0)
print("imputed:", imp.imputed_values, "terms:", imp.selected_terms, "bic:", round(imp.bic, 3))
print("n candidates:", len(imp.candidates))

print("naive linear:", pooled_rate_linear(ds).rate * 1e5)   # expect 44.5
print("naive log   :", pooled_rate_log(ds).rate * 1e5)      # expect 60.0

# untruncated Poisson grid
u = fit_grid(ds, count_model_grid(truncated=False))
for f in u[:5]:
    print(f"untrunc P lp{f.spec.lp}: ll={f.loglik:.3f} k={f.k} bic={f.bic:.2f}")
best_u = min(u[:5], key=lambda f: f.bic)
print("best untrunc lp:", best_u.spec.lp,
      " rate USA:", predict_rate(best_u, 0.8, 1) * 1e5,
      " rate other:", predict_rate(best_u, 0.8, 0) * 1e5)

t0 = time.time()
zt = fit_grid(ds, full_model_grid())
t1 = time.time()
print(f"grid time {t1-t0:.2f}s")
for f in zt:
    a = "" if f.alpha is None else f" alpha={f.alpha:.4g}{' [bound]' if f.dispersion_at_bound else ''}"
    print(f"ZT {f.spec.family.value:8s} lp{f.spec.lp}: ll={f.loglik:.4f} k={f.k} "
          f"bic={f.bic:.4f} conv={f.converged}{a}")

w = bic_weights(zt[:10])
print("weights:", np.round(w.weights, 4))

best = min((f for f in zt[:10] if f.converged), key=lambda f: f.bic)
print("best:", best.spec, " beta0:", best.beta, " rate:", np.exp(best.beta[0]) * 1e5)
print("se:", best.se_beta)

ft = fitted_frequencies(ds, best, 4)
print("gof bins:", [(b[0], b[1], round(b[2], 3)) for b in ft.bins])
chi = chi_square_test(ft, best.k)
print("chi2:", chi.statistic, "dof:", chi.dof, "p:", chi.p_value)

wd = wald_interval(best, 0.95)
print("wald:", wd[0] * 1e5, wd[1] * 1e5)   # expect (23.3, 43.2)

pe = ht_estimate(ds, best, default_strata())
print("total N:", pe.total_N, "-> ", round_half_up(pe.total_N),
      " total M:", pe.total_M, "->", round_half_up(pe.total_M))
for s in pe.strata:
    print(f"  {s.stratum.label:20s} obs={s.observed:2d} missing={s.missing:8.3f} "
          f"-> {round_half_up(s.missing)}")
