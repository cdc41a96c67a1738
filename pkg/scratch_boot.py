"""Dev scratch: bootstrap timing, determinism, CI sanity."""
import time

import numpy as np

from ztmeta import (
    BootstrapConfig, bundled_dataset_path, count_model_grid, fit_grid,
    impute_prop_women, load_csv, run_bootstrap,
)

ds, _ = impute_prop_women(load_csv(bundled_dataset_path()))
fits = fit_grid(ds, count_model_grid())

cfg = BootstrapConfig(n_replicates=200, seed=20130527)
t0 = time.time()
s1 = run_bootstrap(ds, fits, cfg, n_jobs=1)
t1 = time.time()
print(f"B=200 n_jobs=1: {t1-t0:.2f}s  ({(t1-t0)/200*1000:.2f} ms/replicate)")

t0 = time.time()
s2 = run_bootstrap(ds, fits, cfg, n_jobs=2)
t2 = time.time()
print(f"B=200 n_jobs=2: {t2-t0:.2f}s")

same = (
    np.array_equal(s1.replicates.rates, s2.replicates.rates)
    and np.array_equal(s1.replicates.total_N, s2.replicates.total_N)
    and np.array_equal(s1.replicates.strata_M, s2.replicates.strata_M)
    and np.array_equal(s1.replicates.selected, s2.replicates.selected)
)
print("bit-identical across n_jobs 1 vs 2:", same)
print("sampled counts:", s1.replicate_diagnostics.sampled_counts)
print("selected counts:", s1.replicate_diagnostics.selected_counts)
print("failures:", s1.replicate_diagnostics.fit_failures, "redraws:", s1.replicate_diagnostics.redraws)

cfg = BootstrapConfig(n_replicates=2000, seed=11)
t0 = time.time()
s = run_bootstrap(ds, fits, cfg, n_jobs=2)
t1 = time.time()
print(f"\nB=2000 n_jobs=2: {t1-t0:.1f}s  ({(t1-t0)/2000*1000*2:.2f} ms/replicate/core)")
for sp, iv in s.rate_intervals:
    print(f"rate {sp}: ({iv[0]*1e5:.1f}, {iv[1]*1e5:.1f})")
print("total N CI:", tuple(round(v, 1) for v in s.N_interval_total), " (paper 101, 264)")
print("total M CI:", tuple(round(v, 1) for v in s.missing_interval_total), " (paper 74, 237)")
for label, iv in s.strata_intervals:
    print(f"missing {label:20s} ({iv[0]:.1f}, {iv[1]:.1f})")
