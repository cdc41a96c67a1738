"""Command-line interface.

Subcommands mirror the analysis pipeline: ``impute``, ``fit``, ``gof``,
``population``, ``bootstrap`` and ``report`` (the whole pipeline in one
pass, written to a versioned ``report.json``).  With the bundled data and
default options the report reproduces the published analysis end to end.

Text and CSV outputs are views of the JSON content: every number they
show is present in the JSON report.  Floats are serialised at a fixed 12
significant digits with sorted keys, so identical inputs and options
produce byte-identical reports.  The ZTMETA_THREADS environment variable
sets the number of bootstrap worker processes (it never changes results).
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import bootstrap as bt
from . import gof as gof_mod
from . import meta, population, ztreg
from .dataset import Dataset, bundled_dataset_path, impute_prop_women, load_csv, save_csv
from .distributions import Family

SCHEMA_VERSION = 1
DEFAULT_SEED = 20130527  # arbitrary but fixed, so the shipped report is reproducible
PER_100K = 1e5


@dataclass
class RunConfig:
    """Options shared across subcommands."""

    input_path: str
    command: str
    b_replicates: int = 25000
    seed: int = DEFAULT_SEED
    confidence_level: float = 0.95
    tail_threshold: int = 4
    output_format: str = "text"
    output_path: str | None = None
    subpopulations: tuple = bt.DEFAULT_SUBPOPULATIONS
    strata: tuple = field(default_factory=population.default_strata)


class StageError(Exception):
    def __init__(self, stage: str, exc: Exception):
        super().__init__(f"{stage}: {exc}")
        self.stage = stage


def _stage(stage, fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except (ValueError, OSError, RuntimeError) as exc:
        raise StageError(stage, exc) from exc


def _jsonify(obj):
    """Recursively convert to JSON-ready types; floats at 12 significant digits."""
    if isinstance(obj, dict):
        return {str(k): _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        return float(f"{f:.12g}") if math.isfinite(f) else None
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, np.ndarray):
        return [_jsonify(v) for v in obj.tolist()]
    return obj


def _n_jobs() -> int:
    env = os.environ.get("ZTMETA_THREADS", "")
    if env.strip():
        return max(1, int(env))
    return os.cpu_count() or 1


def _load(cfg: RunConfig) -> Dataset:
    if not os.path.exists(cfg.input_path):
        raise StageError("dataset", FileNotFoundError(f"input file not found: {cfg.input_path}"))
    return _stage("dataset", load_csv, cfg.input_path)


def _load_complete(cfg: RunConfig):
    """Load and, if needed, impute; returns (dataset, imputation-or-None)."""
    ds = _load(cfg)
    if ds.has_missing_prop_women:
        ds, imp = _stage("impute", impute_prop_women, ds)
        return ds, imp
    return ds, None


def _fit_payload(fit: ztreg.FitResult) -> dict:
    return {
        "family": fit.spec.family.value,
        "lp": fit.spec.lp,
        "truncated": fit.spec.truncated,
        "beta": list(fit.beta),
        "alpha": fit.alpha,
        "loglik": fit.loglik,
        "n_params": fit.k,
        "bic": fit.bic,
        "converged": fit.converged,
        "se_beta": None if fit.se_beta is None else list(fit.se_beta),
        "dispersion_at_bound": fit.dispersion_at_bound,
    }


def build_report(cfg: RunConfig, n_jobs: int = 1) -> dict:
    """Run the full pipeline and assemble the report dictionary."""
    ds, imp = _load_complete(cfg)

    naive_lin = _stage("meta", meta.pooled_rate_linear, ds)
    naive_log = _stage("meta", meta.pooled_rate_log, ds)

    untrunc_specs = ztreg.count_model_grid(truncated=False)
    untrunc = _stage("fit", ztreg.fit_grid, ds, untrunc_specs)
    upois = [f for f in untrunc if f.spec.family is Family.POISSON]
    ubest = min((f for f in upois if f.converged), key=lambda f: f.bic)

    zt_fits = _stage("fit", ztreg.fit_grid, ds, ztreg.full_model_grid())
    count_fits = zt_fits[:10]
    weights = _stage("fit", bt.bic_weights, count_fits)
    best = min((f for f in count_fits if f.converged), key=lambda f: f.bic)

    ft = _stage("gof", gof_mod.fitted_frequencies, ds, best, cfg.tail_threshold)
    chi = _stage("gof", gof_mod.chi_square_test, ft, best.k)

    pe = _stage("population", population.ht_estimate, ds, best, cfg.strata)

    wald_fit = count_fits[0]  # zero-truncated Poisson, intercept only
    wald = _stage("bootstrap", bt.wald_interval, wald_fit, cfg.confidence_level)

    boot_cfg = bt.BootstrapConfig(
        n_replicates=cfg.b_replicates, seed=cfg.seed,
        subpopulations=tuple(cfg.subpopulations), strata=tuple(cfg.strata),
        confidence_level=cfg.confidence_level)
    summary = _stage("bootstrap", bt.run_bootstrap, ds, count_fits, boot_cfg,
                     n_jobs=n_jobs)

    rate0 = float(np.exp(best.beta[0])) if best.beta.shape[0] == 1 else None
    diag = summary.replicate_diagnostics
    grid_names = [f"{s.family.value}:lp{s.lp}" for s in ztreg.count_model_grid()]

    report = {
        "schema_version": SCHEMA_VERSION,
        "config": {
            "input": str(cfg.input_path),
            "b_replicates": cfg.b_replicates,
            "seed": cfg.seed,
            "confidence_level": cfg.confidence_level,
            "tail_threshold": cfg.tail_threshold,
        },
        "naive_linear": naive_lin.rate,
        "naive_log": naive_log.rate,
        "imputation": None if imp is None else {
            "imputed_values": imp.imputed_values,
            "selected_terms": list(imp.selected_terms),
            "bic": imp.bic,
        },
        "untruncated_grid": [_fit_payload(f) for f in untrunc],
        "untruncated_best": {
            "family": ubest.spec.family.value,
            "lp": ubest.spec.lp,
            "rate_usa": ztreg.predict_rate(ubest, 0.8, 1),
            "rate_other": ztreg.predict_rate(ubest, 0.8, 0),
        },
        "model_grid": [_fit_payload(f) for f in zt_fits],
        "bic_weights": {
            "weights": list(weights.weights),
            "excluded": list(weights.excluded),
        },
        "selected_model": _fit_payload(best),
        "zt_rate": rate0,
        "zt_beta0": float(best.beta[0]),
        "goodness_of_fit": {
            "tail_threshold": ft.tail_threshold,
            "bins": [{"label": b[0], "observed": b[1], "fitted": b[2]} for b in ft.bins],
            "chi_square": chi.statistic,
            "dof": chi.dof,
            "p_value": chi.p_value,
        },
        "wald_interval": {
            "confidence_level": cfg.confidence_level,
            "lower": wald[0],
            "upper": wald[1],
        },
        "population": {
            "per_study": [{"id": sid, "N": N, "M": M} for sid, N, M in pe.per_study],
            "total_studies_unrounded": pe.total_N,
            "total_missing_unrounded": pe.total_M,
            "strata": [{
                "label": s.stratum.label,
                "observed": s.observed,
                "missing": s.missing,
                "missing_rounded": population.round_half_up(s.missing),
            } for s in pe.strata],
        },
        "total_studies": population.round_half_up(pe.total_N),
        "total_missing": population.round_half_up(pe.total_M),
        "bootstrap": {
            "b_replicates": cfg.b_replicates,
            "seed": cfg.seed,
            "confidence_level": cfg.confidence_level,
            "rate_intervals": [{
                "prop_women": sp[0], "usa": sp[1], "lower": iv[0], "upper": iv[1],
            } for sp, iv in summary.rate_intervals],
            "total_studies_interval": list(summary.N_interval_total),
            "total_missing_interval": list(summary.missing_interval_total),
            "strata_intervals": [{
                "label": label, "lower": iv[0], "upper": iv[1],
            } for label, iv in summary.strata_intervals],
            "diagnostics": {
                "sampled_counts": dict(zip(grid_names, diag.sampled_counts.tolist())),
                "selected_counts": dict(zip(grid_names, diag.selected_counts.tolist())),
                "fit_failures": dict(zip(grid_names, diag.fit_failures.tolist())),
                "redraws": diag.redraws,
            },
        },
    }
    return _jsonify(report)


def _per_100k(rate) -> str:
    return "-" if rate is None else f"{rate * PER_100K:.2f}"


def render_text_report(report: dict) -> str:
    """Human-readable view; every number comes straight from the report."""
    out = []
    w = out.append
    w(f"Report (schema v{report['schema_version']}) for {report['config']['input']}")
    w("")
    w("Naive pooled rates (per 100,000 person-years; these ignore the "
      "excluded zero-count studies):")
    w(f"  linear {_per_100k(report['naive_linear'])}    log-scale {_per_100k(report['naive_log'])}")
    imp = report.get("imputation")
    if imp:
        vals = ", ".join(f"{k} -> {v:.3f}" for k, v in imp["imputed_values"].items())
        w(f"Imputed prop_women: {vals}  (terms: {', '.join(imp['selected_terms'])}; "
          f"BIC {imp['bic']:.2f})")
    ub = report["untruncated_best"]
    w(f"Untruncated {ub['family']} grid: best lp {ub['lp']}; rate USA "
      f"{_per_100k(ub['rate_usa'])}, others {_per_100k(ub['rate_other'])}")
    w("")
    w("Zero-truncated model grid:")
    w(f"  {'family':<10}{'lp':>3}{'loglik':>9}{'k':>3}{'BIC':>7}  weight")
    weights = report["bic_weights"]["weights"]
    for i, row in enumerate(report["model_grid"]):
        wt = f"{weights[i]:.4f}" if i < len(weights) else "-"
        w(f"  {row['family']:<10}{row['lp']:>3}{row['loglik']:>9.1f}"
          f"{row['n_params']:>3}{row['bic']:>7.1f}  {wt}")
    sel = report["selected_model"]
    w(f"Selected: zero-truncated {sel['family']} lp {sel['lp']}; "
      f"beta0 {report['zt_beta0']:.3f}; rate {_per_100k(report['zt_rate'])}")
    w("")
    g = report["goodness_of_fit"]
    labels = "  ".join(f"{b['label']}: {b['observed']} obs / {b['fitted']:.1f} fit"
                       for b in g["bins"])
    w(f"Goodness of fit: {labels}")
    w(f"  chi-square {g['chi_square']:.2f} on {g['dof']} dof, p = {g['p_value']:.2f}")
    wd = report["wald_interval"]
    w(f"Wald {wd['confidence_level']:.0%} interval: "
      f"({_per_100k(wd['lower'])}, {_per_100k(wd['upper'])}) per 100,000")
    w("")
    pop = report["population"]
    w(f"Horvitz-Thompson totals: {report['total_studies']} studies "
      f"({pop['total_studies_unrounded']:.1f} unrounded), "
      f"{report['total_missing']} missing ({pop['total_missing_unrounded']:.1f} unrounded)")
    for s in pop["strata"]:
        w(f"  {s['label']:<18} observed {s['observed']:>2}  "
          f"missing {s['missing_rounded']:>3} ({s['missing']:.1f})")
    w("")
    b = report["bootstrap"]
    w(f"Bootstrap ({b['b_replicates']} replicates, seed {b['seed']}, "
      f"{b['confidence_level']:.0%} percentile intervals):")
    for r in b["rate_intervals"]:
        where = "USA " if r["usa"] else "other"
        w(f"  rate  {where} prop_women {r['prop_women']:.2f}: "
          f"({_per_100k(r['lower'])}, {_per_100k(r['upper'])}) per 100,000")
    ni, mi = b["total_studies_interval"], b["total_missing_interval"]
    w(f"  total studies: ({ni[0]:.0f}, {ni[1]:.0f})   total missing: "
      f"({mi[0]:.0f}, {mi[1]:.0f})")
    for s in b["strata_intervals"]:
        w(f"  missing {s['label']:<18} ({s['lower']:.0f}, {s['upper']:.0f})")
    w(f"  redraws: {b['diagnostics']['redraws']}")
    return "\n".join(out) + "\n"


def write_report_csvs(report: dict, directory: str) -> list[str]:
    """Write the report's tables as CSV files; returns the paths written."""
    os.makedirs(directory, exist_ok=True)
    written = []

    def table(name, header, rows):
        path = os.path.join(directory, name)
        with open(path, "w", newline="", encoding="utf-8") as fh:
            wr = csv.writer(fh)
            wr.writerow(header)
            wr.writerows(rows)
        written.append(path)

    weights = report["bic_weights"]["weights"]
    table("model_grid.csv",
          ["family", "lp", "loglik", "n_params", "bic", "bic_weight"],
          [[r["family"], r["lp"], r["loglik"], r["n_params"], r["bic"],
            weights[i] if i < len(weights) else ""]
           for i, r in enumerate(report["model_grid"])])
    g = report["goodness_of_fit"]
    table("goodness_of_fit.csv", ["count", "observed", "fitted"],
          [[b["label"], b["observed"], b["fitted"]] for b in g["bins"]])
    table("population_strata.csv", ["stratum", "observed", "missing", "missing_rounded"],
          [[s["label"], s["observed"], s["missing"], s["missing_rounded"]]
           for s in report["population"]["strata"]])
    b = report["bootstrap"]
    table("bootstrap_rate_intervals.csv", ["prop_women", "usa", "lower", "upper"],
          [[r["prop_women"], r["usa"], r["lower"], r["upper"]]
           for r in b["rate_intervals"]])
    table("bootstrap_strata_intervals.csv", ["stratum", "lower", "upper"],
          [[s["label"], s["lower"], s["upper"]] for s in b["strata_intervals"]])
    return written


def _emit(payload: dict, text: str, fmt: str, csv_rows=None) -> None:
    if fmt == "json":
        print(json.dumps(_jsonify(payload), indent=2, sort_keys=True, ensure_ascii=False))
    elif fmt == "csv" and csv_rows is not None:
        wr = csv.writer(sys.stdout)
        for row in csv_rows:
            wr.writerow(row)
    else:
        print(text, end="" if text.endswith("\n") else "\n")


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_impute(cfg: RunConfig) -> int:
    ds = _load(cfg)
    ds2, imp = _stage("impute", impute_prop_women, ds)
    if cfg.output_path:
        _stage("impute", save_csv, ds2, cfg.output_path)
    payload = {
        "imputed_values": imp.imputed_values,
        "selected_terms": list(imp.selected_terms),
        "bic": imp.bic,
        "n_candidates": len(imp.candidates),
        "output": cfg.output_path,
    }
    text = "\n".join(
        [f"imputed {k} -> {v:.4f}" for k, v in imp.imputed_values.items()]
        + [f"selected terms: {', '.join(imp.selected_terms)}",
           f"BIC {imp.bic:.3f} over {len(imp.candidates)} candidates"])
    rows = [["study", "imputed_prop_women"]] + \
        [[k, v] for k, v in _jsonify(imp.imputed_values).items()]
    _emit(payload, text, cfg.output_format, rows)
    return 0


def cmd_fit(cfg: RunConfig, family: str, lp: int, truncated: bool) -> int:
    ds, _ = _load_complete(cfg)
    spec = ztreg.ModelSpec(Family(family), lp, truncated)
    fit = _stage("fit", ztreg.fit_zt if truncated else ztreg.fit_glm, ds, spec)
    payload = _fit_payload(fit)
    kind = "zero-truncated " if truncated else ""
    lines = [f"{kind}{family} model, linear predictor {lp}"]
    for i, b in enumerate(fit.beta):
        se = f" (se {fit.se_beta[i]:.4f})" if fit.se_beta is not None else ""
        lines.append(f"  beta{i} = {b:.4f}{se}")
    if fit.alpha is not None:
        bound = " [at bound]" if fit.dispersion_at_bound else ""
        lines.append(f"  alpha = {fit.alpha:.6g}{bound}")
    lines.append(f"  loglik {fit.loglik:.3f}, k {fit.k}, BIC {fit.bic:.3f}, "
                 f"converged {fit.converged}")
    if fit.beta.shape[0] == 1:
        lines.append(f"  rate {_per_100k(ztreg.predict_rate(fit, 0.0, 0))} per 100,000")
    rows = [["key", "value"]] + [[k, v] for k, v in _jsonify(payload).items()]
    _emit(payload, "\n".join(lines), cfg.output_format, rows)
    return 0


def _best_count_fit(ds):
    fits = ztreg.fit_grid(ds, ztreg.count_model_grid())
    ok = [f for f in fits if f.converged]
    if not ok:
        raise ValueError("no zero-truncated count model converged")
    return fits, min(ok, key=lambda f: f.bic)


def cmd_gof(cfg: RunConfig) -> int:
    ds, _ = _load_complete(cfg)
    _, best = _stage("fit", _best_count_fit, ds)
    ft = _stage("gof", gof_mod.fitted_frequencies, ds, best, cfg.tail_threshold)
    chi = _stage("gof", gof_mod.chi_square_test, ft, best.k)
    payload = {
        "model": _fit_payload(best),
        "bins": [{"label": b[0], "observed": b[1], "fitted": b[2]} for b in ft.bins],
        "chi_square": chi.statistic,
        "dof": chi.dof,
        "p_value": chi.p_value,
    }
    lines = [f"model: zero-truncated {best.spec.family.value} lp {best.spec.lp}"]
    for b in ft.bins:
        lines.append(f"  count {b[0]:>3}: observed {b[1]:>2}, fitted {b[2]:.1f}")
    lines.append(f"chi-square {chi.statistic:.2f} on {chi.dof} dof, p = {chi.p_value:.2f}")
    rows = [["count", "observed", "fitted"]] + [[b[0], b[1], b[2]] for b in ft.bins]
    _emit(payload, "\n".join(lines), cfg.output_format, rows)
    return 0


def cmd_population(cfg: RunConfig) -> int:
    ds, _ = _load_complete(cfg)
    _, best = _stage("fit", _best_count_fit, ds)
    pe = _stage("population", population.ht_estimate, ds, best, cfg.strata)
    payload = {
        "model": _fit_payload(best),
        "total_studies_unrounded": pe.total_N,
        "total_missing_unrounded": pe.total_M,
        "total_studies": population.round_half_up(pe.total_N),
        "total_missing": population.round_half_up(pe.total_M),
        "strata": [{
            "label": s.stratum.label, "observed": s.observed, "missing": s.missing,
            "missing_rounded": population.round_half_up(s.missing),
        } for s in pe.strata],
        "per_study": [{"id": sid, "N": N, "M": M} for sid, N, M in pe.per_study],
    }
    lines = [f"total studies {payload['total_studies']} "
             f"({pe.total_N:.1f} unrounded); "
             f"missing {payload['total_missing']} ({pe.total_M:.1f} unrounded)"]
    for s in pe.strata:
        lines.append(f"  {s.stratum.label:<18} observed {s.observed:>2}  "
                     f"missing {population.round_half_up(s.missing):>3} ({s.missing:.1f})")
    rows = [["stratum", "observed", "missing", "missing_rounded"]] + \
        [[s.stratum.label, s.observed, s.missing, population.round_half_up(s.missing)]
         for s in pe.strata]
    _emit(payload, "\n".join(lines), cfg.output_format, rows)
    return 0


def cmd_bootstrap(cfg: RunConfig) -> int:
    ds, _ = _load_complete(cfg)
    fits, _ = _stage("fit", _best_count_fit, ds)
    boot_cfg = bt.BootstrapConfig(
        n_replicates=cfg.b_replicates, seed=cfg.seed,
        subpopulations=tuple(cfg.subpopulations), strata=tuple(cfg.strata),
        confidence_level=cfg.confidence_level)
    summary = _stage("bootstrap", bt.run_bootstrap, ds, fits, boot_cfg,
                     n_jobs=_n_jobs())
    diag = summary.replicate_diagnostics
    payload = {
        "b_replicates": cfg.b_replicates,
        "seed": cfg.seed,
        "confidence_level": cfg.confidence_level,
        "rate_intervals": [{
            "prop_women": sp[0], "usa": sp[1], "lower": iv[0], "upper": iv[1],
        } for sp, iv in summary.rate_intervals],
        "total_studies_interval": list(summary.N_interval_total),
        "total_missing_interval": list(summary.missing_interval_total),
        "strata_intervals": [{"label": label, "lower": iv[0], "upper": iv[1]}
                             for label, iv in summary.strata_intervals],
        "redraws": diag.redraws,
    }
    lines = [f"bootstrap: {cfg.b_replicates} replicates, seed {cfg.seed}"]
    for r in payload["rate_intervals"]:
        where = "USA " if r["usa"] else "other"
        lines.append(f"  rate {where} prop_women {r['prop_women']:.2f}: "
                     f"({_per_100k(r['lower'])}, {_per_100k(r['upper'])}) per 100,000")
    ni, mi = payload["total_studies_interval"], payload["total_missing_interval"]
    lines.append(f"  total studies ({ni[0]:.0f}, {ni[1]:.0f}); "
                 f"total missing ({mi[0]:.0f}, {mi[1]:.0f})")
    for s in payload["strata_intervals"]:
        lines.append(f"  missing {s['label']:<18} ({s['lower']:.0f}, {s['upper']:.0f})")
    rows = [["stratum", "lower", "upper"]] + \
        [[s["label"], s["lower"], s["upper"]] for s in payload["strata_intervals"]]
    _emit(payload, "\n".join(lines), cfg.output_format, rows)
    return 0


def cmd_report(cfg: RunConfig) -> int:
    report = build_report(cfg, n_jobs=_n_jobs())
    out_path = cfg.output_path or "report.json"
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True, ensure_ascii=False)
        fh.write("\n")
    if cfg.output_format == "csv":
        write_report_csvs(report, os.path.splitext(out_path)[0] + "_tables")
    text = render_text_report(report)
    if cfg.output_format == "json":
        print(json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False))
    else:
        print(text, end="")
    print(f"wrote {out_path}", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ztmeta",
        description="Zero-truncated count models for meta-analyses that "
                    "exclude zero-count studies.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, output=False):
        p.add_argument("--input", default=str(bundled_dataset_path()),
                       help="input CSV (default: bundled dataset)")
        p.add_argument("--format", choices=("text", "json", "csv"), default="text")
        if output:
            p.add_argument("--output", default=None)

    p = sub.add_parser("impute", help="fill missing prop_women values")
    common(p, output=True)

    p = sub.add_parser("fit", help="fit one model")
    common(p)
    p.add_argument("--family", choices=("poisson", "negbin", "binomial"),
                   required=True)
    p.add_argument("--lp", type=int, choices=(1, 2, 3, 4, 5), required=True)
    p.add_argument("--truncated", action="store_true")

    p = sub.add_parser("gof", help="goodness of fit of the BIC-best model")
    common(p)
    p.add_argument("--tail-threshold", type=int, default=4)

    p = sub.add_parser("population", help="Horvitz-Thompson missing-study estimates")
    common(p)
    p.add_argument("--strata", choices=("default",), default="default")

    p = sub.add_parser("bootstrap", help="model-averaged parametric bootstrap")
    common(p)
    p.add_argument("--b", type=int, default=25000, help="replicates")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--confidence", type=float, default=0.95)

    p = sub.add_parser("report", help="full pipeline; writes report.json")
    common(p, output=True)
    p.add_argument("--b", type=int, default=25000, help="bootstrap replicates")
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.add_argument("--confidence", type=float, default=0.95)
    p.add_argument("--tail-threshold", type=int, default=4)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        input_path=args.input,
        command=args.command,
        output_format=args.format,
        b_replicates=getattr(args, "b", 25000),
        seed=getattr(args, "seed", DEFAULT_SEED),
        confidence_level=getattr(args, "confidence", 0.95),
        tail_threshold=getattr(args, "tail_threshold", 4),
        output_path=getattr(args, "output", None),
    )
    try:
        if args.command == "impute":
            return cmd_impute(cfg)
        if args.command == "fit":
            return cmd_fit(cfg, args.family, args.lp, args.truncated)
        if args.command == "gof":
            return cmd_gof(cfg)
        if args.command == "population":
            return cmd_population(cfg)
        if args.command == "bootstrap":
            return cmd_bootstrap(cfg)
        return cmd_report(cfg)
    except StageError as exc:
        print(f"ztmeta {args.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
