"""Rate estimation from zero-truncated meta-analytic count data.

A meta-analysis that only admits studies with at least one observed event
overstates the event rate.  This package fits zero-truncated Poisson,
negative-binomial and binomial regression models with exposure offsets,
selects among them by BIC, estimates the number of excluded zero-count
studies with the Horvitz-Thompson estimator, and quantifies uncertainty
for both through a BIC-weighted model-averaged parametric bootstrap.
"""

from .bootstrap import (
    DEFAULT_SUBPOPULATIONS,
    BicWeights,
    BootstrapConfig,
    BootstrapSummary,
    bic_weights,
    run_bootstrap,
    wald_interval,
)
from .dataset import (
    Dataset,
    ImputationResult,
    ParseError,
    StudyRecord,
    bundled_dataset_path,
    impute_prop_women,
    load_csv,
    save_csv,
)
from .distributions import CountParams, Family, pmf, sample_zt, zt_pmf
from .gof import ChiSquareResult, FrequencyTable, chi_square_test, fitted_frequencies
from .meta import PooledEstimate, pooled_rate_linear, pooled_rate_log
from .population import (
    PopulationEstimate,
    StratumDef,
    default_strata,
    ht_estimate,
    round_half_up,
    stratify,
)
from .ztreg import (
    FitResult,
    ModelSpec,
    count_model_grid,
    design_matrix,
    design_row,
    fit_glm,
    fit_grid,
    fit_zt,
    full_model_grid,
    predict_rate,
)

__version__ = "0.1.0"

__all__ = [
    "BicWeights",
    "BootstrapConfig",
    "BootstrapSummary",
    "ChiSquareResult",
    "CountParams",
    "DEFAULT_SUBPOPULATIONS",
    "Dataset",
    "Family",
    "FitResult",
    "FrequencyTable",
    "ImputationResult",
    "ModelSpec",
    "ParseError",
    "PooledEstimate",
    "PopulationEstimate",
    "StratumDef",
    "StudyRecord",
    "bic_weights",
    "bundled_dataset_path",
    "chi_square_test",
    "count_model_grid",
    "default_strata",
    "design_matrix",
    "design_row",
    "fit_glm",
    "fit_grid",
    "fit_zt",
    "fitted_frequencies",
    "full_model_grid",
    "ht_estimate",
    "impute_prop_women",
    "load_csv",
    "pmf",
    "pooled_rate_linear",
    "pooled_rate_log",
    "predict_rate",
    "round_half_up",
    "run_bootstrap",
    "sample_zt",
    "save_csv",
    "stratify",
    "wald_interval",
    "zt_pmf",
]
