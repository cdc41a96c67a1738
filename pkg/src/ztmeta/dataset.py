"""Study-level data: ingestion, validation, covariate encoding, imputation.

One record per study -- exposure in person-years, the proportion of women
(possibly missing), the country of origin (encoded as a USA indicator) and
the number of observed events.  The single missing covariate value in the
bundled data is filled by a BIC-selected ordinary-least-squares regression.
"""

from __future__ import annotations

import csv
import dataclasses
from dataclasses import dataclass
from importlib import resources
from itertools import combinations
from pathlib import Path

import numpy as np

__all__ = [
    "StudyRecord",
    "Dataset",
    "ImputationResult",
    "ParseError",
    "load_csv",
    "save_csv",
    "impute_prop_women",
    "bundled_dataset_path",
]

_HEADER = ["id", "person_years", "prop_women", "country", "suicides"]


class ParseError(ValueError):
    """A CSV row that cannot be parsed into a StudyRecord."""


@dataclass(frozen=True)
class StudyRecord:
    """One study: exposure, covariates and event count."""

    id: str
    exposure: float
    prop_women: float | None
    country: str
    events: int

    def __post_init__(self):
        if not self.exposure > 0:
            raise ValueError(f"study {self.id!r}: exposure must be > 0, got {self.exposure}")
        if self.events < 0:
            raise ValueError(f"study {self.id!r}: events must be >= 0, got {self.events}")
        if self.prop_women is not None and not 0.0 <= self.prop_women <= 1.0:
            raise ValueError(
                f"study {self.id!r}: prop_women must lie in [0, 1], got {self.prop_women}"
            )

    @property
    def usa(self) -> int:
        """1 if the country of origin is exactly "USA", else 0."""
        return 1 if self.country == "USA" else 0


@dataclass(frozen=True)
class Dataset:
    """An ordered collection of studies."""

    records: tuple[StudyRecord, ...]

    def __post_init__(self):
        if len(self.records) < 1:
            raise ValueError("a dataset needs at least one study")
        ids = [r.id for r in self.records]
        if len(set(ids)) != len(ids):
            dupes = sorted({i for i in ids if ids.count(i) > 1})
            raise ValueError(f"duplicate study ids: {dupes}")

    @property
    def n(self) -> int:
        return len(self.records)

    @property
    def exposures(self) -> np.ndarray:
        return np.array([r.exposure for r in self.records])

    @property
    def prop_women(self) -> np.ndarray:
        """Proportion of women per study; NaN where missing."""
        return np.array([np.nan if r.prop_women is None else r.prop_women
                         for r in self.records])

    @property
    def usa(self) -> np.ndarray:
        return np.array([r.usa for r in self.records], dtype=float)

    @property
    def events(self) -> np.ndarray:
        return np.array([r.events for r in self.records], dtype=np.int64)

    @property
    def has_missing_prop_women(self) -> bool:
        return any(r.prop_women is None for r in self.records)


@dataclass(frozen=True)
class ImputationResult:
    """Outcome of the BIC-selected imputation regression.

    ``candidates`` lists every marginality-respecting term subset that was
    fitted, as (terms, bic) pairs, in visit order.
    """

    imputed_value: float
    selected_terms: tuple[str, ...]
    bic: float
    imputed_values: dict[str, float]
    candidates: tuple[tuple[tuple[str, ...], float], ...]


def bundled_dataset_path() -> Path:
    """Path of the packaged meta-analytic dataset (27 bariatric-surgery studies)."""
    return Path(resources.files("ztmeta").joinpath("data/peterhansel2013.csv"))


def load_csv(path) -> Dataset:
    """Load a dataset from CSV.

    Expected header: ``id,person_years,prop_women,country,suicides``; an
    empty prop_women field marks a missing value.  Country names are
    stripped of surrounding whitespace but otherwise kept verbatim.
    """
    path = Path(path)
    records = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != _HEADER:
            raise ParseError(f"{path}: expected header {','.join(_HEADER)!r}, got {header!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(_HEADER):
                raise ParseError(f"{path}: line {lineno}: expected {len(_HEADER)} fields, "
                                 f"got {len(row)}")
            sid, e_s, pw_s, country, y_s = (f.strip() for f in row)
            try:
                exposure = float(e_s)
                prop_women = None if pw_s == "" else float(pw_s)
                events = int(y_s)
            except ValueError as exc:
                raise ParseError(f"{path}: line {lineno}: {exc}") from None
            try:
                records.append(StudyRecord(sid, exposure, prop_women, country, events))
            except ValueError as exc:
                raise ValueError(f"{path}: line {lineno}: {exc}") from None
    return Dataset(tuple(records))


def _format_real(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def save_csv(ds: Dataset, path) -> None:
    """Write a dataset back to CSV; reals at full (round-trip) precision."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(_HEADER)
        for r in ds.records:
            writer.writerow([
                r.id,
                _format_real(r.exposure),
                "" if r.prop_women is None else repr(float(r.prop_women)),
                r.country,
                str(r.events),
            ])


# Candidate regression terms for the imputation model: three main effects
# and their two-way interactions, searched under the marginality rule (an
# interaction enters only alongside both of its main effects).
_MAIN_TERMS = ("person_years", "country", "events")


def _term_column(term: str, e, c, y):
    cols = {"person_years": e, "country": c, "events": y}
    if ":" in term:
        a, b = term.split(":")
        return cols[a] * cols[b]
    return cols[term]


def _candidate_term_sets():
    interactions = [f"{a}:{b}" for a, b in combinations(_MAIN_TERMS, 2)]
    for r in range(len(_MAIN_TERMS) + 1):
        for mains in combinations(_MAIN_TERMS, r):
            allowed = [t for t in interactions
                       if all(m in mains for m in t.split(":"))]
            for s in range(len(allowed) + 1):
                for inter in combinations(allowed, s):
                    yield mains + inter


def _gaussian_bic(resid: np.ndarray, n_coef: int) -> float:
    n = resid.shape[0]
    ssr = float(resid @ resid)
    loglik = -0.5 * n * (np.log(2.0 * np.pi) + np.log(ssr / n) + 1.0)
    return -2.0 * loglik + (n_coef + 1) * np.log(n)


def impute_prop_women(ds: Dataset) -> tuple[Dataset, ImputationResult]:
    """Fill missing prop_women values by a BIC-selected linear regression.

    Fits OLS models of prop_women on every marginality-respecting subset
    of {person_years, country, events} plus two-way interactions
    (intercept always included), picks the subset with the smallest
    Gaussian BIC, and predicts the missing entries from it.  Predictions
    are clamped to [0, 1].
    """
    missing_idx = [i for i, r in enumerate(ds.records) if r.prop_women is None]
    if not missing_idx:
        raise ValueError("no missing prop_women values to impute")
    complete = [r for r in ds.records if r.prop_women is not None]
    e = np.array([r.exposure for r in complete])
    c = np.array([float(r.usa) for r in complete])
    y = np.array([float(r.events) for r in complete])
    w = np.array([r.prop_women for r in complete])
    nc = len(complete)

    candidates = []
    best = None
    for terms in _candidate_term_sets():
        X = np.column_stack([np.ones(nc)] + [_term_column(t, e, c, y) for t in terms])
        if np.linalg.matrix_rank(X) < X.shape[1]:
            continue
        beta, *_ = np.linalg.lstsq(X, w, rcond=None)
        bic = _gaussian_bic(w - X @ beta, X.shape[1])
        candidates.append((terms, bic))
        if best is None or bic < best[1]:
            best = (terms, bic, beta)

    if best is None:
        raise ValueError("every candidate design matrix was rank deficient")
    terms, bic, beta = best

    imputed_values = {}
    new_records = list(ds.records)
    for i in missing_idx:
        r = ds.records[i]
        row = np.concatenate(([1.0], [_term_column(t, r.exposure, float(r.usa),
                                                   float(r.events)) for t in terms]))
        value = float(np.clip(row @ beta, 0.0, 1.0))
        imputed_values[r.id] = value
        new_records[i] = dataclasses.replace(r, prop_women=value)

    result = ImputationResult(
        imputed_value=imputed_values[ds.records[missing_idx[0]].id],
        selected_terms=terms,
        bic=float(bic),
        imputed_values=imputed_values,
        candidates=tuple(candidates),
    )
    return Dataset(tuple(new_records)), result
