"""Cross-validation, train/test evaluation, and the experiment grid."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .dataset import MultiLabelDataset, sample, split
from .errors import ConfigError
from .learners import LearnerSpec
from .metrics import MetricReport, build_eval_pair, compute_report
from .multilabel import (
    DEFAULT_THRESHOLD,
    MultiLabelModel,
    train_bcc,
    train_br,
    train_cc,
    train_lp,
)

TRANSFORM_NAMES = {"br": "BR", "cc": "CC", "bcc": "BCC", "lp": "LP"}


@dataclass(frozen=True)
class ModelSpec:
    """A transformation plus its base learner and evaluation seed."""

    transform: str
    base: LearnerSpec
    threshold: float = DEFAULT_THRESHOLD
    seed: int = 1
    chain_order: tuple[int, ...] | str | None = None  # None, explicit, or "random"

    def __post_init__(self) -> None:
        if self.transform not in TRANSFORM_NAMES:
            raise ConfigError(f"unknown transform {self.transform!r}")
        if not 0.0 <= self.threshold <= 1.0:
            raise ConfigError(f"threshold must be in [0, 1], got {self.threshold}")

    @property
    def name(self) -> str:
        return f"{TRANSFORM_NAMES[self.transform]}/{self.base.display}"


def train_model(ds: MultiLabelDataset, spec: ModelSpec) -> MultiLabelModel:
    if spec.transform == "br":
        return train_br(ds, spec.base, seed=spec.seed, threshold=spec.threshold)
    if spec.transform == "cc":
        order = spec.chain_order
        if order == "random":
            order = tuple(int(j) for j in np.random.default_rng(spec.seed).permutation(ds.k))
        return train_cc(ds, spec.base, order=order, seed=spec.seed, threshold=spec.threshold)
    if spec.transform == "bcc":
        return train_bcc(ds, spec.base, seed=spec.seed, threshold=spec.threshold)
    return train_lp(ds, spec.base, seed=spec.seed, threshold=spec.threshold)


def evaluate_model(model: MultiLabelModel, test: MultiLabelDataset) -> MetricReport:
    predictions = model.predict_dataset(test)
    return compute_report(build_eval_pair(test.label_matrix(), predictions))


@dataclass(frozen=True)
class AggregateStat:
    mean: float
    std: float
    count: int

    def __post_init__(self) -> None:
        if self.count < 1:
            raise ConfigError("aggregate needs at least one value")

    def format(self, digits: int = 3) -> str:
        if self.count == 1:
            return f"{self.mean:.{digits}f}"
        return f"{self.mean:.{digits}f} +/- {self.std:.{digits}f}"


def _aggregate(values: list[float]) -> AggregateStat:
    arr = np.asarray(values, dtype=np.float64)
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return AggregateStat(float(arr.mean()), std, arr.size)


@dataclass(frozen=True)
class AggregatedReport:
    """Mean +/- sample standard deviation of every metric across folds."""

    scalars: dict[str, AggregateStat]
    per_label: tuple[AggregateStat, ...]
    count: int

    @classmethod
    def from_reports(cls, reports: list[MetricReport]) -> "AggregatedReport":
        if not reports:
            raise ConfigError("no reports to aggregate")
        scalars = {
            name: _aggregate([getattr(r, name) for r in reports])
            for name in MetricReport.SCALAR_FIELDS
        }
        k = len(reports[0].per_label_accuracy)
        per_label = tuple(
            _aggregate([r.per_label_accuracy[j] for r in reports]) for j in range(k)
        )
        return cls(scalars, per_label, len(reports))


def k_fold_indices(n: int, k: int, seed: int) -> list[np.ndarray]:
    """Seeded shuffle partitioned into k folds whose sizes differ by at
    most one."""
    if not 2 <= k <= n:
        raise ValueError(f"need 2 <= k <= n, got k={k}, n={n}")
    perm = np.random.default_rng(seed).permutation(n)
    base, extra = divmod(n, k)
    folds = []
    start = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        folds.append(np.sort(perm[start:start + size]))
        start += size
    return folds


def cross_validate(
    ds: MultiLabelDataset, spec: ModelSpec, k: int = 10, seed: int = 1
) -> tuple[list[MetricReport], AggregatedReport]:
    """Train on k-1 folds, evaluate on the held-out one, aggregate."""
    folds = k_fold_indices(ds.n_instances, k, seed)
    reports = []
    for i, fold in enumerate(folds):
        mask = np.ones(ds.n_instances, dtype=bool)
        mask[fold] = False
        train_ds = ds.subset(np.flatnonzero(mask))
        test_ds = ds.subset(fold)
        try:
            model = train_model(train_ds, spec)
        except Exception as exc:
            exc.args = (f"fold {i}: {exc}",) + exc.args[1:]
            raise
        reports.append(evaluate_model(model, test_ds))
    return reports, AggregatedReport.from_reports(reports)


def train_test_eval(
    ds: MultiLabelDataset, spec: ModelSpec, fraction: float = 0.66, seed: int = 1
) -> MetricReport:
    """Single train/test split evaluation."""
    train_ds, test_ds = split(ds, fraction, seed)
    model = train_model(train_ds, spec)
    return evaluate_model(model, test_ds)


@dataclass(frozen=True)
class SamplePlan:
    n: int
    method: str = "first"  # or "random"
    seed: int = 1

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigError(f"sample size must be >= 1, got {self.n}")
        if self.method not in ("first", "random"):
            raise ConfigError(f"unknown sampling method {self.method!r}")

    @property
    def name(self) -> str:
        return f"{self.method}:{self.n}"


@dataclass(frozen=True)
class ExperimentConfig:
    dataset_path: str
    label_count: int
    samples: tuple[SamplePlan, ...]
    models: tuple[ModelSpec, ...]
    eval_methods: tuple[str, ...] = ("kfold",)  # subset of {"kfold", "split"}
    kfold: int = 10
    train_fraction: float = 0.66
    seed: int = 1
    output_dir: str = "results"

    def __post_init__(self) -> None:
        if not self.models:
            raise ConfigError("experiment needs at least one model")
        if not self.samples:
            raise ConfigError("experiment needs at least one sample plan")
        for m in self.eval_methods:
            if m not in ("kfold", "split"):
                raise ConfigError(f"unknown evaluation method {m!r}")
        if not self.eval_methods:
            raise ConfigError("experiment needs at least one evaluation method")
        if self.kfold < 2:
            raise ConfigError("kfold must be >= 2")
        if not 0.0 < self.train_fraction < 1.0:
            raise ConfigError("train_fraction must be in (0, 1)")


@dataclass
class GridRow:
    """One grid cell: a (sample, model, evaluation-method) combination."""

    sample: SamplePlan
    model: ModelSpec
    eval_method: str
    status: str = "ok"
    error: str = ""
    report: AggregatedReport | None = None


def _run_cell(ds: MultiLabelDataset, row: GridRow, config: ExperimentConfig) -> GridRow:
    try:
        part = sample(ds, row.sample.n, method=row.sample.method, seed=row.sample.seed)
        if row.eval_method == "kfold":
            _, aggregated = cross_validate(part, row.model, k=config.kfold, seed=config.seed)
        else:
            report = train_test_eval(part, row.model, config.train_fraction, config.seed)
            aggregated = AggregatedReport.from_reports([report])
        row.report = aggregated
    except Exception as exc:
        row.status = "failed"
        row.error = f"{type(exc).__name__}: {exc}"
    return row


def run_grid(
    ds: MultiLabelDataset,
    config: ExperimentConfig,
    threads: int | None = None,
    on_row=None,
) -> list[GridRow]:
    """Evaluate the full (sample x model x method) product.

    Cell failures are recorded in their rows and do not abort the grid.
    Rows are delivered to ``on_row`` incrementally, in configuration order,
    regardless of the execution schedule.
    """
    rows = [
        GridRow(sample=sp, model=ms, eval_method=em)
        for sp in config.samples
        for ms in config.models
        for em in config.eval_methods
    ]
    if threads is not None and threads < 1:
        raise ConfigError("threads must be >= 1")
    if threads == 1:
        for row in rows:
            _run_cell(ds, row, config)
            if on_row:
                on_row(row)
        return rows
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = [pool.submit(_run_cell, ds, row, config) for row in rows]
        for future in futures:
            row = future.result()
            if on_row:
                on_row(row)
    return rows
