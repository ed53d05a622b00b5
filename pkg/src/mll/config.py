"""TOML configuration loading for training and experiment runs."""

from __future__ import annotations

from pathlib import Path

try:
    import tomllib  # Python >= 3.11
except ModuleNotFoundError:  # pragma: no cover
    import tomli as tomllib

from .errors import ConfigError
from .eval import ExperimentConfig, ModelSpec, SamplePlan
from .learners import HoeffdingSpec, KnnSpec, NaiveBayesSpec, RipperSpec, ZeroRSpec

BASE_LEARNERS = {
    "zeror": ZeroRSpec,
    "naive_bayes": NaiveBayesSpec,
    "knn": KnnSpec,
    "hoeffding": HoeffdingSpec,
    "ripper": RipperSpec,
}

_LEARNER_PARAMS = {
    "zeror": (),
    "naive_bayes": (),
    "knn": ("k",),
    "hoeffding": ("delta", "tau", "grace_period", "leaf_strategy"),
    "ripper": ("folds_for_prune", "optimization_passes", "min_coverage"),
}

DEFAULT_SAMPLES = (
    SamplePlan(1000, "first"),
    SamplePlan(10000, "random"),
    SamplePlan(20000, "random"),
)


def load_toml(path: str | Path) -> dict:
    try:
        with open(path, "rb") as fh:
            return tomllib.load(fh)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}") from None
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None


def learner_spec_from(table: dict, where: str):
    base = table.get("base")
    if base not in BASE_LEARNERS:
        raise ConfigError(
            f"{where}: base must be one of {sorted(BASE_LEARNERS)}, got {base!r}"
        )
    params = {p: table[p] for p in _LEARNER_PARAMS[base] if p in table}
    try:
        return BASE_LEARNERS[base](**params)
    except TypeError as exc:
        raise ConfigError(f"{where}: {exc}") from None


def model_spec_from(table: dict, where: str, default_seed: int = 1) -> ModelSpec:
    transform = table.get("transform")
    if transform is None:
        raise ConfigError(f"{where}: missing 'transform'")
    order = table.get("chain_order")
    if isinstance(order, list):
        order = tuple(int(j) for j in order)
    return ModelSpec(
        transform=str(transform),
        base=learner_spec_from(table, where),
        threshold=float(table.get("threshold", 0.5)),
        seed=int(table.get("seed", default_seed)),
        chain_order=order,
    )


def dataset_options_from(table: dict, where: str) -> dict:
    path = table.get("path") or table.get("dataset")
    if not path:
        raise ConfigError(f"{where}: missing dataset path")
    return {
        "path": str(path),
        "label_count": table.get("label_count"),
        "label_names": table.get("label_names"),
        "missing_marker": str(table.get("missing_marker", "?")),
    }


def experiment_config_from(path: str | Path) -> ExperimentConfig:
    doc = load_toml(path)
    exp = doc.get("experiment")
    if not isinstance(exp, dict):
        raise ConfigError(f"{path}: missing [experiment] table")

    if "dataset" not in exp:
        raise ConfigError(f"{path}: [experiment] needs 'dataset'")
    label_count = exp.get("label_count")
    if label_count is None:
        raise ConfigError(f"{path}: [experiment] needs 'label_count'")

    seed = int(exp.get("seed", 1))
    samples_tables = exp.get("samples")
    if samples_tables is None:
        samples = DEFAULT_SAMPLES
    else:
        samples = tuple(
            SamplePlan(
                n=int(t["n"]),
                method=str(t.get("method", "first")),
                seed=int(t.get("seed", seed)),
            )
            for t in samples_tables
        )

    models_tables = exp.get("models")
    if not models_tables:
        raise ConfigError(f"{path}: [experiment] needs at least one [[experiment.models]]")
    models = tuple(
        model_spec_from(t, f"{path}: models[{i}]", default_seed=seed)
        for i, t in enumerate(models_tables)
    )

    evaluation = exp.get("evaluation", {})
    methods = tuple(evaluation.get("methods", ("kfold",)))
    return ExperimentConfig(
        dataset_path=str(exp["dataset"]),
        label_count=int(label_count),
        samples=samples,
        models=models,
        eval_methods=methods,
        kfold=int(evaluation.get("kfold", 10)),
        train_fraction=float(evaluation.get("train_fraction", 0.66)),
        seed=seed,
        output_dir=str(exp.get("output_dir", "results")),
    )
