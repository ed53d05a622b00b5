"""Multi-label classification toolkit.

Problem-transformation ensembles (independent per-label models, classifier
chains, dependency-tree chains, labelset powerset) over from-scratch base
learners, with a complete multi-label evaluation suite and an experiment
grid runner.
"""

from .arff import parse_arff, write_arff
from .dataset import (
    Attribute,
    AttributeSchema,
    MultiLabelDataset,
    parse_csv,
    sample,
    split,
)
from .diabetes import PreprocessReport, preprocess_diabetes
from .eval import (
    AggregatedReport,
    AggregateStat,
    ExperimentConfig,
    ModelSpec,
    SamplePlan,
    cross_validate,
    k_fold_indices,
    run_grid,
    train_model,
    train_test_eval,
)
from .learners import (
    HoeffdingSpec,
    KnnSpec,
    LearnerSpec,
    NaiveBayesSpec,
    RipperSpec,
    ZeroRSpec,
    foil_gain,
    hoeffding_bound,
)
from .metrics import EvalPair, MetricReport, build_eval_pair, compute_report
from .multilabel import (
    DependencyTree,
    MultiLabelPrediction,
    br_transform,
    build_dependency_tree,
    train_bcc,
    train_br,
    train_cc,
    train_lp,
)
from .persist import load_model, save_model

__version__ = "0.1.0"

__all__ = [
    "Attribute",
    "AttributeSchema",
    "MultiLabelDataset",
    "parse_csv",
    "parse_arff",
    "write_arff",
    "sample",
    "split",
    "PreprocessReport",
    "preprocess_diabetes",
    "LearnerSpec",
    "ZeroRSpec",
    "NaiveBayesSpec",
    "KnnSpec",
    "HoeffdingSpec",
    "RipperSpec",
    "hoeffding_bound",
    "foil_gain",
    "MultiLabelPrediction",
    "DependencyTree",
    "br_transform",
    "build_dependency_tree",
    "train_br",
    "train_cc",
    "train_bcc",
    "train_lp",
    "EvalPair",
    "MetricReport",
    "build_eval_pair",
    "compute_report",
    "ModelSpec",
    "SamplePlan",
    "ExperimentConfig",
    "AggregateStat",
    "AggregatedReport",
    "k_fold_indices",
    "cross_validate",
    "train_test_eval",
    "train_model",
    "run_grid",
    "save_model",
    "load_model",
    "__version__",
]
