"""Versioned JSON persistence for fitted models.

The document keeps explicit kind tags and full-precision floats (via the
shortest round-tripping decimal form), so a loaded model reproduces the
original's predictions bit for bit. The schema fingerprint binds a model to
the attribute layout it was trained on.
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path
from typing import IO

import numpy as np

from .dataset import AttributeSchema
from .errors import SchemaMismatchError
from .learners import (
    HoeffdingSpec,
    HoeffdingTreeModel,
    KnnModel,
    NaiveBayesModel,
    RipperModel,
    ZeroRModel,
)
from .learners.hoeffding import _Leaf, _Split
from .learners.ripper import Condition, Rule
from .multilabel import BCCModel, BRModel, CCModel, DependencyTree, LPModel, MultiLabelModel

FORMAT_VERSION = 1


def schema_fingerprint(schema: AttributeSchema) -> str:
    canonical = json.dumps(schema.as_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def _floats(arr) -> list:
    return np.asarray(arr, dtype=np.float64).tolist()


def _cats_to_json(cats):
    return [list(c) if c is not None else None for c in cats]


def _cats_from_json(data):
    return tuple(tuple(c) if c is not None else None for c in data)


# -- learner payloads -------------------------------------------------------


def _learner_to_dict(learner) -> dict:
    base = {
        "kind": learner.kind,
        "class_names": list(learner.class_names),
        "n_features": learner.n_features,
    }
    if isinstance(learner, ZeroRModel):
        base["distribution"] = _floats(learner.distribution)
    elif isinstance(learner, NaiveBayesModel):
        base["log_priors"] = _floats(learner.log_priors)
        base["nominal_log_tables"] = {
            str(j): _floats(t) for j, t in learner.nominal_log_tables.items()
        }
        base["gaussians"] = {str(j): _floats(g) for j, g in learner.gaussians.items()}
    elif isinstance(learner, KnnModel):
        base["k"] = learner.k
        base["X"] = _floats(learner.X)
        base["y"] = learner.y.tolist()
        base["nominal_mask"] = learner.nominal_mask.tolist()
        base["ranges"] = _floats(learner.ranges)
    elif isinstance(learner, HoeffdingTreeModel):
        base["spec"] = {
            "delta": learner.spec.delta,
            "tau": learner.spec.tau,
            "grace_period": learner.spec.grace_period,
            "leaf_strategy": learner.spec.leaf_strategy,
        }
        base["feature_categories"] = _cats_to_json(learner.feature_categories)
        base["root"] = _node_to_dict(learner.root)
        base["n_nodes"] = learner.n_nodes
    elif isinstance(learner, RipperModel):
        base["rules"] = [
            {
                "conditions": [
                    {"col": c.col, "op": c.op, "value": c.value} for c in rule.conditions
                ],
                "target": rule.target,
            }
            for rule in learner.rules
        ]
        base["rule_counts"] = [_floats(c) for c in learner.rule_counts]
        base["default_class"] = learner.default_class
        base["default_counts"] = _floats(learner.default_counts)
        base["feature_names"] = list(learner.feature_names)
        base["feature_categories"] = _cats_to_json(learner.feature_categories)
    else:
        raise TypeError(f"cannot serialize learner {learner!r}")
    return base


def _learner_from_dict(data: dict):
    kind = data["kind"]
    class_names = tuple(data["class_names"])
    n_features = data["n_features"]
    if kind == "zero_r":
        return ZeroRModel(class_names, n_features, np.array(data["distribution"]))
    if kind == "naive_bayes":
        return NaiveBayesModel(
            class_names,
            n_features,
            np.array(data["log_priors"]),
            {int(j): np.array(t) for j, t in data["nominal_log_tables"].items()},
            {int(j): np.array(g) for j, g in data["gaussians"].items()},
        )
    if kind == "knn":
        return KnnModel(
            class_names,
            n_features,
            data["k"],
            np.array(data["X"], dtype=np.float64),
            np.array(data["y"], dtype=np.int64),
            np.array(data["nominal_mask"], dtype=bool),
            np.array(data["ranges"], dtype=np.float64),
        )
    if kind == "hoeffding":
        spec = HoeffdingSpec(**data["spec"])
        model = HoeffdingTreeModel(
            class_names, n_features, spec, _cats_from_json(data["feature_categories"])
        )
        model.root = _node_from_dict(data["root"], len(class_names))
        model.n_nodes = data["n_nodes"]
        return model
    if kind == "ripper":
        rules = [
            Rule(
                tuple(Condition(c["col"], c["op"], c["value"]) for c in r["conditions"]),
                r["target"],
            )
            for r in data["rules"]
        ]
        return RipperModel(
            class_names,
            n_features,
            rules,
            [np.array(c) for c in data["rule_counts"]],
            data["default_class"],
            np.array(data["default_counts"]),
            tuple(data["feature_names"]),
            _cats_from_json(data["feature_categories"]),
        )
    raise TypeError(f"unknown learner kind {kind!r}")


def _node_to_dict(node) -> dict:
    if isinstance(node, _Split):
        return {
            "type": "split",
            "col": node.col,
            "threshold": node.threshold,
            "majority_branch": node.majority_branch,
            "children": [_node_to_dict(c) for c in node.children],
        }
    return {
        "type": "leaf",
        "class_counts": _floats(node.class_counts),
        "prior": _floats(node.prior),
        "n_since_check": node.n_since_check,
        "nominal_counts": {str(j): _floats(t) for j, t in node.nominal_counts.items()},
        "numeric_stats": {str(j): _floats(s) for j, s in node.numeric_stats.items()},
        "numeric_lo": {str(j): v for j, v in node.numeric_lo.items()},
        "numeric_hi": {str(j): v for j, v in node.numeric_hi.items()},
    }


def _node_from_dict(data: dict, n_classes: int):
    if data["type"] == "split":
        children = [_node_from_dict(c, n_classes) for c in data["children"]]
        return _Split(data["col"], data["threshold"], children, data["majority_branch"])
    leaf = _Leaf(n_classes, np.array(data["class_counts"]), np.array(data["prior"]))
    leaf.n_since_check = data["n_since_check"]
    leaf.nominal_counts = {int(j): np.array(t) for j, t in data["nominal_counts"].items()}
    leaf.numeric_stats = {int(j): np.array(s) for j, s in data["numeric_stats"].items()}
    leaf.numeric_lo = {int(j): v for j, v in data["numeric_lo"].items()}
    leaf.numeric_hi = {int(j): v for j, v in data["numeric_hi"].items()}
    return leaf


# -- model documents --------------------------------------------------------


def model_to_dict(model: MultiLabelModel) -> dict:
    doc = {
        "format_version": FORMAT_VERSION,
        "kind": model.kind,
        "threshold": model.threshold,
        "schema": model.schema.as_dict(),
        "schema_fingerprint": schema_fingerprint(model.schema),
    }
    if isinstance(model, BRModel):
        doc["learners"] = [_learner_to_dict(l) for l in model.learners]
    elif isinstance(model, CCModel):
        doc["order"] = list(model.order)
        doc["learners"] = [_learner_to_dict(l) for l in model.learners]
    elif isinstance(model, BCCModel):
        doc["order"] = list(model.order)
        doc["tree"] = (
            None
            if model.tree is None
            else {
                "n_labels": model.tree.n_labels,
                "edges": [list(e) for e in model.tree.edges],
                "root": model.tree.root,
                "parent": list(model.tree.parent),
                "order": list(model.tree.order),
            }
        )
        doc["learners"] = [_learner_to_dict(l) for l in model.learners]
    elif isinstance(model, LPModel):
        doc["labelsets"] = list(model.labelsets)
        doc["learner"] = _learner_to_dict(model.learner)
    else:
        raise TypeError(f"cannot serialize model {model!r}")
    return doc


def model_from_dict(doc: dict) -> MultiLabelModel:
    if doc.get("format_version") != FORMAT_VERSION:
        raise SchemaMismatchError(
            f"unsupported model format version {doc.get('format_version')!r}"
        )
    schema = AttributeSchema.from_dict(doc["schema"])
    threshold = doc["threshold"]
    kind = doc["kind"]
    if kind == "br":
        return BRModel(schema, threshold, [_learner_from_dict(d) for d in doc["learners"]])
    if kind == "cc":
        return CCModel(
            schema, threshold, tuple(doc["order"]),
            [_learner_from_dict(d) for d in doc["learners"]],
        )
    if kind == "bcc":
        tree = doc["tree"]
        dep = (
            None
            if tree is None
            else DependencyTree(
                tree["n_labels"],
                tuple((int(a), int(b), float(w)) for a, b, w in tree["edges"]),
                tree["root"],
                tuple(tree["parent"]),
                tuple(tree["order"]),
            )
        )
        return BCCModel(
            schema, threshold, dep, tuple(doc["order"]),
            [_learner_from_dict(d) for d in doc["learners"]],
        )
    if kind == "lp":
        return LPModel(
            schema, threshold, _learner_from_dict(doc["learner"]), tuple(doc["labelsets"])
        )
    raise SchemaMismatchError(f"unknown model kind {kind!r}")


def save_model(model: MultiLabelModel, dest: str | Path | IO[str]) -> None:
    doc = model_to_dict(model)
    text = json.dumps(doc, indent=1)
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text, encoding="utf-8")
    else:
        dest.write(text)


def load_model(source: str | Path | IO[str]) -> MultiLabelModel:
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    else:
        text = source.read()
    return model_from_dict(json.loads(text))
