"""Tabular multi-label datasets: schema, storage, CSV loading, sampling.

All cells live in one float64 matrix. A nominal cell holds the index into
its attribute's category list, a numeric cell holds the number itself, and
NaN marks a missing value. Label columns are nominal with the canonical
categories ("0", "1"), so a label cell is directly its relevance bit.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from pathlib import Path
from typing import IO, Sequence

import numpy as np

from .errors import ConfigError, ParseError

LABEL_CATEGORIES = ("0", "1")


@dataclass(frozen=True)
class Attribute:
    """One column of the table: nominal (ordered categories) or numeric."""

    name: str
    categories: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.categories is not None:
            if len(self.categories) == 0:
                raise ConfigError(f"attribute {self.name!r}: empty category list")
            if len(set(self.categories)) != len(self.categories):
                raise ConfigError(f"attribute {self.name!r}: duplicate categories")

    @property
    def is_nominal(self) -> bool:
        return self.categories is not None

    def is_binary_label(self) -> bool:
        return self.categories is not None and tuple(self.categories) == LABEL_CATEGORIES


@dataclass(frozen=True)
class AttributeSchema:
    """Ordered attributes plus the positions designated as label columns."""

    attributes: tuple[Attribute, ...]
    label_indices: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        names = [a.name for a in self.attributes]
        if len(set(names)) != len(names):
            dupes = sorted({n for n in names if names.count(n) > 1})
            raise ConfigError(f"duplicate attribute names: {dupes}")
        if len(set(self.label_indices)) != len(self.label_indices):
            raise ConfigError("label indices must be distinct")
        for j in self.label_indices:
            if not 0 <= j < len(self.attributes):
                raise ConfigError(f"label index {j} out of range")
            attr = self.attributes[j]
            if not attr.is_binary_label():
                raise ConfigError(
                    f"label attribute {attr.name!r} must be nominal with categories "
                    f"{LABEL_CATEGORIES}"
                )

    @property
    def n_attributes(self) -> int:
        return len(self.attributes)

    @property
    def k(self) -> int:
        return len(self.label_indices)

    @property
    def label_names(self) -> tuple[str, ...]:
        return tuple(self.attributes[j].name for j in self.label_indices)

    @property
    def feature_indices(self) -> tuple[int, ...]:
        labels = set(self.label_indices)
        return tuple(j for j in range(len(self.attributes)) if j not in labels)

    def index_of(self, name: str) -> int:
        for j, attr in enumerate(self.attributes):
            if attr.name == name:
                return j
        raise ConfigError(f"no attribute named {name!r}")

    def as_dict(self) -> dict:
        """Canonical plain-data form, used for serialization and hashing."""
        return {
            "attributes": [
                {"name": a.name, "categories": list(a.categories) if a.categories else None}
                for a in self.attributes
            ],
            "label_indices": list(self.label_indices),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "AttributeSchema":
        attrs = tuple(
            Attribute(d["name"], tuple(d["categories"]) if d["categories"] else None)
            for d in data["attributes"]
        )
        return cls(attrs, tuple(data["label_indices"]))


class MultiLabelDataset:
    """Immutable table of instances with a designated set of binary labels.

    ``values`` is (n_instances, n_attributes) float64. Row identities are
    carried in ``row_ids`` for partition bookkeeping; they are never exposed
    as features.
    """

    def __init__(
        self,
        schema: AttributeSchema,
        values: np.ndarray,
        name: str = "dataset",
        row_ids: np.ndarray | None = None,
    ) -> None:
        values = np.array(values, dtype=np.float64)
        if values.ndim != 2 or values.shape[1] != schema.n_attributes:
            raise ConfigError(
                f"values shape {values.shape} does not match the "
                f"{schema.n_attributes}-attribute schema"
            )
        for j, attr in enumerate(schema.attributes):
            if attr.is_nominal:
                col = values[:, j]
                ok = np.isnan(col) | ((col >= 0) & (col < len(attr.categories)) & (col == np.floor(col)))
                if not ok.all():
                    raise ConfigError(f"attribute {attr.name!r}: cell outside category range")
        for j in schema.label_indices:
            if np.isnan(values[:, j]).any():
                raise ConfigError(
                    f"label {schema.attributes[j].name!r} contains missing cells"
                )
        if row_ids is None:
            row_ids = np.arange(values.shape[0], dtype=np.int64)
        else:
            row_ids = np.array(row_ids, dtype=np.int64)
            if row_ids.shape != (values.shape[0],):
                raise ConfigError("row_ids must have one entry per instance")
        values.setflags(write=False)
        row_ids.setflags(write=False)
        self.schema = schema
        self.values = values
        self.row_ids = row_ids
        self.name = name

    @property
    def n_instances(self) -> int:
        return self.values.shape[0]

    @property
    def k(self) -> int:
        return self.schema.k

    def label_matrix(self) -> np.ndarray:
        """(n, k) int8 relevance bits, in label order."""
        cols = list(self.schema.label_indices)
        return self.values[:, cols].astype(np.int8)

    def label_sets(self) -> list[frozenset[int]]:
        mat = self.label_matrix()
        return [frozenset(np.flatnonzero(row)) for row in mat]

    def decode(self, i: int, j: int) -> str | float | None:
        """Original (string/number) form of one cell; None when missing."""
        v = self.values[i, j]
        if math.isnan(v):
            return None
        attr = self.schema.attributes[j]
        if attr.is_nominal:
            return attr.categories[int(v)]
        return float(v)

    def subset(self, indices: Sequence[int] | np.ndarray, name: str | None = None) -> "MultiLabelDataset":
        idx = np.asarray(indices, dtype=np.int64)
        return MultiLabelDataset(
            self.schema,
            self.values[idx],
            name=name or self.name,
            row_ids=self.row_ids[idx],
        )

    def with_labels_first(self) -> "MultiLabelDataset":
        """Reorder columns so the labels come first, in label order."""
        order = list(self.schema.label_indices) + list(self.schema.feature_indices)
        if order == list(range(self.schema.n_attributes)):
            return self
        attrs = tuple(self.schema.attributes[j] for j in order)
        schema = AttributeSchema(attrs, tuple(range(self.k)))
        return MultiLabelDataset(schema, self.values[:, order], self.name, self.row_ids)

    def equals(self, other: "MultiLabelDataset") -> bool:
        if self.schema != other.schema or self.values.shape != other.values.shape:
            return False
        a, b = self.values, other.values
        same = (a == b) | (np.isnan(a) & np.isnan(b))
        return bool(same.all())


def sample(
    ds: MultiLabelDataset,
    n: int,
    method: str = "first",
    seed: int = 1,
) -> MultiLabelDataset:
    """Take n instances: the first n in stored order, or a seeded random
    draw without replacement."""
    if not 1 <= n <= ds.n_instances:
        raise ValueError(f"sample size {n} out of range 1..{ds.n_instances}")
    if method == "first":
        idx = np.arange(n)
    elif method == "random":
        rng = np.random.default_rng(seed)
        idx = rng.choice(ds.n_instances, size=n, replace=False)
    else:
        raise ValueError(f"unknown sampling method {method!r}")
    return ds.subset(idx, name=f"{ds.name}-{method}{n}")


def split(
    ds: MultiLabelDataset,
    train_fraction: float,
    seed: int,
) -> tuple[MultiLabelDataset, MultiLabelDataset]:
    """Seeded shuffle, then the first ceil(fraction*n) rows become the
    training part and the rest the test part."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    n = ds.n_instances
    n_train = math.ceil(train_fraction * n)
    if n_train < 1 or n - n_train < 1:
        raise ValueError(f"split {train_fraction} leaves an empty part for n={n}")
    perm = np.random.default_rng(seed).permutation(n)
    return (
        ds.subset(perm[:n_train], name=f"{ds.name}-train"),
        ds.subset(perm[n_train:], name=f"{ds.name}-test"),
    )


def _read_text(source: bytes | str | Path | IO[bytes] | IO[str]) -> str:
    if isinstance(source, bytes):
        return source.decode("utf-8")
    if isinstance(source, (str, Path)):
        return Path(source).read_text(encoding="utf-8")
    data = source.read()
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def _parses_as_number(text: str) -> bool:
    try:
        float(text)
        return True
    except ValueError:
        return False


def parse_csv(
    source: bytes | str | Path | IO[bytes] | IO[str],
    label_names: Sequence[str] = (),
    missing_marker: str = "?",
    name: str = "dataset",
) -> MultiLabelDataset:
    """Load a UTF-8 CSV with a header row.

    Columns whose non-missing cells all parse as numbers become numeric;
    everything else becomes nominal with lexicographically sorted
    categories. Columns named in ``label_names`` become binary labels and
    must contain only the values 0 and 1.
    """
    text = _read_text(source)
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ParseError("empty CSV input")
    header = [h.strip() for h in rows[0]]
    n_cols = len(header)
    data_rows = rows[1:]
    for i, row in enumerate(data_rows, start=2):
        if len(row) != n_cols:
            raise ParseError(f"row {i}: expected {n_cols} fields, got {len(row)}")

    label_set = set(label_names)
    unknown = label_set - set(header)
    if unknown:
        raise ConfigError(f"label columns not in header: {sorted(unknown)}")
    label_positions = [j for j, h in enumerate(header) if h in label_set]

    n = len(data_rows)
    values = np.empty((n, n_cols), dtype=np.float64)
    attributes: list[Attribute] = []
    for j, col_name in enumerate(header):
        cells = [row[j].strip() for row in data_rows]
        present = [(i, c) for i, c in enumerate(cells) if c != missing_marker]
        col = np.full(n, np.nan)
        if j in set(label_positions):
            bad = sorted({c for _, c in present if c not in ("0", "1")})
            if bad or len(present) != n:
                detail = f"non-binary values {bad}" if bad else "missing cells"
                raise ConfigError(f"label column {col_name!r} has {detail}")
            for i, c in enumerate(cells):
                col[i] = float(c)
            attributes.append(Attribute(col_name, LABEL_CATEGORIES))
        elif all(_parses_as_number(c) for _, c in present):
            for i, c in present:
                col[i] = float(c)
            attributes.append(Attribute(col_name))
        else:
            categories = tuple(sorted({c for _, c in present}))
            index = {c: float(i) for i, c in enumerate(categories)}
            for i, c in present:
                col[i] = index[c]
            attributes.append(Attribute(col_name, categories))
        values[:, j] = col

    schema = AttributeSchema(tuple(attributes), tuple(label_positions))
    return MultiLabelDataset(schema, values, name=name)
