import os
from pathlib import Path

import numpy as np
import pytest

from mll.dataset import LABEL_CATEGORIES, Attribute, AttributeSchema, MultiLabelDataset

# Location of the real UCI encounter file for the data-dependent tests.
# Download "Diabetes 130-US hospitals for years 1999-2008" and point
# MLL_DIABETES_CSV at diabetic_data.csv (or drop it under data/).
DIABETES_CSV = Path(
    os.environ.get("MLL_DIABETES_CSV", Path(__file__).resolve().parent.parent / "data" / "diabetic_data.csv")
)

requires_diabetes_data = pytest.mark.skipif(
    not DIABETES_CSV.exists(),
    reason=f"UCI diabetes file not found at {DIABETES_CSV}; "
    "set MLL_DIABETES_CSV to run the reproduction tests",
)


def make_dataset(n=300, k=3, seed=0, name="synthetic"):
    """Mixed nominal/numeric features with partially learnable labels."""
    rng = np.random.default_rng(seed)
    f0 = rng.integers(0, 3, n).astype(float)
    f1 = rng.integers(0, 4, n).astype(float)
    x0 = rng.normal(0.0, 1.0, n)
    x1 = rng.normal(5.0, 2.0, n)
    labels = [
        (f0 == 1).astype(float),
        ((x0 > 0) ^ (rng.random(n) < 0.1)).astype(float),
        ((f1 >= 2) ^ (rng.random(n) < 0.2)).astype(float),
    ][:k]
    while len(labels) < k:
        labels.append((rng.random(n) < 0.5).astype(float))
    attrs = [
        Attribute("c1", ("a", "b", "c")),
        Attribute("c2", ("p", "q", "r", "s")),
        Attribute("n1"),
        Attribute("n2"),
    ]
    attrs += [Attribute(f"L{j}", LABEL_CATEGORIES) for j in range(k)]
    schema = AttributeSchema(tuple(attrs), tuple(range(4, 4 + k)))
    values = np.column_stack([f0, f1, x0, x1] + labels)
    return MultiLabelDataset(schema, values, name=name)


@pytest.fixture
def small_ds():
    return make_dataset(n=300, k=3, seed=0)
