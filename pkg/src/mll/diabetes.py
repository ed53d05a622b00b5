"""Demographic-label preprocessing for the 130-hospitals diabetes table.

Turns the raw encounter table into a 7-label dataset: five one-hot race
labels plus two one-hot gender labels. Identifier and high-missing columns
are removed, medical_specialty keeps its missing cells as an explicit
"missing" category, and rows without usable race or gender are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import LABEL_CATEGORIES, Attribute, AttributeSchema, MultiLabelDataset
from .errors import PreprocessError

RACE_LABELS = ("Caucasian", "AfricanAmerican", "Hispanic", "Asian", "Other")
GENDER_LABELS = ("Male", "Female")
LABEL_NAMES = RACE_LABELS + GENDER_LABELS

DROP_HIGH_MISSING = ("weight", "payer_code")
DROP_IDENTIFIERS = ("encounter_id", "patient_nbr")
IMPUTED_COLUMN = "medical_specialty"
MISSING_CATEGORY = "missing"

# Published counts for the same protocol on the full UCI file; emitted in
# the report so drift is visible, not enforced.
REFERENCE_ROWS_OUT = 98054
REFERENCE_ATTRIBUTE_COUNT = 45


@dataclass(frozen=True)
class PreprocessReport:
    rows_in: int
    rows_dropped_missing_race: int
    rows_dropped_invalid_gender: int
    rows_out: int
    columns_dropped: tuple[tuple[str, str, float], ...]
    columns_imputed: tuple[str, ...]

    def __post_init__(self) -> None:
        expected = self.rows_in - self.rows_dropped_missing_race - self.rows_dropped_invalid_gender
        if self.rows_out != expected:
            raise PreprocessError(
                f"row accounting broken: {self.rows_out} != {expected}"
            )

    def as_text(self) -> str:
        dropped = ";".join(f"{n}:{reason}:{frac:.6f}" for n, reason, frac in self.columns_dropped)
        lines = [
            f"rows_in={self.rows_in}",
            f"rows_dropped_missing_race={self.rows_dropped_missing_race}",
            f"rows_dropped_invalid_gender={self.rows_dropped_invalid_gender}",
            f"rows_out={self.rows_out}",
            f"columns_dropped={dropped}",
            f"columns_imputed={';'.join(self.columns_imputed)}",
            f"reference_rows_out={REFERENCE_ROWS_OUT}",
            f"reference_attribute_count={REFERENCE_ATTRIBUTE_COUNT}",
        ]
        return "\n".join(lines) + "\n"


def preprocess_diabetes(raw: MultiLabelDataset) -> tuple[MultiLabelDataset, PreprocessReport]:
    """Apply the demographic preprocessing protocol to the raw table.

    The input must be label-free and contain the columns race, gender,
    weight, payer_code, medical_specialty, encounter_id, and patient_nbr.
    The output has the 7 label columns first, in the fixed order
    (Caucasian, AfricanAmerican, Hispanic, Asian, Other, Male, Female).
    """
    if raw.k != 0:
        raise PreprocessError("expected a label-free input table")
    required = ("race", "gender") + DROP_HIGH_MISSING + (IMPUTED_COLUMN,) + DROP_IDENTIFIERS
    for col in required:
        try:
            raw.schema.index_of(col)
        except Exception:
            raise PreprocessError(f"required column {col!r} is absent") from None

    race_j = raw.schema.index_of("race")
    gender_j = raw.schema.index_of("gender")
    race_attr = raw.schema.attributes[race_j]
    gender_attr = raw.schema.attributes[gender_j]
    if not race_attr.is_nominal or not gender_attr.is_nominal:
        raise PreprocessError("race and gender must be nominal columns")
    unexpected = set(race_attr.categories) - set(RACE_LABELS)
    if unexpected:
        raise PreprocessError(f"unexpected race values: {sorted(unexpected)}")

    n = raw.n_instances
    race_col = raw.values[:, race_j]
    gender_col = raw.values[:, gender_j]

    race_missing = np.isnan(race_col)
    male_idx = gender_attr.categories.index("Male") if "Male" in gender_attr.categories else -1
    female_idx = gender_attr.categories.index("Female") if "Female" in gender_attr.categories else -1
    gender_ok = np.isin(gender_col, [i for i in (male_idx, female_idx) if i >= 0])
    invalid_gender = ~race_missing & ~gender_ok

    keep = ~race_missing & ~invalid_gender
    rows_dropped_race = int(race_missing.sum())
    rows_dropped_gender = int(invalid_gender.sum())

    dropped_cols: list[tuple[str, str, float]] = []
    removed = set()
    for col in DROP_HIGH_MISSING:
        j = raw.schema.index_of(col)
        frac = float(np.isnan(raw.values[:, j]).mean()) if n else 0.0
        dropped_cols.append((col, "high_missing", frac))
        removed.add(j)
    for col in DROP_IDENTIFIERS:
        j = raw.schema.index_of(col)
        frac = float(np.isnan(raw.values[:, j]).mean()) if n else 0.0
        dropped_cols.append((col, "identifier", frac))
        removed.add(j)
    removed.add(race_j)
    removed.add(gender_j)

    feature_js = [j for j in range(raw.schema.n_attributes) if j not in removed]

    # Label block: one-hot race (5) then one-hot gender (2).
    kept_race = race_col[keep].astype(np.int64)
    kept_gender = gender_col[keep].astype(np.int64)
    n_out = int(keep.sum())
    labels = np.zeros((n_out, len(LABEL_NAMES)), dtype=np.float64)
    for li, label in enumerate(RACE_LABELS):
        if label in race_attr.categories:
            labels[:, li] = kept_race == race_attr.categories.index(label)
    labels[:, 5] = kept_gender == male_idx
    labels[:, 6] = kept_gender == female_idx

    features = raw.values[keep][:, feature_js].copy()
    attributes = [Attribute(nm, LABEL_CATEGORIES) for nm in LABEL_NAMES]
    imputed: list[str] = []
    for out_j, j in enumerate(feature_js):
        attr = raw.schema.attributes[j]
        if attr.name == IMPUTED_COLUMN:
            if not attr.is_nominal:
                raise PreprocessError(f"{IMPUTED_COLUMN!r} must be nominal")
            cats = attr.categories
            col = features[:, out_j]
            miss = np.isnan(col)
            if miss.any():
                if MISSING_CATEGORY not in cats:
                    cats = cats + (MISSING_CATEGORY,)
                col[miss] = cats.index(MISSING_CATEGORY)
                imputed.append(attr.name)
            attr = Attribute(attr.name, cats)
        attributes.append(attr)

    schema = AttributeSchema(
        tuple(attributes), tuple(range(len(LABEL_NAMES)))
    )
    values = np.hstack([labels, features])
    out = MultiLabelDataset(schema, values, name=raw.name, row_ids=raw.row_ids[keep])

    report = PreprocessReport(
        rows_in=n,
        rows_dropped_missing_race=rows_dropped_race,
        rows_dropped_invalid_gender=rows_dropped_gender,
        rows_out=n_out,
        columns_dropped=tuple(dropped_cols),
        columns_imputed=tuple(imputed),
    )
    return out, report
