"""Result emission: TSV rows and aligned plain-text summary tables."""

from __future__ import annotations

import csv
import io
from typing import IO

from .eval import AggregatedReport, GridRow
from .metrics import MetricReport

MEASURE_COLUMNS = (
    ("exact_match", "Exact Match"),
    ("hamming_score", "Hamming Score"),
    ("harmonic_score", "Harmonic Score"),
    ("f1_micro", "F1 Micro Average"),
    ("ranking_loss", "Rank Loss"),
    ("one_error", "One Error"),
    ("hamming_loss", "Hamming Loss"),
    ("zero_one_loss", "Zero One Loss"),
)

_EVAL_TITLES = {"split": "Test/Train Split", "kfold": "10 Fold CV"}


def tsv_header(label_names: tuple[str, ...]) -> list[str]:
    cols = ["sample_n", "sampling", "model", "eval_method", "status", "error"]
    for name in MetricReport.SCALAR_FIELDS:
        cols += [f"{name}_mean", f"{name}_std"]
    for label in label_names:
        cols += [f"acc_{label}_mean", f"acc_{label}_std"]
    return cols


def tsv_row(row: GridRow, label_names: tuple[str, ...]) -> list[str]:
    out = [
        str(row.sample.n),
        row.sample.method,
        row.model.name,
        row.eval_method,
        row.status,
        row.error,
    ]
    if row.report is None:
        out += [""] * (2 * len(MetricReport.SCALAR_FIELDS) + 2 * len(label_names))
        return out
    for name in MetricReport.SCALAR_FIELDS:
        stat = row.report.scalars[name]
        out += [repr(stat.mean), repr(stat.std)]
    for stat in row.report.per_label:
        out += [repr(stat.mean), repr(stat.std)]
    return out


class TsvWriter:
    """Streams grid rows to a TSV file as they complete."""

    def __init__(self, fh: IO[str], label_names: tuple[str, ...]) -> None:
        self._writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        self._fh = fh
        self.label_names = label_names
        self._writer.writerow(tsv_header(label_names))
        fh.flush()

    def write(self, row: GridRow) -> None:
        self._writer.writerow(tsv_row(row, self.label_names))
        self._fh.flush()


def _render_table(title: str, header: list[str], body: list[list[str]]) -> str:
    widths = [len(h) for h in header]
    for line in body:
        for i, cell in enumerate(line):
            widths[i] = max(widths[i], len(cell))
    def fmt(line):
        return "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(line)).rstrip()
    rule = "-" * (sum(widths) + 2 * (len(widths) - 1))
    lines = [title, rule, fmt(header), rule]
    lines += [fmt(line) for line in body]
    return "\n".join(lines) + "\n"


def _stat_cell(report: AggregatedReport | None, metric: str) -> str:
    if report is None:
        return "failed"
    return report.scalars[metric].format()


def render_tables(rows: list[GridRow], label_names: tuple[str, ...]) -> str:
    """Aligned text tables: overall accuracy per evaluation method, then
    per-label accuracies and the measure comparison, one block per sample."""
    sections: list[str] = []
    samples = []
    for row in rows:
        if row.sample not in samples:
            samples.append(row.sample)
    methods = []
    for row in rows:
        if row.eval_method not in methods:
            methods.append(row.eval_method)

    for sp in samples:
        block = [r for r in rows if r.sample == sp]
        models = []
        for r in block:
            if r.model.name not in models:
                models.append(r.model.name)

        by_key = {(r.model.name, r.eval_method): r for r in block}

        header = ["Model"] + [_EVAL_TITLES.get(m, m) for m in methods]
        body = []
        for model in models:
            line = [model]
            for method in methods:
                r = by_key.get((model, method))
                line.append(_stat_cell(r.report, "accuracy") if r else "")
            body.append(line)
        sections.append(
            _render_table(f"Overall accuracy, {sp.name} samples", header, body)
        )

        for method in methods:
            header = ["Model", "Overall"] + [f"{i+1}:{n}" for i, n in enumerate(label_names)]
            body = []
            for model in models:
                r = by_key.get((model, method))
                if r is None:
                    continue
                if r.report is None:
                    body.append([model, "failed"] + [""] * len(label_names))
                    continue
                line = [model, r.report.scalars["accuracy"].format()]
                line += [stat.format() for stat in r.report.per_label]
                body.append(line)
            sections.append(
                _render_table(
                    f"Per-label accuracy, {sp.name} samples, {_EVAL_TITLES.get(method, method)}",
                    header,
                    body,
                )
            )

        for method in methods:
            header = ["Model"] + [title for _, title in MEASURE_COLUMNS]
            body = []
            for model in models:
                r = by_key.get((model, method))
                if r is None:
                    continue
                line = [model]
                for metric, _ in MEASURE_COLUMNS:
                    line.append(_stat_cell(r.report, metric))
                body.append(line)
            sections.append(
                _render_table(
                    f"Performance measures, {sp.name} samples, {_EVAL_TITLES.get(method, method)}",
                    header,
                    body,
                )
            )
    return "\n".join(sections)


def render_tables_from_tsv(text: str) -> str:
    """Re-render the text tables from a results TSV (e.g. a partial grid)."""
    reader = csv.reader(io.StringIO(text), delimiter="\t")
    rows = list(reader)
    if not rows:
        return ""
    header = rows[0]
    label_names = tuple(
        col[len("acc_"):-len("_mean")]
        for col in header
        if col.startswith("acc_") and col.endswith("_mean")
    )
    # Rebuild lightweight rows: parsing back into GridRow-shaped records.
    from .eval import AggregateStat, SamplePlan  # local: avoids a cycle at import time

    grid_rows: list[GridRow] = []
    for line in rows[1:]:
        rec = dict(zip(header, line))
        sp = SamplePlan(int(rec["sample_n"]), rec["sampling"])
        model = _NamedModel(rec["model"])
        if rec["status"] != "ok" or not rec.get("exact_match_mean"):
            report = None
        else:
            scalars = {}
            for name in MetricReport.SCALAR_FIELDS:
                mean = float(rec[f"{name}_mean"])
                std = float(rec[f"{name}_std"])
                scalars[name] = AggregateStat(mean, std, 2 if std else 1)
            per_label = tuple(
                AggregateStat(
                    float(rec[f"acc_{label}_mean"]),
                    float(rec[f"acc_{label}_std"]),
                    2 if float(rec[f"acc_{label}_std"]) else 1,
                )
                for label in label_names
            )
            report = AggregatedReport(scalars, per_label, 1)
        row = GridRow(sample=sp, model=model, eval_method=rec["eval_method"])
        row.status = rec["status"]
        row.error = rec["error"]
        row.report = report
        grid_rows.append(row)
    return render_tables(grid_rows, label_names)


class _NamedModel:
    """Stand-in carrying just the display name when re-rendering from TSV."""

    def __init__(self, name: str) -> None:
        self.name = name
