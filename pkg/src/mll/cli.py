"""Command-line entry point: preprocess, experiment, train, predict, report.

Exit codes: 0 success, 2 usage/config/input problems, 3 a grid finished
with failed cells, 4 model/data schema mismatch.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import arff, dataset, diabetes, persist
from .config import (
    dataset_options_from,
    experiment_config_from,
    load_toml,
    model_spec_from,
)
from .errors import ConfigError, MllError, SchemaMismatchError
from .eval import run_grid, train_model
from .report import TsvWriter, render_tables, render_tables_from_tsv

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_PARTIAL = 3
EXIT_SCHEMA = 4


def _load_dataset(path: str, label_count=None, label_names=None, missing_marker="?"):
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"input file not found: {p}")
    if p.suffix.lower() == ".arff":
        if label_count is None:
            raise ConfigError("ARFF input needs label_count")
        return arff.parse_arff(p, int(label_count))
    if label_names is None:
        raise ConfigError("CSV input needs label_names")
    return dataset.parse_csv(p, label_names, missing_marker=missing_marker, name=p.stem)


def cmd_preprocess(args) -> int:
    src = Path(args.input)
    if not src.exists():
        print(f"error: input file not found: {src}", file=sys.stderr)
        return EXIT_CONFIG
    raw = dataset.parse_csv(src, (), missing_marker=args.missing_marker, name=src.stem)
    processed, report = diabetes.preprocess_diabetes(raw)
    arff.write_arff(processed, args.output)
    report_path = args.report or str(Path(args.output).with_suffix(".report.txt"))
    Path(report_path).write_text(report.as_text(), encoding="utf-8")
    print(
        f"{report.rows_in} rows in, {report.rows_out} rows out "
        f"({report.rows_dropped_missing_race} dropped for missing race, "
        f"{report.rows_dropped_invalid_gender} for invalid gender); "
        f"{processed.schema.n_attributes} attributes "
        f"({processed.k} labels + {len(processed.schema.feature_indices)} features)"
    )
    print(f"wrote {args.output} and {report_path}")
    return EXIT_OK


def cmd_experiment(args) -> int:
    config = experiment_config_from(args.config)
    ds = _load_dataset(config.dataset_path, label_count=config.label_count)
    out_dir = Path(args.output_dir or config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    tsv_path = out_dir / "results.tsv"
    tables_path = out_dir / "tables.txt"
    label_names = ds.schema.label_names
    with open(tsv_path, "w", encoding="utf-8") as fh:
        writer = TsvWriter(fh, label_names)
        rows = run_grid(ds, config, threads=args.threads, on_row=writer.write)
    tables_path.write_text(render_tables(rows, label_names), encoding="utf-8")
    failed = [r for r in rows if r.status != "ok"]
    print(f"{len(rows)} cells ({len(failed)} failed); wrote {tsv_path} and {tables_path}")
    for row in failed:
        print(f"  failed: {row.sample.name} {row.model.name} {row.eval_method}: {row.error}")
    return EXIT_PARTIAL if failed else EXIT_OK


def cmd_train(args) -> int:
    doc = load_toml(args.config)
    ds_table = doc.get("dataset")
    model_table = doc.get("model")
    if not isinstance(ds_table, dict) or not isinstance(model_table, dict):
        raise ConfigError(f"{args.config}: needs [dataset] and [model] tables")
    options = dataset_options_from(ds_table, f"{args.config}: [dataset]")
    ds = _load_dataset(
        options["path"],
        label_count=options["label_count"],
        label_names=options["label_names"],
        missing_marker=options["missing_marker"],
    )
    spec = model_spec_from(model_table, f"{args.config}: [model]")
    if args.seed is not None:
        spec = type(spec)(
            transform=spec.transform, base=spec.base, threshold=spec.threshold,
            seed=args.seed, chain_order=spec.chain_order,
        )
    model = train_model(ds, spec)
    persist.save_model(model, args.output)
    print(f"trained {spec.name} on {ds.n_instances} instances; wrote {args.output}")
    return EXIT_OK


def cmd_predict(args) -> int:
    model_path = Path(args.model)
    if not model_path.exists():
        print(f"error: model file not found: {model_path}", file=sys.stderr)
        return EXIT_CONFIG
    model = persist.load_model(model_path)
    ds = _load_dataset(args.input, label_count=model.k)
    if persist.schema_fingerprint(ds.schema) != persist.schema_fingerprint(model.schema):
        print("error: data schema does not match the model's schema", file=sys.stderr)
        return EXIT_SCHEMA
    predictions = model.predict_dataset(ds)
    labels = model.label_names
    header = (
        [f"conf:{n}" for n in labels]
        + [f"pred:{n}" for n in labels]
        + [f"rank:{n}" for n in labels]
    )
    lines = ["\t".join(header)]
    for p in predictions:
        cells = [repr(c) for c in p.confidences]
        cells += ["1" if j in p.bipartition else "0" for j in range(model.k)]
        cells += [str(r) for r in p.ranking]
        lines.append("\t".join(cells))
    Path(args.output).write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {len(predictions)} predictions to {args.output}")
    return EXIT_OK


def cmd_report(args) -> int:
    src = Path(args.input)
    if not src.exists():
        print(f"error: input file not found: {src}", file=sys.stderr)
        return EXIT_CONFIG
    text = render_tables_from_tsv(src.read_text(encoding="utf-8"))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        print(f"wrote {args.output}")
    else:
        print(text, end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mll", description="Multi-label classification toolkit"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="build the 7-label demographic dataset")
    p.add_argument("--input", required=True, help="raw encounter CSV")
    p.add_argument("--output", required=True, help="target ARFF path")
    p.add_argument("--report", help="report path (default: alongside the output)")
    p.add_argument("--missing-marker", default="?")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("experiment", help="run an evaluation grid")
    p.add_argument("--config", required=True, help="experiment TOML")
    p.add_argument("--output-dir", help="overrides the config's output_dir")
    p.add_argument("--threads", type=int, default=None,
                   help="max concurrent grid cells (default: machine parallelism)")
    p.set_defaults(func=cmd_experiment)

    p = sub.add_parser("train", help="fit one model and save it")
    p.add_argument("--config", required=True, help="TOML with [dataset] and [model]")
    p.add_argument("--output", required=True, help="model JSON path")
    p.add_argument("--seed", type=int, default=None, help="overrides the config seed")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="apply a saved model")
    p.add_argument("--model", required=True)
    p.add_argument("--input", required=True, help="ARFF with the training schema")
    p.add_argument("--output", required=True, help="predictions TSV path")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("report", help="render text tables from a results TSV")
    p.add_argument("--input", required=True, help="results.tsv from an experiment run")
    p.add_argument("--output", help="write tables here instead of stdout")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaMismatchError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (MllError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
