"""Dense ARFF reading and writing.

Follows the multi-label layout convention: the first k declared attributes
are the binary label columns and the relation name carries a ``-C k``
suffix. Sparse data sections are not supported.
"""

from __future__ import annotations

import re
import warnings
from pathlib import Path
from typing import IO

import numpy as np

from .dataset import LABEL_CATEGORIES, Attribute, AttributeSchema, MultiLabelDataset, _read_text
from .errors import ConfigError, ParseError

_RELATION_SUFFIX = re.compile(r"-C\s+(-?\d+)\s*$")


def _unquote(token: str) -> str:
    token = token.strip()
    if len(token) >= 2 and token[0] == token[-1] and token[0] in "'\"":
        body = token[1:-1]
        return body.replace("\\" + token[0], token[0]).replace("\\\\", "\\")
    return token


def _split_values(text: str, where: str) -> list[str]:
    """Split a comma-separated ARFF list, honoring quotes and escapes."""
    out: list[str] = []
    buf: list[str] = []
    quote: str | None = None
    i = 0
    while i < len(text):
        ch = text[i]
        if quote:
            if ch == "\\" and i + 1 < len(text):
                buf.append(ch)
                buf.append(text[i + 1])
                i += 2
                continue
            buf.append(ch)
            if ch == quote:
                quote = None
        elif ch in "'\"":
            quote = ch
            buf.append(ch)
        elif ch == ",":
            out.append("".join(buf))
            buf = []
        else:
            buf.append(ch)
        i += 1
    if quote:
        raise ParseError(f"{where}: unterminated quote")
    out.append("".join(buf))
    return [t.strip() for t in out]


def _needs_quoting(value: str) -> bool:
    if value == "" or value == "?":
        return True
    return any(c in value for c in " ,{}'\"%\t")


def _quote(value: str) -> str:
    if _needs_quoting(value):
        return "'" + value.replace("\\", "\\\\").replace("'", "\\'") + "'"
    return value


def parse_arff(
    source: bytes | str | Path | IO[bytes] | IO[str],
    label_count: int,
) -> MultiLabelDataset:
    """Parse a dense ARFF file whose first ``label_count`` attributes are
    the binary labels.

    A ``-C k`` suffix in the relation name that disagrees with
    ``label_count`` produces a warning; the argument wins.
    """
    if label_count < 1:
        raise ConfigError(f"label_count must be >= 1, got {label_count}")
    lines = _read_text(source).splitlines()

    relation = ""
    attributes: list[Attribute] = []
    data_start = None
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        lowered = line.lower()
        if lowered.startswith("@relation"):
            relation = _unquote(line[len("@relation"):].strip())
        elif lowered.startswith("@attribute"):
            attributes.append(_parse_attribute(line[len("@attribute"):].strip(), lineno))
        elif lowered.startswith("@data"):
            data_start = lineno
            break
        else:
            raise ParseError(f"line {lineno}: unexpected content before @data: {line!r}")
    if data_start is None:
        raise ParseError("no @data section")
    if not attributes:
        raise ParseError("no @attribute declarations")
    if label_count > len(attributes):
        raise ConfigError(
            f"label_count {label_count} exceeds the {len(attributes)} declared attributes"
        )

    m = _RELATION_SUFFIX.search(relation)
    if m and int(m.group(1)) != label_count:
        warnings.warn(
            f"relation name declares -C {m.group(1)} but label_count={label_count}; "
            "using label_count",
            stacklevel=2,
        )

    # Normalize label attributes to the canonical ("0", "1") category order;
    # data cells are indexed against the normalized list below.
    for j in range(label_count):
        attr = attributes[j]
        if attr.categories is None or set(attr.categories) != set(LABEL_CATEGORIES):
            raise ConfigError(
                f"label attribute {attr.name!r} must be nominal with values {{0,1}}"
            )
        if attr.categories != LABEL_CATEGORIES:
            attributes[j] = Attribute(attr.name, LABEL_CATEGORIES)

    rows: list[list[float]] = []
    n_cols = len(attributes)
    for lineno in range(data_start, len(lines)):
        line = lines[lineno].strip()
        if not line or line.startswith("%") or line.lower().startswith("@data"):
            continue
        if line.startswith("{"):
            raise ParseError(f"line {lineno + 1}: sparse ARFF rows are not supported")
        tokens = _split_values(line, f"line {lineno + 1}")
        if len(tokens) != n_cols:
            raise ParseError(
                f"line {lineno + 1}: expected {n_cols} values, got {len(tokens)}"
            )
        row = []
        for j, token in enumerate(tokens):
            if token == "?":
                row.append(np.nan)
                continue
            value = _unquote(token)
            attr = attributes[j]
            if attr.is_nominal:
                try:
                    idx = attr.categories.index(value)
                except ValueError:
                    raise ParseError(
                        f"line {lineno + 1}: value {value!r} not declared for "
                        f"attribute {attr.name!r}"
                    ) from None
                row.append(float(idx))
            else:
                try:
                    row.append(float(value))
                except ValueError:
                    raise ParseError(
                        f"line {lineno + 1}: non-numeric value {value!r} for "
                        f"attribute {attr.name!r}"
                    ) from None
        rows.append(row)

    name = _RELATION_SUFFIX.sub("", relation).strip() or "dataset"
    schema = AttributeSchema(tuple(attributes), tuple(range(label_count)))
    values = np.array(rows, dtype=np.float64).reshape(len(rows), n_cols)
    return MultiLabelDataset(schema, values, name=name)


def _parse_attribute(decl: str, lineno: int) -> Attribute:
    decl = decl.strip()
    if decl.startswith(("'", '"')):
        quote = decl[0]
        end = 1
        while end < len(decl):
            if decl[end] == "\\":
                end += 2
                continue
            if decl[end] == quote:
                break
            end += 1
        if end >= len(decl):
            raise ParseError(f"line {lineno}: unterminated attribute name")
        name = _unquote(decl[: end + 1])
        rest = decl[end + 1:].strip()
    else:
        parts = decl.split(None, 1)
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: malformed @attribute declaration")
        name, rest = parts[0], parts[1].strip()

    if rest.startswith("{"):
        if not rest.endswith("}"):
            raise ParseError(f"line {lineno}: unterminated category list")
        tokens = _split_values(rest[1:-1], f"line {lineno}")
        categories = tuple(_unquote(t) for t in tokens)
        return Attribute(name, categories)
    kind = rest.split()[0].lower()
    if kind in ("numeric", "real", "integer"):
        return Attribute(name)
    raise ParseError(f"line {lineno}: unsupported attribute type {rest!r}")


def write_arff(ds: MultiLabelDataset, dest: str | Path | IO[str]) -> None:
    """Write a dataset as dense ARFF, labels first, with the ``-C k``
    relation suffix."""
    ds = ds.with_labels_first()
    base = _RELATION_SUFFIX.sub("", ds.name).strip() or "dataset"
    relation = f"{base} -C {ds.k}" if ds.k else base

    out: list[str] = [f"@relation {_quote(relation)}", ""]
    for attr in ds.schema.attributes:
        if attr.is_nominal:
            cats = ",".join(_quote(c) for c in attr.categories)
            out.append(f"@attribute {_quote(attr.name)} {{{cats}}}")
        else:
            out.append(f"@attribute {_quote(attr.name)} numeric")
    out.append("")
    out.append("@data")
    nominal = [a.categories for a in ds.schema.attributes]
    for i in range(ds.n_instances):
        cells = []
        for j in range(ds.schema.n_attributes):
            v = ds.values[i, j]
            if np.isnan(v):
                cells.append("?")
            elif nominal[j] is not None:
                cells.append(_quote(nominal[j][int(v)]))
            else:
                cells.append(repr(float(v)))
        out.append(",".join(cells))
    text = "\n".join(out) + "\n"
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text, encoding="utf-8")
    else:
        dest.write(text)
