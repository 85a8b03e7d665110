"""CSV and JSON writers for sweep results."""
from __future__ import annotations

import csv
import io
import json
from typing import Any, Sequence

from ..system import UNBOUNDED
from .sweep import OutputRow


def _cell(v: Any) -> Any:
    if v is UNBOUNDED:
        return "unbounded"
    return v


def _csv_text(v: Any) -> str:
    v = _cell(v)
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def row_columns(rows: Sequence[OutputRow], axis: str | None,
                value_cols: Sequence[str]) -> list[str]:
    cols = []
    if any(r.family is not None for r in rows):
        cols.append("family")
    if axis is not None:
        cols.append(axis)
    cols.extend(value_cols)
    if any(r.seed is not None for r in rows):
        cols.append("seed")
    cols.append("error")
    return cols


def _row_dict(row: OutputRow, cols: Sequence[str], axis: str | None) -> dict[str, Any]:
    out = {}
    for c in cols:
        if c == "family":
            out[c] = row.family
        elif c == axis:
            out[c] = row.axis_value
        elif c == "seed":
            out[c] = row.seed
        elif c == "error":
            out[c] = row.error
        else:
            out[c] = _cell(row.values.get(c))
    return out


def to_csv(rows: Sequence[OutputRow], cols: Sequence[str], axis: str | None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(cols)
    for r in rows:
        d = _row_dict(r, cols, axis)
        writer.writerow([_csv_text(d[c]) for c in cols])
    return buf.getvalue()


def to_json(rows: Sequence[OutputRow], cols: Sequence[str], axis: str | None,
            spec_echo: dict[str, Any]) -> str:
    doc = {
        "spec": {k: _cell(v) for k, v in spec_echo.items()},
        "rows": [_row_dict(r, cols, axis) for r in rows],
    }
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"
