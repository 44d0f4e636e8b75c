"""Deterministic CSV / JSON output."""
from __future__ import annotations

import csv
import io
import json
import math
import sys
from collections.abc import Mapping, Sequence

import numpy as np


def format_value(value, precision: int) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return "" if math.isnan(value) else format(float(value), f".{precision}g")
    if value is None:
        return ""
    return str(value)


def _json_value(value, precision: int):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return None if not math.isfinite(value) else float(format(float(value), f".{precision}g"))
    if isinstance(value, Mapping):
        return {str(k): _json_value(v, precision) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_json_value(v, precision) for v in value]
    return value


def render_csv(records: Sequence[Mapping], precision: int = 9) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    columns = list(records[0])
    writer.writerow(columns)
    for rec in records:
        writer.writerow([format_value(rec[c], precision) for c in columns])
    return buf.getvalue()


def render_json(records: Sequence[Mapping], precision: int = 9, config=None, meta=None) -> str:
    doc = {
        "config": _json_value(config or {}, 17),
        "results": [_json_value(dict(r), precision) for r in records],
        "meta": _json_value(meta or {}, precision),
    }
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def write_output(records: Sequence[Mapping], path: str | None = None, fmt: str = "csv",
                 precision: int = 9, config=None, meta=None) -> str:
    """Write records to ``path`` (stdout when None or "-") and return the text.

    Floats are rendered with ``precision`` significant digits.
    """
    if not records:
        raise ValueError("no records to write")
    if precision < 1:
        raise ValueError("precision must be at least 1")
    if fmt == "csv":
        text = render_csv(records, precision)
    elif fmt == "json":
        text = render_json(records, precision, config, meta)
    else:
        raise ValueError(f"unknown output format {fmt!r}")
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return text
