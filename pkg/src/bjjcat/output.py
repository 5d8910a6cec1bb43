"""Deterministic CSV/JSON emission.

Every run produces a main table, optional extra tables and a metadata
block. CSV output writes ``<stem>.csv`` (+ ``<stem>.<table>.csv``) and a
``<stem>.json`` sidecar; JSON output writes a single ``<stem>.json``.
"""

from dataclasses import dataclass, field
import csv
import io
import json
import math
from pathlib import Path

import numpy as np

DEFAULT_PRECISION = 17


@dataclass
class Table:
    columns: list  # (name, unit) pairs
    rows: list = field(default_factory=list)

    def header(self):
        return [f"{name} [{unit}]" if unit else name for name, unit in self.columns]


@dataclass
class Report:
    command: str
    metadata: dict
    table: Table
    scalars: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)  # name -> Table
    arrays: dict = field(default_factory=dict)  # JSON-only payload


def _round(v, precision):
    if precision >= DEFAULT_PRECISION:
        return v
    return float(f"{v:.{precision}g}")


def format_cell(v, precision=DEFAULT_PRECISION):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.{precision}g}"
    return str(v)


def jsonable(obj, precision=DEFAULT_PRECISION):
    if isinstance(obj, dict):
        return {str(k): jsonable(v, precision) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v, precision) for v in obj]
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist(), precision)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if not math.isfinite(v):
            return None
        return _round(v, precision)
    return obj


def table_csv(table, precision=DEFAULT_PRECISION):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.header())
    for row in table.rows:
        writer.writerow([format_cell(v, precision) for v in row])
    return buf.getvalue()


def table_json(table, precision=DEFAULT_PRECISION):
    return {
        "columns": [name for name, _ in table.columns],
        "units": [unit for _, unit in table.columns],
        "rows": jsonable(table.rows, precision),
    }


def _dump(doc):
    return json.dumps(doc, indent=2, allow_nan=False) + "\n"


def _stem(out):
    out = Path(out)
    return out.with_suffix("") if out.suffix in (".csv", ".json") else out


def emit(report, out=None, fmt="csv", precision=DEFAULT_PRECISION, stream=None):
    """Write ``report``; returns the list of written paths (empty for stream output)."""
    if fmt not in ("csv", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    doc = {
        "metadata": jsonable(report.metadata, precision),
        "scalars": jsonable(report.scalars, precision),
    }
    if out is None:
        if fmt == "csv":
            stream.write(table_csv(report.table, precision))
        else:
            doc["table"] = table_json(report.table, precision)
            doc["tables"] = {k: table_json(t, precision) for k, t in report.extra.items()}
            doc["arrays"] = jsonable(report.arrays, precision)
            stream.write(_dump(doc))
        return []

    stem = _stem(out)
    stem.parent.mkdir(parents=True, exist_ok=True)
    written = []
    if fmt == "csv":
        files = {"table": f"{stem.name}.csv"}
        main = stem.parent / files["table"]
        main.write_text(table_csv(report.table, precision))
        written.append(main)
        for name, table in report.extra.items():
            files[name] = f"{stem.name}.{name}.csv"
            path = stem.parent / files[name]
            path.write_text(table_csv(table, precision))
            written.append(path)
        doc["files"] = files
    else:
        doc["table"] = table_json(report.table, precision)
        doc["tables"] = {k: table_json(t, precision) for k, t in report.extra.items()}
        doc["arrays"] = jsonable(report.arrays, precision)
    sidecar = stem.parent / f"{stem.name}.json"
    sidecar.write_text(_dump(doc))
    written.append(sidecar)
    return written
