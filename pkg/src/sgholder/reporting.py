"""Deterministic report serialization and plot-data emission.

Reports serialize with sorted keys and repr-exact floats, so a rerun with the
same config and seed produces byte-identical JSON.  Timing never enters the
report (it goes to stderr) precisely to keep that property.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json

import numpy as np


def to_jsonable(obj):
    if obj is None or isinstance(obj, (bool, int, str)):
        return obj
    if isinstance(obj, float):
        if np.isnan(obj):
            return "nan"
        if np.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return obj
    if isinstance(obj, (np.floating, np.integer)):
        return to_jsonable(obj.item())
    if isinstance(obj, complex):
        return {"re": to_jsonable(obj.real), "im": to_jsonable(obj.imag)}
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()]
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        if hasattr(obj, "summary"):
            return to_jsonable(obj.summary())
        return {
            f.name: to_jsonable(getattr(obj, f.name))
            for f in dataclasses.fields(obj)
            if not f.name.startswith("_")
        }
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in sorted(obj.items(), key=lambda kv: str(kv[0]))}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    return repr(obj)


def dumps_report(report: dict) -> str:
    return json.dumps(to_jsonable(report), sort_keys=True, indent=2) + "\n"


def write_report(path, report: dict) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_report(report))


def emit_plot_data(report: dict, quantity: str) -> str:
    """Long-format CSV `s,alpha,sample,value` for one of the report's plot tables."""
    tables = report.get("plot_data", {})
    if quantity not in tables:
        known = ", ".join(sorted(tables)) or "(none)"
        raise KeyError(f"no plot table {quantity!r}; available: {known}")
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["s", "alpha", "sample", "value"])
    for row in tables[quantity]:
        writer.writerow(row)
    return buf.getvalue()
