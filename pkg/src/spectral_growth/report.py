"""Deterministic JSON / CSV emission."""

from __future__ import annotations

import csv
import io
import json
import math
from typing import Any, Iterable

FLOAT_DIGITS = 12


def normalize(obj: Any) -> Any:
    """Round floats to 12 significant digits; non-finite floats become strings."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, float):
        if math.isnan(obj):
            return "nan"
        if math.isinf(obj):
            return "inf" if obj > 0 else "-inf"
        return float(f"{obj:.{FLOAT_DIGITS}g}")
    if isinstance(obj, dict):
        return {str(k): normalize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [normalize(v) for v in obj]
    if hasattr(obj, "to_dict"):
        return normalize(obj.to_dict())
    if hasattr(obj, "item"):  # numpy scalars
        return normalize(obj.item())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(report: dict) -> str:
    return json.dumps(normalize(report), sort_keys=True, indent=2) + "\n"


CSV_COLUMNS = ("n", "beta", "gamma", "omega_root", "omega_ratio")


def profile_csv(rows: Iterable[dict], columns=CSV_COLUMNS) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        out = []
        for c in columns:
            v = normalize(row.get(c))
            out.append("" if v is None else v)
        writer.writerow(out)
    return buf.getvalue()
