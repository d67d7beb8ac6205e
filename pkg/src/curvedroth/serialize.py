"""JSON and CSV output with floats at 17 significant digits."""
from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
from fractions import Fraction

import numpy as np

from .dyadic import DyadicInterval

SCHEMA = 1


def _float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    text = format(x, ".17g")
    # keep floats recognizable as floats
    return text if any(ch in text for ch in ".en") else text + ".0"


def to_plain(obj):
    """Recursively turn dataclasses, numpy values and tuples into JSON-ready values."""
    if isinstance(obj, DyadicInterval):
        return {"level": obj.level, "index": obj.index, "N": obj.N}
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        if hasattr(obj, "as_dict"):
            return to_plain(obj.as_dict())
        return to_plain(dataclasses.asdict(obj))
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating, Fraction)):
        return float(obj)
    return obj


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, float):
        return _float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with a leading ``schema`` field when ``obj`` is a dict."""
    plain = to_plain(obj)
    if isinstance(plain, dict) and "schema" not in plain:
        plain = {"schema": SCHEMA, **plain}
    return _encode(plain, indent, 0) + "\n"


def csv_text(rows: list[dict], columns: list[str] | None = None) -> str:
    if not rows:
        return "" if columns is None else ",".join(columns) + "\n"
    columns = columns or list(rows[0].keys())
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_float(v) if isinstance(v, (float, np.floating)) else to_plain(v)
                    for v in (r.get(c, "") for c in columns)])
    return buf.getvalue()
