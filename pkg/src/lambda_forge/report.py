"""Serialization of results as JSON, CSV or an aligned text table."""

from __future__ import annotations

import csv
import io
import json
from fractions import Fraction

from .scalars import scalar_to_str


def jsonify(obj):
    """Plain JSON data; fractions become decimal strings "p/q", key order is kept."""
    if hasattr(obj, "to_json"):
        return jsonify(obj.to_json())
    if isinstance(obj, (bool, int, str)) or obj is None:
        return obj
    if isinstance(obj, Fraction):
        return scalar_to_str(obj)
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, dict):
        return {str(k): jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonify(v) for v in obj]
    return str(obj)


def _cell(v) -> str:
    v = jsonify(v)
    if isinstance(v, (dict, list)):
        return json.dumps(v, separators=(",", ":"))
    if v is None:
        return ""
    return str(v)


def emit_report(results: dict, fmt: str = "table") -> bytes:
    """``results`` holds header fields plus optionally ``rows`` (a list of flat dicts)."""
    data = jsonify(results)
    if fmt == "json":
        return (json.dumps(data, indent=2, ensure_ascii=False) + "\n").encode()
    rows = data.get("rows")
    if fmt == "csv":
        buf = io.StringIO()
        if rows:
            fields = list(rows[0].keys())
            w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({k: _cell(r.get(k)) for k in fields})
        else:
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["key", "value"])
            for k, v in data.items():
                w.writerow([k, _cell(v)])
        return buf.getvalue().encode()
    if fmt != "table":
        raise ValueError(f"unknown output format {fmt!r}")
    lines = []
    for k, v in data.items():
        if k == "rows":
            continue
        lines.append(f"{k}: {_cell(v)}")
    if rows:
        fields = list(rows[0].keys())
        cells = [[_cell(r.get(f)) for f in fields] for r in rows]
        widths = [max(len(f), *(len(c[i]) for c in cells)) for i, f in enumerate(fields)]
        lines.append("  ".join(f.ljust(w) for f, w in zip(fields, widths)))
        lines.append("  ".join("-" * w for w in widths))
        for c in cells:
            lines.append("  ".join(x.ljust(w) for x, w in zip(c, widths)))
    return ("\n".join(lines) + "\n").encode()
