"""Versioned report documents and flat tabular output.

Reports are JSON with a fixed field set {schema_version, command, config,
seed, results, per_point?}.  Serialization is fully deterministic: keys are
sorted, floats are written with 17 significant digits (lossless for IEEE
doubles), and the writer is our own so the bytes never depend on library
internals.  Tables are plain CSV with one row per (grid value, estimator,
metric) triple.
"""

from __future__ import annotations

import csv
import json
import math
from typing import Any

import numpy as np

from ._backend import backend_name

SCHEMA_VERSION = 1

TABLE_FIELDS = ("grid_value", "estimator", "metric", "mean", "count")


def make_report(command: str, config: dict, seed, results: dict, per_point: dict | None = None) -> dict:
    # the active kernel backend is part of the numerical configuration:
    # reports are byte-reproducible per backend, not across backends
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "config": {**config, "backend": backend_name()},
        "seed": seed,
        "results": results,
    }
    if per_point is not None:
        doc["per_point"] = per_point
    return doc


def _fmt_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"reports must not contain non-finite numbers, got {x!r}")
    s = format(float(x), ".17g")
    if "." not in s and "e" not in s and "E" not in s:
        s += ".0"
    return s


def _write_value(v: Any, parts: list[str], indent: int) -> None:
    pad = "  " * indent
    if v is None:
        parts.append("null")
    elif isinstance(v, (bool, np.bool_)):
        parts.append("true" if v else "false")
    elif isinstance(v, (int, np.integer)):
        parts.append(str(int(v)))
    elif isinstance(v, (float, np.floating)):
        parts.append(_fmt_float(float(v)))
    elif isinstance(v, str):
        parts.append(json.dumps(v))
    elif isinstance(v, dict):
        if not v:
            parts.append("{}")
            return
        parts.append("{\n")
        keys = sorted(v)
        for i, k in enumerate(keys):
            if not isinstance(k, str):
                raise TypeError(f"report keys must be strings, got {k!r}")
            parts.append(f"{pad}  {json.dumps(k)}: ")
            _write_value(v[k], parts, indent + 1)
            parts.append(",\n" if i < len(keys) - 1 else "\n")
        parts.append(pad + "}")
    elif isinstance(v, (list, tuple, np.ndarray)):
        items = list(np.asarray(v).tolist()) if isinstance(v, np.ndarray) else list(v)
        if not items:
            parts.append("[]")
            return
        parts.append("[\n")
        for i, item in enumerate(items):
            parts.append(pad + "  ")
            _write_value(item, parts, indent + 1)
            parts.append(",\n" if i < len(items) - 1 else "\n")
        parts.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(v).__name__} into a report")


def dumps(doc: dict) -> str:
    parts: list[str] = []
    _write_value(doc, parts, 0)
    parts.append("\n")
    return "".join(parts)


def dump(doc: dict, path) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(dumps(doc))


def load(path) -> dict:
    with open(path) as fh:
        return json.load(fh)


def loads(text: str) -> dict:
    return json.loads(text)


def write_table(rows: list[dict], path) -> None:
    """Flat plot-friendly table; one row per grid point per estimator."""
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=TABLE_FIELDS, lineterminator="\n")
        writer.writeheader()
        for row in rows:
            out = dict(row)
            for key in ("grid_value", "mean"):
                if isinstance(out.get(key), (float, np.floating)):
                    out[key] = _fmt_float(float(out[key]))
            writer.writerow(out)
