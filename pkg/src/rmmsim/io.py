"""Flat-file output: CSV with a header row and JSON mirroring the columns.

Floats are written with ``repr`` so identical inputs give byte-identical
files.
"""

import csv
import io
import json
import sys

import numpy as np


def _plain(value):
    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.ndarray):
        return value.tolist()
    return value


def rows_to_json(rows):
    rows = [{k: _plain(v) for k, v in r.items()} for r in rows]
    return json.dumps(rows, indent=1) + "\n"


def _cell(value):
    value = _plain(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return ";".join(_cell(v) for v in value)
    return str(value)


def rows_to_csv(rows):
    buf = io.StringIO()
    if not rows:
        return ""
    columns = list(rows[0])
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([_cell(r.get(c, "")) for c in columns])
    return buf.getvalue()


def render(rows, fmt):
    if fmt == "json":
        return rows_to_json(rows)
    if fmt == "csv":
        return rows_to_csv(rows)
    raise ValueError(f"unknown format {fmt!r}")


def write_output(text, path=None):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def vector_to_json(v):
    return json.dumps([float(a) for a in np.asarray(v, dtype=np.float64)])


def vector_from_json(text):
    return np.array(json.loads(text), dtype=np.float64)


def vector_to_csv(v):
    return "".join(repr(float(a)) + "\n" for a in np.asarray(v, dtype=np.float64))


def vector_from_csv(text):
    return np.array([float(line) for line in text.split()], dtype=np.float64)
