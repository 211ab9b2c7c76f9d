"""Flat-file formats: sample CSV, polyline CSV, JSON lines, VTK legacy ASCII.

Floats are written with 17 significant digits so every double survives a
write/read cycle bit for bit. All writers go through :func:`atomic_write`.
"""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile

import numpy as np

SAMPLE_HEADER = ("t", "x", "y", "z", "Ex", "Ey", "Ez", "Bx", "By", "Bz", "Sx", "Sy", "Sz", "u")
POLYLINE_HEADER = ("s", "x", "y", "z")


def fmt(v) -> str:
    return format(float(v), ".17g")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        # JSON has no inf/nan; keep them readable as strings
        return v if math.isfinite(v) else str(v)
    if hasattr(obj, "value"):
        return obj.value
    return obj


def json_line(obj) -> str:
    return json.dumps(_jsonable(obj), separators=(",", ":")) + "\n"


def atomic_write(path, text: str):
    """Write via a temporary file in the same directory, then rename."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=d)
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        # mkstemp creates 0600; give the file the usual umask-derived mode
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def sample_csv(rows) -> str:
    """rows: (N, 14) array in SAMPLE_HEADER order."""
    return _csv_text(SAMPLE_HEADER, np.asarray(rows, dtype=float))


def polyline_csv(points, arc=None) -> str:
    pts = np.asarray(points, dtype=float)
    if arc is None:
        seg = np.linalg.norm(np.diff(pts, axis=0), axis=1)
        arc = np.concatenate([[0.0], np.cumsum(seg)])
    return _csv_text(POLYLINE_HEADER, np.column_stack([arc, pts]))


def read_csv_table(path, header=None) -> np.ndarray:
    with open(path, newline="") as fh:
        rd = csv.reader(fh)
        head = next(rd)
        if header is not None and tuple(head) != tuple(header):
            raise ValueError(f"{path}: header {head} != {list(header)}")
        rows = [[float(v) for v in row] for row in rd if row]
    return np.array(rows, dtype=float).reshape(-1, len(head))


def read_polyline(path):
    """(points (N, 3), arc length (N,)) from a polyline CSV."""
    tab = read_csv_table(path, POLYLINE_HEADER)
    return tab[:, 1:], tab[:, 0]


def read_seeds(path) -> np.ndarray:
    """Seed points from CSV rows x,y,z (an x,y,z header line is optional)."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].lstrip().startswith("#"):
                continue
            try:
                vals = [float(v) for v in row]
            except ValueError:
                if not out:
                    continue  # header
                raise
            if len(vals) != 3:
                raise ValueError(f"{path}: seed rows need 3 values, got {len(vals)}")
            out.append(vals)
    return np.array(out, dtype=float).reshape(-1, 3)


def vtk_polydata(polylines, title="nullknots") -> str:
    """Legacy VTK ASCII POLYDATA with one LINES cell per polyline."""
    polylines = [np.asarray(p, dtype=float) for p in polylines]
    n = sum(len(p) for p in polylines)
    out = ["# vtk DataFile Version 3.0", title[:255], "ASCII", "DATASET POLYDATA", f"POINTS {n} double"]
    for p in polylines:
        out.extend(" ".join(fmt(v) for v in row) for row in p)
    out.append(f"LINES {len(polylines)} {n + len(polylines)}")
    start = 0
    for p in polylines:
        out.append(" ".join(str(i) for i in [len(p), *range(start, start + len(p))]))
        start += len(p)
    return "\n".join(out) + "\n"


def read_vtk_polylines(path):
    with open(path) as fh:
        toks = fh.read().split("\n")
    i = next(k for k, line in enumerate(toks) if line.startswith("POINTS"))
    n = int(toks[i].split()[1])
    pts = np.array([[float(v) for v in toks[i + 1 + j].split()] for j in range(n)])
    m = int(toks[i + 1 + n].split()[1])
    lines = []
    for j in range(m):
        idx = [int(v) for v in toks[i + 2 + n + j].split()]
        lines.append(pts[idx[1:]])
    return lines
