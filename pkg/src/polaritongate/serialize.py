"""Deterministic text serialisation: 12-significant-digit floats, fixed key order, LF endings."""

from __future__ import annotations

import csv
import io as _io
import json
import math
from pathlib import Path

import numpy as np

from .collision import TwoParticleGrid

GRID_FORMAT = "two-particle-grid/1"


def fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.11e}"


def dumps_json(obj, indent: int = 2) -> str:
    """JSON with floats in fixed scientific notation; non-finite floats become strings."""

    def encode(o, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(o, dict):
            if not o:
                return "{}"
            items = [f"{pad}{json.dumps(str(k))}: {encode(v, level + 1)}" for k, v in o.items()]
            return "{\n" + ",\n".join(items) + "\n" + end + "}"
        if isinstance(o, (list, tuple, np.ndarray)):
            if len(o) == 0:
                return "[]"
            items = [f"{pad}{encode(v, level + 1)}" for v in o]
            return "[\n" + ",\n".join(items) + "\n" + end + "]"
        if isinstance(o, (bool, np.bool_)):
            return "true" if o else "false"
        if o is None:
            return "null"
        if isinstance(o, (int, np.integer)):
            return str(int(o))
        if isinstance(o, (float, np.floating)):
            if math.isfinite(o):
                return fmt_float(o)
            return json.dumps(fmt_float(o))
        return json.dumps(str(o))

    return encode(obj, 0) + "\n"


def rows_to_csv(header, rows) -> str:
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def _cell(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return fmt_float(v)
    if v is None:
        return ""
    return v


def write_text(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def write_grid(grid: TwoParticleGrid, csv_path, json_path, parameters: dict | None = None) -> None:
    """CSV of (z1, z2, re, im) rows, z2 varying fastest, plus a JSON header."""
    z1, z2 = grid.z1_grid, grid.z2_grid
    amp = np.asarray(grid.amplitude)
    lines = ["z1,z2,re,im"]
    z1_txt = [fmt_float(v) for v in z1]
    z2_txt = [fmt_float(v) for v in z2]
    for i, a in enumerate(z1_txt):
        row = amp[i]
        for j, b in enumerate(z2_txt):
            lines.append(f"{a},{b},{fmt_float(row[j].real)},{fmt_float(row[j].imag)}")
    write_text(csv_path, "\n".join(lines) + "\n")
    header = {
        "format": GRID_FORMAT,
        "csv": Path(csv_path).name,
        "time": grid.time,
        "z1_grid": {"start": float(z1[0]), "stop": float(z1[-1]), "points": len(z1)},
        "z2_grid": {"start": float(z2[0]), "stop": float(z2[-1]), "points": len(z2)},
        "parameters": parameters or {},
    }
    write_text(json_path, dumps_json(header))


def read_grid(json_path) -> TwoParticleGrid:
    json_path = Path(json_path)
    header = json.loads(json_path.read_text(encoding="utf-8"))
    if header.get("format") != GRID_FORMAT:
        raise ValueError(f"unrecognised grid format {header.get('format')!r}")
    data = np.loadtxt(json_path.parent / header["csv"], delimiter=",", skiprows=1, ndmin=2)
    n1 = header["z1_grid"]["points"]
    n2 = header["z2_grid"]["points"]
    z1 = data[::n2, 0]
    z2 = data[:n2, 1]
    amplitude = (data[:, 2] + 1j * data[:, 3]).reshape(n1, n2)
    return TwoParticleGrid(z1, z2, amplitude, float(header["time"]))
