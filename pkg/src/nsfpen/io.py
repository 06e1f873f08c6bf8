"""
On-disk formats: legacy ASCII VTK field dumps and CSV tables.

VTK cell values are written with x1 varying fastest (row-major over
``(x2, x1)``), one value per line with 17 significant digits, so that every
float64 survives a write/read round trip.
"""

from __future__ import annotations

import csv
from dataclasses import astuple, fields
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

VTK_FIELDS = ("rho", "theta", "u1", "u2", "mask")


def fmt(x: float) -> str:
    return "%.17g" % x


# {{{ vtk


def write_vtk(path, N: int, time: float, data: dict[str, np.ndarray]) -> None:
    """Write cell scalars of an ``N x N`` grid on ``[-1, 1]^2``.

    *data* maps each name in :data:`VTK_FIELDS` to an ``(N, N)`` array indexed
    ``[i1, i2]``.
    """
    h = 2.0 / N
    lines = [
        "# vtk DataFile Version 3.0",
        f"nsf-pen t={fmt(time)}",
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        f"DIMENSIONS {N + 1} {N + 1} 1",
        "ORIGIN -1 -1 0",
        f"SPACING {fmt(h)} {fmt(h)} 1",
        f"CELL_DATA {N * N}",
    ]
    for name in VTK_FIELDS:
        values = np.asarray(data[name], dtype=np.float64)
        if values.shape != (N, N):
            raise ValueError(f"field {name!r} has shape {values.shape}, expected {(N, N)}")
        lines.append(f"SCALARS {name} double 1")
        lines.append("LOOKUP_TABLE default")
        lines.extend(fmt(v) for v in values.T.ravel())
    Path(path).write_text("\n".join(lines) + "\n")


def state_fields(state, gas, mask) -> dict[str, np.ndarray]:
    u = state.velocity
    return {
        "rho": state.rho,
        "theta": state.temperature(gas),
        "u1": u[0],
        "u2": u[1],
        "mask": mask.astype(np.float64),
    }


def read_vtk(path) -> tuple[float, dict[str, np.ndarray]]:
    """Read a file produced by :func:`write_vtk`; returns ``(time, fields)``."""
    lines = Path(path).read_text().splitlines()
    if lines[0] != "# vtk DataFile Version 3.0" or lines[2] != "ASCII":
        raise ValueError(f"{path}: not an ASCII legacy VTK file")
    title = lines[1]
    if not title.startswith("nsf-pen t="):
        raise ValueError(f"{path}: unexpected title line {title!r}")
    time = float(title[len("nsf-pen t="):])
    nx, ny, _ = (int(x) for x in lines[4].split()[1:])
    N = nx - 1
    ncells = int(lines[7].split()[1])
    if ncells != N * N or ny != nx:
        raise ValueError(f"{path}: inconsistent dimensions")

    out = {}
    pos = 8
    while pos < len(lines) and lines[pos]:
        _, name, *_ = lines[pos].split()
        values = np.array([float(v) for v in lines[pos + 2:pos + 2 + ncells]])
        out[name] = values.reshape(N, N).T.copy()
        pos += 2 + ncells
    return time, out


# }}}


# {{{ csv


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return fmt(value)
    return str(value)


def write_csv(path, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([_cell(v) for v in row])


def read_csv(path) -> list[dict[str, str]]:
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def write_diagnostics(path, series) -> None:
    from nsfpen.solver import DiagnosticsRecord

    header = [f.name for f in fields(DiagnosticsRecord)]
    write_csv(path, header, (astuple(rec) for rec in series))


def read_diagnostics(path):
    from nsfpen.solver import DiagnosticsRecord

    out = []
    for row in read_csv(path):
        kw = {k: float(v) for k, v in row.items()}
        kw["step"] = int(row["step"])
        out.append(DiagnosticsRecord(**kw))
    return out


# }}}
