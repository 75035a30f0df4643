"""Snapshot writers and readers: legacy VTK, centreline CSV and exact restart files."""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .grid import StaggeredGrid

SNAPSHOT_SCALARS = ("alpha1", "rho1", "rho2", "rho", "p")
SNAPSHOT_VECTORS = ("u", "w")
CENTERLINE_COLUMNS = ("x", "alpha1", "rho1", "rho2", "rho", "ux", "uy", "wx", "wy", "p")


def _fmt(a: np.ndarray) -> str:
    return "\n".join(" ".join(repr(float(v)) for v in row) for row in a)


def write_vtk(path: str | Path, grid: StaggeredGrid, fields: dict, t: float = 0.0) -> Path:
    """Legacy-VTK STRUCTURED_POINTS text file with cell data.

    ``fields`` maps names to arrays over physical cells, either (nx, ny)
    scalars or (2, nx, ny) vectors.
    """
    path = Path(path)
    nx, ny = grid.nx, grid.ny
    lines = [
        "# vtk DataFile Version 3.0",
        f"curlfree t={t!r} (w averaged from the four cell corners)",
        "ASCII",
        "DATASET STRUCTURED_POINTS",
        f"DIMENSIONS {nx + 1} {ny + 1} 1",
        f"ORIGIN {grid.x0!r} {grid.y0!r} 0",
        f"SPACING {grid.dx!r} {grid.dy!r} 1",
        f"CELL_DATA {nx * ny}",
    ]
    for name, arr in fields.items():
        arr = np.asarray(arr, dtype=float)
        if arr.ndim == 2:
            lines += [f"SCALARS {name} double 1", "LOOKUP_TABLE default",
                      _fmt(arr.T.reshape(-1, 1))]
        else:
            # VTK orders x fastest
            vec = np.stack([arr[0].T.ravel(), arr[1].T.ravel(), np.zeros(nx * ny)], axis=1)
            lines += [f"VECTORS {name} double", _fmt(vec)]
    path.write_text("\n".join(lines) + "\n")
    return path


def read_vtk(path: str | Path) -> dict:
    """Parse files produced by :func:`write_vtk`; fields come back as (nx, ny) or (2, nx, ny)."""
    tokens = Path(path).read_text().split("\n")
    header = tokens[1]
    out = {"header": header, "fields": {}}
    i = 4
    dims = [int(v) for v in tokens[i].split()[1:]]
    origin = [float(v) for v in tokens[i + 1].split()[1:]]
    spacing = [float(v) for v in tokens[i + 2].split()[1:]]
    ncell = int(tokens[i + 3].split()[1])
    nx, ny = dims[0] - 1, dims[1] - 1
    out.update(nx=nx, ny=ny, origin=tuple(origin[:2]), spacing=tuple(spacing[:2]), cells=ncell)
    i += 4
    while i < len(tokens) and tokens[i].strip():
        parts = tokens[i].split()
        if parts[0] == "SCALARS":
            vals = np.array([float(v) for v in tokens[i + 2:i + 2 + ncell]])
            out["fields"][parts[1]] = vals.reshape(ny, nx).T
            i += 2 + ncell
        elif parts[0] == "VECTORS":
            vals = np.array([[float(v) for v in row.split()] for row in tokens[i + 1:i + 1 + ncell]])
            out["fields"][parts[1]] = np.stack([vals[:, 0].reshape(ny, nx).T,
                                                vals[:, 1].reshape(ny, nx).T])
            i += 1 + ncell
        else:
            raise ValueError(f"unexpected VTK line: {tokens[i]!r}")
    return out


def write_centerline(path: str | Path, grid: StaggeredGrid, fields: dict, row: int | None = None) -> Path:
    """CSV of all primitives along the x-direction through the middle row of cells."""
    path = Path(path)
    j = grid.ny // 2 if row is None else row
    x = grid.xc()[grid.interior[0]]
    cols = {"x": x}
    for name in ("alpha1", "rho1", "rho2", "rho", "p"):
        cols[name] = fields[name][:, j]
    cols["ux"], cols["uy"] = fields["u"][0][:, j], fields["u"][1][:, j]
    cols["wx"], cols["wy"] = fields["w"][0][:, j], fields["w"][1][:, j]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CENTERLINE_COLUMNS)
        for k in range(len(x)):
            writer.writerow([repr(float(cols[c][k])) for c in CENTERLINE_COLUMNS])
    return path


def read_centerline(path: str | Path) -> dict:
    data = np.genfromtxt(path, delimiter=",", names=True)
    return {name: np.asarray(data[name]) for name in data.dtype.names}


def write_profile(path: str | Path, columns: dict) -> Path:
    """Plain CSV of equally long 1D arrays (reference profiles)."""
    path = Path(path)
    names = list(columns)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(names)
        for row in zip(*(np.asarray(columns[n]) for n in names)):
            writer.writerow([repr(float(v)) for v in row])
    return path


def save_checkpoint(path: str | Path, Q: np.ndarray, w: np.ndarray | None, t: float, step: int,
                    outputs_done: int = 0) -> Path:
    """Bit-exact restart file."""
    path = Path(path)
    arrays = {"Q": Q, "t": np.float64(t), "step": np.int64(step),
              "outputs_done": np.int64(outputs_done)}
    if w is not None:
        arrays["w"] = w
    with open(path, "wb") as fh:
        np.savez(fh, **arrays)
    return path


def load_checkpoint(path: str | Path) -> dict:
    with np.load(path) as data:
        return {"Q": data["Q"].copy(), "w": data["w"].copy() if "w" in data else None,
                "t": float(data["t"]), "step": int(data["step"]),
                "outputs_done": int(data["outputs_done"])}
