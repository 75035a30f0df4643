"""Curl error, conservation totals, error norms and convergence orders."""
from __future__ import annotations

import csv
import math
from pathlib import Path

import numpy as np

from . import model
from .grid import StaggeredGrid
from .model import M1, M2, MOM, Phases
from .ops import center_curl

DIAG_COLUMNS = ("t", "dt", "curl_l1", "mass1", "mass2", "momx", "momy", "energy", "floored_cells")


def curl_error_l1(w: np.ndarray, grid: StaggeredGrid) -> float:
    """Area-weighted L1 norm of the centre curl over physical cells."""
    curl = center_curl(w, grid.dx, grid.dy)[grid.interior]
    return float(np.sum(np.abs(curl)) * grid.cell_area)


def conservation_totals(Q: np.ndarray, w_centers: np.ndarray, grid: StaggeredGrid,
                        phases: Phases) -> dict:
    """Cell sums times cell area of the conserved rows and the total energy."""
    inner = (slice(None),) + grid.interior
    Qi = Q[inner]
    wi = w_centers[inner]
    prim = model.primitives_from_conserved(Qi[:MOM + 2], wi, phases, speeds=False, with_phi=False)
    area = grid.cell_area
    return {
        "mass1": float(np.sum(Qi[M1]) * area),
        "mass2": float(np.sum(Qi[M2]) * area),
        "momx": float(np.sum(Qi[MOM]) * area),
        "momy": float(np.sum(Qi[MOM + 1]) * area),
        "energy": float(np.sum(model.total_energy(prim, phases)) * area),
        "floored_cells": prim.floored,
    }


def error_norms(numeric, exact, cell_area: float = 1.0) -> dict:
    """Discrete L1, L2 and Linf norms of ``numeric - exact`` with area weights."""
    err = np.abs(np.asarray(numeric, dtype=float) - np.asarray(exact, dtype=float))
    return {
        "L1": float(np.sum(err) * cell_area),
        "L2": float(np.sqrt(np.sum(err * err) * cell_area)),
        "Linf": float(np.max(err)) if err.size else 0.0,
    }


def eoc(errors, mesh_sizes) -> list[float]:
    """Observed orders log(e_coarse / e_fine) / log(h_coarse / h_fine) between neighbours."""
    errors = list(errors)
    h = list(mesh_sizes)
    if len(errors) < 2 or len(errors) != len(h):
        raise ValueError("need at least two meshes with one error each")
    return [math.log(errors[k] / errors[k + 1]) / math.log(h[k] / h[k + 1])
            for k in range(len(errors) - 1)]


class DiagnosticsWriter:
    """Appends one row per sample to ``diagnostics.csv``."""

    def __init__(self, path: str | Path, append: bool = False):
        self.path = Path(path)
        new = not (append and self.path.exists())
        self._fh = open(self.path, "a" if not new else "w", newline="")
        self._csv = csv.writer(self._fh)
        if new:
            self._csv.writerow(DIAG_COLUMNS)

    def write(self, t: float, dt: float, curl_l1: float, totals: dict) -> None:
        row = [t, dt, curl_l1] + [totals[k] for k in DIAG_COLUMNS[3:8]] + [totals["floored_cells"]]
        self._csv.writerow([repr(float(v)) if not isinstance(v, int) else v for v in row])
        self._fh.flush()

    def close(self) -> None:
        self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()
