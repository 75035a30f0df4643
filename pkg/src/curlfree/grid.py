"""Staggered Cartesian lattice and centre <-> vertex interpolation.

Index convention (padded arrays, ``g`` ghost layers):

* centre ``(I, J)`` sits at ``(x0 + (I - g + 1/2) dx, y0 + (J - g + 1/2) dy)``;
  arrays have shape ``(nx + 2g, ny + 2g)``;
* vertex ``(I, J)`` is the lower-left corner of centre ``(I, J)``, at
  ``(x0 + (I - g) dx, y0 + (J - g) dy)``; arrays have shape
  ``(nx + 2g + 1, ny + 2g + 1)`` and the physical vertices are ``g .. g + nx``.

Every operator acts on the two trailing axes, so component-first stacks
(e.g. a conserved state of shape ``(5, NX, NY)``) pass straight through.
Entries whose stencil would leave the array are set to NaN.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

GHOST = 2


@dataclass(frozen=True)
class StaggeredGrid:
    nx: int
    ny: int
    lx: float
    ly: float
    x0: float = 0.0
    y0: float = 0.0
    ghost: int = GHOST

    def __post_init__(self):
        if self.nx < 1 or self.ny < 1:
            raise ValueError("grid needs at least one cell per direction")
        if not (self.lx > 0 and self.ly > 0):
            raise ValueError("domain extents must be positive")
        if self.ghost < 2:
            raise ValueError("ghost width must be at least 2")

    @property
    def dx(self) -> float:
        return self.lx / self.nx

    @property
    def dy(self) -> float:
        return self.ly / self.ny

    @property
    def h(self) -> float:
        return max(self.dx, self.dy)

    @property
    def cell_area(self) -> float:
        return self.dx * self.dy

    @property
    def center_shape(self) -> tuple[int, int]:
        return (self.nx + 2 * self.ghost, self.ny + 2 * self.ghost)

    @property
    def vertex_shape(self) -> tuple[int, int]:
        return (self.nx + 2 * self.ghost + 1, self.ny + 2 * self.ghost + 1)

    @property
    def interior(self) -> tuple[slice, slice]:
        """Slices selecting physical cells of a centre array."""
        g = self.ghost
        return (slice(g, g + self.nx), slice(g, g + self.ny))

    @property
    def vertex_interior(self) -> tuple[slice, slice]:
        """Slices selecting physical vertices (boundary lines included)."""
        g = self.ghost
        return (slice(g, g + self.nx + 1), slice(g, g + self.ny + 1))

    def xc(self) -> np.ndarray:
        g = self.ghost
        return self.x0 + (np.arange(self.nx + 2 * g) - g + 0.5) * self.dx

    def yc(self) -> np.ndarray:
        g = self.ghost
        return self.y0 + (np.arange(self.ny + 2 * g) - g + 0.5) * self.dy

    def xv(self) -> np.ndarray:
        g = self.ghost
        return self.x0 + (np.arange(self.nx + 2 * g + 1) - g) * self.dx

    def yv(self) -> np.ndarray:
        g = self.ghost
        return self.y0 + (np.arange(self.ny + 2 * g + 1) - g) * self.dy

    def center_mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.xc(), self.yc(), indexing="ij")

    def vertex_mesh(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.xv(), self.yv(), indexing="ij")


def vertex_from_centers(f: np.ndarray) -> np.ndarray:
    """Mean of the four cells around each vertex."""
    f = np.asarray(f, dtype=float)
    out = np.full(f.shape[:-2] + (f.shape[-2] + 1, f.shape[-1] + 1), np.nan)
    out[..., 1:-1, 1:-1] = 0.25 * ((f[..., :-1, :-1] + f[..., 1:, :-1])
                                   + (f[..., :-1, 1:] + f[..., 1:, 1:]))
    return out


def center_from_vertices(v: np.ndarray) -> np.ndarray:
    """Mean of the four corners of each cell."""
    v = np.asarray(v, dtype=float)
    return 0.25 * ((v[..., :-1, :-1] + v[..., 1:, :-1]) + (v[..., :-1, 1:] + v[..., 1:, 1:]))
