"""Compatible discrete operators on the staggered lattice.

The corner gradient maps centre scalars to vertex vectors and the centre curl
maps vertex vectors back to centre scalars. Both are built from the same
half-cell differences and averages, which commute, so
``center_curl(corner_gradient(phi))`` vanishes identically for any ``phi``.
"""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from .grid import center_from_vertices, vertex_from_centers

# fill(field, parity) -> None refreshes ghost cells of a centre scalar in place;
# parity is +1 for fields even under wall reflection, -1 for odd ones.
CenterFill = Callable[[np.ndarray, int], None]


def corner_gradient(phi: np.ndarray, dx: float, dy: float) -> np.ndarray:
    """Vertex gradient (2, NX+1, NY+1) of a centre field (NX, NY)."""
    phi = np.asarray(phi, dtype=float)
    out = np.full((2,) + phi.shape[:-2] + (phi.shape[-2] + 1, phi.shape[-1] + 1), np.nan)
    ne, nw = phi[..., 1:, 1:], phi[..., :-1, 1:]
    se, sw = phi[..., 1:, :-1], phi[..., :-1, :-1]
    out[0, ..., 1:-1, 1:-1] = ((ne - nw) + (se - sw)) / (2.0 * dx)
    out[1, ..., 1:-1, 1:-1] = ((ne - se) + (nw - sw)) / (2.0 * dy)
    return out


def center_curl(w: np.ndarray, dx: float, dy: float) -> np.ndarray:
    """z-component of the curl of a vertex vector field, at every centre."""
    wx, wy = w[0], w[1]
    dwy_dx = ((wy[1:, 1:] - wy[:-1, 1:]) + (wy[1:, :-1] - wy[:-1, :-1])) / (2.0 * dx)
    dwx_dy = ((wx[1:, 1:] - wx[1:, :-1]) + (wx[:-1, 1:] - wx[:-1, :-1])) / (2.0 * dy)
    return dwy_dx - dwx_dy


def vertex_divergence(w: np.ndarray, dx: float, dy: float) -> np.ndarray:
    """Divergence at vertices, taking corner differences of ``w`` averaged to centres."""
    wc = center_from_vertices(w)
    out = np.full(w.shape[1:], np.nan)
    cx, cy = wc[0], wc[1]
    out[1:-1, 1:-1] = (((cx[1:, 1:] - cx[:-1, 1:]) + (cx[1:, :-1] - cx[:-1, :-1])) / (2.0 * dx)
                       + ((cy[1:, 1:] - cy[1:, :-1]) + (cy[:-1, 1:] - cy[:-1, :-1])) / (2.0 * dy))
    return out


def rotated_gradient(c: np.ndarray, dx: float, dy: float) -> np.ndarray:
    """Curl of the out-of-plane field c e_z, i.e. (d_y c, -d_x c) at vertices."""
    grad = corner_gradient(c, dx, dy)
    return np.stack([grad[1], -grad[0]])


def vertex_laplacian(w: np.ndarray, dx: float, dy: float,
                     fill: Optional[CenterFill] = None) -> np.ndarray:
    """Vector Laplacian grad(div w) - curl(curl w) at vertices.

    Both intermediate centre fields (divergence averaged to centres and the
    centre curl) go through ``fill`` when given, so boundary conditions can
    be applied between the two stages.
    """
    div_c = center_from_vertices(vertex_divergence(w, dx, dy))
    curl_c = center_curl(w, dx, dy)
    if fill is not None:
        fill(div_c, +1)
        fill(curl_c, -1)
    return corner_gradient(div_c, dx, dy) - rotated_gradient(curl_c, dx, dy)


def vertex_curl(w: np.ndarray, dx: float, dy: float,
                fill: Optional[CenterFill] = None) -> np.ndarray:
    """Curl at vertices as the mean of the four adjacent centre curls."""
    curl_c = center_curl(w, dx, dy)
    if fill is not None:
        fill(curl_c, -1)
    return vertex_from_centers(curl_c)
