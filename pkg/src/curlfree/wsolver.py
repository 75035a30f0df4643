"""Structure-preserving update of the vertex relative velocity.

Every term that is not proportional to the discrete curl is the corner
gradient of a centre scalar, so the discrete curl of ``w`` is unchanged by a
step up to round-off. The rotational transport term uses the vertex curl
(mean of the four adjacent centre curls) and therefore vanishes on curl-free
data.
"""
from __future__ import annotations

import numpy as np

from . import model
from .boundary import BoundarySpec, center_filler
from .grid import StaggeredGrid, center_from_vertices
from .model import M1, M2, MOM, Phases
from .muscl import NumericalError
from .ops import corner_gradient, vertex_curl, vertex_laplacian


def build_G(Q: np.ndarray, w_centers: np.ndarray, phases: Phases) -> np.ndarray:
    """w . u + phi at every centre, with w already averaged to centres."""
    prim = model.primitives_from_conserved(Q, w_centers, phases, speeds=False)
    return model.gv_potential(prim)


def mean_of_four_centers(u: np.ndarray) -> np.ndarray:
    """(1/4) sum_{r,s in {0,1}} u_{p+r, q+s} at vertex (p+1/2, q+1/2)."""
    nx, ny = u.shape[-2:]
    out = np.full(u.shape[:-2] + (nx + 1, ny + 1), np.nan)
    acc = np.zeros(u.shape[:-2] + (nx - 1, ny - 1))
    for r in (0, 1):
        for s in (0, 1):
            acc += u[..., r:nx - 1 + r, s:ny - 1 + s]
    out[..., 1:-1, 1:-1] = 0.25 * acc
    return out


def update_vertices(w: np.ndarray, Q: np.ndarray, grid: StaggeredGrid, phases: Phases,
                    dt: float, c_h: float, bc: BoundarySpec, G: np.ndarray | None = None,
                    u_centers: np.ndarray | None = None) -> np.ndarray:
    """Advance ``w`` by one explicit step from time-n centre data.

    Ghosts of ``w`` and ``Q`` must be filled. ``G`` and ``u_centers`` may be
    supplied directly (tests freeze them); otherwise they come from ``Q``.
    Returns a new vertex array whose ghosts are stale.
    """
    dx, dy = grid.dx, grid.dy
    fill = center_filler(bc, grid.nx, grid.ny, grid.ghost)
    if G is None:
        G = build_G(Q, center_from_vertices(w), phases)
    G = np.array(G, dtype=float)
    fill(G, +1)
    if u_centers is None:
        u_centers = Q[MOM:MOM + 2] / (Q[M1] + Q[M2])

    tendency = corner_gradient(G, dx, dy)
    if c_h > 0.0:
        tendency -= grid.h * c_h * vertex_laplacian(w, dx, dy, fill)
    omega = vertex_curl(w, dx, dy, fill)
    ubar = mean_of_four_centers(u_centers)
    # u_l (d_l w_k - d_k w_l) in 2D: (-u_y omega, u_x omega)
    tendency[0] -= ubar[1] * omega
    tendency[1] += ubar[0] * omega

    vi = (slice(None),) + grid.vertex_interior
    w_new = w.copy()
    w_new[vi] = w[vi] - dt * tendency[vi]
    if not np.all(np.isfinite(w_new[vi])):
        i, j = np.argwhere(~np.isfinite(w_new[vi]).all(axis=0))[0]
        raise NumericalError(f"non-finite relative velocity at vertex ({int(i)}, {int(j)})")
    return w_new
