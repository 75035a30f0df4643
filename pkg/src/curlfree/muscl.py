"""Path-conservative MUSCL-Hancock update of the cell-centred unknowns.

Two layouts share the machinery:

* staggered (curl-free) mode: ``Q`` has 5 rows (alpha1, m1, m2, rho u) and the
  relative-velocity fluxes are sampled at the vertices that bound each face;
* collocated mode: ``Q`` carries ``w`` as rows 5 and 6 and the relative
  velocity equation is advanced with the same Rusanov machinery, with its
  rotational term discretised by central differences.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import model
from .boundary import BC, BoundarySpec
from .grid import StaggeredGrid, vertex_from_centers
from .model import ALPHA, M1, M2, MOM, Phases

W_ROW = 5  # first w row in collocated mode


class NumericalError(RuntimeError):
    """Unrecoverable solver failure (NaN, vacuum)."""


@dataclass
class StepStats:
    fallback_cells: int = 0
    first_order_retry: bool = False
    alpha_clamped: int = 0
    floored: int = 0
    extra: dict = field(default_factory=dict)


def minmod(a, b):
    return np.where(a * b > 0.0, np.where(np.abs(a) < np.abs(b), a, b), 0.0)


def minmod_slopes(Q: np.ndarray, dx: float, dy: float):
    """Limited slopes along both axes; zero on the outermost ghost layer."""
    sx = np.zeros_like(Q)
    sy = np.zeros_like(Q)
    sx[..., 1:-1, :] = minmod((Q[..., 2:, :] - Q[..., 1:-1, :]) / dx,
                              (Q[..., 1:-1, :] - Q[..., :-2, :]) / dx)
    sy[..., :, 1:-1] = minmod((Q[..., :, 2:] - Q[..., :, 1:-1]) / dy,
                              (Q[..., :, 1:-1] - Q[..., :, :-2]) / dy)
    return sx, sy


def _w_of(Q):
    if Q.shape[0] > W_ROW:
        return Q[W_ROW:W_ROW + 2]
    return np.zeros((2,) + Q.shape[1:])


def center_flux(Q: np.ndarray, axis: int, phases: Phases) -> np.ndarray:
    """Physical flux evaluated from centre data only.

    In staggered mode this is F^b; in collocated mode it also carries the
    relative-velocity flux and w.u + phi in the w row of ``axis``.
    """
    collocated = Q.shape[0] > W_ROW
    prim = model.primitives_from_conserved(Q[:W_ROW], _w_of(Q), phases, speeds=False,
                                           with_phi=collocated)
    F = model.flux_b(prim, axis)
    if not collocated:
        return F
    F = F + model.flux_v(prim, axis)
    Gw = np.zeros((2,) + F.shape[1:])
    Gw[axis] = model.gv_potential(prim)
    return np.concatenate([F, Gw])


def path_jump(Qm: np.ndarray, Qp: np.ndarray, axis: int) -> np.ndarray:
    """Half the segment-path integral of B^b times the jump; only the alpha row is non-zero.

    The path integral of u along the straight segment is taken with the
    midpoint rule.
    """
    mid = 0.5 * (Qm + Qp)
    u_mid = mid[MOM + axis] / (mid[M1] + mid[M2])
    D = np.zeros_like(Qm)
    D[ALPHA] = 0.5 * u_mid * (Qp[ALPHA] - Qm[ALPHA])
    return D


def nonconservative_rate(Q, sx, sy, dx: float, dy: float):
    """B . grad Q at cells: u . grad(alpha1), plus u_l (d_l w_k - d_k w_l) for collocated w."""
    rho = Q[M1] + Q[M2]
    ux = Q[MOM] / rho
    uy = Q[MOM + 1] / rho
    B = np.zeros_like(Q)
    B[ALPHA] = ux * sx[ALPHA] + uy * sy[ALPHA]
    if Q.shape[0] > W_ROW:
        om = _omega(Q, dx, dy)
        B[W_ROW] = -uy * om
        B[W_ROW + 1] = ux * om
    return B


def _omega(Q, dx, dy):
    """Central-difference curl of collocated w; zero on the outer ring."""
    wx, wy = Q[W_ROW], Q[W_ROW + 1]
    om = np.zeros_like(wx)
    om[1:-1, 1:-1] = ((wy[2:, 1:-1] - wy[:-2, 1:-1]) / (2.0 * dx)
                      - (wx[1:-1, 2:] - wx[1:-1, :-2]) / (2.0 * dy))
    return om


def rusanov_face_flux(Qm, Qp, axis: int, phases: Phases, Fv_a=None, Fv_b=None, w_face=None):
    """Rusanov flux at a set of faces.

    ``Fv_a``/``Fv_b`` are the relative-velocity fluxes at the two vertices
    bounding each face (staggered mode); ``w_face`` is the relative velocity
    used for the local signal speed. Returns ``(flux, s_max)``.
    """
    collocated = Qm.shape[0] > W_ROW
    wm = _w_of(Qm) if collocated else w_face
    wp = _w_of(Qp) if collocated else w_face
    pm = model.primitives_from_conserved(Qm[:W_ROW], wm, phases, with_phi=collocated)
    pp = model.primitives_from_conserved(Qp[:W_ROW], wp, phases, with_phi=collocated)
    Fm = model.flux_b(pm, axis)
    Fp = model.flux_b(pp, axis)
    if collocated:
        Fm = np.concatenate([Fm + model.flux_v(pm, axis), _g_rows(pm, axis)])
        Fp = np.concatenate([Fp + model.flux_v(pp, axis), _g_rows(pp, axis)])
    s = np.maximum(model.max_speed(pm, axis), model.max_speed(pp, axis))
    F = 0.5 * (Fm + Fp) - 0.5 * s * (Qp - Qm)
    if Fv_a is not None:
        F[:W_ROW] += 0.5 * (Fv_a + Fv_b)
    return F, s


def _g_rows(prim, axis):
    G = np.zeros((2,) + prim.rho.shape)
    G[axis] = model.gv_potential(prim)
    return G


def vertex_fluxes(Q: np.ndarray, w: np.ndarray):
    """F^v_x and F^v_y at every vertex from centre partial densities averaged to vertices."""
    mv = vertex_from_centers(Q[M1:M2 + 1])
    return model.flux_v_from(mv[0], mv[1], w, 0), model.flux_v_from(mv[0], mv[1], w, 1)


def _bad_states(*states):
    bad = None
    for S in states:
        b = ~((S[M1] > 0.0) & (S[M2] > 0.0) & np.isfinite(S).all(axis=0))
        bad = b if bad is None else bad | b
    return bad


class CenterUpdate:
    """One MUSCL-Hancock step for the centre unknowns.

    Ghost layers of ``Q`` (and ``w`` in staggered mode) must be filled.
    """

    def __init__(self, grid: StaggeredGrid, phases: Phases, bc: BoundarySpec,
                 gravity=(0.0, 0.0), order: int = 2):
        self.grid = grid
        self.phases = phases
        self.bc = bc
        self.gravity = np.asarray(gravity, dtype=float)
        self.order = order

    # -- predictor ---------------------------------------------------------
    def time_derivative(self, Q, sx, sy, Fvx=None, Fvy=None):
        """dQ/dt at cells 1..N-2 from slope-extrapolated fluxes (zero on the outer ring)."""
        g = self.grid
        dx, dy = g.dx, g.dy
        ph = self.phases
        Fx_r = center_flux(Q + 0.5 * dx * sx, 0, ph)
        Fx_l = center_flux(Q - 0.5 * dx * sx, 0, ph)
        Fy_r = center_flux(Q + 0.5 * dy * sy, 1, ph)
        Fy_l = center_flux(Q - 0.5 * dy * sy, 1, ph)
        dQ = -(Fx_r - Fx_l) / dx - (Fy_r - Fy_l) / dy
        if Fvx is not None:
            # cell (I, J) has corner vertices I, I+1 x J, J+1
            dQ[:, 1:-1, 1:-1] -= ((Fvx[:, 2:-1, 2:-1] + Fvx[:, 2:-1, 1:-2]
                                   - Fvx[:, 1:-2, 2:-1] - Fvx[:, 1:-2, 1:-2]) / (2.0 * dx)
                                  + (Fvy[:, 2:-1, 2:-1] + Fvy[:, 1:-2, 2:-1]
                                     - Fvy[:, 2:-1, 1:-2] - Fvy[:, 1:-2, 1:-2]) / (2.0 * dy))
        dQ -= nonconservative_rate(Q, sx, sy, dx, dy)
        rho = Q[M1] + Q[M2]
        dQ[MOM:MOM + 2] += rho * self.gravity[:, None, None]
        dQ[..., 0, :] = 0.0
        dQ[..., -1, :] = 0.0
        dQ[..., :, 0] = 0.0
        dQ[..., :, -1] = 0.0
        return dQ

    # -- full step -----------------------------------------------------------
    def __call__(self, Q: np.ndarray, w: np.ndarray | None, dt: float) -> tuple[np.ndarray, StepStats]:
        stats = StepStats()
        try:
            Qn = self._step(Q, w, dt, self.order, stats)
        except (NumericalError, FloatingPointError) as exc:
            if self.order == 1:
                raise NumericalError(str(exc)) from exc
            Qn = None
        if Qn is None or not self._admissible(Qn):
            stats.first_order_retry = True
            try:
                Qn = self._step(Q, w, dt, 1, stats)
            except FloatingPointError as exc:
                raise NumericalError(str(exc)) from exc
            if not self._admissible(Qn):
                i, j = self._first_bad(Qn)
                raise NumericalError(f"inadmissible state at cell ({i}, {j}) after first-order retry")
        ix, iy = self.grid.interior
        a = Qn[ALPHA, ix, iy]
        out = (a < 0.0) | (a > 1.0)
        stats.alpha_clamped = int(np.count_nonzero(out))
        if stats.alpha_clamped:
            Qn[ALPHA, ix, iy] = np.clip(a, 0.0, 1.0)
        return Qn, stats

    def _admissible(self, Qn):
        ix, iy = self.grid.interior
        S = Qn[:, ix, iy]
        return bool(np.all(np.isfinite(S)) and np.all(S[M1] > 0.0) and np.all(S[M2] > 0.0))

    def _first_bad(self, Qn):
        ix, iy = self.grid.interior
        S = Qn[:, ix, iy]
        bad = ~(np.isfinite(S).all(axis=0) & (S[M1] > 0.0) & (S[M2] > 0.0))
        i, j = np.argwhere(bad)[0]
        return int(i), int(j)

    def _step(self, Q, w, dt, order, stats: StepStats):
        grid = self.grid
        nx, ny, gh = grid.nx, grid.ny, grid.ghost
        dx, dy = grid.dx, grid.dy
        ph = self.phases
        staggered = w is not None

        Fvx = Fvy = None
        if staggered:
            Fvx, Fvy = vertex_fluxes(Q, w)

        if order >= 2:
            sx, sy = minmod_slopes(Q, dx, dy)
            dQdt = self.time_derivative(Q, sx, sy, Fvx, Fvy)
            half = 0.5 * dt * dQdt
            bad = self._predictor_failures(Q, sx, sy, half)
            if bad.any():
                stats.fallback_cells += int(np.count_nonzero(bad[grid.interior]))
                sx[:, bad] = 0.0
                sy[:, bad] = 0.0
                dQdt = self.time_derivative(Q, sx, sy, Fvx, Fvy)
                half = 0.5 * dt * dQdt
        else:
            sx = np.zeros_like(Q)
            sy = np.zeros_like(Q)
            half = np.zeros_like(Q)

        # x faces: between cells I and I+1 for I = gh-1 .. gh+nx-1, rows J interior
        jr = slice(gh, gh + ny)
        Qm = (Q + 0.5 * dx * sx + half)[:, gh - 1:gh + nx, jr]
        Qp = (Q - 0.5 * dx * sx + half)[:, gh:gh + nx + 1, jr]
        if staggered:
            va = (slice(None), slice(gh, gh + nx + 1), slice(gh, gh + ny))
            vb = (slice(None), slice(gh, gh + nx + 1), slice(gh + 1, gh + ny + 1))
            Fx, _ = rusanov_face_flux(Qm, Qp, 0, ph, Fvx[va], Fvx[vb], 0.5 * (w[va] + w[vb]))
        else:
            Fx, _ = rusanov_face_flux(Qm, Qp, 0, ph)
        Dx = path_jump(Qm, Qp, 0)
        self._wall_faces(Fx, 0)

        ir = slice(gh, gh + nx)
        Qm = (Q + 0.5 * dy * sy + half)[:, ir, gh - 1:gh + ny]
        Qp = (Q - 0.5 * dy * sy + half)[:, ir, gh:gh + ny + 1]
        if staggered:
            va = (slice(None), slice(gh, gh + nx), slice(gh, gh + ny + 1))
            vb = (slice(None), slice(gh + 1, gh + nx + 1), slice(gh, gh + ny + 1))
            Fy, _ = rusanov_face_flux(Qm, Qp, 1, ph, Fvy[va], Fvy[vb], 0.5 * (w[va] + w[vb]))
        else:
            Fy, _ = rusanov_face_flux(Qm, Qp, 1, ph)
        Dy = path_jump(Qm, Qp, 1)
        self._wall_faces(Fy, 1)

        Qmid = (Q + half)[:, ir, jr]
        rate = (Fx[:, 1:] - Fx[:, :-1]) / dx + (Fy[:, :, 1:] - Fy[:, :, :-1]) / dy
        rate += (Dx[:, 1:] + Dx[:, :-1]) / dx + (Dy[:, :, 1:] + Dy[:, :, :-1]) / dy
        # volume non-conservative terms at the half step with time-n slopes
        sxi, syi = sx[:, ir, jr], sy[:, ir, jr]
        rho_mid = Qmid[M1] + Qmid[M2]
        ux = Qmid[MOM] / rho_mid
        uy = Qmid[MOM + 1] / rho_mid
        rate[ALPHA] += ux * sxi[ALPHA] + uy * syi[ALPHA]
        if not staggered:
            om = _omega(Q, dx, dy)[ir, jr]
            rate[W_ROW] -= uy * om
            rate[W_ROW + 1] += ux * om
        Qn = Q.copy()
        Qn[:, ir, jr] = Q[:, ir, jr] - dt * rate
        Qn[MOM:MOM + 2, ir, jr] += dt * rho_mid * self.gravity[:, None, None]
        return Qn

    def _predictor_failures(self, Q, sx, sy, half):
        g = self.grid
        return _bad_states(Q + 0.5 * g.dx * sx + half, Q - 0.5 * g.dx * sx + half,
                           Q + 0.5 * g.dy * sy + half, Q - 0.5 * g.dy * sy + half)

    def _wall_faces(self, F, axis):
        """No mass crosses a wall face, independent of round-off in the mirrored states."""
        lo, hi = self.bc.sides(axis)
        if lo is BC.WALL:
            idx = (slice(M1, M2 + 1),) + ((0, slice(None)) if axis == 0 else (slice(None), 0))
            F[idx] = 0.0
        if hi is BC.WALL:
            idx = (slice(M1, M2 + 1),) + ((-1, slice(None)) if axis == 0 else (slice(None), -1))
            F[idx] = 0.0
