"""One-dimensional reference solvers (Cartesian and cylindrically symmetric).

In one dimension the relative velocity is a plain cell unknown, so the state
is ``(alpha1, m1, m2, rho u, w)``. The radial solver integrates the
rotationally symmetric form of the 2D system: partial densities and momentum
carry the ``r`` weight in their fluxes, and the momentum equation gains the
geometric source ``p / r``. The volume fraction and ``w`` equations have no
geometric terms.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import model
from .cases import CE_INNER, CE_OUTER, CE_RADIUS, RP1_LEFT, RP1_RIGHT, get_case
from .model import ALPHA, MOM, Phases
from .muscl import NumericalError, minmod

G = 2
W = 4
WEIGHTED = slice(1, 4)   # m1, m2, rho u


@dataclass
class Profile:
    x: np.ndarray
    alpha1: np.ndarray
    rho1: np.ndarray
    rho2: np.ndarray
    rho: np.ndarray
    u: np.ndarray
    w: np.ndarray
    p: np.ndarray
    m1: np.ndarray
    m2: np.ndarray
    t: float
    steps: int

    @property
    def u1(self):
        return self.u + self.rho2 * (1.0 - self.alpha1) / self.rho * self.w

    @property
    def u2(self):
        return self.u - self.rho1 * self.alpha1 / self.rho * self.w

    def columns(self) -> dict:
        return {"x": self.x, "alpha1": self.alpha1, "rho1": self.rho1, "rho2": self.rho2,
                "rho": self.rho, "u": self.u, "w": self.w, "p": self.p,
                "u1": self.u1, "u2": self.u2}


def _prim(S, phases):
    return model.primitives_from_conserved(S[:MOM + 1], S[W:W + 1], phases)


def _flux(prim):
    F = model.flux_b(prim, 0) + model.flux_v(prim, 0)
    return np.concatenate([F, model.gv_potential(prim)[None]])


class Solver1D:
    """MUSCL-Hancock with Rusanov fluxes and segment-path jumps on a uniform 1D mesh.

    ``radial=True`` switches to the cylindrical form on ``r in (0, r_max]`` with
    a mirror condition at the axis; ``geometric_sources=False`` keeps the
    radial layout but drops every geometric factor (used as a consistency check).
    """

    def __init__(self, phases: Phases, n_cells: int, x_lo: float, x_hi: float, *,
                 radial: bool = False, geometric_sources: bool = True, cfl: float = 0.5,
                 order: int = 2):
        self.phases = phases
        self.n = int(n_cells)
        self.x_lo, self.x_hi = float(x_lo), float(x_hi)
        self.dx = (self.x_hi - self.x_lo) / self.n
        self.radial = radial
        self.geometric = radial and geometric_sources
        self.cfl = cfl
        self.order = order
        idx = np.arange(self.n + 2 * G)
        self.xc = self.x_lo + (idx - G + 0.5) * self.dx
        xf = self.x_lo + (np.arange(self.n + 1)) * self.dx
        if self.geometric:
            self.r_c = self.xc
            self.r_f = xf
        else:
            self.r_c = np.ones_like(self.xc)
            self.r_f = np.ones_like(xf)

    @property
    def interior(self):
        return slice(G, G + self.n)

    def fill(self, S):
        n = self.n
        S[:, :G] = S[:, G:G + 1]
        S[:, G + n:] = S[:, G + n - 1:G + n]
        if self.radial:
            S[:, :G] = S[:, G:2 * G][:, ::-1]
            S[MOM, :G] *= -1.0
            S[W, :G] *= -1.0

    def _rates(self, S, slope, rc):
        """Predictor time derivative from slope-extrapolated states (cells 1..N-2)."""
        ph, dx = self.phases, self.dx
        Sr = S + 0.5 * dx * slope
        Sl = S - 0.5 * dx * slope
        Fr, Fl = _flux(_prim(Sr, ph)), _flux(_prim(Sl, ph))
        d = np.empty_like(S)
        if self.geometric:
            rr, rl = rc + 0.5 * dx, rc - 0.5 * dx
            d[WEIGHTED] = -(rr * Fr[WEIGHTED] - rl * Fl[WEIGHTED]) / (rc * dx)
        else:
            d[WEIGHTED] = -(Fr[WEIGHTED] - Fl[WEIGHTED]) / dx
        d[ALPHA] = 0.0
        d[W] = -(Fr[W] - Fl[W]) / dx
        prim = _prim(S, ph)
        d[ALPHA] -= prim.u[0] * slope[ALPHA]
        if self.geometric:
            d[MOM] += prim.p / rc
        return d

    def step(self, S, dt):
        n, dx, ph = self.n, self.dx, self.phases
        self.fill(S)
        inner = self.interior
        if self.order >= 2:
            slope = np.zeros_like(S)
            slope[:, 1:-1] = minmod((S[:, 2:] - S[:, 1:-1]) / dx, (S[:, 1:-1] - S[:, :-2]) / dx)
            half = np.zeros_like(S)
            rc = self.xc[1:-1] if self.geometric else 1.0
            half[:, 1:-1] = 0.5 * dt * self._rates(S[:, 1:-1], slope[:, 1:-1], rc)
            for sign in (1.0, -1.0):
                trial = S + sign * 0.5 * dx * slope + half
                bad = ~((trial[1] > 0) & (trial[2] > 0) & np.isfinite(trial).all(axis=0))
                if bad.any():
                    slope[:, bad] = 0.0
                    half[:, 1:-1] = 0.5 * dt * self._rates(S[:, 1:-1], slope[:, 1:-1], rc)
        else:
            slope = np.zeros_like(S)
            half = np.zeros_like(S)
        Sm = (S + 0.5 * dx * slope + half)[:, G - 1:G + n]
        Sp = (S - 0.5 * dx * slope + half)[:, G:G + n + 1]
        pm, pp = _prim(Sm, ph), _prim(Sp, ph)
        s = np.maximum(model.max_speed(pm, 0), model.max_speed(pp, 0))
        F = 0.5 * (_flux(pm) + _flux(pp)) - 0.5 * s * (Sp - Sm)
        mid = 0.5 * (Sm + Sp)
        D = 0.5 * mid[MOM] / (mid[1] + mid[2]) * (Sp[ALPHA] - Sm[ALPHA])

        Smid = (S + half)[:, inner]
        pmid = _prim(Smid, ph)
        rc, rf = self.r_c[inner], self.r_f
        out = S.copy()
        rate = np.empty((S.shape[0], n))
        rate[WEIGHTED] = (rf[1:] * F[WEIGHTED, 1:] - rf[:-1] * F[WEIGHTED, :-1]) / (rc * dx)
        rate[W] = (F[W, 1:] - F[W, :-1]) / dx
        rate[ALPHA] = (F[ALPHA, 1:] - F[ALPHA, :-1]) / dx + (D[1:] + D[:-1]) / dx
        rate[ALPHA] += pmid.u[0] * slope[ALPHA, inner]
        if self.geometric:
            rate[MOM] -= pmid.p / rc
        out[:, inner] = S[:, inner] - dt * rate
        if not np.all(np.isfinite(out[:, inner])) or np.any(out[1:3, inner] <= 0.0):
            raise NumericalError("inadmissible state in the 1D reference solver")
        out[ALPHA, inner] = np.clip(out[ALPHA, inner], 0.0, 1.0)
        self.fill(out)
        return out

    def dt(self, S):
        prim = _prim(S[:, self.interior], self.phases)
        smax = float(np.max(model.max_speed(prim, 0)))
        if not np.isfinite(smax) or smax <= 0.0:
            raise NumericalError("invalid wave speed in the 1D reference solver")
        return self.cfl * self.dx / smax

    def run(self, S, t_end):
        S = S.copy()
        self.fill(S)
        t, steps = 0.0, 0
        while t < t_end:
            dt = min(self.dt(S), t_end - t)
            S = self.step(S, dt)
            t = t_end if t + dt >= t_end else t + dt
            steps += 1
        return S, t, steps

    def profile(self, S, t, steps) -> Profile:
        inner = self.interior
        prim = _prim(S[:, inner], self.phases)
        return Profile(self.xc[inner].copy(), prim.alpha1, prim.rho1, prim.rho2, prim.rho,
                       prim.u[0], S[W, inner].copy(), prim.p, S[1, inner].copy(),
                       S[2, inner].copy(), t, steps)


def riemann_state(xc, left, right, x_split=0.0):
    """Cell states from (alpha1, rho1, rho2, u1, u2) on either side of ``x_split``."""
    S = np.empty((5, xc.size))
    for state, mask in ((left, xc < x_split), (right, xc >= x_split)):
        a, r1, r2, u1, u2 = state
        q, w = model.mixture_from_phase_velocities(a, r1, r2, np.array([u1]), np.array([u2]))
        S[:MOM + 1, mask] = q[:, None]
        S[W, mask] = w[0]
    return S


def solve_1d(case="rp1d", n_cells: int = 3000, t_end: float | None = None, *, left=None,
             right=None, phases: Phases | None = None, domain=(-1.0, 1.0), x_split=0.0,
             cfl: float = 0.5, order: int = 2) -> Profile:
    """Cartesian 1D solution of a two-state Riemann problem.

    ``case="rp1d"`` supplies the default states, EOS pair and final time; any
    of them can be replaced through the keyword arguments.
    """
    spec = get_case(case) if isinstance(case, str) else case
    left = RP1_LEFT if left is None else left
    right = RP1_RIGHT if right is None else right
    phases = spec.phases if phases is None else phases
    t_end = spec.t_end if t_end is None else t_end
    solver = Solver1D(phases, n_cells, *domain, cfl=cfl, order=order)
    S0 = riemann_state(solver.xc, left, right, x_split)
    return solver.profile(*solver.run(S0, t_end))


def solve_radial(case="explosion", n_cells: int = 12800, t_end: float | None = None, *,
                 inner=CE_INNER, outer=CE_OUTER, radius=CE_RADIUS, r_max: float = 1.0,
                 phases: Phases | None = None, geometric_sources: bool = True,
                 cfl: float = 0.5, order: int = 2) -> Profile:
    """Cylindrically symmetric solution of the circular explosion on (0, r_max]."""
    spec = get_case(case) if isinstance(case, str) else case
    phases = spec.phases if phases is None else phases
    t_end = spec.t_end if t_end is None else t_end
    solver = Solver1D(phases, n_cells, 0.0, r_max, radial=True,
                      geometric_sources=geometric_sources, cfl=cfl, order=order)
    a, r1, r2 = inner
    b, s1, s2 = outer
    S0 = riemann_state(solver.xc, (a, r1, r2, 0.0, 0.0), (b, s1, s2, 0.0, 0.0), radius)
    return solver.profile(*solver.run(S0, t_end))


def radial_mass(profile: Profile, phase: int = 1) -> float:
    """Integral of the partial density over the disc, 2 pi sum(m r dr)."""
    dr = profile.x[1] - profile.x[0]
    m = profile.m1 if phase == 1 else profile.m2
    return float(2.0 * np.pi * np.sum(m * profile.x) * dr)
