"""Initial conditions and exact solutions for the benchmark problems.

Each generator fills the whole padded arrays (ghost cells are evaluated at
their own coordinates and refilled by the boundary module afterwards) and
returns ``(Q, w)`` with ``Q`` at centres and ``w`` at vertices.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.integrate import solve_ivp

from . import eos as _eos
from .eos import EosSpec
from .grid import StaggeredGrid
from .model import EPS_ALPHA, Phases, conserved_from_primitives, mixture_from_phase_velocities
from .ops import corner_gradient

GAS_AIR = EosSpec.ideal(1.4)

RP1_LEFT = (0.7, 1.2449, 1.2969, -1.2638, -0.38947)    # alpha1, rho1, rho2, u1, u2
RP1_RIGHT = (0.3, 0.60312, 0.73436, 0.43059, -0.40507)

CE_INNER = (0.4, 2.0, 1.5)   # alpha1, rho1, rho2
CE_OUTER = (0.8, 1.0, 0.5)
CE_RADIUS = 0.5

WATER = EosSpec.stiffened(gamma=2.0, p0=1.0, rho0=1000.0, c0=20.0)
GRAVITY = 9.80


@dataclass(frozen=True)
class CaseSpec:
    """Default setup of a named problem.

    ``domain`` is ``(x_lo, x_hi, y_lo, y_hi)``; a ``None`` y-extent means the
    problem is one-dimensional and the strip height follows from square cells.
    """
    name: str
    domain: tuple
    bc_x: str
    bc_y: str
    phases: Phases
    t_end: float
    cfl: float
    nx: int
    ny: int
    gravity: tuple = (0.0, 0.0)
    parameters: dict = field(default_factory=dict)
    init: Callable | None = None


def _zero_w(grid):
    return np.zeros((2,) + grid.vertex_shape)


def _state(alpha1, rho1, rho2, ux, uy):
    alpha1, rho1, rho2, ux, uy = np.broadcast_arrays(alpha1, rho1, rho2, ux, uy)
    return conserved_from_primitives(alpha1, rho1, rho2, np.stack([ux, uy]))


def init_rp1d(grid: StaggeredGrid, phases: Phases, left=RP1_LEFT, right=RP1_RIGHT, x_split=0.0):
    """Two-state Riemann problem in x, constant in y."""
    xc, _ = grid.center_mesh()
    xv, _ = grid.vertex_mesh()
    Q = np.empty((5,) + grid.center_shape)
    w = np.zeros((2,) + grid.vertex_shape)
    for state, cells, verts in ((left, xc < x_split, xv < x_split),
                                (right, xc >= x_split, xv >= x_split)):
        a, r1, r2, u1, u2 = state
        q, wx = mixture_from_phase_velocities(a, r1, r2, np.array([u1, 0.0]), np.array([u2, 0.0]))
        Q[:, cells] = q[:, None]
        w[0, verts] = wx[0]
    return Q, w


def exact_vortex(r):
    """Primitive profile of the stationary two-phase vortex at radius ``r``."""
    r = np.asarray(r, dtype=float)
    e = np.exp(1.0 - r * r)
    alpha1 = 1.0 / 3.0 + np.exp(-0.5 * r * r) / (2.0 * np.sqrt(2.0 * np.pi))
    rho = (1.0 - 0.25 * e) ** (5.0 / 7.0)
    u_theta = 2.0 ** (3.0 / 14.0) * np.sqrt(r * r * e / (4.0 - e) ** (5.0 / 7.0))
    return {"alpha1": alpha1, "rho1": rho, "rho2": rho, "u_theta": u_theta}


def exact_vortex_fields(x, y):
    """Exact vortex in Cartesian components (alpha1, rho1, rho2, ux, uy)."""
    r = np.hypot(x, y)
    prof = exact_vortex(r)
    with np.errstate(invalid="ignore", divide="ignore"):
        ct = np.where(r > 0, x / r, 0.0)
        st = np.where(r > 0, y / r, 0.0)
    ut = prof["u_theta"]
    return prof["alpha1"], prof["rho1"], prof["rho2"], -ut * st, ut * ct


def init_vortex(grid: StaggeredGrid, phases: Phases):
    x, y = grid.center_mesh()
    a, r1, r2, ux, uy = exact_vortex_fields(x, y)
    return _state(a, r1, r2, ux, uy), _zero_w(grid)


def init_explosion(grid: StaggeredGrid, phases: Phases, inner=CE_INNER, outer=CE_OUTER,
                   radius=CE_RADIUS):
    x, y = grid.center_mesh()
    inside = np.hypot(x, y) < radius
    a = np.where(inside, inner[0], outer[0])
    r1 = np.where(inside, inner[1], outer[1])
    r2 = np.where(inside, inner[2], outer[2])
    return _state(a, r1, r2, 0.0, 0.0), _zero_w(grid)


def hydrostatic_pressure(phases: Phases, alpha1_of_y: Callable, y_bottom: float, y_top: float,
                         p_top: float, gravity: float, breaks=()):
    """Pressure column dp/dy = -rho(p, y) g with pressure equilibrium between phases.

    Integrated downward from ``p_top`` at ``y_top``; returns a callable p(y).
    ``breaks`` lists heights where alpha jumps, so the integrator restarts there.
    """
    def rhs(y, p):
        a = alpha1_of_y(y)
        r1 = _eos.density_from_pressure(phases.first, p[0])
        r2 = _eos.density_from_pressure(phases.second, p[0])
        return [(a * r1 + (1.0 - a) * r2) * gravity]

    edges = [y_top] + sorted([b for b in breaks if y_bottom < b < y_top], reverse=True) + [y_bottom]
    pieces = []
    p = p_top
    for hi, lo in zip(edges[:-1], edges[1:]):
        # integrate in depth s = hi - y so the solver runs forward
        sol = solve_ivp(lambda s, q: rhs(hi - s, q), (0.0, hi - lo), [p],
                        dense_output=True, rtol=1e-11, atol=1e-12, method="DOP853")
        pieces.append((lo, hi, sol.sol))
        p = float(sol.y[0, -1])

    def pressure_at(y):
        y = np.asarray(y, dtype=float)
        out = np.empty_like(y)
        yc = np.clip(y, y_bottom, y_top)
        for lo, hi, s in pieces:
            mask = (yc >= lo) & (yc <= hi)
            if mask.any():
                out[mask] = s(hi - yc[mask])[0]
        return out

    return pressure_at


def init_dambreak(grid: StaggeredGrid, phases: Phases, gravity: float = GRAVITY,
                  p_top: float = 1.0, water_box=(2.0, 1.0)):
    """Water column (phase 2) in the lower-left box, air (phase 1) elsewhere, at rest.

    Each column is in hydrostatic equilibrium with pressure ``p_top`` at the lid;
    phase densities come from inverting each EOS at the local pressure.
    """
    xw, yw = water_box
    y_lo, y_hi = grid.y0, grid.y0 + grid.ly
    air, water = 1.0 - EPS_ALPHA, EPS_ALPHA
    p_water_col = hydrostatic_pressure(phases, lambda y: water if y < yw else air,
                                       y_lo, y_hi, p_top, gravity, breaks=(yw,))
    p_air_col = hydrostatic_pressure(phases, lambda y: air, y_lo, y_hi, p_top, gravity)
    x, y = grid.center_mesh()
    in_water = (x < xw) & (y < yw)
    left_col = x < xw
    p = np.where(left_col, p_water_col(y), p_air_col(y))
    a = np.where(in_water, water, air)
    r1 = _eos.density_from_pressure(phases.first, p)
    r2 = _eos.density_from_pressure(phases.second, p)
    return _state(a, r1, r2, 0.0, 0.0), _zero_w(grid)


def kelvin_helmholtz_fields(x, y):
    """alpha1 and the common phase velocity of the double shear layer."""
    lower = y < 0.0
    alpha1 = np.where(lower, 0.5 + 0.25 * np.tanh(25.0 * (y + 0.5)),
                      0.5 - 0.25 * np.tanh(25.0 * (y - 0.5)))
    ux = np.where(lower, 0.5 * np.tanh(25.0 * (y + 0.5)), -0.5 * np.tanh(25.0 * (y - 0.5)))
    uy = np.where(lower, -1e-2 * np.sin(2 * np.pi * x) * np.sin(2 * np.pi * (y + 0.5)),
                  1e-2 * np.sin(2 * np.pi * x) * np.sin(2 * np.pi * (y - 0.5)))
    return alpha1, ux, uy


def init_kelvin_helmholtz(grid: StaggeredGrid, phases: Phases, rho1=1.0, rho2=2.0):
    x, y = grid.center_mesh()
    a, ux, uy = kelvin_helmholtz_fields(x, y)
    return _state(a, rho1, rho2, ux, uy), _zero_w(grid)


def init_from_potential(grid: StaggeredGrid, psi: np.ndarray) -> np.ndarray:
    """Vertex field w = corner_gradient(psi); discretely curl-free by construction.

    Outermost vertex ring (no complete stencil) is set to zero.
    """
    w = corner_gradient(psi, grid.dx, grid.dy)
    return np.nan_to_num(w, nan=0.0)


def init_potential(grid: StaggeredGrid, phases: Phases, amplitude=0.1):
    """Uniform mixture at rest carrying a smooth gradient relative velocity."""
    x, y = grid.center_mesh()
    lx, ly = grid.lx, grid.ly
    psi = amplitude * np.sin(2 * np.pi * (x - grid.x0) / lx) * np.sin(2 * np.pi * (y - grid.y0) / ly)
    return _state(np.full_like(x, 0.5), 1.0, 1.0, 0.0, 0.0), init_from_potential(grid, psi)


CASES = {
    "rp1d": CaseSpec("rp1d", (-1.0, 1.0, None, None), "transmissive", "transmissive",
                     Phases(EosSpec.ideal(1.4), EosSpec.ideal(2.0)), t_end=0.25, cfl=0.25,
                     nx=3000, ny=1, init=init_rp1d,
                     parameters={"left": RP1_LEFT, "right": RP1_RIGHT}),
    "vortex": CaseSpec("vortex", (-10.0, 10.0, -10.0, 10.0), "periodic", "periodic",
                       Phases(EosSpec.ideal(1.4), EosSpec.ideal(1.4)), t_end=1.0, cfl=0.4,
                       nx=128, ny=128, init=init_vortex),
    "explosion": CaseSpec("explosion", (-1.0, 1.0, -1.0, 1.0), "transmissive", "transmissive",
                          Phases(EosSpec.ideal(1.4), EosSpec.ideal(2.0)), t_end=0.1, cfl=0.4,
                          nx=400, ny=400, init=init_explosion,
                          parameters={"inner": CE_INNER, "outer": CE_OUTER, "radius": CE_RADIUS}),
    "dambreak": CaseSpec("dambreak", (0.0, 4.0, 0.0, 2.0), "wall", "wall",
                         Phases(GAS_AIR, WATER), t_end=0.4, cfl=0.5, nx=480, ny=240,
                         gravity=(0.0, -GRAVITY), init=init_dambreak),
    "kelvin_helmholtz": CaseSpec("kelvin_helmholtz", (-0.5, 0.5, -1.0, 1.0), "periodic", "periodic",
                                 Phases(EosSpec.ideal(1.4), EosSpec.ideal(2.0)), t_end=6.0,
                                 cfl=0.4, nx=128, ny=256, init=init_kelvin_helmholtz),
    "potential_init": CaseSpec("potential_init", (0.0, 1.0, 0.0, 1.0), "periodic", "periodic",
                               Phases(EosSpec.ideal(1.4), EosSpec.ideal(1.4)), t_end=0.1,
                               cfl=0.4, nx=64, ny=64, init=init_potential),
}
ALIASES = {"kh": "kelvin_helmholtz", "potential": "potential_init"}


def get_case(name: str) -> CaseSpec:
    key = ALIASES.get(name, name)
    if key not in CASES:
        raise KeyError(f"unknown case {name!r}; choose from {sorted(CASES) + sorted(ALIASES)}")
    return CASES[key]


def make_grid(case: CaseSpec, nx: int, ny: int, domain=None) -> StaggeredGrid:
    x_lo, x_hi, y_lo, y_hi = domain if domain is not None else case.domain
    lx = x_hi - x_lo
    if y_lo is None:
        ly = lx * ny / nx
        y_lo = -0.5 * ly
    else:
        ly = y_hi - y_lo
    return StaggeredGrid(nx, ny, lx, ly, x_lo, y_lo)
