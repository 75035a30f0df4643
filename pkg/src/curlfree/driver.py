"""Time loop, CFL control, output scheduling and the convergence study."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import diag, model
from .boundary import BoundarySpec, fill_state, fill_vertex
from .cases import exact_vortex_fields, get_case, make_grid
from .config import RunConfig
from .grid import StaggeredGrid, center_from_vertices, vertex_from_centers
from .io import load_checkpoint, save_checkpoint, write_centerline, write_vtk
from .model import MOM, Phases
from .muscl import W_ROW, CenterUpdate, NumericalError, StepStats
from .wsolver import update_vertices

log = logging.getLogger(__name__)

DT_MIN = 1e-14


def max_wave_speeds(Q: np.ndarray, w_centers: np.ndarray, grid: StaggeredGrid,
                    phases: Phases) -> tuple[float, float]:
    """Global max |lambda| along x and along y over physical cells."""
    inner = (slice(None),) + grid.interior
    prim = model.primitives_from_conserved(Q[:MOM + 2][inner], w_centers[inner], phases,
                                           with_phi=False)
    return float(np.max(model.max_speed(prim, 0))), float(np.max(model.max_speed(prim, 1)))


def compute_dt(Q: np.ndarray, w_centers: np.ndarray, grid: StaggeredGrid, phases: Phases,
               cfl: float) -> float:
    """cfl * min(dx / s_x, dy / s_y); raises on non-finite or vanishing steps."""
    sx, sy = max_wave_speeds(Q, w_centers, grid, phases)
    if not (np.isfinite(sx) and np.isfinite(sy)):
        raise NumericalError("non-finite wave speed")
    with np.errstate(divide="ignore"):
        dt = cfl * min(grid.dx / sx if sx > 0 else math.inf, grid.dy / sy if sy > 0 else math.inf)
    if not np.isfinite(dt):
        raise NumericalError("all wave speeds vanish; time step undefined")
    if dt < DT_MIN:
        raise NumericalError(f"time step {dt:.3e} below {DT_MIN:g} (runaway wave speed)")
    return dt


class Simulation:
    """Holds the centre state, the vertex relative velocity and the clock."""

    def __init__(self, grid: StaggeredGrid, phases: Phases, bc: BoundarySpec, Q: np.ndarray,
                 w: np.ndarray, *, gravity=(0.0, 0.0), curl_free: bool = True, order: int = 2,
                 c_h: float | None = None, t: float = 0.0, step: int = 0):
        self.grid = grid
        self.phases = phases
        self.bc = bc
        self.curl_free = curl_free
        self.c_h = c_h
        self.t = float(t)
        self.step_count = int(step)
        self.outputs_done = 0
        self.center = CenterUpdate(grid, phases, bc, gravity, order)
        if curl_free:
            self.Q = np.array(Q[:MOM + 2], dtype=float)
            self.w = np.array(w, dtype=float)
        elif Q.shape[0] > W_ROW:
            self.Q = np.array(Q, dtype=float)
            self.w = None
        else:
            self.Q = np.concatenate([Q[:MOM + 2], center_from_vertices(w)])
            self.w = None
        self.last_stats = StepStats()
        self.fill_ghosts()

    @classmethod
    def from_config(cls, cfg: RunConfig) -> "Simulation":
        case = get_case(cfg.case)
        grid = make_grid(case, cfg.nx, cfg.ny, cfg.domain)
        kwargs = {"gravity": -cfg.gravity[1]} if case.name == "dambreak" else {}
        Q, w = case.init(grid, cfg.phases, **kwargs)
        sim = cls(grid, cfg.phases, cfg.bc, Q, w, gravity=cfg.gravity, curl_free=cfg.curl_free,
                  order=cfg.order, c_h=cfg.c_h)
        if cfg.restart:
            chk = load_checkpoint(cfg.restart)
            if chk["Q"].shape != sim.Q.shape:
                raise ValueError("restart file does not match the configured grid or scheme")
            sim.Q = chk["Q"]
            sim.w = chk["w"]
            sim.t = chk["t"]
            sim.step_count = chk["step"]
            sim.outputs_done = chk["outputs_done"]
            sim.fill_ghosts()
        return sim

    # -- views -------------------------------------------------------------
    def fill_ghosts(self) -> None:
        g = self.grid
        fill_state(self.Q, self.bc, g.nx, g.ny, g.ghost)
        if self.w is not None:
            fill_vertex(self.w, self.bc, g.nx, g.ny, g.ghost)

    def w_centers(self) -> np.ndarray:
        if self.curl_free:
            return center_from_vertices(self.w)
        return self.Q[W_ROW:W_ROW + 2]

    def w_vertices(self) -> np.ndarray:
        """Relative velocity on the vertex lattice (interpolated in collocated mode)."""
        if self.curl_free:
            return self.w
        return vertex_from_centers(self.Q[W_ROW:W_ROW + 2])

    def primitives(self) -> model.Primitives:
        inner = (slice(None),) + self.grid.interior
        return model.primitives_from_conserved(self.Q[:MOM + 2][inner], self.w_centers()[inner],
                                               self.phases)

    def fields(self) -> dict:
        """Physical-cell fields for output."""
        p = self.primitives()
        return {"alpha1": p.alpha1, "rho1": p.rho1, "rho2": p.rho2, "rho": p.rho, "p": p.p,
                "u": p.u, "w": p.w}

    def curl_l1(self) -> float:
        return diag.curl_error_l1(self.w_vertices(), self.grid)

    def totals(self) -> dict:
        return diag.conservation_totals(self.Q, self.w_centers(), self.grid, self.phases)

    # -- stepping ----------------------------------------------------------
    def compute_dt(self, cfl: float) -> float:
        return compute_dt(self.Q, self.w_centers(), self.grid, self.phases, cfl)

    def step(self, dt: float) -> StepStats:
        """Advance centres and vertices from the same time level."""
        Qn, stats = self.center(self.Q, self.w, dt)
        if self.curl_free:
            c_h = self.c_h
            if c_h is None:
                c_h = max(max_wave_speeds(self.Q, self.w_centers(), self.grid, self.phases))
            wn = update_vertices(self.w, self.Q, self.grid, self.phases, dt, c_h, self.bc)
            self.w = wn
        self.Q = Qn
        self.fill_ghosts()
        self.t += dt
        self.step_count += 1
        self.last_stats = stats
        return stats

    def advance(self, t_end: float, cfl: float, max_steps: int | None = None, callback=None) -> None:
        """Step until ``t_end`` (landing on it exactly) or ``max_steps``."""
        taken = 0
        while self.t < t_end and (max_steps is None or taken < max_steps):
            dt = self.compute_dt(cfl)
            last = self.t + dt >= t_end
            if last:
                dt = t_end - self.t
            self.step(dt)
            if last:
                self.t = t_end
            taken += 1
            if callback is not None:
                callback(self, dt)


@dataclass
class RunResult:
    status: int
    output_dir: Path
    simulation: Simulation | None = None
    files: list = field(default_factory=list)
    message: str = ""


def _write_outputs(sim: Simulation, cfg: RunConfig, out: Path, tag: str, files: list) -> None:
    if cfg.write_vtk:
        fields = sim.fields()
        files.append(write_vtk(out / f"snapshot_{tag}.vtk", sim.grid, fields, sim.t))
        files.append(write_centerline(out / f"centerline_{tag}.csv", sim.grid, fields))
    files.append(save_checkpoint(out / f"checkpoint_{tag}.npz", sim.Q, sim.w, sim.t,
                                 sim.step_count, sim.outputs_done))


def run(cfg: RunConfig) -> RunResult:
    """Execute a configured run; numerical failures return status 3 after flushing state."""
    out = Path(cfg.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "config_used.ini").write_text(cfg.to_ini())
    files: list = []
    sim = Simulation.from_config(cfg)
    with diag.DiagnosticsWriter(out / "diagnostics.csv", append=bool(cfg.restart)) as writer:
        def sample(s: Simulation, dt: float) -> None:
            writer.write(s.t, dt, s.curl_l1(), s.totals())

        if not cfg.restart:
            sample(sim, 0.0)
        every = cfg.output_every
        taken = 0
        last_dt = 0.0
        try:
            while sim.t < cfg.t_end and (cfg.max_steps is None or taken < cfg.max_steps):
                dt = sim.compute_dt(cfg.cfl)
                target = cfg.t_end
                if every is not None:
                    target = min(target, (sim.outputs_done + 1) * every)
                hit = sim.t + dt >= target
                if hit:
                    dt = target - sim.t
                if dt < DT_MIN:
                    raise NumericalError(f"time step {dt:.3e} below {DT_MIN:g}")
                prev = (sim.Q, sim.w, sim.t, sim.step_count)
                try:
                    sim.step(dt)
                except (NumericalError, FloatingPointError):
                    sim.Q, sim.w, sim.t, sim.step_count = prev
                    raise
                if hit:
                    sim.t = target
                taken += 1
                last_dt = dt
                if sim.step_count % cfg.diag_every == 0:
                    sample(sim, dt)
                if hit and every is not None and target < cfg.t_end:
                    sim.outputs_done += 1
                    _write_outputs(sim, cfg, out, f"{sim.outputs_done:04d}", files)
        except (NumericalError, FloatingPointError) as exc:
            log.error("numerical failure at t=%.6g step %d: %s", sim.t, sim.step_count, exc)
            _write_outputs(sim, cfg, out, "last_valid", files)
            return RunResult(3, out, sim, files, str(exc))
        if sim.step_count % cfg.diag_every != 0:
            sample(sim, last_dt)
    _write_outputs(sim, cfg, out, "final", files)
    return RunResult(0, out, sim, files)


VORTEX_VARIABLES = ("alpha1", "rho1", "rho2", "ux", "uy")


def vortex_errors(sim: Simulation) -> dict:
    """L2 errors of the vortex run against the exact stationary solution at cell centres."""
    grid = sim.grid
    x, y = grid.center_mesh()
    ix, iy = grid.interior
    a, r1, r2, ux, uy = (f[ix, iy] for f in exact_vortex_fields(x, y))
    p = sim.primitives()
    exact = {"alpha1": a, "rho1": r1, "rho2": r2, "ux": ux, "uy": uy}
    numeric = {"alpha1": p.alpha1, "rho1": p.rho1, "rho2": p.rho2, "ux": p.u[0], "uy": p.u[1]}
    return {k: diag.error_norms(numeric[k], exact[k], grid.cell_area)["L2"] for k in VORTEX_VARIABLES}


@dataclass
class ConvergenceTable:
    meshes: list
    errors: dict    # variable -> list of L2 errors
    orders: dict    # variable -> list of orders (len meshes - 1)

    def format(self) -> str:
        head = "N".ljust(8) + "".join(f"{v:>12}{'O(' + v + ')':>12}" for v in self.errors)
        lines = [head]
        for k, n in enumerate(self.meshes):
            row = f"{n:<8d}"
            for v in self.errors:
                o = "" if k == 0 else f"{self.orders[v][k - 1]:.2f}"
                row += f"{self.errors[v][k]:12.3e}{o:>12}"
            lines.append(row)
        return "\n".join(lines)

    def to_csv(self, path: str | Path) -> Path:
        path = Path(path)
        cols = ["n"] + [c for v in self.errors for c in (f"L2_{v}", f"order_{v}")]
        rows = [",".join(cols)]
        for k, n in enumerate(self.meshes):
            vals = [str(n)]
            for v in self.errors:
                vals += [repr(self.errors[v][k]), "" if k == 0 else repr(self.orders[v][k - 1])]
            rows.append(",".join(vals))
        path.write_text("\n".join(rows) + "\n")
        return path


def convergence_study(base: RunConfig, meshes) -> ConvergenceTable:
    """Run the vortex on each mesh of the ladder and tabulate L2 errors and orders."""
    meshes = [int(n) for n in meshes]
    if len(meshes) < 2:
        raise ValueError("a convergence study needs at least two meshes")
    if get_case(base.case).name != "vortex":
        raise ValueError("the convergence study compares against the exact vortex solution")
    errors = {v: [] for v in VORTEX_VARIABLES}
    hs = []
    for n in meshes:
        cfg = base.with_values(nx=n, ny=n, restart=None)
        sim = Simulation.from_config(cfg)
        sim.advance(cfg.t_end, cfg.cfl, cfg.max_steps)
        for v, e in vortex_errors(sim).items():
            errors[v].append(e)
        hs.append(sim.grid.h)
        log.info("mesh %d done at t=%.4g after %d steps", n, sim.t, sim.step_count)
    orders = {}
    for v in VORTEX_VARIABLES:
        if all(e > 0 for e in errors[v]):
            orders[v] = diag.eoc(errors[v], hs)
        else:
            orders[v] = [float("nan")] * (len(meshes) - 1)
    return ConvergenceTable(meshes, errors, orders)
