"""Acceptance criteria 1 to 10, each at its stated tolerance.

Every test prints one ``criterion N PASS|FAIL`` line (also repeated in the
terminal summary). The solver runs take several minutes in total.
"""
import numpy as np
import pytest

from curlfree import eos
from curlfree.boundary import BoundarySpec
from curlfree.cases import WATER, exact_vortex_fields, get_case, make_grid
from curlfree.config import parse_config
from curlfree.driver import Simulation, convergence_study
from curlfree.eos import EosSpec
from curlfree.grid import StaggeredGrid
from curlfree.model import EPS_ALPHA, MOM, Phases, conserved_from_primitives
from curlfree.ops import center_curl, corner_gradient
from curlfree.refsol import solve_1d, solve_radial

from oracles import euler_barotropic_muscl

pytestmark = pytest.mark.slow


class Recorder:
    """Per-step curl history and conservation totals of a run."""

    def __init__(self, sim, totals_at=()):
        self.curl = [sim.curl_l1()]
        self.t = [sim.t]
        self.totals = {0: sim.totals()}
        self.totals_at = set(totals_at)
        inner = (slice(None),) + sim.grid.interior
        # sum |rho u| dA at t = 0: the scale for momentum totals that vanish by symmetry
        self.momentum_scale = {k: float(np.sum(np.abs(sim.Q[inner][MOM + a])) * sim.grid.cell_area)
                               for a, k in enumerate(("momx", "momy"))}

    def __call__(self, sim, dt):
        self.curl.append(sim.curl_l1())
        self.t.append(sim.t)
        if sim.step_count in self.totals_at:
            self.totals[sim.step_count] = sim.totals()


def _run(text, t_end=None, totals_at=(), max_steps=None):
    cfg = parse_config(text)
    sim = Simulation.from_config(cfg)
    rec = Recorder(sim, totals_at)
    sim.advance(cfg.t_end if t_end is None else t_end, cfg.cfl, max_steps, rec)
    return sim, rec


@pytest.fixture(scope="module")
def vortex_on():
    return _run("case = vortex\nnx = 128\nny = 128\nt_end = 10")


@pytest.fixture(scope="module")
def vortex_off():
    return _run("case = vortex\nnx = 128\nny = 128\nt_end = 5\ncurl_free = off")


@pytest.fixture(scope="module")
def kh_on():
    return _run("case = kh\nnx = 128\nny = 256\nt_end = 2", totals_at=(1000,))


@pytest.fixture(scope="module")
def kh_off():
    return _run("case = kh\nnx = 128\nny = 256\nt_end = 2\ncurl_free = off")


# 1 ---------------------------------------------------------------------------

def test_criterion_01_discrete_involution(report):
    grid = StaggeredGrid(64, 64, 1.0, 1.0)
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        phi = rng.normal(size=grid.center_shape)
        grad = corner_gradient(phi, grid.dx, grid.dy)
        curl = center_curl(grad, grid.dx, grid.dy)[grid.interior]
        gmax = np.nanmax(np.abs(grad))
        worst = max(worst, np.max(np.abs(curl)) / gmax)
    ok = worst <= 1e-13
    report(1, "discrete curl(grad) = 0", ok, f"max |curl| / max |grad| = {worst:.2e} (limit 1e-13)")
    assert ok


# 2 ---------------------------------------------------------------------------

def test_criterion_02_curl_preservation(report, vortex_on, vortex_off, kh_on, kh_off):
    _, v_on = vortex_on
    _, v_off = vortex_off
    _, k_on = kh_on
    _, k_off = kh_off
    v_on_max = max(c for c, t in zip(v_on.curl, v_on.t) if t <= 5.0)
    values = {"vortex on": v_on_max, "kh on": max(k_on.curl),
              "vortex off": max(v_off.curl), "kh off": max(k_off.curl)}
    ok = (values["vortex on"] <= 1e-11 and values["kh on"] <= 1e-11
          and values["vortex off"] > 1e-6 and values["kh off"] > 1e-6)
    detail = ", ".join(f"{k} max {v:.2e}" for k, v in values.items())
    report(2, "curl stays at round-off with curl_free=on and grows with off", ok, detail)
    assert ok


# 3 ---------------------------------------------------------------------------

def test_criterion_03_convergence_order(report):
    cfg = parse_config("case = vortex\nt_end = 1")
    table = convergence_study(cfg, [64, 128, 256])
    lows = {v: min(o) for v, o in table.orders.items()}
    need = {"alpha1": 1.8, "rho1": 1.8, "rho2": 1.8, "ux": 1.7, "uy": 1.7}
    ok = all(lows[v] >= need[v] for v in need)
    print("\n" + table.format())
    detail = ", ".join(f"{v} {lows[v]:.2f}" for v in need)
    report(3, "vortex EOC on 64/128/256 at t=1", ok, f"lowest orders: {detail}")
    assert ok


# 4 ---------------------------------------------------------------------------

def test_criterion_04_vortex_stationarity(report, vortex_on):
    sim, _ = vortex_on
    x, y = sim.grid.center_mesh()
    a, r1, r2, _, _ = (f[sim.grid.interior] for f in exact_vortex_fields(x, y))
    rho_exact = a * r1 + (1 - a) * r2
    err = float(np.max(np.abs(sim.primitives().rho - rho_exact)))
    ok = sim.t == 10.0 and err <= 2e-2
    report(4, "vortex 128^2 at t=10", ok, f"Linf(rho - exact) = {err:.3e} (limit 2e-2)")
    assert ok


# 5 ---------------------------------------------------------------------------

def shock_inside_rarefaction(x, rho1, window=(0.1, 0.45), rel_drop=5e-3, side_width=5e-3):
    """True if rho1 rises across ``window`` but its monotonicity breaks inside it.

    The break is the largest contiguous decrease; it must exceed ``rel_drop``
    times the overall rise and be flanked on both sides by rho1 increasing over
    a width ``side_width`` in x, so it sits inside the rarefaction.
    """
    m = (x >= window[0]) & (x <= window[1])
    r = rho1[m]
    side = max(3, int(round(side_width / (x[1] - x[0]))))
    rise = r[-1] - r[0]
    if r.size < 4 * side or rise <= 0:
        return False
    d = np.diff(r)
    k = int(np.argmin(d))
    # the break spreads over several cells; sum the contiguous decreasing run
    lo, hi = k, k
    while lo > 0 and d[lo - 1] < 0:
        lo -= 1
    while hi < d.size - 1 and d[hi + 1] < 0:
        hi += 1
    drop = -float(np.sum(d[lo:hi + 1]))
    left = d[max(0, lo - side):lo]
    right = d[hi + 1:hi + 1 + side]
    return (drop >= rel_drop * rise and left.size == side and right.size == side
            and np.all(left > 0) and np.all(right > 0))


def test_criterion_05_riemann_problem(report):
    cfg = parse_config("case = rp1d\nnx = 3000\nny = 1")
    sim = Simulation.from_config(cfg)
    sim.advance(cfg.t_end, cfg.cfl)
    prim = sim.primitives()
    ref = solve_1d("rp1d", 24000)
    block = ref.rho.reshape(3000, 8).mean(axis=1)
    dx = sim.grid.dx
    l1 = float(np.sum(np.abs(prim.rho[:, 0] - block)) * dx)
    x = sim.grid.xc()[sim.grid.interior[0]]
    feature = shock_inside_rarefaction(x, prim.rho1[:, 0])
    feature_ref = shock_inside_rarefaction(ref.x, ref.rho1)
    ok = l1 <= 1e-2 and feature and feature_ref
    report(5, "RP1 at n=3000 vs reference n=24000", ok,
           f"L1(rho) = {l1:.3e} (limit 1e-2), shock inside rho1 rarefaction: run {feature}, reference {feature_ref}")
    assert ok


# 6 ---------------------------------------------------------------------------

def test_criterion_06_circular_explosion(report):
    cfg = parse_config("case = explosion\nnx = 400\nny = 400\nt_end = 0.1")
    sim = Simulation.from_config(cfg)
    sim.advance(cfg.t_end, cfg.cfl)
    ref = solve_radial("explosion", 12800, 0.1)
    grid = sim.grid
    j = grid.ny // 2  # first row above y = 0
    x = grid.xc()[grid.interior[0]]
    y = grid.yc()[grid.interior[1]][j]
    r = np.hypot(x, y)
    rho_2d = sim.primitives().rho[:, j]
    rho_ref = np.interp(r, ref.x, ref.rho)
    rel = float(np.sum(np.abs(rho_2d - rho_ref)) / np.sum(np.abs(rho_ref)))
    ok = rel <= 0.02
    report(6, "explosion 400^2 x-axis cut vs radial 12800", ok, f"relative L1(rho) = {rel:.3e} (limit 2e-2)")
    assert ok


# 7 ---------------------------------------------------------------------------

def test_criterion_07_dambreak(report):
    sim, rec = _run("case = dambreak\nnx = 480\nny = 240\nt_end = 0.4")
    water0 = rec.totals[0]["mass2"]
    water1 = sim.totals()["mass2"]
    drift = abs(water1 - water0) / water0
    cmax = max(rec.curl)
    ok = sim.t == 0.4 and cmax <= 1e-11 and drift <= 1e-10
    report(7, "dambreak 480x240 to t=0.4 with walls", ok,
           f"max curl L1 = {cmax:.2e} (limit 1e-11), water mass drift = {drift:.2e} (limit 1e-10), "
           f"{sim.step_count} steps")
    assert ok


# 8 ---------------------------------------------------------------------------

def test_criterion_08_conservation(report, kh_on):
    sim, rec = kh_on
    t0, t1 = rec.totals[0], rec.totals[1000]
    scale = dict(rec.momentum_scale, mass1=abs(t0["mass1"]), mass2=abs(t0["mass2"]))
    drift = {k: abs(t1[k] - t0[k]) / scale[k] for k in scale}
    ok = all(v <= 1e-11 for v in drift.values())
    report(8, "KH periodic, 1000 steps", ok,
           ", ".join(f"{k} drift {v:.2e}" for k, v in drift.items()) + " (limit 1e-11)")
    assert ok


# 9 ---------------------------------------------------------------------------

def test_criterion_09_eos_consistency(report):
    rng = np.random.default_rng(99)
    cases = {"ideal 1.4": (EosSpec.ideal(1.4), 0.1, 2000.0),
             "ideal 2.0": (EosSpec.ideal(2.0), 0.1, 2000.0),
             "stiffened water": (WATER, 500.0, 2000.0)}
    worst = {}
    for name, (spec, lo, hi) in cases.items():
        rho = rng.uniform(lo, hi, 100)
        h = 1e-5 * rho
        dedr = (eos.internal_energy(spec, rho + h) - eos.internal_energy(spec, rho - h)) / (2 * h)
        dpdr = (eos.pressure(spec, rho + h) - eos.pressure(spec, rho - h)) / (2 * h)
        p = eos.pressure(spec, rho)
        a2 = eos.sound_speed_squared(spec, rho)
        e1 = np.max(np.abs(rho ** 2 * dedr - p) / np.maximum(np.abs(p), 1e-300))
        e2 = np.max(np.abs(dpdr - a2) / a2)
        worst[name] = max(e1, e2)
    ok = all(v <= 1e-6 for v in worst.values())
    report(9, "EOS p = rho^2 de/drho and a^2 = dp/drho", ok,
           ", ".join(f"{k} {v:.1e}" for k, v in worst.items()) + " (limit 1e-6)")
    assert ok


# 10 --------------------------------------------------------------------------

def test_criterion_10_single_phase_limit(report):
    gas = EosSpec.ideal(1.4)
    phases = Phases(gas, gas)
    n = 400
    grid = make_grid(get_case("rp1d"), n, 1)
    x, _ = grid.center_mesh()
    rho = np.where(x < 0.0, 1.0, 0.125)
    Q = conserved_from_primitives(np.full_like(x, 1.0 - EPS_ALPHA), rho, rho,
                                  np.zeros((2,) + x.shape))
    w = np.zeros((2,) + grid.vertex_shape)
    sim = Simulation(grid, phases, BoundarySpec.from_axes("transmissive", "transmissive"), Q, w)
    sim.advance(0.2, 0.5)
    prim = sim.primitives()
    rho_ref, u_ref = euler_barotropic_muscl(rho[grid.interior][:, 0], np.zeros(n), grid.dx, 0.2, cfl=0.5)
    l1_rho = float(np.sum(np.abs(prim.rho[:, 0] - rho_ref)) * grid.dx)
    l1_u = float(np.sum(np.abs(prim.u[0][:, 0] - u_ref)) * grid.dx)
    ok = l1_rho <= 1e-3 and l1_u <= 1e-3
    report(10, "single-phase limit vs barotropic Euler oracle", ok,
           f"L1(rho) = {l1_rho:.2e}, L1(u) = {l1_u:.2e} (limit 1e-3)")
    assert ok
