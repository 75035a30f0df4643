"""Mixture closures, fluxes and wave speeds of the barotropic two-phase model.

Conserved cell-centre state ``Q`` is stored component-first:

    Q[0] = alpha1          volume fraction of phase 1
    Q[1] = alpha1 * rho1   partial density of phase 1
    Q[2] = alpha2 * rho2   partial density of phase 2
    Q[3:3+d] = rho * u     mixture momentum

The relative velocity ``w = u1 - u2`` lives on the vertex lattice and is
passed separately with shape ``(d, ...)``. All functions broadcast over the
trailing axes, so the same code serves scalars, 1D profiles and 2D fields.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import eos as _eos
from .eos import EosSpec

EPS_ALPHA = 1e-3
RHO_FLOOR = 1e-10

ALPHA, M1, M2, MOM = 0, 1, 2, 3


class Phases(NamedTuple):
    first: EosSpec
    second: EosSpec


@dataclass
class Primitives:
    alpha1: np.ndarray
    m1: np.ndarray
    m2: np.ndarray
    rho1: np.ndarray
    rho2: np.ndarray
    rho: np.ndarray
    c1: np.ndarray
    c2: np.ndarray
    u: np.ndarray  # (d, ...)
    w: np.ndarray  # (d, ...)
    p1: np.ndarray
    p2: np.ndarray
    p: np.ndarray
    a1: np.ndarray | None = None
    a2: np.ndarray | None = None
    phi: np.ndarray | None = None
    floored: int = 0

    @property
    def u1(self):
        return self.u + self.c2 * self.w

    @property
    def u2(self):
        return self.u - self.c1 * self.w


def primitives_from_conserved(Q, w, phases: Phases, *, speeds=True, with_phi=True,
                              eps_alpha=EPS_ALPHA) -> Primitives:
    """Recover primitive variables; alpha is clamped and phase densities floored.

    The conserved vector itself is never modified.
    """
    Q = np.asarray(Q, dtype=float)
    w = np.asarray(w, dtype=float)
    if not np.all(np.isfinite(Q)):
        raise FloatingPointError("non-finite conserved state")
    alpha = np.clip(Q[ALPHA], eps_alpha, 1.0 - eps_alpha)
    m1, m2 = Q[M1], Q[M2]
    rho1_raw = m1 / alpha
    rho2_raw = m2 / (1.0 - alpha)
    low = (rho1_raw < RHO_FLOOR) | (rho2_raw < RHO_FLOOR)
    rho1 = np.maximum(rho1_raw, RHO_FLOOR)
    rho2 = np.maximum(rho2_raw, RHO_FLOOR)
    rho = m1 + m2
    if np.any(~(rho > 0.0)):
        raise FloatingPointError("non-positive mixture density")
    c1 = m1 / rho
    c2 = m2 / rho
    u = Q[MOM:] / rho
    p1 = _eos.pressure(phases.first, rho1)
    p2 = _eos.pressure(phases.second, rho2)
    p = alpha * p1 + (1.0 - alpha) * p2
    prim = Primitives(alpha, m1, m2, rho1, rho2, rho, c1, c2, u, w, p1, p2, p,
                      floored=int(np.count_nonzero(low)))
    if speeds:
        prim.a1 = _eos.sound_speed(phases.first, rho1)
        prim.a2 = _eos.sound_speed(phases.second, rho2)
    if with_phi:
        prim.phi = phi(prim, phases)
    return prim


def conserved_from_primitives(alpha1, rho1, rho2, u):
    """Build ``Q`` from volume fraction, phase densities and mixture velocity."""
    alpha1 = np.asarray(alpha1, dtype=float)
    u = np.asarray(u, dtype=float)
    m1 = alpha1 * rho1
    m2 = (1.0 - alpha1) * rho2
    rho = m1 + m2
    return np.concatenate([np.stack(np.broadcast_arrays(alpha1, m1, m2)), rho * u])


def mixture_from_phase_velocities(alpha1, rho1, rho2, u1, u2):
    """Return ``(Q, w)`` given per-phase velocities (as in Riemann tables)."""
    u1 = np.asarray(u1, dtype=float)
    u2 = np.asarray(u2, dtype=float)
    m1 = alpha1 * rho1
    m2 = (1.0 - alpha1) * rho2
    u = (m1 * u1 + m2 * u2) / (m1 + m2)
    return conserved_from_primitives(alpha1, rho1, rho2, u), u1 - u2


def phi(prim: Primitives, phases: Phases):
    """Scalar mu1 - mu2 - (c1 - c2)/2 |w|^2 driving the relative velocity."""
    mu1 = _eos.chemical_potential(phases.first, prim.rho1)
    mu2 = _eos.chemical_potential(phases.second, prim.rho2)
    return mu1 - mu2 - 0.5 * (prim.c1 - prim.c2) * np.sum(prim.w * prim.w, axis=0)


def flux_b(prim: Primitives, axis: int):
    """Convective and pressure flux; the alpha row is identically zero."""
    uk = prim.u[axis]
    mom = prim.rho * prim.u * uk
    mom[axis] = mom[axis] + prim.p
    return np.concatenate([np.stack([np.zeros_like(uk), prim.m1 * uk, prim.m2 * uk]), mom])


def kappa(m1, m2):
    """rho c1 c2 = m1 m2 / (m1 + m2), the common factor of every relative-velocity flux."""
    return m1 * m2 / (m1 + m2)


def flux_v_from(m1, m2, w, axis: int):
    k = kappa(m1, m2)
    kw = k * w[axis]
    return np.concatenate([np.stack([np.zeros_like(kw), kw, -kw]), kw * w])


def flux_v(prim: Primitives, axis: int):
    """Relative-velocity flux (alpha1 rho1 c2 w_k, -alpha2 rho2 c1 w_k, rho c1 c2 w_i w_k)."""
    return flux_v_from(prim.m1, prim.m2, prim.w, axis)


def gv_potential(prim: Primitives):
    """w . u + phi, the scalar whose gradient drives the relative velocity."""
    if prim.phi is None:
        raise ValueError("primitives were built without phi")
    return np.sum(prim.w * prim.u, axis=0) + prim.phi


def source_b(prim: Primitives, gravity):
    g = np.asarray(gravity, dtype=float).reshape((-1,) + (1,) * np.ndim(prim.rho))
    zero = np.zeros_like(prim.rho)
    return np.concatenate([np.stack([zero, zero, zero]), prim.rho * g])


def eigenvalues(prim: Primitives, axis: int):
    """Distinct characteristic speeds in direction ``axis``.

    Ordered (u2 - a2, u1 - a1, u, u2 + a2, u1 + a1) along the first axis.
    """
    if prim.a1 is None:
        raise ValueError("primitives were built without sound speeds")
    u = prim.u[axis]
    u1 = u + prim.c2 * prim.w[axis]
    u2 = u - prim.c1 * prim.w[axis]
    return np.stack([u2 - prim.a2, u1 - prim.a1, u, u2 + prim.a2, u1 + prim.a1])


def max_speed(prim: Primitives, axis: int):
    """Pointwise max |lambda| in direction ``axis``."""
    u = prim.u[axis]
    u1 = np.abs(u + prim.c2 * prim.w[axis]) + prim.a1
    u2 = np.abs(u - prim.c1 * prim.w[axis]) + prim.a2
    return np.maximum(u1, u2)


def total_energy(prim: Primitives, phases: Phases):
    """Energy density: kinetic plus mixture internal energy incl. relative motion."""
    e1 = _eos.internal_energy(phases.first, prim.rho1)
    e2 = _eos.internal_energy(phases.second, prim.rho2)
    kin = 0.5 * prim.rho * np.sum(prim.u * prim.u, axis=0)
    w2 = np.sum(prim.w * prim.w, axis=0)
    return kin + prim.rho * (prim.c1 * e1 + prim.c2 * e2 + 0.5 * prim.c1 * prim.c2 * w2)
