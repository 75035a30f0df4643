"""Barotropic equations of state: ideal gas and stiffened gas.

All functions accept scalars or numpy arrays and broadcast. Densities must be
strictly positive; density floors are the solver's business, not ours.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np


class DomainError(ValueError):
    """Raised when a thermodynamic function is evaluated outside its domain."""


class EosKind(str, Enum):
    IDEAL = "ideal"
    STIFFENED = "stiffened"


@dataclass(frozen=True)
class EosSpec:
    """Parameters of a barotropic EOS.

    ``p0``, ``rho0`` and ``c0`` are only read by the stiffened gas.
    """

    kind: EosKind = EosKind.IDEAL
    gamma: float = 1.4
    p0: float = 0.0
    rho0: float = 1.0
    c0: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "kind", EosKind(self.kind))
        if not self.gamma > 1.0:
            raise ValueError(f"gamma must exceed 1, got {self.gamma}")
        if not (self.rho0 > 0.0 and self.c0 > 0.0):
            raise ValueError("rho0 and c0 must be positive")

    @classmethod
    def ideal(cls, gamma: float) -> "EosSpec":
        return cls(EosKind.IDEAL, gamma)

    @classmethod
    def stiffened(cls, gamma: float, p0: float, rho0: float, c0: float) -> "EosSpec":
        return cls(EosKind.STIFFENED, gamma, p0, rho0, c0)


def _check_density(rho):
    rho = np.asarray(rho, dtype=float)
    if np.any(~(rho > 0.0)):
        raise DomainError("density must be positive and finite")
    return rho


def _maybe_scalar(x):
    return x.item() if isinstance(x, np.ndarray) and x.ndim == 0 else x


def internal_energy(eos: EosSpec, rho):
    rho = _check_density(rho)
    g = eos.gamma
    if eos.kind is EosKind.IDEAL:
        e = rho ** (g - 1.0) / (g - 1.0)
    else:
        e = (eos.c0**2 / (g * (g - 1.0)) * (rho / eos.rho0) ** (g - 1.0)
             + (eos.rho0 * eos.c0**2 - g * eos.p0) / (g * rho))
    return _maybe_scalar(e)


def pressure(eos: EosSpec, rho):
    rho = _check_density(rho)
    g = eos.gamma
    if eos.kind is EosKind.IDEAL:
        p = rho**g
    else:
        p = eos.p0 + eos.rho0 * eos.c0**2 / g * ((rho / eos.rho0) ** g - 1.0)
    return _maybe_scalar(p)


def sound_speed_squared(eos: EosSpec, rho):
    """dp/drho; positive for both EOS on rho > 0."""
    rho = _check_density(rho)
    g = eos.gamma
    if eos.kind is EosKind.IDEAL:
        a2 = g * rho ** (g - 1.0)
    else:
        a2 = eos.c0**2 * (rho / eos.rho0) ** (g - 1.0)
    return _maybe_scalar(a2)


def sound_speed(eos: EosSpec, rho):
    a2 = np.asarray(sound_speed_squared(eos, rho))
    if np.any(~(a2 > 0.0)):
        raise DomainError("non-positive dp/drho")
    return _maybe_scalar(np.sqrt(a2))


def chemical_potential(eos: EosSpec, rho):
    """Gibbs free energy per unit mass, e + p / rho."""
    rho = _check_density(rho)
    return _maybe_scalar(np.asarray(internal_energy(eos, rho)) + np.asarray(pressure(eos, rho)) / rho)


def density_from_pressure(eos: EosSpec, p):
    """Invert ``pressure``. Used only by initial-condition generators."""
    p = np.asarray(p, dtype=float)
    g = eos.gamma
    if eos.kind is EosKind.IDEAL:
        base = p
    else:
        base = 1.0 + g * (p - eos.p0) / (eos.rho0 * eos.c0**2)
    if np.any(~(base > 0.0)):
        raise DomainError("pressure below the EOS cavitation limit")
    rho = base ** (1.0 / g) if eos.kind is EosKind.IDEAL else eos.rho0 * base ** (1.0 / g)
    return _maybe_scalar(rho)
