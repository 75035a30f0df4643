"""Independent reference implementations used only by the tests."""
import numpy as np


def _minmod(a, b):
    return np.where(a * b > 0.0, np.sign(a) * np.minimum(np.abs(a), np.abs(b)), 0.0)


def euler_barotropic_muscl(rho, u, dx, t_end, gamma=1.4, cfl=0.5):
    """Barotropic Euler (p = rho^gamma) with MUSCL-Hancock, minmod and Rusanov fluxes.

    Transmissive boundaries through two constant-extrapolation ghost cells.
    Returns (rho, u) at ``t_end``.
    """
    U = np.stack([np.asarray(rho, float), np.asarray(rho, float) * np.asarray(u, float)])

    def flux(V):
        r, m = V
        v = m / r
        return np.stack([m, m * v + r ** gamma])

    def speed(V):
        r, m = V
        return np.abs(m / r) + np.sqrt(gamma * r ** (gamma - 1.0))

    t = 0.0
    while t < t_end:
        dt = min(cfl * dx / np.max(speed(U)), t_end - t)
        P = np.concatenate([U[:, :1], U[:, :1], U, U[:, -1:], U[:, -1:]], axis=1)
        s = np.zeros_like(P)
        s[:, 1:-1] = _minmod(P[:, 2:] - P[:, 1:-1], P[:, 1:-1] - P[:, :-2])
        L = P - 0.5 * s
        R = P + 0.5 * s
        half = 0.5 * dt / dx * (flux(L) - flux(R))
        L = L + half
        R = R + half
        # face k sits between padded cells k+1 and k+2 (k = 0..n)
        a, b = R[:, 1:-2], L[:, 2:-1]
        smax = np.maximum(speed(a), speed(b))
        F = 0.5 * (flux(a) + flux(b)) - 0.5 * smax * (b - a)
        U = U - dt / dx * (F[:, 1:] - F[:, :-1])
        t = t_end if t + dt >= t_end else t + dt
    return U[0], U[1] / U[0]
