"""Ghost-layer fills for periodic, transmissive and slip-wall boundaries.

Wall reflections flip the sign of components normal to the wall: the
wall-normal momentum of the centre state, the wall-normal relative velocity
at vertices, and odd scalars such as the discrete curl. Scalars feeding the
vertex gradient (``w.u + phi`` and the divergence) are mirrored evenly, so
their corner gradient has no wall-normal component on wall vertices.

All fills act in place on the two trailing axes and fill x first, then y,
so corner ghosts end up as the composition of both reflections.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .model import MOM


class BC(str, Enum):
    PERIODIC = "periodic"
    TRANSMISSIVE = "transmissive"
    WALL = "wall"


class BoundaryConfigError(ValueError):
    pass


@dataclass(frozen=True)
class BoundarySpec:
    x_lo: BC = BC.PERIODIC
    x_hi: BC = BC.PERIODIC
    y_lo: BC = BC.PERIODIC
    y_hi: BC = BC.PERIODIC

    def __post_init__(self):
        for name in ("x_lo", "x_hi", "y_lo", "y_hi"):
            object.__setattr__(self, name, BC(getattr(self, name)))
        for lo, hi, axis in ((self.x_lo, self.x_hi, "x"), (self.y_lo, self.y_hi, "y")):
            if (lo is BC.PERIODIC) != (hi is BC.PERIODIC):
                raise BoundaryConfigError(
                    f"periodic boundary on one {axis}-side needs periodic on the other")

    @classmethod
    def from_axes(cls, bcx: str | BC, bcy: str | BC) -> "BoundarySpec":
        return cls(bcx, bcx, bcy, bcy)

    def sides(self, axis: int) -> tuple[BC, BC]:
        return (self.x_lo, self.x_hi) if axis == 0 else (self.y_lo, self.y_hi)

    def has_wall(self) -> bool:
        return BC.WALL in (self.x_lo, self.x_hi, self.y_lo, self.y_hi)


def _swap(f: np.ndarray, axis: int) -> np.ndarray:
    """View with the filled axis moved to the last position."""
    return np.moveaxis(f, f.ndim - 2 + axis, -1)


def _fill_center_axis(f, n, g, lo: BC, hi: BC, sign):
    if lo is BC.PERIODIC:
        f[..., :g] = f[..., n:n + g]
        f[..., g + n:] = f[..., g:2 * g]
        return
    if lo is BC.TRANSMISSIVE:
        f[..., :g] = f[..., g:g + 1]
    else:
        f[..., :g] = sign * f[..., g:2 * g][..., ::-1]
    if hi is BC.TRANSMISSIVE:
        f[..., g + n:] = f[..., g + n - 1:g + n]
    else:
        f[..., g + n:] = sign * f[..., n:g + n][..., ::-1]


def _fill_vertex_axis(f, n, g, lo: BC, hi: BC, sign):
    # physical vertices are g .. g + n; the wall vertex itself is left untouched
    if lo is BC.PERIODIC:
        f[..., g + n] = f[..., g]
        f[..., :g] = f[..., n:n + g]
        f[..., g + n + 1:] = f[..., g + 1:2 * g + 1]
        return
    if lo is BC.TRANSMISSIVE:
        f[..., :g] = f[..., g:g + 1]
    else:
        f[..., :g] = sign * f[..., g + 1:2 * g + 1][..., ::-1]
    if hi is BC.TRANSMISSIVE:
        f[..., g + n + 1:] = f[..., g + n:g + n + 1]
    else:
        f[..., g + n + 1:] = sign * f[..., n:n + g][..., ::-1]


def _signs(ncomp: int | None, odd: tuple[int, ...]):
    if ncomp is None:
        return -1.0 if odd else 1.0
    s = np.ones((ncomp, 1, 1))
    s[list(odd)] = -1.0
    return s


def fill_center(field: np.ndarray, bc: BoundarySpec, nx: int, ny: int, g: int,
                odd_x: tuple[int, ...] = (), odd_y: tuple[int, ...] = ()) -> None:
    """Fill ghosts of a centre array of shape (NX, NY) or (ncomp, NX, NY).

    ``odd_x``/``odd_y`` list the components negated across x-/y-walls.
    For a scalar field pass ``odd_x=(0,)`` to mark it odd.
    """
    ncomp = field.shape[0] if field.ndim == 3 else None
    _fill_center_axis(_swap(field, 0), nx, g, *bc.sides(0), _signs(ncomp, odd_x))
    _fill_center_axis(field, ny, g, *bc.sides(1), _signs(ncomp, odd_y))


def fill_vertex(field: np.ndarray, bc: BoundarySpec, nx: int, ny: int, g: int,
                odd_x: tuple[int, ...] = (0,), odd_y: tuple[int, ...] = (1,)) -> None:
    """Fill ghosts of a vertex vector field (2, NX+1, NY+1); defaults suit ``w``."""
    ncomp = field.shape[0] if field.ndim == 3 else None
    _fill_vertex_axis(_swap(field, 0), nx, g, *bc.sides(0), _signs(ncomp, odd_x))
    _fill_vertex_axis(field, ny, g, *bc.sides(1), _signs(ncomp, odd_y))


def fill_state(Q: np.ndarray, bc: BoundarySpec, nx: int, ny: int, g: int) -> None:
    """Conserved centre state: wall-normal momentum (and relative velocity, if carried) flip."""
    odd_x = (MOM,) + ((MOM + 2,) if Q.shape[0] > MOM + 2 else ())
    odd_y = (MOM + 1,) + ((MOM + 3,) if Q.shape[0] > MOM + 2 else ())
    fill_center(Q, bc, nx, ny, g, odd_x, odd_y)


def center_filler(bc: BoundarySpec, nx: int, ny: int, g: int):
    """Callback for :mod:`ops` that fills a centre scalar with a given wall parity."""
    def fill(field: np.ndarray, parity: int) -> None:
        odd = (0,) if parity < 0 else ()
        fill_center(field, bc, nx, ny, g, odd, odd)
    return fill
