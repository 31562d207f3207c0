"""Finite-difference operators on scalar fields.

Periodic grids wrap around (no ghost storage).  Dirichlet grids get one ring
of ghost values per edge via quintic extrapolation; wide stencils are then
evaluated at interior nodes only, and the output at boundary nodes is zero
(boundary values are prescribed, never stencil-evaluated).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .exceptions import BoundaryClosureError, FieldMismatchError
from .grid import BoundaryKind, ScalarField


class Axis(enum.Enum):
    X = 0
    Y = 1


@dataclass(frozen=True)
class ExtendedField:
    """A field plus one ghost ring outside each Dirichlet edge.

    ``ext`` has shape (n_x + 2, n_y + 2); real node (i, j) sits at
    ``ext[i + 1, j + 1]``.  Periodic fields carry no ghost storage
    (``ext is None``).
    """

    field: ScalarField
    ext: np.ndarray | None


# ghost = 5*u0 - 10*u1 + 10*u2 - 5*u3 + u4, exact for degree <= 4
_QUINTIC = np.array([5.0, -10.0, 10.0, -5.0, 1.0])


def extend_ghosts(u: ScalarField) -> ExtendedField:
    """Fill one ghost ring by outward quintic extrapolation (x first, then y;
    the y pass over the already-extended rows produces the corner ghosts)."""
    g = u.grid
    if g.bc is BoundaryKind.PERIODIC:
        return ExtendedField(u, None)
    v = u.values
    ext = np.zeros((g.n_x + 2, g.n_y + 2))
    ext[1:-1, 1:-1] = v
    ext[0, 1:-1] = _QUINTIC @ v[0:5, :]
    ext[-1, 1:-1] = _QUINTIC @ v[-1:-6:-1, :]
    ext[:, 0] = ext[:, 1:6] @ _QUINTIC
    ext[:, -1] = ext[:, -2:-7:-1] @ _QUINTIC
    return ExtendedField(u, ext)


def _spacing(u: ScalarField, axis: Axis) -> float:
    return u.grid.dx if axis is Axis.X else u.grid.dy


def _ext_array(u: ScalarField, ext: ExtendedField | None, op: str) -> np.ndarray:
    if ext is None or ext.ext is None:
        raise BoundaryClosureError(
            f"{op} on a Dirichlet grid needs ghost values; pass extend_ghosts(u)"
        )
    if ext.field.grid != u.grid:
        raise FieldMismatchError("ghost extension built for a different grid")
    return ext.ext


def d1_central2(u: ScalarField, axis: Axis) -> ScalarField:
    """Second-order central first derivative along ``axis``."""
    v = u.values
    h = _spacing(u, axis)
    ax = axis.value
    if u.grid.bc is BoundaryKind.PERIODIC:
        out = (np.roll(v, -1, ax) - np.roll(v, 1, ax)) / (2.0 * h)
    else:
        va = v if axis is Axis.X else v.T
        oa = np.zeros_like(va)
        oa[1:-1, :] = (va[2:, :] - va[:-2, :]) / (2.0 * h)
        out = oa if axis is Axis.X else oa.T
    return ScalarField(u.grid, out)


def d2_central2(u: ScalarField, axis: Axis) -> ScalarField:
    """Second-order central second derivative along ``axis``."""
    v = u.values
    h = _spacing(u, axis)
    ax = axis.value
    if u.grid.bc is BoundaryKind.PERIODIC:
        out = (np.roll(v, -1, ax) - 2.0 * v + np.roll(v, 1, ax)) / (h * h)
    else:
        va = v if axis is Axis.X else v.T
        oa = np.zeros_like(va)
        oa[1:-1, :] = (va[2:, :] - 2.0 * va[1:-1, :] + va[:-2, :]) / (h * h)
        out = oa if axis is Axis.X else oa.T
    return ScalarField(u.grid, out)


def d1_five(
    u: ScalarField, axis: Axis, ext: ExtendedField | None = None
) -> ScalarField:
    """Fourth-order five-point first derivative along ``axis``."""
    v = u.values
    h = _spacing(u, axis)
    ax = axis.value
    if u.grid.bc is BoundaryKind.PERIODIC:
        out = (
            -np.roll(v, -2, ax)
            + 8.0 * np.roll(v, -1, ax)
            - 8.0 * np.roll(v, 1, ax)
            + np.roll(v, 2, ax)
        ) / (12.0 * h)
        return ScalarField(u.grid, out)
    E = _ext_array(u, ext, "d1_five")
    Ea = E if axis is Axis.X else E.T
    n, m = (v.shape if axis is Axis.X else v.T.shape)
    oa = np.zeros((n, m))
    oa[1 : n - 1, :] = (
        -Ea[4 : n + 2, 1 : m + 1]
        + 8.0 * Ea[3 : n + 1, 1 : m + 1]
        - 8.0 * Ea[1 : n - 1, 1 : m + 1]
        + Ea[0 : n - 2, 1 : m + 1]
    ) / (12.0 * h)
    return ScalarField(u.grid, oa if axis is Axis.X else oa.T)


def d2_five(
    u: ScalarField, axis: Axis, ext: ExtendedField | None = None
) -> ScalarField:
    """Fourth-order five-point second derivative along ``axis``."""
    v = u.values
    h = _spacing(u, axis)
    ax = axis.value
    if u.grid.bc is BoundaryKind.PERIODIC:
        out = (
            -np.roll(v, -2, ax)
            + 16.0 * np.roll(v, -1, ax)
            - 30.0 * v
            + 16.0 * np.roll(v, 1, ax)
            - np.roll(v, 2, ax)
        ) / (12.0 * h * h)
        return ScalarField(u.grid, out)
    E = _ext_array(u, ext, "d2_five")
    Ea = E if axis is Axis.X else E.T
    n, m = (v.shape if axis is Axis.X else v.T.shape)
    oa = np.zeros((n, m))
    oa[1 : n - 1, :] = (
        -Ea[4 : n + 2, 1 : m + 1]
        + 16.0 * Ea[3 : n + 1, 1 : m + 1]
        - 30.0 * Ea[2 : n, 1 : m + 1]
        + 16.0 * Ea[1 : n - 1, 1 : m + 1]
        - Ea[0 : n - 2, 1 : m + 1]
    ) / (12.0 * h * h)
    return ScalarField(u.grid, oa if axis is Axis.X else oa.T)


def dxy_five(u: ScalarField, ext: ExtendedField | None = None) -> ScalarField:
    """Fourth-order mixed derivative: the five-point x-derivative applied to
    the five-point y-derivative (factored form of the 12-point stencil)."""
    g = u.grid
    if g.bc is BoundaryKind.PERIODIC:
        return d1_five(d1_five(u, Axis.X), Axis.Y)
    E = _ext_array(u, ext, "dxy_five")
    n, m = g.n_x, g.n_y
    # y-derivative over the full extended x-range (ghost rows included),
    # valid at interior y columns only
    W = np.zeros((n + 2, m))
    W[:, 1 : m - 1] = (
        -E[:, 4 : m + 2] + 8.0 * E[:, 3 : m + 1] - 8.0 * E[:, 1 : m - 1] + E[:, 0 : m - 2]
    ) / (12.0 * g.dy)
    out = np.zeros((n, m))
    out[1 : n - 1, :] = (
        -W[4 : n + 2, :] + 8.0 * W[3 : n + 1, :] - 8.0 * W[1 : n - 1, :] + W[0 : n - 2, :]
    ) / (12.0 * g.dx)
    return ScalarField(g, out)
