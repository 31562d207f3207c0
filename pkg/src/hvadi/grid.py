"""Uniform rectangular grids, nodal scalar fields, and error norms.

Two node conventions are used:

* Dirichlet grids include both endpoints, ``dx = (x_max - x_min) / (n_x - 1)``.
* Periodic grids drop the duplicate right/top endpoint (it is identified
  with the left/bottom one), ``dx = (x_max - x_min) / n_x``.

Field values are stored as an ``(n_x, n_y)`` array, ``values[i, j]`` at node
``(x_i, y_j)``; flattened x-fastest order is ``values.flatten(order="F")``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, TextIO

import numpy as np

from .exceptions import FieldMismatchError, GridError, SamplingError


class BoundaryKind(enum.Enum):
    PERIODIC = "periodic"
    DIRICHLET = "dirichlet"


MIN_NODES = 5  # five-point stencil width


@dataclass(frozen=True)
class Grid:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    n_x: int
    n_y: int
    bc: BoundaryKind
    dx: float
    dy: float

    @property
    def xs(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_x)

    @property
    def ys(self) -> np.ndarray:
        return self.y_min + self.dy * np.arange(self.n_y)

    def meshgrid(self) -> tuple[np.ndarray, np.ndarray]:
        """Node coordinates as (n_x, n_y) arrays."""
        return np.meshgrid(self.xs, self.ys, indexing="ij")


@dataclass(frozen=True)
class ScalarField:
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.n_x, self.grid.n_y):
            raise FieldMismatchError(
                f"values shape {v.shape} does not match grid "
                f"({self.grid.n_x}, {self.grid.n_y})"
            )
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def with_values(self, values: np.ndarray) -> "ScalarField":
        return ScalarField(self.grid, values)


def build_grid(
    domain: tuple[float, float, float, float],
    n_x: int,
    n_y: int,
    bc: BoundaryKind,
) -> Grid:
    """Build a uniform grid over ``domain = (x_min, x_max, y_min, y_max)``."""
    x_min, x_max, y_min, y_max = (float(v) for v in domain)
    if not (x_max > x_min and y_max > y_min):
        raise GridError(f"domain bounds must be ordered, got {domain}")
    if n_x < MIN_NODES or n_y < MIN_NODES:
        raise GridError(
            f"need at least {MIN_NODES} nodes per direction, got {n_x}x{n_y}"
        )
    if bc is BoundaryKind.DIRICHLET:
        dx = (x_max - x_min) / (n_x - 1)
        dy = (y_max - y_min) / (n_y - 1)
    else:
        dx = (x_max - x_min) / n_x
        dy = (y_max - y_min) / n_y
    return Grid(x_min, x_max, y_min, y_max, int(n_x), int(n_y), bc, dx, dy)


def sample(grid: Grid, f: Callable[[float, float], float]) -> ScalarField:
    """Evaluate ``f`` at every grid node."""
    X, Y = grid.meshgrid()
    try:
        values = np.asarray(f(X, Y), dtype=float)
        if values.shape != X.shape:
            values = np.broadcast_to(values, X.shape).copy()
    except (TypeError, ValueError):
        # scalar-only callable
        values = np.array(
            [[float(f(x, y)) for y in grid.ys] for x in grid.xs], dtype=float
        )
    if not np.all(np.isfinite(values)):
        i, j = np.argwhere(~np.isfinite(values))[0]
        raise SamplingError(
            f"non-finite sample at node ({grid.xs[i]}, {grid.ys[j]})"
        )
    return ScalarField(grid, values)


def error_norms(a: ScalarField, b: ScalarField) -> tuple[float, float]:
    """(l2, linf) norms of a - b; l2 uses RMS scaling."""
    if a.grid != b.grid:
        raise FieldMismatchError("fields live on different grids")
    diff = a.values - b.values
    linf = float(np.max(np.abs(diff)))
    l2 = float(np.sqrt(np.mean(diff * diff)))
    return l2, linf


def restrict(fine: ScalarField, coarse_grid: Grid) -> ScalarField:
    """Inject fine-grid values onto a nested coarse grid (no interpolation)."""
    fg = fine.grid
    cg = coarse_grid
    same_domain = (
        fg.x_min == cg.x_min
        and fg.x_max == cg.x_max
        and fg.y_min == cg.y_min
        and fg.y_max == cg.y_max
    )
    if fg.bc is not cg.bc or not same_domain:
        raise FieldMismatchError("grids differ in domain or boundary kind")
    rx = _mesh_ratio(fg.n_x, cg.n_x, fg.bc)
    ry = _mesh_ratio(fg.n_y, cg.n_y, fg.bc)
    return ScalarField(cg, fine.values[::rx, ::ry].copy())


def _mesh_ratio(n_fine: int, n_coarse: int, bc: BoundaryKind) -> int:
    if bc is BoundaryKind.DIRICHLET:
        fine_cells, coarse_cells = n_fine - 1, n_coarse - 1
    else:
        fine_cells, coarse_cells = n_fine, n_coarse
    if fine_cells % coarse_cells != 0:
        raise FieldMismatchError(
            f"grids are not nested ({fine_cells} vs {coarse_cells} cells)"
        )
    return fine_cells // coarse_cells


def write_field_csv(
    field: ScalarField, out: TextIO, metadata: dict | None = None
) -> None:
    """Dump a field as `x,y,u` CSV, one node per row, x varying fastest."""
    g = field.grid
    for key, val in (metadata or {}).items():
        out.write(f"# {key} = {val}\n")
    out.write("x,y,u\n")
    xs, ys = g.xs, g.ys
    for j in range(g.n_y):
        for i in range(g.n_x):
            out.write(
                f"{float(xs[i])!r},{float(ys[j])!r},{float(field.values[i, j])!r}\n"
            )
