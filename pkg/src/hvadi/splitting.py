"""Six-stage alternating-direction-implicit time step and integration loop.

One step from t_prev to t_n = t_prev + dt, with F = F0 + F1 + F2 and a
source term S folded into the two full explicit evaluations:

    Y0  = U + dt * [F(U) + S(t_prev)]
    Y1  : Y1 = Y0 + theta*dt*(F1(Y1) - F1(U))          (implicit in x)
    Y2  : Y2 = Y1 + theta*dt*(F2(Y2) - F2(U))          (implicit in y)
    Yt0 = Y0 + sigma*dt * [F(Y2) + S(t_n) - F(U) - S(t_prev)]
    Yt1 : Yt1 = Yt0 + theta*dt*(F1(Yt1) - F1(Y2))      (implicit in x)
    Yt2 : Yt2 = Yt1 + theta*dt*(F2(Yt2) - F2(Y2))      (implicit in y)

Under Dirichlet conditions every intermediate stage approximates u(t_n), so
all stage boundary values (including the explicit stages Y0 and Yt0) are set
to the prescribed boundary data at t_n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError, DivergenceError
from .grid import BoundaryKind, Grid, ScalarField, sample
from .problems import ProblemSpec
from .schemes import (
    SchemeContext,
    SchemeKind,
    build_scheme_context,
    eval_F0,
    eval_F1_explicit,
    eval_F2_explicit,
    implicit_stage_solve,
)
from .stencils import Axis, extend_ghosts


@dataclass(frozen=True)
class SplittingConfig:
    dt: float
    tf: float
    t0: float = 0.0
    theta: float = 0.5
    sigma: float = 0.5

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.tf < self.t0:
            raise ConfigError(f"tf={self.tf} precedes t0={self.t0}")
        if self.theta <= 0.0:
            raise ConfigError(f"theta must be positive, got {self.theta}")
        steps = (self.tf - self.t0) / self.dt
        if abs(steps - round(steps)) > 1e-9 * max(1.0, steps):
            raise ConfigError(
                f"dt={self.dt} does not divide the time window "
                f"[{self.t0}, {self.tf}] into a whole number of steps"
            )

    @property
    def n_steps(self) -> int:
        return round((self.tf - self.t0) / self.dt)


@dataclass(frozen=True)
class StageTrace:
    y0: ScalarField
    y1: ScalarField
    y2: ScalarField
    yt0: ScalarField
    yt1: ScalarField
    yt2: ScalarField


def _sample_at_time(grid: Grid, f, t: float) -> np.ndarray:
    return sample(grid, lambda x, y: f(x, y, t)).values


def _full_f(ctx: SchemeContext, problem: ProblemSpec, u: ScalarField, t: float) -> np.ndarray:
    """F(u) + S(t) as a plain array (zero at Dirichlet boundary nodes)."""
    ext = extend_ghosts(u) if ctx.grid.bc is BoundaryKind.DIRICHLET else None
    out = (
        eval_F0(ctx, u, ext).values
        + eval_F1_explicit(ctx, u, ext).values
        + eval_F2_explicit(ctx, u, ext).values
    )
    if problem.source is not None:
        out = out + _sample_at_time(ctx.grid, problem.source, t)
    return out


def _set_edges(values: np.ndarray, data: np.ndarray) -> None:
    values[0, :] = data[0, :]
    values[-1, :] = data[-1, :]
    values[:, 0] = data[:, 0]
    values[:, -1] = data[:, -1]


def hv_step(
    ctx: SchemeContext,
    problem: ProblemSpec,
    u: ScalarField,
    t_prev: float,
    dt: float,
    cfg: SplittingConfig,
) -> ScalarField:
    """Advance one step; ``ctx`` must have been built with theta*dt = cfg.theta*dt."""
    out, _ = _hv_step_impl(ctx, problem, u, t_prev, dt, cfg, trace=False)
    return out


def hv_step_traced(
    ctx: SchemeContext,
    problem: ProblemSpec,
    u: ScalarField,
    t_prev: float,
    dt: float,
    cfg: SplittingConfig,
) -> tuple[ScalarField, StageTrace]:
    """As `hv_step`, additionally capturing every stage value."""
    return _hv_step_impl(ctx, problem, u, t_prev, dt, cfg, trace=True)


def _hv_step_impl(ctx, problem, u, t_prev, dt, cfg, trace):
    grid = ctx.grid
    t_n = t_prev + dt
    dirichlet = grid.bc is BoundaryKind.DIRICHLET
    bnd = _sample_at_time(grid, problem.boundary, t_n) if dirichlet else None

    fu = _full_f(ctx, problem, u, t_prev)
    y0_vals = u.values + dt * fu
    if dirichlet:
        _set_edges(y0_vals, bnd)
    y0 = ScalarField(grid, y0_vals)

    y1 = implicit_stage_solve(ctx, Axis.X, y0, u, bnd)
    y2 = implicit_stage_solve(ctx, Axis.Y, y1, u, bnd)

    fy2 = _full_f(ctx, problem, y2, t_n)
    yt0_vals = y0.values + cfg.sigma * dt * (fy2 - fu)
    if dirichlet:
        _set_edges(yt0_vals, bnd)
    yt0 = ScalarField(grid, yt0_vals)

    yt1 = implicit_stage_solve(ctx, Axis.X, yt0, y2, bnd)
    yt2 = implicit_stage_solve(ctx, Axis.Y, yt1, y2, bnd)

    tr = StageTrace(y0, y1, y2, yt0, yt1, yt2) if trace else None
    return yt2, tr


def integrate(
    problem: ProblemSpec,
    kind: SchemeKind,
    cfg: SplittingConfig,
    grid: Grid,
    hoc_explicit_via_solve: bool = False,
) -> ScalarField:
    """Integrate from t0 to tf; the stage factorizations are built once and
    reused every step."""
    if grid.bc is not problem.bc:
        raise ConfigError(
            f"grid boundary kind {grid.bc.value} does not match problem "
            f"({problem.bc.value})"
        )
    u = sample(grid, problem.initial)
    if cfg.n_steps == 0:
        return u
    ctx = build_scheme_context(
        kind,
        grid,
        problem.c1,
        problem.c2,
        problem.diffusion,
        cfg.theta * cfg.dt,
        hoc_explicit_via_solve=hoc_explicit_via_solve,
    )
    t = cfg.t0
    for _ in range(cfg.n_steps):
        u = hv_step(ctx, problem, u, t, cfg.dt, cfg)
        t += cfg.dt
    if not np.all(np.isfinite(u.values)):
        raise DivergenceError(
            f"non-finite values after integrating to t={t} with {kind.value}"
        )
    return u
