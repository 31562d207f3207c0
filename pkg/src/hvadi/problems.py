"""Built-in test problems and the problem description type."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .exceptions import ConfigError
from .grid import BoundaryKind
from .schemes import DiffusionTensor

SpaceFn = Callable[[float, float], float]
SpaceTimeFn = Callable[[float, float, float], float]


@dataclass(frozen=True)
class ProblemSpec:
    name: str
    domain: tuple[float, float, float, float]
    c1: float
    c2: float
    diffusion: DiffusionTensor
    bc: BoundaryKind
    initial: SpaceFn
    boundary: Optional[SpaceTimeFn] = None
    source: Optional[SpaceTimeFn] = None
    exact: Optional[SpaceTimeFn] = None

    def __post_init__(self):
        if self.bc is BoundaryKind.DIRICHLET and self.boundary is None:
            raise ConfigError(
                f"problem '{self.name}' uses Dirichlet conditions but has no "
                "boundary function"
            )


def builtin_periodic() -> ProblemSpec:
    """Periodic problem on the unit square: c = (-2, -3),
    D = 0.025*[[1, 2], [2, 4]], u0 = exp(-4(sin^2(pi x) + cos^2(pi y)))."""
    return ProblemSpec(
        name="periodic-hw",
        domain=(0.0, 1.0, 0.0, 1.0),
        c1=-2.0,
        c2=-3.0,
        diffusion=DiffusionTensor(0.025, 0.05, 0.05, 0.1),
        bc=BoundaryKind.PERIODIC,
        initial=lambda x, y: np.exp(
            -4.0 * (np.sin(np.pi * x) ** 2 + np.cos(np.pi * y) ** 2)
        ),
    )


def builtin_dirichlet_manufactured() -> ProblemSpec:
    """Dirichlet problem with manufactured solution
    u(x, y, t) = -sin(pi x) sin(pi y) / (t + 1); the source term makes the
    PDE u_t = div(D grad u) + c . grad u + S hold exactly."""
    c1, c2 = -2.0, -3.0
    diff = DiffusionTensor(0.025, 0.05, 0.05, 0.1)
    pi = np.pi

    def exact(x, y, t):
        return -np.sin(pi * x) * np.sin(pi * y) / (t + 1.0)

    d_sum = diff.d11 + diff.d22
    d_mix = diff.mixed

    def source(x, y, t):
        sx, cx = np.sin(pi * x), np.cos(pi * x)
        sy, cy = np.sin(pi * y), np.cos(pi * y)
        big_t = t + 1.0
        return (
            sx * sy / big_t**2
            - d_sum * pi**2 * sx * sy / big_t
            + d_mix * pi**2 * cx * cy / big_t
            + pi * (c1 * cx * sy + c2 * sx * cy) / big_t
        )

    return ProblemSpec(
        name="dirichlet-manufactured",
        domain=(0.0, 1.0, 0.0, 1.0),
        c1=c1,
        c2=c2,
        diffusion=diff,
        bc=BoundaryKind.DIRICHLET,
        initial=lambda x, y: exact(x, y, 0.0),
        boundary=exact,
        source=source,
        exact=exact,
    )


_REGISTRY: dict[str, Callable[[], ProblemSpec]] = {
    "periodic-hw": builtin_periodic,
    "dirichlet-manufactured": builtin_dirichlet_manufactured,
}


def available_problems() -> tuple[str, ...]:
    return tuple(sorted(_REGISTRY))


def get_problem(name: str) -> ProblemSpec:
    try:
        return _REGISTRY[name]()
    except KeyError:
        raise ConfigError(
            f"unknown problem '{name}'; available: {', '.join(available_problems())}"
        ) from None


def pde_residual(problem: ProblemSpec, x: float, y: float, t: float, h: float = 2e-3) -> float:
    """u_t - div(D grad u) - c . grad u - S at one point, with the derivatives
    of the exact solution probed by fourth-order central differences.

    Used to validate manufactured sources; requires ``exact``.
    """
    if problem.exact is None:
        raise ConfigError(f"problem '{problem.name}' has no exact solution")
    u = problem.exact
    d = problem.diffusion

    def d1(f, v):
        return (-f(2 * v) + 8 * f(v) - 8 * f(-v) + f(-2 * v)) / (12.0 * h)

    def d2(f, v):
        return (
            -f(2 * v) + 16 * f(v) - 30 * f(0.0) + 16 * f(-v) - f(-2 * v)
        ) / (12.0 * h * h)

    u_t = d1(lambda s: u(x, y, t + s), h)
    u_x = d1(lambda s: u(x + s, y, t), h)
    u_y = d1(lambda s: u(x, y + s, t), h)
    u_xx = d2(lambda s: u(x + s, y, t), h)
    u_yy = d2(lambda s: u(x, y + s, t), h)
    u_xy = d1(lambda s: d1(lambda r: u(x + r, y + s, t), h), h)
    div = d.d11 * u_xx + d.mixed * u_xy + d.d22 * u_yy
    conv = problem.c1 * u_x + problem.c2 * u_y
    s = problem.source(x, y, t) if problem.source is not None else 0.0
    return float(u_t - div - conv - s)
