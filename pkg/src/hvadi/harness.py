"""Convergence-study protocols: error tables, reference solutions, and
log-log rate fitting.

Time studies fix the mesh width and sweep the time step; errors are measured
against a same-grid run with a finer reference step.  Space studies fix the
parabolic mesh ratio mu = dt / h^2 and sweep the mesh width; errors are
measured against a run on a finer nested grid (restricted by nodal
injection), or optionally against the exact solution when one is known.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, TextIO

import numpy as np

from .exceptions import ConfigError
from .grid import BoundaryKind, Grid, ScalarField, build_grid, error_norms, restrict, sample
from .problems import ProblemSpec, get_problem
from .schemes import SchemeKind
from .splitting import SplittingConfig, integrate

TF_DEFAULT = 0.1
DT_SWEEP_DIVISORS = (30, 40, 50, 60, 70, 80, 90)
DT_REF_DIVISOR = 100
H_SWEEP_DEFAULT = (0.1, 0.05, 0.025, 0.0125)
H_REF_DEFAULT = 0.00625

Integrator = Callable[[ProblemSpec, SchemeKind, SplittingConfig, Grid], ScalarField]


def _check_divides(dt: float, t0: float, tf: float, what: str) -> int:
    steps = (tf - t0) / dt
    if abs(steps - round(steps)) > 1e-9 * max(1.0, steps):
        raise ConfigError(f"{what}={dt} does not divide the interval [{t0}, {tf}]")
    return round(steps)


def grid_for(problem: ProblemSpec, h: float) -> Grid:
    """Uniform grid with mesh width h in both directions for a problem's domain."""
    x_min, x_max, y_min, y_max = problem.domain
    spans = (x_max - x_min, y_max - y_min)
    counts = []
    for span in spans:
        cells = span / h
        if abs(cells - round(cells)) > 1e-9 * max(1.0, cells):
            raise ConfigError(f"h={h} does not tile a span of {span}")
        cells = round(cells)
        counts.append(cells if problem.bc is BoundaryKind.PERIODIC else cells + 1)
    return build_grid(problem.domain, counts[0], counts[1], problem.bc)


@dataclass(frozen=True)
class TimeStudyConfig:
    problem: str
    schemes: tuple[SchemeKind, ...]
    h: float
    theta: float = 0.5
    sigma: float = 0.5
    tf: float = TF_DEFAULT
    t0: float = 0.0
    dts: tuple[float, ...] = ()
    dt_ref: float = 0.0

    def __post_init__(self):
        if not self.schemes:
            raise ConfigError("no schemes requested")
        dts = tuple(self.dts) or tuple(
            (self.tf - self.t0) / k for k in DT_SWEEP_DIVISORS
        )
        dt_ref = self.dt_ref or (self.tf - self.t0) / DT_REF_DIVISOR
        if dt_ref >= min(dts):
            raise ConfigError(
                f"reference step {dt_ref} must be smaller than every sweep step"
            )
        for dt in (*dts, dt_ref):
            _check_divides(dt, self.t0, self.tf, "dt")
        object.__setattr__(self, "dts", dts)
        object.__setattr__(self, "dt_ref", dt_ref)


@dataclass(frozen=True)
class SpaceStudyConfig:
    problem: str
    schemes: tuple[SchemeKind, ...]
    mu: float
    theta: float = 0.5
    sigma: float = 0.5
    tf: float = TF_DEFAULT
    t0: float = 0.0
    hs: tuple[float, ...] = H_SWEEP_DEFAULT
    h_ref: float = H_REF_DEFAULT
    exact_errors: bool = False

    def __post_init__(self):
        if not self.schemes:
            raise ConfigError("no schemes requested")
        if self.mu <= 0.0:
            raise ConfigError(f"mu must be positive, got {self.mu}")
        hs = tuple(self.hs)
        object.__setattr__(self, "hs", hs)
        sweep = hs if self.exact_errors else (*hs, self.h_ref)
        for h in sweep:
            _check_divides(self.mu * h * h, self.t0, self.tf, "dt=mu*h^2")
            if not self.exact_errors:
                ratio = h / self.h_ref
                if abs(ratio - round(ratio)) > 1e-9 or round(ratio) < 1:
                    raise ConfigError(
                        f"sweep width {h} is not an integer multiple of "
                        f"reference width {self.h_ref}"
                    )


@dataclass(frozen=True)
class ErrorRow:
    scheme: SchemeKind
    bc: BoundaryKind
    theta: float
    mu: Optional[float]  # None for time studies
    h: float
    dt: float
    steps: int
    l2_error: float
    linf_error: float


@dataclass(frozen=True)
class RateFit:
    scheme: SchemeKind
    norm: str  # "l2" or "linf"
    parameter: str  # "dt" or "h"
    rate: float
    constant: float


@dataclass
class ConvergenceReport:
    rows: list[ErrorRow] = field(default_factory=list)
    rates: list[RateFit] = field(default_factory=list)
    # successive pairwise rates per (scheme, norm), diagnostics only
    pairwise: dict[tuple[SchemeKind, str], tuple[float, ...]] = field(default_factory=dict)

    def rate(self, scheme: SchemeKind, norm: str) -> float:
        for r in self.rates:
            if r.scheme is scheme and r.norm == norm:
                return r.rate
        raise KeyError((scheme, norm))

    def write_errors_csv(self, out: TextIO) -> None:
        out.write("scheme,bc,theta,mu,h,dt,steps,l2_error,linf_error\n")
        for r in self.rows:
            mu = "" if r.mu is None else repr(float(r.mu))
            out.write(
                f"{r.scheme.value},{r.bc.value},{r.theta!r},{mu},{r.h!r},"
                f"{r.dt!r},{r.steps},{r.l2_error!r},{r.linf_error!r}\n"
            )

    def write_rates_csv(self, out: TextIO) -> None:
        out.write("scheme,norm,parameter,rate,constant\n")
        for r in self.rates:
            out.write(
                f"{r.scheme.value},{r.norm},{r.parameter},{r.rate!r},{r.constant!r}\n"
            )

    def write_plot_data(self, out: TextIO) -> None:
        """log10 resolution vs log10 errors, one block per scheme."""
        schemes = []
        for r in self.rows:
            if r.scheme not in schemes:
                schemes.append(r.scheme)
        param_is_dt = self.rows and self.rows[0].mu is None
        for s in schemes:
            out.write(f"# scheme = {s.value}\n")
            out.write("log10_resolution,log10_l2,log10_linf\n")
            for r in self.rows:
                if r.scheme is not s:
                    continue
                res = r.dt if param_is_dt else r.h
                out.write(
                    f"{float(np.log10(res))!r},{float(np.log10(r.l2_error))!r},"
                    f"{float(np.log10(r.linf_error))!r}\n"
                )


def fit_rate(points: Sequence[tuple[float, float]]) -> tuple[float, float]:
    """Least-squares line through (log resolution, log error); returns
    (slope, constant) of error ~ constant * resolution**slope."""
    kept = []
    for res, err in points:
        if res <= 0.0:
            raise ConfigError(f"nonpositive resolution {res}")
        if err < 0.0:
            raise ConfigError(f"negative error {err}")
        if err == 0.0:
            warnings.warn(f"excluding exact-match point (resolution={res}) from rate fit")
            continue
        kept.append((res, err))
    if len(kept) < 2:
        raise ConfigError(f"need at least 2 usable points, have {len(kept)}")
    log_res = np.log([p[0] for p in kept])
    log_err = np.log([p[1] for p in kept])
    slope, intercept = np.polyfit(log_res, log_err, 1)
    return float(slope), float(np.exp(intercept))


def _pairwise_rates(points: list[tuple[float, float]]) -> tuple[float, ...]:
    out = []
    for (r0, e0), (r1, e1) in zip(points, points[1:]):
        if e0 > 0.0 and e1 > 0.0 and r0 != r1:
            out.append(float(np.log(e1 / e0) / np.log(r1 / r0)))
        else:
            out.append(float("nan"))
    return tuple(out)


def _fit_both_norms(
    report: ConvergenceReport,
    scheme: SchemeKind,
    parameter: str,
    points_l2: list[tuple[float, float]],
    points_linf: list[tuple[float, float]],
) -> None:
    for norm, points in (("l2", points_l2), ("linf", points_linf)):
        slope, const = fit_rate(points)
        report.rates.append(RateFit(scheme, norm, parameter, slope, const))
        report.pairwise[(scheme, norm)] = _pairwise_rates(points)


def time_convergence_study(
    cfg: TimeStudyConfig, integrate_fn: Integrator = integrate
) -> ConvergenceReport:
    """Errors vs a same-grid reference run as the time step is refined."""
    problem = get_problem(cfg.problem)
    grid = grid_for(problem, cfg.h)
    report = ConvergenceReport()
    for scheme in cfg.schemes:
        ref = integrate_fn(
            problem,
            scheme,
            SplittingConfig(cfg.dt_ref, cfg.tf, cfg.t0, cfg.theta, cfg.sigma),
            grid,
        )
        pts_l2: list[tuple[float, float]] = []
        pts_linf: list[tuple[float, float]] = []
        for dt in sorted(cfg.dts):
            u = integrate_fn(
                problem,
                scheme,
                SplittingConfig(dt, cfg.tf, cfg.t0, cfg.theta, cfg.sigma),
                grid,
            )
            l2, linf = error_norms(u, ref)
            steps = _check_divides(dt, cfg.t0, cfg.tf, "dt")
            report.rows.append(
                ErrorRow(scheme, problem.bc, cfg.theta, None, cfg.h, dt, steps, l2, linf)
            )
            pts_l2.append((dt, l2))
            pts_linf.append((dt, linf))
        _fit_both_norms(report, scheme, "dt", pts_l2, pts_linf)
    return report


def space_convergence_study(
    cfg: SpaceStudyConfig, integrate_fn: Integrator = integrate
) -> ConvergenceReport:
    """Errors under mesh refinement at fixed parabolic ratio mu = dt/h^2."""
    problem = get_problem(cfg.problem)
    if cfg.exact_errors and problem.exact is None:
        raise ConfigError(f"problem '{cfg.problem}' has no exact solution")
    report = ConvergenceReport()
    for scheme in cfg.schemes:
        ref = None
        if not cfg.exact_errors:
            ref_grid = grid_for(problem, cfg.h_ref)
            dt_ref = cfg.mu * cfg.h_ref * cfg.h_ref
            ref = integrate_fn(
                problem,
                scheme,
                SplittingConfig(dt_ref, cfg.tf, cfg.t0, cfg.theta, cfg.sigma),
                ref_grid,
            )
        pts_l2: list[tuple[float, float]] = []
        pts_linf: list[tuple[float, float]] = []
        for h in sorted(cfg.hs, reverse=True):
            grid = grid_for(problem, h)
            dt = cfg.mu * h * h
            u = integrate_fn(
                problem,
                scheme,
                SplittingConfig(dt, cfg.tf, cfg.t0, cfg.theta, cfg.sigma),
                grid,
            )
            if cfg.exact_errors:
                target = sample(grid, lambda x, y: problem.exact(x, y, cfg.tf))
            else:
                target = restrict(ref, grid)
            l2, linf = error_norms(u, target)
            steps = _check_divides(dt, cfg.t0, cfg.tf, "dt")
            report.rows.append(
                ErrorRow(scheme, problem.bc, cfg.theta, cfg.mu, h, dt, steps, l2, linf)
            )
            pts_l2.append((h, l2))
            pts_linf.append((h, linf))
        _fit_both_norms(report, scheme, "h", pts_l2, pts_linf)
    return report
