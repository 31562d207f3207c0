"""Spatial discretizations: CDS (second order), HO5 (fourth-order five-point)
and HOC (fourth-order compact).

Each scheme provides explicit evaluations of the operator split

    F0(u) = (d12 + d21) u_xy
    F1(u) = c1 u_x + d11 u_xx
    F2(u) = c2 u_y + d22 u_yy

and a factorized banded stage matrix per direction for the implicit solves:
``B - theta*dt*A`` for HOC (where A u = B g discretizes F1(u) = g on a
compact stencil) and ``I - theta*dt*F_h`` for CDS/HO5.  Periodic grids give
cyclic band kinds; under Dirichlet conditions the first/last rows of the
stage matrix are replaced by identity rows (boundary values are prescribed).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import stencils
from .exceptions import (
    BoundaryClosureError,
    InvalidCoefficientsError,
    UnsupportedSchemeError,
)
from .grid import BoundaryKind, Grid, ScalarField
from .linsolve import BandedLineMatrix, BandKind, LineFactorization, factorize, solve_batch
from .stencils import Axis, ExtendedField


class SchemeKind(enum.Enum):
    CDS = "cds"
    HO5 = "ho5"
    HOC = "hoc"


@dataclass(frozen=True)
class DiffusionTensor:
    d11: float
    d12: float
    d21: float
    d22: float

    def __post_init__(self):
        if not (self.d11 > 0.0 and self.d22 > 0.0):
            raise InvalidCoefficientsError(
                f"diagonal diffusion must be positive, got d11={self.d11}, d22={self.d22}"
            )
        sym_off = 0.5 * (self.d12 + self.d21)
        det = self.d11 * self.d22 - sym_off * sym_off
        scale = max(abs(v) for v in (self.d11, self.d12, self.d21, self.d22))
        if det < -1e-14 * scale * scale:
            raise InvalidCoefficientsError(
                "symmetric part of the diffusion tensor is indefinite"
            )

    @property
    def mixed(self) -> float:
        return self.d12 + self.d21


def _const_bands(n: int, weights: dict[int, float]) -> dict[int, np.ndarray]:
    return {k: np.full(n, w) for k, w in weights.items()}


def _cds_f_weights(h: float, c: float, d: float) -> dict[int, float]:
    """c*delta_0 + d*delta^2 on a 3-point stencil."""
    return {
        -1: d / h**2 - c / (2.0 * h),
        0: -2.0 * d / h**2,
        1: d / h**2 + c / (2.0 * h),
    }


def _five_f_weights(h: float, c: float, d: float) -> dict[int, float]:
    """Fourth-order five-point discretization of c*u' + d*u''."""
    return {
        -2: c / (12.0 * h) - d / (12.0 * h**2),
        -1: -8.0 * c / (12.0 * h) + 16.0 * d / (12.0 * h**2),
        0: -30.0 * d / (12.0 * h**2),
        1: 8.0 * c / (12.0 * h) + 16.0 * d / (12.0 * h**2),
        2: -c / (12.0 * h) - d / (12.0 * h**2),
    }


def _hoc_a_weights(h: float, c: float, d: float) -> dict[int, float]:
    """(d + h^2 c^2 / (12 d)) * delta^2 + c * delta_0."""
    k = d + h * h * c * c / (12.0 * d)
    return {
        -1: k / h**2 - c / (2.0 * h),
        0: -2.0 * k / h**2,
        1: k / h**2 + c / (2.0 * h),
    }


def _hoc_b_weights(h: float, c: float, d: float) -> dict[int, float]:
    """I + (h^2/12) * (c/d * delta_0 + delta^2)."""
    return {
        -1: (1.0 - c * h / (2.0 * d)) / 12.0,
        0: 10.0 / 12.0,
        1: (1.0 + c * h / (2.0 * d)) / 12.0,
    }


def _combine(
    n: int, *terms: tuple[float, dict[int, float]]
) -> dict[int, np.ndarray]:
    weights: dict[int, float] = {}
    for coeff, w in terms:
        for k, v in w.items():
            weights[k] = weights.get(k, 0.0) + coeff * v
    return _const_bands(n, weights)


def _identity_rows(bands: dict[int, np.ndarray], rows: tuple[int, ...]) -> None:
    for k, b in bands.items():
        for r in rows:
            b[r] = 1.0 if k == 0 else 0.0


def apply_bands(
    bands: dict[int, np.ndarray], values: np.ndarray, axis: Axis, cyclic: bool
) -> np.ndarray:
    """Matrix action of a banded line operator on every line along ``axis``.

    Non-cyclic application leaves rows whose stencil would leave the index
    range untouched beyond in-range contributions (boundary rows are always
    overwritten by the caller).
    """
    va = values if axis is Axis.X else values.T
    n = va.shape[0]
    out = np.zeros_like(va)
    for k, w in bands.items():
        if cyclic:
            out += w[:, None] * np.roll(va, -k, axis=0)
        else:
            lo, hi = max(0, -k), n - max(0, k)
            out[lo:hi] += w[lo:hi, None] * va[lo + k : hi + k]
    return out if axis is Axis.X else out.T


@dataclass(frozen=True)
class AxisOperators:
    stage: LineFactorization
    # operator bands used for right-hand-side assembly (constant rows,
    # no boundary replacement)
    a_bands: dict[int, np.ndarray] | None  # HOC only
    b_bands: dict[int, np.ndarray] | None  # HOC only
    f_bands: dict[int, np.ndarray] | None  # CDS / HO5 only
    b_fact: LineFactorization | None  # HOC B^{-1}A explicit policy


@dataclass(frozen=True)
class SchemeContext:
    kind: SchemeKind
    grid: Grid
    c1: float
    c2: float
    diffusion: DiffusionTensor
    theta_dt: float
    ops: dict[Axis, AxisOperators]
    hoc_explicit_via_solve: bool = False

    @property
    def cyclic(self) -> bool:
        return self.grid.bc is BoundaryKind.PERIODIC


def build_scheme_context(
    kind: SchemeKind,
    grid: Grid,
    c1: float,
    c2: float,
    diffusion: DiffusionTensor,
    theta_dt: float,
    hoc_explicit_via_solve: bool = False,
) -> SchemeContext:
    """Assemble and factorize the per-direction stage matrices."""
    if theta_dt < 0.0:
        raise InvalidCoefficientsError(f"theta*dt must be >= 0, got {theta_dt}")
    dirichlet = grid.bc is BoundaryKind.DIRICHLET
    if kind is SchemeKind.HO5 and dirichlet:
        raise UnsupportedSchemeError(
            "HO5 under Dirichlet boundary conditions is not supported "
            "(wide implicit stencil has no boundary closure); use HOC or CDS"
        )
    if hoc_explicit_via_solve and (kind is not SchemeKind.HOC or dirichlet):
        raise UnsupportedSchemeError(
            "the B^{-1}A explicit policy applies to periodic HOC only"
        )

    compact_kind = BandKind.TRI if dirichlet else BandKind.CYCLIC_TRI
    wide_kind = BandKind.PENTA if dirichlet else BandKind.CYCLIC_PENTA

    ops: dict[Axis, AxisOperators] = {}
    per_axis = {
        Axis.X: (grid.n_x, grid.dx, c1, diffusion.d11),
        Axis.Y: (grid.n_y, grid.dy, c2, diffusion.d22),
    }
    for axis, (n, h, c, d) in per_axis.items():
        a_bands = b_bands = f_bands = None
        b_fact = None
        if kind is SchemeKind.HOC:
            a_bands = _const_bands(n, _hoc_a_weights(h, c, d))
            b_bands = _const_bands(n, _hoc_b_weights(h, c, d))
            stage_bands = _combine(
                n, (1.0, _hoc_b_weights(h, c, d)), (-theta_dt, _hoc_a_weights(h, c, d))
            )
            mat_kind = compact_kind
            if hoc_explicit_via_solve:
                b_fact = factorize(
                    BandedLineMatrix(mat_kind, n, _const_bands(n, _hoc_b_weights(h, c, d)))
                )
        else:
            w = _cds_f_weights(h, c, d) if kind is SchemeKind.CDS else _five_f_weights(h, c, d)
            f_bands = _const_bands(n, w)
            stage_bands = _combine(n, (1.0, {0: 1.0}), (-theta_dt, w))
            mat_kind = compact_kind if kind is SchemeKind.CDS else wide_kind
        if dirichlet:
            _identity_rows(stage_bands, (0, n - 1))
        stage = factorize(BandedLineMatrix(mat_kind, n, stage_bands))
        ops[axis] = AxisOperators(stage, a_bands, b_bands, f_bands, b_fact)

    return SchemeContext(
        kind, grid, c1, c2, diffusion, theta_dt, ops, hoc_explicit_via_solve
    )


def _require_dirichlet_ext(
    ctx: SchemeContext, u: ScalarField, ext: ExtendedField | None
) -> ExtendedField | None:
    if ctx.grid.bc is BoundaryKind.PERIODIC:
        return None
    if ext is None:
        raise BoundaryClosureError(
            "Dirichlet evaluation of a wide stencil needs extend_ghosts(u)"
        )
    return ext


def eval_F0(
    ctx: SchemeContext, u: ScalarField, ext: ExtendedField | None = None
) -> ScalarField:
    """Mixed-derivative term (d12 + d21) * u_xy."""
    pre = ctx.diffusion.mixed
    if pre == 0.0:
        return ScalarField(u.grid, np.zeros_like(u.values))
    if ctx.kind is SchemeKind.CDS:
        mixed = stencils.d1_central2(stencils.d1_central2(u, Axis.X), Axis.Y)
    else:
        mixed = stencils.dxy_five(u, _require_dirichlet_ext(ctx, u, ext))
    return ScalarField(u.grid, pre * mixed.values)


def _eval_f_axis(
    ctx: SchemeContext,
    u: ScalarField,
    axis: Axis,
    ext: ExtendedField | None,
) -> ScalarField:
    c, d = (ctx.c1, ctx.diffusion.d11) if axis is Axis.X else (ctx.c2, ctx.diffusion.d22)
    if ctx.kind is SchemeKind.CDS:
        out = (
            c * stencils.d1_central2(u, axis).values
            + d * stencils.d2_central2(u, axis).values
        )
    elif ctx.kind is SchemeKind.HOC and ctx.hoc_explicit_via_solve:
        ax = ctx.ops[axis]
        rhs = apply_bands(ax.a_bands, u.values, axis, ctx.cyclic)
        return solve_batch(ax.b_fact, ScalarField(u.grid, rhs), axis)
    else:
        e = _require_dirichlet_ext(ctx, u, ext)
        out = (
            c * stencils.d1_five(u, axis, e).values
            + d * stencils.d2_five(u, axis, e).values
        )
    return ScalarField(u.grid, out)


def eval_F1_explicit(
    ctx: SchemeContext, u: ScalarField, ext: ExtendedField | None = None
) -> ScalarField:
    """Explicit evaluation of F1(u) = c1 u_x + d11 u_xx."""
    return _eval_f_axis(ctx, u, Axis.X, ext)


def eval_F2_explicit(
    ctx: SchemeContext, u: ScalarField, ext: ExtendedField | None = None
) -> ScalarField:
    """Explicit evaluation of F2(u) = c2 u_y + d22 u_yy."""
    return _eval_f_axis(ctx, u, Axis.Y, ext)


def implicit_stage_solve(
    ctx: SchemeContext,
    axis: Axis,
    y_in: ScalarField,
    u_ref: ScalarField,
    boundary: np.ndarray | None = None,
) -> ScalarField:
    """Solve Y = y_in + theta*dt*(F_axis(Y) - F_axis(u_ref)) line by line.

    Under Dirichlet conditions ``boundary`` must hold the prescribed values
    at the stage's target time (only its edge entries are read).
    """
    ax = ctx.ops[axis]
    if ctx.kind is SchemeKind.HOC:
        rhs = apply_bands(ax.b_bands, y_in.values, axis, ctx.cyclic)
        if ctx.theta_dt != 0.0:
            rhs -= ctx.theta_dt * apply_bands(ax.a_bands, u_ref.values, axis, ctx.cyclic)
    else:
        rhs = y_in.values.copy()
        if ctx.theta_dt != 0.0:
            rhs -= ctx.theta_dt * apply_bands(ax.f_bands, u_ref.values, axis, ctx.cyclic)
    if ctx.grid.bc is BoundaryKind.DIRICHLET:
        if boundary is None:
            raise BoundaryClosureError(
                "Dirichlet stage solve needs prescribed boundary values"
            )
        if axis is Axis.X:
            rhs[0, :] = boundary[0, :]
            rhs[-1, :] = boundary[-1, :]
        else:
            rhs[:, 0] = boundary[:, 0]
            rhs[:, -1] = boundary[:, -1]
    return solve_batch(ax.stage, ScalarField(ctx.grid, rhs), axis)
