"""Direct solvers for (cyclic) tridiagonal and pentadiagonal line systems.

Matrices are stored band-wise: ``bands[k][i] = A[i, (i + k) % n]`` for
diagonal offset ``k``.  Factorizations use LU without pivoting (the stage
matrices this library produces are diagonally dominant); a pivot-magnitude
guard turns breakdown into a `SingularMatrixError`.  Cyclic variants are
solved by a low-rank Woodbury correction of the open-band solve (rank 1 for
tridiagonal, rank 2 for pentadiagonal), keeping the cost O(n) per line.

The triangular sweeps are batched over many right-hand sides and JIT-compiled
with numba (one grid line per column).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .exceptions import ShapeError, SingularMatrixError
from .grid import ScalarField

PIVOT_RTOL = 1e-14


class BandKind(enum.Enum):
    TRI = "tri"
    PENTA = "penta"
    CYCLIC_TRI = "cyclic_tri"
    CYCLIC_PENTA = "cyclic_penta"

    @property
    def cyclic(self) -> bool:
        return self in (BandKind.CYCLIC_TRI, BandKind.CYCLIC_PENTA)

    @property
    def offsets(self) -> tuple[int, ...]:
        if self in (BandKind.TRI, BandKind.CYCLIC_TRI):
            return (-1, 0, 1)
        return (-2, -1, 0, 1, 2)


@dataclass(frozen=True)
class BandedLineMatrix:
    kind: BandKind
    n: int
    bands: dict[int, np.ndarray]

    def __post_init__(self):
        if self.n < 5:
            raise ShapeError(f"line length must be >= 5, got {self.n}")
        clean = {}
        for k in self.kind.offsets:
            b = np.asarray(self.bands.get(k, np.zeros(self.n)), dtype=float)
            if b.shape != (self.n,):
                raise ShapeError(f"band {k} has shape {b.shape}, expected ({self.n},)")
            clean[k] = b
        object.__setattr__(self, "bands", clean)

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        idx = np.arange(self.n)
        for k, b in self.bands.items():
            if self.kind.cyclic:
                a[idx, (idx + k) % self.n] += b
            else:
                rows = idx[max(0, -k) : self.n - max(0, k)]
                a[rows, rows + k] += b[rows]
        return a


@dataclass(frozen=True)
class LineFactorization:
    kind: BandKind
    n: int
    factors: tuple[np.ndarray, ...]
    # Woodbury data for cyclic kinds: Z = core^{-1} U and the small
    # capacitance matrix (I + V^T Z), with V columns e_0 + e_{n-1} (tri)
    # or e_0 + e_{n-2}, e_1 + e_{n-1} (penta)
    correction: tuple[np.ndarray, np.ndarray] | None = field(default=None)


@njit(cache=True)
def _tri_factor(dl, d, du, guard):
    n = d.shape[0]
    low = np.empty(n)
    piv = np.empty(n)
    low[0] = 0.0
    piv[0] = d[0]
    bad = -1
    if abs(piv[0]) < guard:
        return low, piv, 0
    for i in range(1, n):
        low[i] = dl[i] / piv[i - 1]
        piv[i] = d[i] - low[i] * du[i - 1]
        if abs(piv[i]) < guard:
            bad = i
            break
    return low, piv, bad


@njit(cache=True)
def _tri_solve(low, piv, du, b, out):
    n, m = b.shape
    for j in range(m):
        out[0, j] = b[0, j]
    for i in range(1, n):
        for j in range(m):
            out[i, j] = b[i, j] - low[i] * out[i - 1, j]
    for j in range(m):
        out[n - 1, j] /= piv[n - 1]
    for i in range(n - 2, -1, -1):
        for j in range(m):
            out[i, j] = (out[i, j] - du[i] * out[i + 1, j]) / piv[i]


@njit(cache=True)
def _penta_factor(e, a, d, c, f, guard):
    n = d.shape[0]
    m1 = np.zeros(n)
    m2 = np.zeros(n)
    piv = np.empty(n)
    cu = np.empty(n)
    piv[0] = d[0]
    cu[0] = c[0]
    if abs(piv[0]) < guard:
        return m1, m2, piv, cu, 0
    m1[1] = a[1] / piv[0]
    piv[1] = d[1] - m1[1] * cu[0]
    cu[1] = c[1] - m1[1] * f[0]
    if abs(piv[1]) < guard:
        return m1, m2, piv, cu, 1
    bad = -1
    for i in range(2, n):
        m2[i] = e[i] / piv[i - 2]
        ai = a[i] - m2[i] * cu[i - 2]
        m1[i] = ai / piv[i - 1]
        piv[i] = d[i] - m2[i] * f[i - 2] - m1[i] * cu[i - 1]
        cu[i] = c[i] - m1[i] * f[i - 1]
        if abs(piv[i]) < guard:
            bad = i
            break
    return m1, m2, piv, cu, bad


@njit(cache=True)
def _penta_solve(m1, m2, piv, cu, f, b, out):
    n, m = b.shape
    for j in range(m):
        out[0, j] = b[0, j]
        out[1, j] = b[1, j] - m1[1] * out[0, j]
    for i in range(2, n):
        for j in range(m):
            out[i, j] = b[i, j] - m1[i] * out[i - 1, j] - m2[i] * out[i - 2, j]
    for j in range(m):
        out[n - 1, j] /= piv[n - 1]
        out[n - 2, j] = (out[n - 2, j] - cu[n - 2] * out[n - 1, j]) / piv[n - 2]
    for i in range(n - 3, -1, -1):
        for j in range(m):
            out[i, j] = (
                out[i, j] - cu[i] * out[i + 1, j] - f[i] * out[i + 2, j]
            ) / piv[i]


def _max_band(m: BandedLineMatrix) -> float:
    return max(float(np.max(np.abs(b))) for b in m.bands.values())


def _factor_tri_core(dl, d, du, guard) -> tuple[np.ndarray, ...]:
    low, piv, bad = _tri_factor(
        np.ascontiguousarray(dl), np.ascontiguousarray(d), np.ascontiguousarray(du), guard
    )
    if bad >= 0:
        raise SingularMatrixError(bad)
    return (low, piv, np.ascontiguousarray(du))


def _factor_penta_core(e, a, d, c, f, guard) -> tuple[np.ndarray, ...]:
    m1, m2, piv, cu, bad = _penta_factor(
        *(np.ascontiguousarray(v) for v in (e, a, d, c, f)), guard
    )
    if bad >= 0:
        raise SingularMatrixError(bad)
    return (m1, m2, piv, cu, np.ascontiguousarray(f))


def _core_solve(kind: BandKind, factors, rhs: np.ndarray) -> np.ndarray:
    out = np.empty_like(rhs)
    if kind in (BandKind.TRI, BandKind.CYCLIC_TRI):
        _tri_solve(*factors, rhs, out)
    else:
        _penta_solve(*factors, rhs, out)
    return out


def factorize(m: BandedLineMatrix) -> LineFactorization:
    """LU-factorize once; the result is reused for every solve."""
    n = m.n
    guard = PIVOT_RTOL * _max_band(m)
    if m.kind is BandKind.TRI:
        factors = _factor_tri_core(m.bands[-1], m.bands[0], m.bands[1], guard)
        return LineFactorization(m.kind, n, factors)
    if m.kind is BandKind.PENTA:
        factors = _factor_penta_core(
            m.bands[-2], m.bands[-1], m.bands[0], m.bands[1], m.bands[2], guard
        )
        return LineFactorization(m.kind, n, factors)

    if m.kind is BandKind.CYCLIC_TRI:
        beta = m.bands[-1][0]  # A[0, n-1]
        alpha = m.bands[1][n - 1]  # A[n-1, 0]
        d = m.bands[0].copy()
        d[0] -= beta
        d[n - 1] -= alpha
        factors = _factor_tri_core(m.bands[-1], d, m.bands[1], guard)
        U = np.zeros((n, 1))
        U[0, 0] = beta
        U[n - 1, 0] = alpha
        V = np.zeros((n, 1))
        V[0, 0] = 1.0
        V[n - 1, 0] = 1.0
    else:
        # wrap entries: rows 0,1 reach columns n-2,n-1; rows n-2,n-1 reach 0,1
        t12 = np.array(
            [[m.bands[-2][0], m.bands[-1][0]], [0.0, m.bands[-2][1]]]
        )
        t21 = np.array(
            [[m.bands[2][n - 2], 0.0], [m.bands[1][n - 1], m.bands[2][n - 1]]]
        )
        d = m.bands[0].copy()
        a = m.bands[-1].copy()
        c = m.bands[1].copy()
        # subtract U V^T inside the band: top-left and bottom-right 2x2 blocks
        d[0] -= t12[0, 0]
        c[0] -= t12[0, 1]
        a[1] -= t12[1, 0]
        d[1] -= t12[1, 1]
        d[n - 2] -= t21[0, 0]
        c[n - 2] -= t21[0, 1]
        a[n - 1] -= t21[1, 0]
        d[n - 1] -= t21[1, 1]
        factors = _factor_penta_core(m.bands[-2], a, d, c, m.bands[2], guard)
        U = np.zeros((n, 2))
        U[0:2, :] = t12
        U[n - 2 :, :] = t21
        V = np.zeros((n, 2))
        V[0, 0] = V[1, 1] = 1.0
        V[n - 2, 0] = V[n - 1, 1] = 1.0

    Z = _core_solve(m.kind, factors, np.ascontiguousarray(U))
    cap = np.eye(U.shape[1]) + V.T @ Z
    if abs(np.linalg.det(cap)) < PIVOT_RTOL * max(1.0, _max_band(m)):
        raise SingularMatrixError(n - 1, "singular cyclic correction")
    return LineFactorization(m.kind, n, factors, correction=(Z, cap))


def _solve_columns(f: LineFactorization, rhs: np.ndarray) -> np.ndarray:
    """Solve with each column of ``rhs`` (shape (n, m)) as a right-hand side."""
    if rhs.shape[0] != f.n:
        raise ShapeError(f"rhs length {rhs.shape[0]} != line length {f.n}")
    x = _core_solve(f.kind, f.factors, np.ascontiguousarray(rhs))
    if f.correction is not None:
        Z, cap = f.correction
        if f.kind is BandKind.CYCLIC_TRI:
            vty = x[0:1, :] + x[f.n - 1 :, :]
        else:
            vty = np.vstack((x[0] + x[f.n - 2], x[1] + x[f.n - 1]))
        x = x - Z @ np.linalg.solve(cap, vty)
    return x


def solve_line(f: LineFactorization, rhs: np.ndarray) -> np.ndarray:
    """Solve one line system."""
    r = np.asarray(rhs, dtype=float)
    if r.ndim != 1:
        raise ShapeError("solve_line expects a 1-D right-hand side")
    return _solve_columns(f, r[:, None])[:, 0]


def solve_batch(f: LineFactorization, u: ScalarField, axis) -> ScalarField:
    """Solve every grid line along ``axis`` with the shared factorization."""
    from .stencils import Axis  # local import to avoid a cycle

    if axis is Axis.X:
        out = _solve_columns(f, u.values)
    else:
        out = _solve_columns(f, u.values.T).T
    return ScalarField(u.grid, out)
