"""Order-N power-series propagation scheme for the signature-kernel PDE.

The kernel restricted to a rectangle's bottom/left edges is a power series
in the local variable; one step maps those coefficients to the top/right
edges.  Truncating at order N and sweeping the grid of rectangles yields the
kernel at the far corner.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numba import njit

from .paths import PiecewiseLinearPath, RectangleCoefficient
from .specfun import CoeffTables, coeff_tables

__all__ = ["EdgeCoefficients", "ApproxConfig", "lambda_step", "eval_poly", "solve"]


@dataclass(frozen=True)
class EdgeCoefficients:
    """Coefficient pair (p, q) for a rectangle's bottom and left edges.

    Both vectors have length ``order + 1`` in the local edge variable.  For a
    rectangle's incoming state the constant terms agree (both equal the
    kernel at the shared corner); the outgoing pair returned by
    :func:`lambda_step` describes two different corners, so no equality is
    enforced here.
    """

    p: np.ndarray
    q: np.ndarray

    def __post_init__(self):
        p = np.ascontiguousarray(self.p, dtype=np.float64)
        q = np.ascontiguousarray(self.q, dtype=np.float64)
        if p.ndim != 1 or q.ndim != 1 or p.shape != q.shape:
            raise ValueError("edge coefficient vectors must be 1-d and of equal length")
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(q))):
            raise ValueError("edge coefficients must be finite")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def order(self) -> int:
        return self.p.shape[0] - 1


@dataclass(frozen=True)
class ApproxConfig:
    """Configuration of the series-propagation solver.

    ``order`` is the truncation order N >= 2; with ``return_grid`` the solver
    also emits the kernel at every grid corner.
    """

    order: int = 8
    return_grid: bool = False

    def __post_init__(self):
        if not 2 <= int(self.order) <= 64:
            raise ValueError(f"order must be in [2, 64], got {self.order}")


@njit(cache=True, nogil=True)
def _horner(coef, u):
    acc = coef[coef.shape[0] - 1]
    for m in range(coef.shape[0] - 2, -1, -1):
        acc = acc * u + coef[m]
    return acc


@njit(cache=True, nogil=True)
def _lambda_cell(p, q, c, ds, dt, a_tab, b_tab, out_p, out_q):
    # out_p[n] = sum_{k<=n} p[k] a[n,k] (c dt)^(n-k)
    #          + (c dt)^n sum_{k>=1} q[k] b[n,k] dt^k      (and symmetrically)
    n1 = p.shape[0]
    u = c * dt
    v = c * ds
    u_pow = np.empty(n1)
    v_pow = np.empty(n1)
    ds_pow = np.empty(n1)
    dt_pow = np.empty(n1)
    u_pow[0] = 1.0
    v_pow[0] = 1.0
    ds_pow[0] = 1.0
    dt_pow[0] = 1.0
    for m in range(1, n1):
        u_pow[m] = u_pow[m - 1] * u
        v_pow[m] = v_pow[m - 1] * v
        ds_pow[m] = ds_pow[m - 1] * ds
        dt_pow[m] = dt_pow[m - 1] * dt
    for n in range(n1):
        acc_p = 0.0
        for k in range(n + 1):
            acc_p += p[k] * a_tab[n, k] * u_pow[n - k]
        tail_p = 0.0
        for k in range(1, n1):
            tail_p += q[k] * b_tab[n, k] * dt_pow[k]
        out_p[n] = acc_p + u_pow[n] * tail_p

        acc_q = 0.0
        for k in range(n + 1):
            acc_q += q[k] * a_tab[n, k] * v_pow[n - k]
        tail_q = 0.0
        for k in range(1, n1):
            tail_q += p[k] * b_tab[n, k] * ds_pow[k]
        out_q[n] = acc_q + v_pow[n] * tail_q


@njit(cache=True, nogil=True)
def _approx_sweep(c_grid, seg_s, seg_t, a_tab, b_tab, want_grid):
    # One (lx, N+1) buffer of bottom-edge vectors reused across rows plus a
    # single carried left-edge vector: O(lx * N) memory.
    lx, ly = c_grid.shape
    n1 = a_tab.shape[0]
    p = np.zeros((lx, n1))
    p[:, 0] = 1.0
    q = np.empty(n1)
    tmp_p = np.empty(n1)
    tmp_q = np.empty(n1)
    if want_grid:
        grid = np.ones((lx + 1, ly + 1))
    else:
        grid = np.ones((1, 1))
    for j in range(ly):
        for m in range(n1):
            q[m] = 0.0
        q[0] = 1.0
        dt = seg_t[j]
        for i in range(lx):
            ds = seg_s[i]
            _lambda_cell(p[i], q, c_grid[i, j], ds, dt, a_tab, b_tab, tmp_p, tmp_q)
            for m in range(n1):
                p[i, m] = tmp_p[m]
                q[m] = tmp_q[m]
            if want_grid:
                grid[i + 1, j + 1] = 0.5 * (_horner(p[i], ds) + _horner(q, dt))
    end = 0.5 * (_horner(p[lx - 1], seg_s[lx - 1]) + _horner(q, seg_t[ly - 1]))
    return end, grid


@lru_cache(maxsize=None)
def _tables(order: int) -> CoeffTables:
    return coeff_tables(order)


def lambda_step(e: EdgeCoefficients, r: RectangleCoefficient, tables: CoeffTables) -> EdgeCoefficients:
    """Propagate edge coefficients across one rectangle.

    Maps the (bottom, left) coefficient pair to the (top, right) pair,
    truncated at the table order.  The new constant terms are the series
    values at the incoming edges' far ends, so corner values stay consistent.
    """
    if e.order != tables.order:
        raise ValueError(
            f"edge coefficients of order {e.order} do not match tables of order {tables.order}"
        )
    out_p = np.empty(tables.order + 1)
    out_q = np.empty(tables.order + 1)
    _lambda_cell(e.p, e.q, r.c, r.ds, r.dt, tables.a, tables.b, out_p, out_q)
    return EdgeCoefficients(out_p, out_q)


def eval_poly(coeffs, u: float) -> float:
    """Evaluate a polynomial given by its coefficient vector at ``u`` (Horner)."""
    coeffs = np.ascontiguousarray(coeffs, dtype=np.float64)
    if coeffs.ndim != 1 or coeffs.shape[0] == 0:
        raise ValueError("coeffs must be a nonempty vector")
    return float(_horner(coeffs, float(u)))


def _coefficient_grid(x: PiecewiseLinearPath, y: PiecewiseLinearPath):
    seg_s = x.segment_lengths()
    seg_t = y.segment_lengths()
    c_grid = (x.increments() @ y.increments().T) / np.outer(seg_s, seg_t)
    return c_grid, seg_s, seg_t


def solve(x: PiecewiseLinearPath, y: PiecewiseLinearPath, cfg: ApproxConfig = ApproxConfig()):
    """Signature kernel of two paths via the order-N series propagation sweep.

    Returns the kernel value at the far corner; with ``cfg.return_grid`` also
    returns the ``(lx+1, ly+1)`` array of kernel values at all grid corners.
    """
    if x.dim != y.dim:
        raise ValueError(f"dimension mismatch: {x.dim} vs {y.dim}")
    tables = _tables(cfg.order)
    c_grid, seg_s, seg_t = _coefficient_grid(x, y)
    end, grid = _approx_sweep(c_grid, seg_s, seg_t, tables.a, tables.b, cfg.return_grid)
    if cfg.return_grid:
        return float(end), grid
    return float(end)
