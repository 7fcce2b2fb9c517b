"""Chebyshev-interpolation scheme for the signature-kernel PDE.

Per rectangle, the incoming edge functions are interpolated at Chebyshev
extrema by degree-N polynomials; the outgoing edges then have a closed form
in terms of the confluent hypergeometric limit function, which is evaluated
directly at the next rectangle's nodes.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numba import njit

from .paths import PiecewiseLinearPath, RectangleCoefficient
from .specfun import _hyp0f1_series

__all__ = [
    "InterpConfig",
    "EdgePolynomial",
    "chebyshev_nodes",
    "fit_polynomial",
    "phi_eval",
    "solve",
]

# interpolation residual allowance, relative to the data magnitude
FIT_RESIDUAL_RTOL = 1e-12


@dataclass(frozen=True)
class InterpConfig:
    """Configuration of the interpolation solver.

    A degree-N interpolant needs N+1 nodes, so ``node_count`` is derived and
    must equal ``order + 1`` if supplied explicitly.
    """

    order: int = 8
    node_count: int | None = None

    def __post_init__(self):
        if not 2 <= int(self.order) <= 64:
            raise ValueError(f"order must be in [2, 64], got {self.order}")
        if self.node_count is None:
            object.__setattr__(self, "node_count", self.order + 1)
        elif self.node_count != self.order + 1:
            raise ValueError(
                f"node_count must be order+1 = {self.order + 1}, got {self.node_count}"
            )


@dataclass(frozen=True)
class EdgePolynomial:
    """Polynomial edge function in the local variable ``u = s - lo``."""

    coeffs: np.ndarray
    interval: tuple[float, float]

    def __post_init__(self):
        coeffs = np.ascontiguousarray(self.coeffs, dtype=np.float64)
        if coeffs.ndim != 1 or coeffs.shape[0] == 0:
            raise ValueError("coeffs must be a nonempty vector")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficients must be finite")
        lo, hi = self.interval
        if not hi > lo:
            raise ValueError(f"degenerate interval [{lo}, {hi}]")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "interval", (float(lo), float(hi)))

    def __call__(self, s: float) -> float:
        u = float(s) - self.interval[0]
        acc = 0.0
        for c in self.coeffs[::-1]:
            acc = acc * u + c
        return acc


def chebyshev_nodes(lo: float, hi: float, count: int) -> np.ndarray:
    """Chebyshev extrema rescaled to [lo, hi], endpoints included.

    ``count`` points ``(hi-lo)/2 * cos(pi*m/(count-1)) + (hi+lo)/2`` for
    ``m = 0..count-1``, descending from ``hi`` to ``lo``.
    """
    lo = float(lo)
    hi = float(hi)
    if not hi > lo:
        raise ValueError(f"degenerate interval [{lo}, {hi}]")
    if count < 2:
        raise ValueError("need at least 2 nodes")
    m = np.arange(count, dtype=np.float64)
    return 0.5 * (hi - lo) * np.cos(np.pi * m / (count - 1)) + 0.5 * (hi + lo)


def fit_polynomial(nodes, samples, lo: float) -> EdgePolynomial:
    """Monomial interpolant through ``(node, sample)`` pairs.

    The fit is performed in the node variable rescaled to [0, 1] (keeping the
    Vandermonde system well conditioned) and the coefficients are rescaled
    back to the local variable ``u = s - lo``.
    """
    nodes = np.ascontiguousarray(nodes, dtype=np.float64)
    samples = np.ascontiguousarray(samples, dtype=np.float64)
    if nodes.ndim != 1 or nodes.shape != samples.shape:
        raise ValueError("nodes and samples must be 1-d arrays of equal length")
    if np.unique(nodes).shape[0] != nodes.shape[0]:
        raise ValueError("interpolation nodes must be pairwise distinct")
    u = nodes - float(lo)
    span = float(u.max())
    if span <= 0.0:
        raise ValueError("nodes must extend beyond lo")
    w = u / span
    vmat = np.vander(w, increasing=True)
    a = np.linalg.solve(vmat, samples)
    resid = float(np.max(np.abs(vmat @ a - samples)))
    scale = float(np.max(np.abs(samples)))
    if resid > FIT_RESIDUAL_RTOL * max(scale, np.finfo(float).tiny):
        raise ArithmeticError(
            f"interpolation residual {resid:.3e} exceeds {FIT_RESIDUAL_RTOL:.0e} * {scale:.3e}"
        )
    coeffs = a / span ** np.arange(a.shape[0])
    return EdgePolynomial(coeffs=coeffs, interval=(float(lo), float(lo) + span))


@njit(cache=True, nogil=True)
def _phi_scaled(g, h, wu, wv, z):
    # g0 * 0F1(1; z) + sum_{n>=1} (g_n wu^n + h_n wv^n) * 0F1(n+1; z)
    # where g, h hold coefficients in variables already rescaled so that the
    # evaluation abscissae are wu, wv in [0, 1].
    val0, _ = _hyp0f1_series(1.0, z)
    val = g[0] * val0
    pu = 1.0
    pv = 1.0
    for n in range(1, g.shape[0]):
        pu *= wu
        pv *= wv
        fn, _ = _hyp0f1_series(n + 1.0, z)
        val += (g[n] * pu + h[n] * pv) * fn
    return val


def phi_eval(
    g: EdgePolynomial,
    h: EdgePolynomial,
    r: RectangleCoefficient,
    s_off: float,
    t_off: float,
) -> float:
    """Exact rectangle solution for polynomial boundary data.

    ``g`` and ``h`` are the bottom/left edge polynomials sharing the corner
    value; ``s_off`` and ``t_off`` are offsets from the corner within the
    rectangle.  The zero-order term is computed through 0F1(1; .), so a
    negative coefficient needs no special casing.
    """
    gp = g.coeffs
    hp = h.coeffs
    if gp.shape != hp.shape:
        raise ValueError("edge polynomials must have equal length")
    g0, h0 = float(gp[0]), float(hp[0])
    if abs(g0 - h0) > 1e-10 * max(1.0, abs(g0)):
        raise ValueError(f"corner mismatch: g0={g0!r} vs h0={h0!r}")
    s_off = float(s_off)
    t_off = float(t_off)
    if not 0.0 <= s_off <= r.ds or not 0.0 <= t_off <= r.dt:
        raise ValueError("offsets must lie within the rectangle")
    z = r.c * s_off * t_off
    return float(_phi_scaled(gp, hp, s_off, t_off, z))


@njit(cache=True, nogil=True)
def _interp_sweep(c_grid, seg_s, seg_t, w_nodes, vmat):
    # State is sample values at the scaled Chebyshev extrema: one row of
    # bottom-edge samples per x-segment plus a carried left-edge vector.
    # Interpolation happens in the [0, 1]-rescaled variable w, where the
    # evaluation abscissae are simply the fixed w_nodes.
    lx, ly = c_grid.shape
    npts = w_nodes.shape[0]
    bottom = np.ones((lx, npts))
    left = np.ones(npts)
    new_bottom = np.empty(npts)
    new_left = np.empty(npts)
    endpoint = 1.0
    for j in range(ly):
        for m in range(npts):
            left[m] = 1.0
        dt = seg_t[j]
        for i in range(lx):
            ds = seg_s[i]
            c = c_grid[i, j]
            g = np.linalg.solve(vmat, bottom[i])
            h = np.linalg.solve(vmat, left)
            zbase = c * ds * dt
            for m in range(npts):
                z = zbase * w_nodes[m]
                # top edge, abscissa w_m along s, full dt along t
                new_bottom[m] = _phi_scaled(g, h, w_nodes[m], 1.0, z)
                # right edge, full ds along s, abscissa w_m along t
                new_left[m] = _phi_scaled(g, h, 1.0, w_nodes[m], z)
            if i == lx - 1 and j == ly - 1:
                # top and right evaluations coincide at the far corner
                endpoint = _phi_scaled(g, h, 1.0, 1.0, zbase)
            for m in range(npts):
                bottom[i, m] = new_bottom[m]
                left[m] = new_left[m]
    return endpoint


@lru_cache(maxsize=None)
def _unit_nodes_and_vandermonde(order: int):
    w = 0.5 * np.cos(np.pi * np.arange(order + 1) / order) + 0.5
    vmat = np.vander(w, increasing=True)
    w.setflags(write=False)
    vmat.setflags(write=False)
    return w, vmat


def solve(x: PiecewiseLinearPath, y: PiecewiseLinearPath, cfg: InterpConfig = InterpConfig()) -> float:
    """Signature kernel of two paths via the Chebyshev-interpolation sweep."""
    if x.dim != y.dim:
        raise ValueError(f"dimension mismatch: {x.dim} vs {y.dim}")
    w, vmat = _unit_nodes_and_vandermonde(cfg.order)
    seg_s = x.segment_lengths()
    seg_t = y.segment_lengths()
    c_grid = (x.increments() @ y.increments().T) / np.outer(seg_s, seg_t)
    val = float(_interp_sweep(c_grid, seg_s, seg_t, w, np.ascontiguousarray(vmat)))
    if not np.isfinite(val):
        raise ArithmeticError("interpolation sweep produced a non-finite value")
    return val
