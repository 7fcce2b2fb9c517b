"""Error-theory calculators for the series-propagation scheme, plus MAPE.

The weighted coefficient norm, the Bessel product ``f(k)`` and the local and
global truncation-error bounds make the scheme's convergence theory
machine-checkable: empirical errors must never exceed the bounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .specfun import bessel_i0

__all__ = [
    "BoundParams",
    "gamma_norm",
    "f_factor",
    "gte_bound",
    "lte_bound",
    "mape",
]


@dataclass(frozen=True)
class BoundParams:
    """Inputs of the global truncation-error bound.

    ``k_max`` bounds the absolute rectangle coefficients, ``delta`` is the
    largest cell side, ``order`` the truncation order, and ``lx, ly`` the
    segment counts of the two paths.
    """

    k_max: float
    delta: float
    order: int
    lx: int
    ly: int

    def __post_init__(self):
        if not (math.isfinite(self.k_max) and math.isfinite(self.delta)):
            raise ValueError("k_max and delta must be finite")
        if self.k_max < 0.0 or self.delta <= 0.0:
            raise ValueError("need k_max >= 0 and delta > 0")
        if self.lx < 1 or self.ly < 1:
            raise ValueError("segment counts must be >= 1")


def gamma_norm(p, q, gamma: int, k_max: float, delta: float) -> float:
    """Weighted sup-norm of an edge-coefficient pair.

    ``max_n |(n!)^2 coef_n / (gamma * k_max * delta)^n|`` over both vectors,
    evaluated with running factorial-square/power ratios.  With a zero weight
    base the norm is only defined for constant vectors.
    """
    if int(gamma) < 1:
        raise ValueError("gamma must be a positive integer")
    p = np.ascontiguousarray(p, dtype=np.float64)
    q = np.ascontiguousarray(q, dtype=np.float64)
    base = gamma * float(k_max) * float(delta)
    if base == 0.0:
        if np.any(p[1:] != 0.0) or np.any(q[1:] != 0.0):
            raise ValueError("norm undefined: zero weight base with non-constant coefficients")
        p0 = abs(float(p[0])) if p.size else 0.0
        q0 = abs(float(q[0])) if q.size else 0.0
        return max(p0, q0)
    best = 0.0
    for vec in (p, q):
        ratio = 1.0  # (n!)^2 / base^n
        for n in range(vec.shape[0]):
            if n > 0:
                ratio *= (n * n) / base
            coef = vec[n]
            if coef != 0.0:
                cand = abs(coef) * ratio
                if cand > best:
                    best = cand
    return best


def f_factor(k: int, k_max: float, delta: float) -> float:
    """Growth product ``prod_{m=0..k} I0(2*sqrt(m*k_max)*delta)``.

    Controls how coefficient norms inflate across anti-diagonals; every
    factor is >= 1, so the product is nondecreasing in ``k``.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    out = 1.0
    for m in range(k + 1):
        out *= bessel_i0(2.0 * math.sqrt(m * k_max) * delta)
    return out


def gte_bound(bp: BoundParams) -> float:
    """Global truncation-error bound of the order-N propagation scheme.

    ``f(A) * (K d^2)^(N+1) / ((N+1)!)^2 * [A^(N+2)/(N+2) + A^(N+1)]`` with
    ``A = lx + ly - 1``.  The factorial/power factor is combined in the log
    domain so the bound stays evaluable where raw factors overflow.
    """
    if bp.order < 2:
        raise ValueError("order must be >= 2")
    if bp.k_max == 0.0:
        return 0.0
    n = bp.order
    a = float(bp.lx + bp.ly - 1)
    log_mid = (n + 1) * math.log(bp.k_max * bp.delta * bp.delta) - 2.0 * math.lgamma(n + 2)
    log_bracket = (n + 1) * math.log(a) + math.log(a / (n + 2) + 1.0)
    return f_factor(bp.lx + bp.ly - 1, bp.k_max, bp.delta) * math.exp(log_mid + log_bracket)


def lte_bound(norm_pq: float, gamma: int, c_abs: float, delta: float, order: int) -> float:
    """Single-rectangle truncation-error bound.

    Linear in the incoming coefficient norm; ``gamma`` is the norm index of
    the incoming pair (``i + j + 1`` at grid cell ``(i, j)``).
    """
    if order < 2:
        raise ValueError("order must be >= 2")
    if int(gamma) < 1:
        raise ValueError("gamma must be a positive integer")
    if c_abs < 0.0:
        raise ValueError("c_abs must be >= 0")
    if c_abs == 0.0:
        return 0.0
    n = order
    log_mid = (n + 1) * math.log((gamma + 1) * c_abs * delta * delta) - 2.0 * math.lgamma(n + 2)
    return (
        2.0
        * norm_pq
        * bessel_i0(2.0 * math.sqrt(gamma * c_abs) * delta)
        * bessel_i0(2.0 * math.sqrt((gamma + 1) * c_abs) * delta)
        * math.exp(log_mid)
    )


def mape(estimates, reference) -> float:
    """Mean absolute percentage error as a fraction."""
    est = np.ascontiguousarray(estimates, dtype=np.float64).ravel()
    ref = np.ascontiguousarray(reference, dtype=np.float64).ravel()
    if est.shape != ref.shape or est.size == 0:
        raise ValueError("estimates and reference must be nonempty and of equal length")
    if np.any(ref == 0.0):
        raise ValueError("reference entries must be nonzero")
    return float(np.mean(np.abs(est - ref) / np.abs(ref)))
