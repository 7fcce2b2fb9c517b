"""Special-function series and factorial-ratio tables shared by the solvers.

Everything here is evaluated by term recurrences in binary64; arguments at
the scales produced by unit-size path increments keep the series short, so
no asymptotic branches are needed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

__all__ = ["CoeffTables", "bessel_i0", "hyp0f1", "coeff_tables"]

SERIES_TOL = 1e-17
SERIES_MAX_TERMS = 200


@njit(cache=True, nogil=True)
def _i0_series(z: float):
    # I0(z) = sum_k (z/2)^(2k) / (k!)^2, positive terms, no cancellation.
    q = 0.25 * z * z
    term = 1.0
    total = 1.0
    for k in range(500):
        term *= q / ((k + 1.0) * (k + 1.0))
        total += term
        if term <= 1e-17 * total:
            return total, True
    return total, False


@njit(cache=True, nogil=True)
def _hyp0f1_series(b: float, z: float):
    # 0F1(b; z) = sum_n z^n / ((b)_n n!), term ratio z / ((b+n)(n+1)).
    term = 1.0
    total = 1.0
    for n in range(SERIES_MAX_TERMS):
        term *= z / ((b + n) * (n + 1.0))
        total += term
        if abs(term) <= SERIES_TOL * abs(total):
            return total, True
    return total, False


def bessel_i0(z: float) -> float:
    """Zero-order modified Bessel function of the first kind.

    Evaluated as the ascending series in ``z**2``; exactly even in ``z``.
    """
    z = float(z)
    if math.isnan(z):
        raise ValueError("bessel_i0: NaN input")
    val, ok = _i0_series(z)
    if not ok:
        raise ArithmeticError(f"bessel_i0 series did not converge for z={z!r}")
    return val


def hyp0f1(b: int, z: float) -> float:
    """Confluent hypergeometric limit function 0F1(b; z) for integer b >= 1.

    Negative ``z`` uses the same alternating series.  Raises if the series
    has not converged after 200 terms, which signals an input outside the
    intended operating range.
    """
    if int(b) != b or b < 1:
        raise ValueError(f"hyp0f1: b must be a positive integer, got {b!r}")
    z = float(z)
    if math.isnan(z):
        raise ValueError("hyp0f1: NaN input")
    val, ok = _hyp0f1_series(float(b), z)
    if not ok:
        raise ArithmeticError(
            f"hyp0f1({b}, {z!r}) did not converge within {SERIES_MAX_TERMS} terms"
        )
    return val


@dataclass(frozen=True)
class CoeffTables:
    """Precomputed factorial-ratio tables for the series propagation step.

    ``a[n, k] = k! / ((n-k)! n!)`` for ``k <= n`` (zero above the diagonal)
    and ``b[n, k] = k! / ((n+k)! n!)``, both of shape ``(order+1, order+1)``.
    """

    order: int
    a: np.ndarray
    b: np.ndarray


def coeff_tables(order: int) -> CoeffTables:
    """Build the factorial-ratio tables for a given polynomial order.

    Entries are filled by multiplicative recurrences; raw factorials are
    never formed, so every entry stays representable up to the order-64 cap.
    """
    order = int(order)
    if not 2 <= order <= 64:
        raise ValueError(f"order must be in [2, 64], got {order}")
    n1 = order + 1
    a = np.zeros((n1, n1))
    b = np.zeros((n1, n1))
    a[0, 0] = 1.0
    b[0, 0] = 1.0
    for n in range(1, n1):
        # a[n,0] = b[n,0] = 1/(n!)^2
        a[n, 0] = a[n - 1, 0] / (n * n)
        b[n, 0] = a[n, 0]
    for n in range(n1):
        for k in range(1, n + 1):
            # ratio a[n,k]/a[n,k-1] = k*(n-k+1)
            a[n, k] = a[n, k - 1] * (k * (n - k + 1))
    for n in range(n1):
        for k in range(1, n1):
            # ratio b[n,k]/b[n,k-1] = k/(n+k)
            b[n, k] = b[n, k - 1] * k / (n + k)
    if not (np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise ArithmeticError("coefficient tables overflowed")
    a.setflags(write=False)
    b.setflags(write=False)
    return CoeffTables(order=order, a=a, b=b)
