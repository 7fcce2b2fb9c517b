"""Piecewise-linear path containers, refinement, synthetic generators and
per-rectangle PDE coefficients.

A path is a strictly increasing time grid plus one d-dimensional value per
time stamp; the path is linear between consecutive stamps.  On the product
grid of two such paths the kernel PDE has a constant coefficient per
rectangle, which :func:`rect_coeff` computes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "PiecewiseLinearPath",
    "RectangleCoefficient",
    "make_path",
    "rect_coeff",
    "refine_path",
    "sample_brownian",
    "sample_sincos_pair",
]


@dataclass(frozen=True)
class PiecewiseLinearPath:
    """A d-dimensional piecewise-linear path.

    ``times`` has shape ``(n,)`` and is strictly increasing; ``values`` has
    shape ``(n, d)`` with ``n >= 2``.  Both arrays are read-only so instances
    can be shared freely across threads.
    """

    times: np.ndarray
    values: np.ndarray

    @property
    def num_points(self) -> int:
        return self.times.shape[0]

    @property
    def num_segments(self) -> int:
        return self.times.shape[0] - 1

    @property
    def dim(self) -> int:
        return self.values.shape[1]

    def increments(self) -> np.ndarray:
        """Per-segment value increments, shape ``(num_segments, dim)``."""
        return np.diff(self.values, axis=0)

    def segment_lengths(self) -> np.ndarray:
        """Per-segment time lengths, shape ``(num_segments,)``."""
        return np.diff(self.times)


@dataclass(frozen=True)
class RectangleCoefficient:
    """Constant PDE coefficient of one grid rectangle.

    ``c`` is the inner product of the two segment derivatives (units
    1/time^2); ``ds`` and ``dt`` are the rectangle side lengths.
    """

    c: float
    ds: float
    dt: float

    def __post_init__(self):
        if not (np.isfinite(self.c) and np.isfinite(self.ds) and np.isfinite(self.dt)):
            raise ValueError("rectangle coefficient entries must be finite")
        if self.ds <= 0.0 or self.dt <= 0.0:
            raise ValueError("rectangle side lengths must be strictly positive")


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    arr.setflags(write=False)
    return arr


def make_path(times, values) -> PiecewiseLinearPath:
    """Validate raw arrays into a :class:`PiecewiseLinearPath`.

    Parameters
    ----------
    times
        Strictly increasing 1-d array, or ``None`` to synthesize a uniform
        grid on [0, 1].
    values
        ``(n, d)`` array of coordinates; a 1-d array is treated as a single
        column.

    Raises
    ------
    ValueError
        On non-increasing times, non-finite entries, fewer than 2 points or
        inconsistent lengths.
    """
    vals = np.asarray(values, dtype=np.float64)
    if vals.ndim == 1:
        vals = vals.reshape(-1, 1)
    if vals.ndim != 2:
        raise ValueError(f"values must be a (points, dim) matrix, got ndim={vals.ndim}")
    n, d = vals.shape
    if n < 2:
        raise ValueError("a path needs at least 2 points")
    if d < 1:
        raise ValueError("a path needs at least 1 coordinate dimension")
    if not np.all(np.isfinite(vals)):
        raise ValueError("path values must be finite")

    if times is None:
        t = np.linspace(0.0, 1.0, n)
    else:
        t = np.asarray(times, dtype=np.float64)
    if t.ndim != 1 or t.shape[0] != n:
        raise ValueError(f"times must be a vector of length {n}, got shape {t.shape}")
    if not np.all(np.isfinite(t)):
        raise ValueError("time stamps must be finite")
    if not np.all(np.diff(t) > 0.0):
        raise ValueError("time stamps must be strictly increasing")

    return PiecewiseLinearPath(_freeze(t.copy()), _freeze(vals.copy()))


def rect_coeff(x: PiecewiseLinearPath, y: PiecewiseLinearPath, i: int, j: int) -> RectangleCoefficient:
    """PDE coefficient of the rectangle made of segment ``i`` of ``x`` and
    segment ``j`` of ``y``: ``c = <dx_i, dy_j> / (ds * dt)``."""
    if not 0 <= i < x.num_segments:
        raise IndexError(f"segment index i={i} out of range [0, {x.num_segments})")
    if not 0 <= j < y.num_segments:
        raise IndexError(f"segment index j={j} out of range [0, {y.num_segments})")
    if x.dim != y.dim:
        raise ValueError(f"dimension mismatch: {x.dim} vs {y.dim}")
    ds = float(x.times[i + 1] - x.times[i])
    dt = float(y.times[j + 1] - y.times[j])
    dot = float(np.dot(x.values[i + 1] - x.values[i], y.values[j + 1] - y.values[j]))
    return RectangleCoefficient(c=dot / (ds * dt), ds=ds, dt=dt)


def refine_path(p: PiecewiseLinearPath, factor: int) -> PiecewiseLinearPath:
    """Subdivide every segment into ``factor`` equal sub-segments.

    The traced curve is unchanged: new points are linear interpolants, and
    the original stamps/values are kept verbatim.
    """
    factor = int(factor)
    if factor < 1:
        raise ValueError("refinement factor must be a positive integer")
    if factor == 1:
        return p

    fracs = np.arange(factor, dtype=np.float64) / factor
    t0 = p.times[:-1]
    dt = np.diff(p.times)
    new_times = (t0[:, None] + fracs[None, :] * dt[:, None]).ravel()
    new_times = np.append(new_times, p.times[-1])

    v0 = p.values[:-1]
    dv = np.diff(p.values, axis=0)
    new_vals = v0[:, None, :] + fracs[None, :, None] * dv[:, None, :]
    new_vals = new_vals.reshape(-1, p.dim)
    new_vals = np.vstack([new_vals, p.values[-1:]])

    return PiecewiseLinearPath(_freeze(new_times), _freeze(new_vals))


def sample_brownian(seed: int, points: int, dim: int) -> PiecewiseLinearPath:
    """Standard Brownian motion on a uniform [0, 1] grid.

    Values are cumulative sums of i.i.d. normal increments with variance
    ``1/(points-1)`` per coordinate, starting at the origin.  Deterministic
    per seed.
    """
    if points < 2:
        raise ValueError("a Brownian path needs at least 2 points")
    if dim < 1:
        raise ValueError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    scale = 1.0 / np.sqrt(points - 1)
    inc = rng.standard_normal((points - 1, dim)) * scale
    vals = np.vstack([np.zeros((1, dim)), np.cumsum(inc, axis=0)])
    return make_path(None, vals)


def sample_sincos_pair(seed: int, points: int) -> tuple[PiecewiseLinearPath, PiecewiseLinearPath]:
    """A pair of bounded oscillatory 2-d paths on a uniform [0, 1] grid.

    The first path is ``sin(U_i)`` and the second ``cos(V_i)`` componentwise,
    with ``U_i, V_i`` i.i.d. standard normal 2-vectors.
    """
    if points < 2:
        raise ValueError("paths need at least 2 points")
    rng = np.random.default_rng(seed)
    u = rng.standard_normal((points, 2))
    v = rng.standard_normal((points, 2))
    return make_path(None, np.sin(u)), make_path(None, np.cos(v))
