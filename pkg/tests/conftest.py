import numpy as np
import pytest

from sigpde import finitediff, polyapprox, polyinterp, sample_brownian
from sigpde.paths import make_path


@pytest.fixture(scope="session", autouse=True)
def warm_jit_kernels():
    # Compile (or load from cache) every jitted kernel once, so per-test
    # runtime budgets measure steady-state behaviour rather than compilation.
    x = sample_brownian(0, 4, 2)
    y = sample_brownian(1, 4, 2)
    polyapprox.solve(x, y, polyapprox.ApproxConfig(order=4))
    polyapprox.solve(x, y, polyapprox.ApproxConfig(order=4, return_grid=True))
    polyinterp.solve(x, y, polyinterp.InterpConfig(order=4))
    finitediff.solve(x, y, finitediff.FdConfig(order="first", refinement=2))
    finitediff.solve(x, y, finitediff.FdConfig(order="second", refinement=2))


def brownian_batch(seed, count, points, dim=2, scale=1.0):
    """Deterministic batch of Brownian paths, optionally rescaled in value."""
    out = []
    for k in range(count):
        p = sample_brownian(seed + k, points, dim)
        out.append(p if scale == 1.0 else make_path(p.times, p.values * scale))
    return out


def max_cell_coefficient(x, y):
    """K = max |c_ij| and Delta = max cell side over the product grid."""
    c_grid = (x.increments() @ y.increments().T) / np.outer(
        np.diff(x.times), np.diff(y.times)
    )
    k_max = float(np.max(np.abs(c_grid)))
    delta = float(max(np.max(np.diff(x.times)), np.max(np.diff(y.times))))
    return k_max, delta
