"""Batched Gram matrices, MMD estimators and a permutation two-sample test.

Every Gram cell is an independent kernel solve, so pair-level parallelism is
the parallel axis: cells are distributed over a thread pool and written to
disjoint entries, making the result bitwise independent of the worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import finitediff, polyapprox, polyinterp, sigoracle
from .paths import PiecewiseLinearPath

__all__ = ["SolverConfig", "GramMatrix", "solve_pair", "gram", "mmd2", "permutation_test"]

SCHEMES = ("polyapprox", "polyinterp", "fd1", "fd2", "oracle")


@dataclass(frozen=True)
class SolverConfig:
    """Selects the kernel scheme and its accuracy knobs.

    ``order`` applies to the polynomial schemes, ``refinement`` to the
    finite-difference ones, and ``oracle_level``/``memory_cap`` to the
    truncated-signature oracle.
    """

    scheme: str = "polyapprox"
    order: int = 8
    refinement: int = 1
    oracle_level: int = sigoracle.DEFAULT_LEVEL
    memory_cap: int = sigoracle.DEFAULT_MEMORY_CAP

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")

    def describe(self) -> str:
        if self.scheme in ("polyapprox", "polyinterp"):
            return f"{self.scheme}(order={self.order})"
        if self.scheme in ("fd1", "fd2"):
            return f"{self.scheme}(refinement={self.refinement})"
        return f"oracle(level={self.oracle_level})"


@dataclass
class GramMatrix:
    """Kernel values between two path batches plus a scheme descriptor."""

    values: np.ndarray
    scheme: str


def solve_pair(x: PiecewiseLinearPath, y: PiecewiseLinearPath, cfg: SolverConfig) -> float:
    """Kernel of a single path pair under the configured scheme."""
    if cfg.scheme == "polyapprox":
        return polyapprox.solve(x, y, polyapprox.ApproxConfig(order=cfg.order))
    if cfg.scheme == "polyinterp":
        return polyinterp.solve(x, y, polyinterp.InterpConfig(order=cfg.order))
    if cfg.scheme == "fd1":
        return finitediff.solve(x, y, finitediff.FdConfig(order="first", refinement=cfg.refinement))
    if cfg.scheme == "fd2":
        return finitediff.solve(x, y, finitediff.FdConfig(order="second", refinement=cfg.refinement))
    return sigoracle.truncated_kernel(x, y, cfg.oracle_level, cfg.memory_cap)


def _validate_batch(batch: Sequence[PiecewiseLinearPath], name: str) -> int:
    if len(batch) == 0:
        raise ValueError(f"{name} batch is empty")
    dim = batch[0].dim
    for p in batch:
        if p.dim != dim:
            raise ValueError(f"{name} batch mixes dimensions {dim} and {p.dim}")
    return dim


def _run_tasks(tasks, workers: int):
    if workers <= 1:
        for task in tasks:
            task()
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(lambda task: task(), tasks))


def gram(
    X: Sequence[PiecewiseLinearPath],
    Y: Sequence[PiecewiseLinearPath],
    solver: SolverConfig = SolverConfig(),
    workers: int = 1,
) -> GramMatrix:
    """Dense kernel matrix ``values[i, j] = k(X_i, Y_j)``.

    When ``X`` and ``Y`` are the same batch object only the upper triangle is
    computed and mirrored, which both halves the cost and enforces exact
    symmetry.  Output is bitwise identical for any worker count.
    """
    dx = _validate_batch(X, "X")
    dy = _validate_batch(Y, "Y")
    if dx != dy:
        raise ValueError(f"dimension mismatch between batches: {dx} vs {dy}")
    same = X is Y
    nx, ny = len(X), len(Y)
    values = np.empty((nx, ny))

    cells = [(i, j) for i in range(nx) for j in range(i if same else 0, ny)]

    if solver.scheme == "oracle":
        # Signatures are reused across cells instead of being recomputed.
        def batch_signatures(batch):
            sigs = [None] * len(batch)

            def sig_task(i):
                def run():
                    sigs[i] = sigoracle.signature(batch[i], solver.oracle_level, solver.memory_cap)

                return run

            _run_tasks([sig_task(i) for i in range(len(batch))], workers)
            return sigs

        sx = batch_signatures(X)
        sy = sx if same else batch_signatures(Y)

        def cell_task(i, j):
            def run():
                values[i, j] = sigoracle.tensor_dot(sx[i], sy[j])

            return run

    else:

        def cell_task(i, j):
            def run():
                values[i, j] = solve_pair(X[i], Y[j], solver)

            return run

    _run_tasks([cell_task(i, j) for i, j in cells], workers)

    if same:
        iu = np.triu_indices(nx, k=1)
        values[(iu[1], iu[0])] = values[iu]
    return GramMatrix(values=values, scheme=solver.describe())


def _mean(entries) -> float:
    # fsum makes block means independent of summation order, so permuted
    # index sets with identical entry multisets give identical statistics.
    entries = np.asarray(entries, dtype=np.float64).ravel()
    return math.fsum(entries) / entries.size


def _offdiag_mean(block: np.ndarray) -> float:
    n = block.shape[0]
    if n < 2:
        raise ValueError("unbiased estimator needs at least 2 paths per batch")
    mask = ~np.eye(n, dtype=bool)
    return math.fsum(block[mask]) / (n * (n - 1))


def _mmd2_from_gram(K: np.ndarray, idx_x: np.ndarray, idx_y: np.ndarray, unbiased: bool) -> float:
    kxx = K[np.ix_(idx_x, idx_x)]
    kyy = K[np.ix_(idx_y, idx_y)]
    kxy = K[np.ix_(idx_x, idx_y)]
    if unbiased:
        return _offdiag_mean(kxx) - 2.0 * _mean(kxy) + _offdiag_mean(kyy)
    return _mean(kxx) - 2.0 * _mean(kxy) + _mean(kyy)


def mmd2(
    X: Sequence[PiecewiseLinearPath],
    Y: Sequence[PiecewiseLinearPath],
    solver: SolverConfig = SolverConfig(),
    unbiased: bool = True,
    workers: int = 1,
) -> float:
    """Squared maximum mean discrepancy between two path batches.

    The biased estimator uses plain block means; the unbiased one excludes
    the diagonals of the within-batch blocks (and needs >= 2 paths per
    batch).
    """
    _validate_batch(X, "X")
    _validate_batch(Y, "Y")
    if unbiased and (len(X) < 2 or len(Y) < 2):
        raise ValueError("unbiased estimator needs at least 2 paths per batch")
    Z = list(X) + list(Y)
    K = gram(Z, Z, solver, workers).values
    idx_x = np.arange(len(X))
    idx_y = np.arange(len(X), len(X) + len(Y))
    return _mmd2_from_gram(K, idx_x, idx_y, unbiased)


def permutation_test(
    X: Sequence[PiecewiseLinearPath],
    Y: Sequence[PiecewiseLinearPath],
    solver: SolverConfig = SolverConfig(),
    n_perm: int = 200,
    seed: int = 0,
    workers: int = 1,
) -> float:
    """Two-sample permutation test on the biased MMD statistic.

    The joint Gram matrix is computed once and reindexed per permutation.
    Returns the add-one p-value ``(1 + #{permuted >= observed}) / (1 +
    n_perm)``; ties count, so identical batches give exactly 1.0.
    """
    if n_perm < 1:
        raise ValueError("n_perm must be >= 1")
    _validate_batch(X, "X")
    _validate_batch(Y, "Y")
    n, m = len(X), len(Y)
    Z = list(X) + list(Y)
    K = gram(Z, Z, solver, workers).values
    idx = np.arange(n + m)
    observed = _mmd2_from_gram(K, idx[:n], idx[n:], unbiased=False)
    rng = np.random.default_rng(seed)
    exceed = 0
    for _ in range(n_perm):
        perm = rng.permutation(n + m)
        stat = _mmd2_from_gram(K, perm[:n], perm[n:], unbiased=False)
        if stat >= observed:
            exceed += 1
    return (1 + exceed) / (1 + n_perm)
