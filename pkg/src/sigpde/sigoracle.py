"""Ground-truth truncated signature kernel via explicit tensor signatures.

The signature of a linear segment is the tensor exponential of its
increment; signatures of concatenated segments combine by the Chen identity.
Dense level-by-level storage grows as ``d**level``, so evaluation is gated
by a configurable memory cap.  Used as the accuracy benchmark for the PDE
solvers at low dimension.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .paths import PiecewiseLinearPath

__all__ = [
    "TruncatedTensor",
    "MemoryCapError",
    "DEFAULT_LEVEL",
    "DEFAULT_MEMORY_CAP",
    "segment_signature",
    "chen_concat",
    "signature",
    "truncated_kernel",
]

DEFAULT_LEVEL = 18
DEFAULT_MEMORY_CAP = 1 << 30  # bytes


class MemoryCapError(RuntimeError):
    """Requested truncation level would exceed the dense-storage budget."""


@dataclass(frozen=True)
class TruncatedTensor:
    """Graded tensor-algebra element truncated at ``level``.

    ``blocks[k]`` is the flattened level-k component with ``dim**k`` entries;
    ``blocks[0]`` is the scalar slot (1 for any signature).
    """

    level: int
    dim: int
    blocks: list

    def __post_init__(self):
        if len(self.blocks) != self.level + 1:
            raise ValueError("need exactly level+1 blocks")
        for k, blk in enumerate(self.blocks):
            if blk.shape != (self.dim**k,):
                raise ValueError(f"block {k} must have {self.dim ** k} entries, got {blk.shape}")


def _check_cap(dim: int, level: int, memory_cap: int) -> None:
    total = sum(dim**k for k in range(level + 1)) * 8
    if total > memory_cap:
        raise MemoryCapError(
            f"level-{level} signature in dimension {dim} needs {total} bytes, "
            f"exceeding the memory cap of {memory_cap} bytes"
        )


def segment_signature(delta, level: int, memory_cap: int = DEFAULT_MEMORY_CAP) -> TruncatedTensor:
    """Signature of one linear segment: tensor powers ``delta^(x)k / k!``."""
    delta = np.ascontiguousarray(delta, dtype=np.float64)
    if delta.ndim != 1 or delta.shape[0] < 1:
        raise ValueError("delta must be a nonempty vector")
    if level < 0:
        raise ValueError("level must be >= 0")
    dim = delta.shape[0]
    _check_cap(dim, level, memory_cap)
    blocks = [np.ones(1)]
    blk = blocks[0]
    for k in range(1, level + 1):
        blk = (np.multiply.outer(blk, delta) / k).reshape(-1)
        blocks.append(blk)
    return TruncatedTensor(level=level, dim=dim, blocks=blocks)


def chen_concat(s1: TruncatedTensor, s2: TruncatedTensor) -> TruncatedTensor:
    """Signature of the concatenated path: graded tensor product of ``s1, s2``."""
    if s1.level != s2.level or s1.dim != s2.dim:
        raise ValueError(
            f"shape mismatch: level {s1.level}/dim {s1.dim} vs level {s2.level}/dim {s2.dim}"
        )
    dim = s1.dim
    out = []
    for n in range(s1.level + 1):
        acc = np.zeros(dim**n)
        for k in range(n + 1):
            acc += np.multiply.outer(s1.blocks[k], s2.blocks[n - k]).reshape(-1)
        out.append(acc)
    return TruncatedTensor(level=s1.level, dim=dim, blocks=out)


def signature(
    path: PiecewiseLinearPath, level: int, memory_cap: int = DEFAULT_MEMORY_CAP
) -> TruncatedTensor:
    """Truncated signature of a piecewise-linear path.

    Left fold of :func:`chen_concat` over the per-segment signatures, which
    fixes the floating-point reduction order.
    """
    inc = path.increments()
    sig = segment_signature(inc[0], level, memory_cap)
    for k in range(1, inc.shape[0]):
        sig = chen_concat(sig, segment_signature(inc[k], level, memory_cap))
    return sig


def truncated_kernel(
    x: PiecewiseLinearPath,
    y: PiecewiseLinearPath,
    level: int = DEFAULT_LEVEL,
    memory_cap: int = DEFAULT_MEMORY_CAP,
) -> float:
    """Inner product of the two truncated signatures, summed level by level."""
    if x.dim != y.dim:
        raise ValueError(f"dimension mismatch: {x.dim} vs {y.dim}")
    sx = signature(x, level, memory_cap)
    sy = signature(y, level, memory_cap)
    return tensor_dot(sx, sy)


def tensor_dot(sx: TruncatedTensor, sy: TruncatedTensor) -> float:
    """Graded inner product of two truncated tensors."""
    if sx.level != sy.level or sx.dim != sy.dim:
        raise ValueError("tensors must share level and dimension")
    total = 0.0
    for k in range(sx.level + 1):
        total += float(np.dot(sx.blocks[k], sy.blocks[k]))
    return total
