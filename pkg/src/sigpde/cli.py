"""Command-line surface: kernel/Gram/MMD commands and benchmark harnesses.

Batches travel as JSON documents ``{"dim": d, "paths": [...], "times":
optional}``; single paths may also arrive as CSV (rows = time points,
columns = dims, optional leading "t" column).  Benchmarks emit CSV with the
fixed header ``scheme,param,mape,seconds``.

Exit codes: 0 on success, 2 on input errors, 3 when the signature oracle's
memory cap is exceeded.  Errors are written to stderr as ``error: ...``.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from . import analysis, sigoracle
from .gram import GramMatrix, SolverConfig, gram, mmd2, permutation_test
from .paths import PiecewiseLinearPath, make_path, sample_brownian, sample_sincos_pair
from .sigoracle import MemoryCapError

BENCH_HEADER = ["scheme", "param", "mape", "seconds"]

# reference configuration for the bench-time accuracy column
_TIME_REFERENCE = SolverConfig(scheme="polyapprox", order=12)


# ---------------------------------------------------------------- batch files


def write_batch(paths: list[PiecewiseLinearPath], fp) -> None:
    """Serialize a path batch as a BatchFile JSON document."""
    doc = {
        "dim": paths[0].dim,
        "paths": [p.values.tolist() for p in paths],
        "times": [p.times.tolist() for p in paths],
    }
    json.dump(doc, fp)


def read_batch(fp) -> list[PiecewiseLinearPath]:
    """Parse a BatchFile JSON document into validated paths."""
    doc = json.load(fp)
    if not isinstance(doc, dict) or "dim" not in doc or "paths" not in doc:
        raise ValueError("batch file needs 'dim' and 'paths' entries")
    dim = int(doc["dim"])
    raw_paths = doc["paths"]
    if not isinstance(raw_paths, list) or len(raw_paths) == 0:
        raise ValueError("batch file contains no paths")
    times_list = doc.get("times")
    if times_list is not None and len(times_list) != len(raw_paths):
        raise ValueError("'times' must list one time array per path")
    out = []
    for k, rows in enumerate(raw_paths):
        vals = np.asarray(rows, dtype=np.float64)
        if vals.ndim != 2 or vals.shape[1] != dim:
            raise ValueError(f"path {k}: every row needs {dim} entries")
        t = None if times_list is None else times_list[k]
        out.append(make_path(t, vals))
    return out


def _read_csv_path(fp) -> PiecewiseLinearPath:
    rows = [r for r in csv.reader(fp) if r]
    if not rows:
        raise ValueError("empty CSV path file")
    header = None
    try:
        float(rows[0][0])
    except ValueError:
        header = rows[0]
        rows = rows[1:]
    data = np.asarray([[float(v) for v in r] for r in rows])
    if header is not None and header[0].strip().lower() == "t":
        return make_path(data[:, 0], data[:, 1:])
    return make_path(None, data)


def _load_single_path(filename: str) -> PiecewiseLinearPath:
    if filename.endswith(".csv"):
        with open(filename, newline="") as fp:
            return _read_csv_path(fp)
    with open(filename) as fp:
        batch = read_batch(fp)
    if len(batch) != 1:
        raise ValueError(f"{filename}: expected a single-path batch, found {len(batch)} paths")
    return batch[0]


def _load_batch(filename: str) -> list[PiecewiseLinearPath]:
    with open(filename) as fp:
        return read_batch(fp)


# ------------------------------------------------------------------- helpers


def _solver_from_args(args) -> SolverConfig:
    return SolverConfig(
        scheme=args.scheme,
        order=args.order,
        refinement=args.refine,
        oracle_level=args.oracle_level,
        memory_cap=args.memory_cap,
    )


def _open_out(args):
    if args.out is None:
        return sys.stdout, False
    return open(args.out, "w", newline=""), True


def _emit_rows(args, rows) -> None:
    fp, close = _open_out(args)
    try:
        writer = csv.writer(fp)
        writer.writerow(BENCH_HEADER)
        for row in rows:
            writer.writerow(row)
    finally:
        if close:
            fp.close()


def _rescale(p: PiecewiseLinearPath, scale: float) -> PiecewiseLinearPath:
    if scale == 1.0:
        return p
    return make_path(p.times, p.values * scale)


def _brownian_batch(seed: int, count: int, points: int, dim: int, scale: float = 1.0):
    return [_rescale(sample_brownian(seed + k, points, dim), scale) for k in range(count)]


def _sincos_batches(seed: int, count: int, points: int):
    pairs = [sample_sincos_pair(seed + k, points) for k in range(count)]
    return [p[0] for p in pairs], [p[1] for p in pairs]


def _fmt(value: float) -> str:
    return f"{value:.16e}"


# ------------------------------------------------------------------ commands


def cmd_kernel(args) -> int:
    x = _load_single_path(args.x_file)
    y = _load_single_path(args.y_file)
    value = gram([x], [y], _solver_from_args(args)).values[0, 0]
    print(_fmt(value))
    return 0


def cmd_gram(args) -> int:
    X = _load_batch(args.x_file)
    Y = X if args.y_file == args.x_file else _load_batch(args.y_file)
    result = gram(X, Y, _solver_from_args(args), workers=args.workers)
    fp, close = _open_out(args)
    try:
        writer = csv.writer(fp)
        for row in result.values:
            writer.writerow([_fmt(v) for v in row])
    finally:
        if close:
            fp.close()
    return 0


def cmd_mmd(args) -> int:
    X = _load_batch(args.x_file)
    Y = _load_batch(args.y_file)
    value = mmd2(X, Y, _solver_from_args(args), unbiased=args.unbiased, workers=args.workers)
    print(_fmt(value))
    return 0


def cmd_permtest(args) -> int:
    X = _load_batch(args.x_file)
    Y = _load_batch(args.y_file)
    p = permutation_test(
        X, Y, _solver_from_args(args), n_perm=args.n_perm, seed=args.seed, workers=args.workers
    )
    print(_fmt(p))
    return 0


def cmd_bench_mape(args) -> int:
    points = args.points
    if args.generator == "brownian":
        X = _brownian_batch(args.seed, args.batch, points, 2, args.scale)
        Y = _brownian_batch(args.seed + args.batch, args.batch, points, 2, args.scale)
    else:
        X, Y = _sincos_batches(args.seed, args.batch, points)

    oracle_cfg = SolverConfig(
        scheme="oracle", oracle_level=args.oracle_level, memory_cap=args.memory_cap
    )
    reference = gram(X, Y, oracle_cfg, workers=args.workers).values

    rows = []
    for scheme in args.schemes.split(","):
        scheme = scheme.strip()
        for param in _parse_int_list(args.orders):
            if scheme in ("fd1", "fd2"):
                cfg = SolverConfig(scheme=scheme, refinement=param)
            else:
                cfg = SolverConfig(scheme=scheme, order=param)
            start = time.perf_counter()
            est = gram(X, Y, cfg, workers=args.workers).values
            elapsed = time.perf_counter() - start
            rows.append([scheme, param, analysis.mape(est, reference), elapsed])
    _emit_rows(args, rows)
    return 0


def cmd_bench_time(args) -> int:
    rows = []
    combo_seed = args.seed
    for length in _parse_int_list(args.lengths):
        for dim in _parse_int_list(args.dims):
            X = _brownian_batch(combo_seed, args.batch, length, dim)
            Y = _brownian_batch(combo_seed + args.batch, args.batch, length, dim)
            combo_seed += 2 * args.batch
            reference = gram(X, Y, _TIME_REFERENCE).values
            for workers in _parse_int_list(args.workers):
                if args.scheme in ("fd1", "fd2"):
                    cfg = SolverConfig(scheme=args.scheme, refinement=args.refine)
                else:
                    cfg = SolverConfig(scheme=args.scheme, order=args.order)
                start = time.perf_counter()
                est = gram(X, Y, cfg, workers=workers).values
                elapsed = time.perf_counter() - start
                rows.append(
                    [
                        args.scheme,
                        f"len={length};dim={dim};workers={workers}",
                        analysis.mape(est, reference),
                        elapsed,
                    ]
                )
    _emit_rows(args, rows)
    return 0


# -------------------------------------------------------------------- parser


def _parse_int_list(text: str) -> list[int]:
    try:
        values = [int(v) for v in str(text).split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ValueError(f"expected a comma-separated integer list, got {text!r}") from exc
    if not values:
        raise ValueError("empty integer list")
    return values


def _add_solver_flags(sub, include_workers=True):
    sub.add_argument("--scheme", default="polyapprox",
                     choices=["polyapprox", "polyinterp", "fd1", "fd2", "oracle"])
    sub.add_argument("--order", type=int, default=8, help="polynomial order N")
    sub.add_argument("--refine", type=int, default=1, help="finite-difference refinement factor")
    sub.add_argument("--oracle-level", type=int, default=sigoracle.DEFAULT_LEVEL,
                     help="signature truncation level for the oracle scheme")
    sub.add_argument("--memory-cap", type=int, default=sigoracle.DEFAULT_MEMORY_CAP,
                     help="dense-signature memory cap in bytes")
    if include_workers:
        sub.add_argument("--workers", type=int, default=1, help="pair-level worker count")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sigpde", description="Signature kernels for piecewise-linear time series."
    )
    cmds = parser.add_subparsers(dest="command", required=True)

    p = cmds.add_parser("kernel", help="kernel value of two single-path files")
    p.add_argument("x_file")
    p.add_argument("y_file")
    _add_solver_flags(p, include_workers=False)
    p.set_defaults(func=cmd_kernel)

    p = cmds.add_parser("gram", help="Gram matrix of two batch files (CSV out)")
    p.add_argument("x_file")
    p.add_argument("y_file")
    _add_solver_flags(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_gram)

    p = cmds.add_parser("mmd", help="squared MMD between two batch files")
    p.add_argument("x_file")
    p.add_argument("y_file")
    _add_solver_flags(p)
    p.add_argument("--unbiased", action="store_true")
    p.set_defaults(func=cmd_mmd)

    p = cmds.add_parser("permtest", help="permutation two-sample test p-value")
    p.add_argument("x_file")
    p.add_argument("y_file")
    _add_solver_flags(p)
    p.add_argument("--n-perm", type=int, default=200)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(func=cmd_permtest)

    p = cmds.add_parser("bench-mape", help="accuracy benchmark against the signature oracle")
    p.add_argument("--generator", choices=["brownian", "sincos"], default="brownian")
    p.add_argument("--points", type=int, default=10)
    p.add_argument("--batch", type=int, default=8)
    p.add_argument("--orders", default="2,4,8", help="comma list; refinement factors for fd schemes")
    p.add_argument("--schemes", default="polyapprox,polyinterp,fd2")
    p.add_argument("--scale", type=float, default=1.0,
                   help="multiply generated Brownian values by this factor")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--oracle-level", type=int, default=sigoracle.DEFAULT_LEVEL)
    p.add_argument("--memory-cap", type=int, default=sigoracle.DEFAULT_MEMORY_CAP)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench_mape)

    p = cmds.add_parser("bench-time", help="wall-time benchmark on generated Brownian batches")
    p.add_argument("--scheme", default="polyapprox",
                   choices=["polyapprox", "polyinterp", "fd1", "fd2"])
    p.add_argument("--order", type=int, default=8)
    p.add_argument("--refine", type=int, default=1)
    p.add_argument("--lengths", default="64,128")
    p.add_argument("--dims", default="2")
    p.add_argument("--workers", default="1")
    p.add_argument("--batch", type=int, default=2)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench_time)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except MemoryCapError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (ValueError, OSError, KeyError, TypeError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
