"""Command-line surface: decompose, solve, bench, gen.

Exit codes: 0 success, 1 I/O error, 2 validation error, 3 numerical failure.
All outputs are written atomically (temp file + rename), so a failing command
leaves no partial files. Report schemas are fixed; see docs/formats.md.
"""

import argparse
import json
import sys

import numpy as np

from .errors import MatrixMarketError, SingularMatrixError
from .grou import LinearOperator, direct_solve, grou
from .kron_core import DimSplit, LaplacianLike, lap_to_dense
from .lap_project import (
    METHOD_ITERATIVE,
    identity_component,
    laplacian_distance,
    project_delta_sweeps,
    project_laplacian,
)
from .mmio import atomic_write_text, read_matrix_market, write_matrix_market
from .poisson import bench_poisson, build_poisson

EXIT_OK = 0
EXIT_IO = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3


def _dims_arg(text: str) -> tuple[int, ...]:
    try:
        modes = tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"dims must be comma-separated integers, got {text!r}")
    return modes


def _sizes_arg(text: str) -> tuple[int, ...]:
    if not text.strip():
        return ()
    try:
        return tuple(int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"sizes must be comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kronlap",
        description="Decompose square matrices into identity-padded Kronecker sums "
        "and solve linear systems with the greedy rank-one update solver.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="project a matrix onto the Laplacian-like subspace")
    p.add_argument("--input", required=True, help="Matrix Market file with the square matrix")
    p.add_argument("--dims", required=True, type=_dims_arg, help="mode sizes, e.g. 2,3,5")
    p.add_argument("--method", choices=["closed", "iterative"], default="closed")
    p.add_argument("--iter-max", type=int, default=10)
    p.add_argument("--tol", type=float, default=1e-8,
                   help="membership threshold (relative); iterative sweeps also stop "
                   "when the absolute residual drops below it")
    p.add_argument("--output", required=True, help="JSON report path")

    p = sub.add_parser("solve", help="solve A x = b")
    p.add_argument("--matrix", required=True)
    p.add_argument("--rhs", required=True)
    p.add_argument("--dims", required=True, type=_dims_arg)
    p.add_argument("--method", choices=["auto", "direct"], default="auto",
                   help="auto: greedy solver with structure detection; direct: dense LU")
    p.add_argument("--eps", type=float, default=1e-6)
    p.add_argument("--tol", type=float, default=2.22e-6)
    p.add_argument("--rank-max", type=int, default=3000)
    p.add_argument("--als-iter-max", type=int, default=15)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True, help="solution vector path (.mtx); "
                   "a JSON report is written next to it as <output>.json")

    p = sub.add_parser("bench", help="benchmark solver arms")
    p.add_argument("problem", choices=["poisson"])
    p.add_argument("--sizes", required=True, type=_sizes_arg, help="grid sizes, e.g. 4,6,8")
    p.add_argument("--output", required=True, help="CSV path")

    p = sub.add_parser("gen", help="generate test matrices")
    p.add_argument("--kind", choices=["laplacian", "dense", "poisson"], required=True)
    p.add_argument("--dims", type=_dims_arg, help="required for laplacian and dense kinds")
    p.add_argument("--n", type=int, help="grid size for the poisson kind")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True,
                   help="output path; the poisson kind writes <output>_A.mtx, "
                   "<output>_b.mtx and <output>_exact.mtx")
    return parser


def _check_square_dims(a: np.ndarray, modes: tuple[int, ...]) -> DimSplit:
    dims = DimSplit(modes)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"input must be a square matrix, got shape {a.shape}")
    if a.shape[0] != dims.n:
        raise ValueError(
            f"matrix is {a.shape[0]}x{a.shape[1]} but dims {','.join(map(str, modes))} "
            f"require size {dims.n}"
        )
    return dims


def _read_vector(path, n: int) -> np.ndarray:
    m = read_matrix_market(path)
    if 1 not in m.shape:
        raise ValueError(f"{path} must hold a vector (one row or column), got {m.shape}")
    v = m.reshape(-1)
    if v.size != n:
        raise ValueError(f"vector in {path} has length {v.size}, expected {n}")
    return v


def _cmd_decompose(args) -> int:
    a = read_matrix_market(args.input)
    dims = _check_square_dims(a, args.dims)
    if args.tol <= 0:
        raise ValueError("tol must be positive")
    norm_a = float(np.linalg.norm(a))
    if args.method == "closed":
        report = project_laplacian(a, dims)
        alpha = report.projection.alpha
        factors = report.projection.factors
        residual = report.residual_fro
        sweeps = 0
        method = report.method
    else:
        alpha = identity_component(a)
        shifted = a - alpha * np.eye(dims.n)
        delta = project_delta_sweeps(shifted, dims, iter_max=args.iter_max, tol=args.tol)
        factors = delta.projection.factors
        residual = delta.residual_fro
        sweeps = delta.sweeps_used
        method = METHOD_ITERATIVE
    relative = residual / norm_a if norm_a > 0 else 0.0
    payload = {
        "dims": list(dims.modes),
        "alpha": alpha,
        "factors": [f.tolist() for f in factors],
        "residual_fro": residual,
        "relative_residual": relative,
        "is_member": relative <= args.tol,
        "method": method,
        "sweeps_used": sweeps,
    }
    atomic_write_text(args.output, json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


def _cmd_solve(args) -> int:
    a = read_matrix_market(args.matrix)
    dims = _check_square_dims(a, args.dims)
    b = _read_vector(args.rhs, dims.n)
    b_norm = float(np.linalg.norm(b))
    if args.method == "direct":
        x = direct_solve(a, b)
        final = float(np.linalg.norm(b - a @ x))
        payload = {
            "dims": list(dims.modes),
            "method": "direct",
            "terms_used": 0,
            "stop_reason": "direct",
            "residual_history": [b_norm, final],
            "relative_residual": final / b_norm if b_norm > 0 else 0.0,
        }
    else:
        member, _, proj_report = laplacian_distance(a, dims)
        if member:
            op = LinearOperator.from_laplacian(proj_report.projection)
            method = "grou_laplacian"
        else:
            op = LinearOperator.from_dense(a, dims)
            method = "grou_dense"
        report = grou(
            op,
            b,
            eps=args.eps,
            tol=args.tol,
            rank_max=args.rank_max,
            als_iter_max=args.als_iter_max,
            seed=args.seed,
        )
        x = report.x
        final = report.residual_history[-1]
        payload = {
            "dims": list(dims.modes),
            "method": method,
            "terms_used": report.terms_used,
            "stop_reason": report.stop_reason,
            "residual_history": report.residual_history,
            "relative_residual": final / b_norm if b_norm > 0 else 0.0,
        }
    write_matrix_market(args.output, x.reshape(-1, 1))
    atomic_write_text(str(args.output) + ".json", json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


def _cmd_bench(args) -> int:
    bench_poisson(args.sizes, output_path=args.output)
    return EXIT_OK


def _cmd_gen(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.kind == "poisson":
        if args.n is None:
            raise ValueError("--n is required for --kind poisson")
        problem = build_poisson(args.n)
        prefix = str(args.output)
        write_matrix_market(f"{prefix}_A.mtx", lap_to_dense(problem.operator))
        write_matrix_market(f"{prefix}_b.mtx", problem.rhs.reshape(-1, 1))
        write_matrix_market(f"{prefix}_exact.mtx", problem.exact.reshape(-1, 1))
        return EXIT_OK
    if args.dims is None:
        raise ValueError(f"--dims is required for --kind {args.kind}")
    dims = DimSplit(args.dims)
    if args.kind == "dense":
        write_matrix_market(args.output, rng.uniform(size=(dims.n, dims.n)))
        return EXIT_OK
    factors = [rng.standard_normal((n, n)) for n in dims.modes]
    lap = LaplacianLike.from_factors(dims, factors, alpha=float(rng.standard_normal()))
    write_matrix_market(args.output, lap_to_dense(lap))
    return EXIT_OK


_DISPATCH = {
    "decompose": _cmd_decompose,
    "solve": _cmd_solve,
    "bench": _cmd_bench,
    "gen": _cmd_gen,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed its message
        return int(exc.code or 0)
    try:
        return _DISPATCH[args.command](args)
    except MatrixMarketError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except SingularMatrixError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


def entrypoint():
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
