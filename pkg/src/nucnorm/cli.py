"""Command-line front end.

Subcommands: ``estimate``, ``oracle``, ``gen``, ``compare``, ``bench``.
Reports are printed as ``key=value`` lines; value vectors are CSV with one
17-significant-digit number per line.

Exit codes: 0 success, 2 usage error, 3 I/O error, 4 non-convergence.
"""

import argparse
import contextlib
import os
import statistics
import sys
import time

import numpy as np

from .jacobi import ConvergenceError, svd_values
from .linalg import ContractError, frobenius_norm
from .matfile import format_value, read_matrix, write_matrix, write_values_csv
from .randnn import RandNNConfig, error_bound_check, nuclear_norm, rand_nn, schatten_p
from .rng import SeededRng, gaussian_matrix
from .testmat import bie_single_layer_matrix, prescribed_spectrum_matrix, s_shaped_spectrum

EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NONCONVERGENCE = 4


def _emit(out, **pairs):
    for key, value in pairs.items():
        if isinstance(value, float):
            value = format_value(value)
        elif isinstance(value, bool):
            value = str(value).lower()
        elif value is None:
            value = "NA"
        print(f"{key}={value}", file=out)


def _int_list(text):
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a list of integers, got {text!r}")


def _float_list(text):
    try:
        return [float(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a list of numbers, got {text!r}")


def _config(args):
    return RandNNConfig(
        block_size=args.b,
        power_iters=args.q,
        early_stop_threshold=getattr(args, "threshold", 0.0),
        seed=args.seed,
        compute_bound=getattr(args, "bound", True),
    )


def cmd_estimate(args):
    for p in args.p or []:
        if not p >= 1:
            raise ContractError(f"Schatten exponents need p >= 1, got {p}")
    t0 = time.perf_counter()
    A = read_matrix(args.input)
    t_read = time.perf_counter() - t0
    cfg = _config(args)
    t0 = time.perf_counter()
    est = rand_nn(A, cfg)
    t_run = time.perf_counter() - t0
    if args.out:
        write_values_csv(args.out, est.values)
    _emit(
        sys.stdout,
        m=A.shape[0],
        n=A.shape[1],
        b=cfg.block_size,
        q=cfg.power_iters,
        seed=cfg.seed,
        threshold=float(cfg.early_stop_threshold),
        count=len(est.values),
        values_csv=args.out,
        nuclear_norm=nuclear_norm(est),
    )
    for p in args.p or []:
        _emit(sys.stdout, **{f"schatten_{p:g}": schatten_p(est, p)})
    _emit(
        sys.stdout,
        bound_fro=est.bound_fro,
        blocks_processed=est.blocks_processed,
        terminated_early=est.terminated_early,
        t_read_sec=t_read,
        t_randnn_sec=t_run,
    )
    return 0


def cmd_oracle(args):
    t0 = time.perf_counter()
    A = read_matrix(args.input)
    t_read = time.perf_counter() - t0
    t0 = time.perf_counter()
    sv = svd_values(A)
    t_svd = time.perf_counter() - t0
    if not args.out:
        for v in sv:
            print(format_value(v))
        return 0
    write_values_csv(args.out, sv)
    _emit(
        sys.stdout,
        m=A.shape[0],
        n=A.shape[1],
        values=args.out,
        nuclear_norm=float(np.sum(sv)),
        frobenius_norm=frobenius_norm(A),
        t_read_sec=t_read,
        t_oracle_sec=t_svd,
    )
    return 0


def _read_spec(text):
    if os.path.exists(text):
        with open(text) as fh:
            text = fh.read()
    return np.array(_float_list(text))


def cmd_gen(args):
    if args.kind == "sshape":
        if args.n is None:
            raise ContractError("gen sshape needs --n")
        A = prescribed_spectrum_matrix(s_shaped_spectrum(args.n), args.m or args.n, args.seed)
    elif args.kind == "bie":
        if args.n is None:
            raise ContractError("gen bie needs --n")
        A = bie_single_layer_matrix(args.n)
    else:
        if args.spec is None:
            raise ContractError("gen spectrum needs --spec")
        spec = _read_spec(args.spec)
        A = prescribed_spectrum_matrix(spec, args.m or spec.size, args.seed)
    write_matrix(args.output, A)
    _emit(sys.stdout, kind=args.kind, m=A.shape[0], n=A.shape[1], output=args.output)
    return 0


def cmd_compare(args):
    A = read_matrix(args.input)
    cfg = _config(args)
    est = rand_nn(A, cfg)
    truth = svd_values(A)
    estimated = np.sort(est.values)[::-1]
    diff = np.abs(truth - estimated)
    with np.errstate(divide="ignore", invalid="ignore"):
        rel = np.where(truth > 0, diff / np.where(truth > 0, truth, 1.0),
                       np.where(diff > 0, np.inf, 0.0))
    lhs, holds = error_bound_check(truth, est)

    out = open(args.out, "w") if args.out else contextlib.nullcontext(sys.stdout)
    with out as fh:
        fh.write("i,sigma_true,sigma_est,rel_err\n")
        for i, (s, e, r) in enumerate(zip(truth, estimated, rel), start=1):
            fh.write(f"{i},{format_value(s)},{format_value(e)},{format_value(r)}\n")
    _emit(
        sys.stdout if args.out else sys.stderr,
        lhs=lhs,
        bound_fro=est.bound_fro,
        holds=bool(holds),
        max_rel_err=float(np.max(rel)),
        mean_rel_err=float(np.mean(rel)),
    )
    return 0


def cmd_bench(args):
    cfg_kwargs = dict(block_size=args.b, power_iters=args.q, compute_bound=False)
    svd_values(np.eye(2))  # load the compiled kernel outside the timed region
    out = open(args.out, "w") if args.out else contextlib.nullcontext(sys.stdout)
    with out as fh:
        fh.write("n,t_randnn_sec,t_oracle_sec,speedup\n")
        for n in args.sizes:
            t_fast, t_slow = [], []
            for rep in range(args.reps):
                A = gaussian_matrix(n, n, SeededRng(rep))
                t0 = time.perf_counter()
                rand_nn(A, RandNNConfig(seed=rep, **cfg_kwargs))
                t_fast.append(time.perf_counter() - t0)
                t0 = time.perf_counter()
                svd_values(A)
                t_slow.append(time.perf_counter() - t0)
            fast = statistics.median(t_fast)
            slow = statistics.median(t_slow)
            fh.write(f"{n},{fast:.6g},{slow:.6g},{slow / fast:.6g}\n")
            fh.flush()
    return 0


def _add_run_flags(p, seed=True):
    p.add_argument("--b", type=int, default=64, help="block size (default 64)")
    p.add_argument("--q", type=int, default=2, help="power iterations (default 2)")
    if seed:
        p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nucnorm",
        description="Randomized estimation of singular values, nuclear and Schatten norms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("estimate", help="estimate singular values of a matrix file")
    p.add_argument("input")
    _add_run_flags(p)
    p.add_argument("--threshold", type=float, default=0.0,
                   help="stop once a block's largest estimate falls below this (0 disables)")
    p.add_argument("--p", type=_float_list, default=None,
                   help="Schatten exponents to report, e.g. '1,2,4'")
    p.add_argument("--bound", action="store_true", help="report the Frobenius error bound")
    p.add_argument("--out", help="write estimated values as CSV")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("oracle", help="exact singular values by one-sided Jacobi")
    p.add_argument("input")
    p.add_argument("--out", help="write values as CSV (default: stdout)")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="write a test matrix file")
    p.add_argument("kind", choices=["sshape", "bie", "spectrum"])
    p.add_argument("output")
    p.add_argument("--n", type=int)
    p.add_argument("--m", type=int, help="rows (default n)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--spec", help="singular values: CSV file or comma list")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("compare", help="per-value relative errors against the oracle")
    p.add_argument("input")
    _add_run_flags(p)
    p.add_argument("--out", help="write the comparison CSV (default: stdout)")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("bench", help="time randNN against the Jacobi oracle")
    p.add_argument("--sizes", type=_int_list, required=True, help="e.g. '1000,2000'")
    _add_run_flags(p, seed=False)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--out", help="write the timing CSV (default: stdout)")
    p.set_defaults(func=cmd_bench)
    return parser


def _thread_limit():
    limit = os.environ.get("NUCNORM_THREADS")
    if not limit:
        return contextlib.nullcontext()
    from threadpoolctl import threadpool_limits

    return threadpool_limits(limits=int(limit))


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        with _thread_limit():
            return args.func(args)
    except ContractError as exc:
        print(f"nucnorm {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"nucnorm {args.command}: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ConvergenceError as exc:
        print(f"nucnorm {args.command}: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
