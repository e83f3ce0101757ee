"""Command-line front end: ``hardyz <subcommand> [options]``.

Exit codes: 0 success, 1 a check failed, 2 usage error.
"""
from __future__ import annotations

import argparse
import csv
import sys

from . import calibration, experiments, expsum
from .errors import ConsistencyError, ConvergenceError, DomainError, RangeError
from .gram import DEFAULT_TOL, gram_range
from .zfun import METHODS, z_afe_smooth, z_reference, z_rs_corrected, z_rs_main

EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _int_list(text: str) -> list:
    try:
        return [int(float(x)) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _float_list(text: str) -> list:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _global_flags(parser, suppress: bool) -> None:
    """Global flags; accepted before or after the subcommand.  The subcommand
    copies use SUPPRESS so they never overwrite a value given up front."""
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--method", default=d(experiments.DEFAULT_METHOD), choices=METHODS)
    parser.add_argument("--cache-dir", default=d(None),
                        help=f"Gram cache directory (default ${experiments.CACHE_ENV})")
    parser.add_argument("--out", default=d("csv"), choices=("csv", "tsv"))
    parser.add_argument("--threads", type=int, default=d(1))
    parser.add_argument("--tolerance", type=float, default=d(DEFAULT_TOL))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)

    p = _Parser(prog="hardyz", description="Hardy Z at Gram points: evaluators and experiments.")
    _global_flags(p, suppress=False)
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("gram", parents=[common], help="Gram points g(x) on a grid")
    s.add_argument("--from", dest="x_from", type=float, default=-1.0)
    s.add_argument("--to", dest="x_to", type=float, default=10.0)
    s.add_argument("--stride", type=float, default=1.0)

    s = sub.add_parser("z", parents=[common], help="Z(t) at given points")
    s.add_argument("--t", type=_float_list, required=True)
    s.add_argument("--order", type=int, default=1, choices=(0, 1, 2))

    s = sub.add_parser("sum", parents=[common], help="sum of Z over even or odd Gram points")
    s.add_argument("--parity", choices=("even", "odd"), default="even")
    s.add_argument("--N", type=int, required=True)

    s = sub.add_parser("scan", parents=[common], help="error-term scan over a grid of N")
    s.add_argument("--parity", choices=("even", "odd"), default="even")
    s.add_argument("--grid", type=_int_list, default=list(2**k for k in range(7, 18)))
    s.add_argument("--no-timing", action="store_true", help="omit the wall_s column")

    s = sub.add_parser("pairs", parents=[common], help="pair sum Z(g(n))Z(g(n+1))")
    s.add_argument("--N", type=int, default=10**5)

    s = sub.add_parser("cosine", parents=[common], help="Titchmarsh cosine sum")
    s.add_argument("--N", type=_int_list, default=[100, 1000, 10000])

    s = sub.add_parser("vdc-demo", parents=[common], help="stationary-phase transform demo")
    s.add_argument("--A", type=_float_list, default=[1e2, 1e3, 1e4])
    s.add_argument("--m", type=_int_list, default=[5, 7, 10])

    s = sub.add_parser("calibrate", parents=[common], help="regenerate the calibration record")
    s.add_argument("--seed", type=int, default=None)
    s.add_argument("--path", default=None, help="record path (default: the packaged record)")
    return p


def _writer(args):
    return csv.writer(sys.stdout, delimiter="," if args.out == "csv" else "\t", lineterminator="\n")


def _cmd_gram(args) -> int:
    cache = gram_range(args.x_from, args.x_to, args.stride, args.tolerance, args.threads)
    w = _writer(args)
    w.writerow(["x", "t", "residual"])
    res = cache.residuals()
    for x, t, r in zip(cache.x, cache.t, res):
        w.writerow([f"{x:g}", f"{t:.12f}", f"{r:.3e}"])
    return EXIT_OK


def _cmd_z(args) -> int:
    fns = {
        "reference": z_reference,
        "rs_main": z_rs_main,
        "rs_corrected": lambda t: z_rs_corrected(t, args.order),
        "afe_smooth": z_afe_smooth,
    }
    w = _writer(args)
    w.writerow(["t", "z", "method", "est_error"])
    for t in args.t:
        s = fns[args.method](t)
        w.writerow([repr(s.t), repr(s.z), s.method, f"{s.est_error:.3e}"])
    return EXIT_OK


def _cap_ok(reports) -> bool:
    ok = True
    for r in reports:
        if r.N >= 128:
            cap = calibration.get(f"cap_{r.parity}")
            if r.norm_new > cap:
                print(f"norm_new={r.norm_new:.4g} at N={r.N} exceeds cap {cap:.4g}", file=sys.stderr)
                ok = False
    return ok


def _cmd_sum(args) -> int:
    r = experiments.gram_sum(args.N, args.parity, args.method, args.threads, args.cache_dir)
    w = _writer(args)
    w.writerow(experiments.SUM_HEADER)
    w.writerow(r.row())
    return EXIT_OK if _cap_ok([r]) else EXIT_CHECK


def _cmd_scan(args) -> int:
    reports = experiments.error_scan(args.grid, args.parity, args.method, args.threads, args.cache_dir)
    timing = not args.no_timing
    w = _writer(args)
    header = experiments.SUM_HEADER if timing else experiments.SUM_HEADER[:-1]
    w.writerow(header + ["norm_ivic"])
    for r in reports:
        w.writerow(r.row(timing) + [repr(r.norm_ivic)])
    return EXIT_OK if _cap_ok(reports) else EXIT_CHECK


def _cmd_pairs(args) -> int:
    z = experiments.consecutive_z(args.N, args.method, args.threads, args.cache_dir)
    r = experiments.pair_sum(args.N, args.method, z=z)
    moser = experiments.moser_fourth(args.N, z=z)
    w = _writer(args)
    w.writerow(["N", "P", "target", "rel_dev", "moser_stat", "method"])
    w.writerow([r.N, repr(r.P), repr(r.target), repr(r.rel_dev), repr(moser), r.method])
    return EXIT_OK if r.rel_dev <= 0.1 else EXIT_CHECK


def _cmd_cosine(args) -> int:
    cap = calibration.get("cap_cosine")
    w = _writer(args)
    w.writerow(["N", "T", "E", "norm"])
    ok = True
    for N in args.N:
        r = experiments.titchmarsh_cosine_sum(N, args.threads, args.cache_dir)
        w.writerow([r.N, repr(r.T), repr(r.E), repr(r.norm)])
        ok &= r.norm <= cap
    return EXIT_OK if ok else EXIT_CHECK


def _cmd_vdc(args) -> int:
    k = calibration.get("K_vdc")
    w = _writer(args)
    w.writerow(["problem", "saddles", "lhs_abs", "rhs_abs", "residual", "R_bound", "ratio"])
    probs = [expsum.quadratic_suite(A, s) for A in args.A for s in (1, -1)]
    probs += [expsum.sm_problem(m) for m in args.m]
    ok = True
    for p in probs:
        out = expsum.vdc_transform(p, check=False)
        nus = " ".join(str(t.nu) for t in out.saddle_terms)
        w.writerow([p.name, nus, f"{abs(out.lhs_direct):.6g}", f"{abs(out.rhs_main):.6g}",
                    f"{out.residual:.6g}", f"{out.R_bound:.6g}", f"{out.ratio:.4f}"])
        ok &= out.ratio <= k
    return EXIT_OK if ok else EXIT_CHECK


def _cmd_calibrate(args) -> int:
    from . import calibrate
    seed = calibrate.SEED if args.seed is None else args.seed
    values = calibrate.run(seed, args.threads, args.path)
    w = _writer(args)
    w.writerow(["key", "value"])
    for key in sorted(values):
        w.writerow([key, repr(values[key])])
    return EXIT_OK


COMMANDS = {
    "gram": _cmd_gram, "z": _cmd_z, "sum": _cmd_sum, "scan": _cmd_scan, "pairs": _cmd_pairs,
    "cosine": _cmd_cosine, "vdc-demo": _cmd_vdc, "calibrate": _cmd_calibrate,
}


def cli_main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    if args.threads < 1 or not args.tolerance > 0:
        print("hardyz: --threads must be >= 1 and --tolerance > 0", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[args.cmd](args)
    except (ValueError, DomainError, RangeError) as exc:
        print(f"hardyz {args.cmd}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, ConsistencyError) as exc:
        print(f"hardyz {args.cmd}: check failed: {exc}", file=sys.stderr)
        return EXIT_CHECK


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
