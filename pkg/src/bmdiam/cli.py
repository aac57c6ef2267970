"""Command-line front end: every operation as a subcommand.

Results go to stdout (or --output FILE); diagnostics and timings go to
stderr, so machine-readable output never interleaves with progress chat.
Exit codes: 0 success, 1 verification/audit failure, 2 usage error,
3 numerical non-convergence.

All randomness is keyed by --seed (fixed default, not time-based), so a
given argv always produces byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from typing import Optional

from . import acceptance, bounds
from .estimator import (
    DEFAULT_SEED,
    AuditError,
    EstimatorConfig,
    estimate,
    estimates_to_csv,
    report_to_json,
    sandwich_audit,
)
from .paths import PathConfig, sample_path

_FUNCTIONAL_ALIASES = {
    "d": "diameter",
    "l": "perimeter",
    "a": "area",
    "r": "range",
    "m": "max_two_ranges",
    "d2": "diameter_sq",
    "l2": "perimeter_sq",
}


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _diag(msg: str) -> None:
    sys.stderr.write(msg + "\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument(
        "--format", choices=("text", "json", "csv"), default="text",
        help="output format (default: text)",
    )
    common.add_argument("--output", metavar="PATH", help="write results to a file")
    common.add_argument(
        "--seed", type=int, default=DEFAULT_SEED,
        help=f"stream seed (default: {DEFAULT_SEED})",
    )
    common.add_argument(
        "--threads", type=int, default=None,
        help="worker threads (default: BMDIAM_THREADS env or machine parallelism)",
    )

    p = argparse.ArgumentParser(
        prog="bmdiam",
        description="Hull functionals of planar Brownian motion: bounds, "
        "simulation, and verification.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("bounds", parents=[common], help="full analytic bounds report")
    sp.add_argument("--tolerance", type=float, default=1e-8,
                    help="absolute tolerance for the quadratures")

    sp = sub.add_parser("simulate", parents=[common],
                        help="Monte Carlo estimates plus per-sample audit")
    sp.add_argument("--paths", type=int, default=1000, help="number of replicates")
    sp.add_argument("--steps", default="1024,4096,16384",
                    help="comma-separated step levels (powers of two)")
    sp.add_argument("--functionals", default="d,l,a,r",
                    help="comma-separated: d,l,a,r,m,d2,l2 or full names")
    sp.add_argument("--skip-audit", action="store_true",
                    help="skip the per-sample inequality audit")

    sp = sub.add_parser("density", parents=[common], help="range density table")
    sp.add_argument("--r-min", type=float, default=bounds.R_MIN)
    sp.add_argument("--r-max", type=float, default=6.0)
    sp.add_argument("--points", type=int, default=100)

    sp = sub.add_parser("integrate", parents=[common],
                        help="perimeter second-moment double integral")
    sp.add_argument("--tolerance", type=float, default=1e-8)

    sub.add_parser("optimize", parents=[common],
                   help="maximize the lower-bound gain g(a, h)")

    sp = sub.add_parser("verify", parents=[common], help="run the acceptance suite")
    sp.add_argument("--quick", action="store_true",
                    help="reduced Monte Carlo sample counts")
    sp.add_argument("--full-headline", action="store_true",
                    help="headline estimate at 10^6 paths (slow)")

    sp = sub.add_parser("path", parents=[common], help="dump one sampled path")
    sp.add_argument("--steps", type=int, default=1024)
    sp.add_argument("--replicate", type=int, default=0)

    return p


def _resolve_threads(args) -> Optional[int]:
    if args.threads is not None:
        return args.threads
    env = os.environ.get("BMDIAM_THREADS")
    return int(env) if env else None


def _kv_text(pairs) -> str:
    width = max(len(k) for k, _ in pairs)
    return "".join(f"{k.ljust(width)}  {v}\n" for k, v in pairs)


def _kv_csv(pairs) -> str:
    return "field,value\n" + "".join(f"{k},{v}\n" for k, v in pairs)


def _cmd_bounds(args) -> int:
    report = bounds.bounds_report(tolerance=args.tolerance)
    if args.format == "json":
        _emit(report.to_json() + "\n", args.output)
    else:
        pairs = [(k, _fmt(v)) for k, v in report.to_dict().items()]
        _emit(_kv_csv(pairs) if args.format == "csv" else _kv_text(pairs), args.output)
    return 0


def _cmd_simulate(args, parser) -> int:
    try:
        levels = tuple(int(s) for s in args.steps.split(","))
    except ValueError:
        parser.error(f"bad --steps value: {args.steps!r}")
    names = []
    for tok in args.functionals.split(","):
        tok = tok.strip()
        names.append(_FUNCTIONAL_ALIASES.get(tok, tok))
    try:
        cfg = EstimatorConfig(
            n_paths=args.paths, step_levels=levels, seed=args.seed, functionals=tuple(names)
        )
    except ValueError as exc:
        parser.error(str(exc))
    threads = _resolve_threads(args)
    t0 = time.perf_counter()
    est = estimate(cfg, threads)
    _diag(f"estimated {len(est)} series in {time.perf_counter() - t0:.2f}s")
    audit = None
    if not args.skip_audit:
        t0 = time.perf_counter()
        audit = sandwich_audit(cfg, threads)
        _diag(
            f"audit: {audit.n_checks} checks, {audit.violations} violations "
            f"({time.perf_counter() - t0:.2f}s)"
        )
    if args.format == "json":
        _emit(report_to_json(est, audit, cfg) + "\n", args.output)
    elif args.format == "csv":
        _emit(estimates_to_csv(est), args.output)
    else:
        lines = [
            f"{'functional':<14} {'steps':>7} {'mean':>12} {'stderr':>12} "
            f"{'extrapolated':>13}"
        ]
        for e in est:
            ext = f"{e.extrapolated:.6f}" if e.extrapolated is not None else "-"
            lines.append(
                f"{e.functional:<14} {e.n_steps:>7} {e.mean:>12.6f} "
                f"{e.stderr:>12.2e} {ext:>13}"
            )
        if audit is not None:
            lines.append(
                f"audit: {audit.n_checks} checks, {audit.violations} violations, "
                f"E d^2 = {audit.d1_sq_mean:.6f} +/- {audit.d1_sq_stderr:.2e}"
            )
        _emit("\n".join(lines) + "\n", args.output)
    return 0


def _cmd_density(args, parser) -> int:
    if args.points < 2:
        parser.error("--points must be at least 2")
    if args.r_min < bounds.R_MIN:
        parser.error(f"--r-min must be at least {bounds.R_MIN}")
    if args.r_max <= args.r_min:
        parser.error("--r-max must exceed --r-min")
    step = (args.r_max - args.r_min) / (args.points - 1)
    rows = []
    for i in range(args.points):
        r = args.r_min + i * step
        rows.append((r, bounds.feller_density(r)))
    if args.format == "json":
        _emit(
            json.dumps({"rows": [[r, f] for r, f in rows]}, indent=2) + "\n",
            args.output,
        )
    elif args.format == "csv":
        _emit("r,density\n" + "".join(f"{_fmt(r)},{_fmt(f)}\n" for r, f in rows), args.output)
    else:
        _emit("".join(f"{r:<22.17g} {f:.17g}\n" for r, f in rows), args.output)
    return 0


def _cmd_integrate(args) -> int:
    res = bounds.perimeter_sq_detail(args.tolerance)
    pairs = [
        ("value", _fmt(res.value)),
        ("value_over_pi_sq", _fmt(res.value / math.pi**2)),
        ("abs_error", _fmt(res.abs_error)),
        ("tail_bound", _fmt(res.tail_bound)),
    ]
    if args.format == "json":
        _emit(json.dumps({k: float(v) for k, v in pairs}, indent=2) + "\n", args.output)
    else:
        _emit(_kv_csv(pairs) if args.format == "csv" else _kv_text(pairs), args.output)
    return 0


def _cmd_optimize(args) -> int:
    a, h, gs = bounds.optimize_g()
    pairs = [
        ("a_star", _fmt(a)),
        ("h_star", _fmt(h)),
        ("g_star", _fmt(gs)),
        ("lower_bound", _fmt(bounds.LOWER_BASIC + gs)),
    ]
    if args.format == "json":
        _emit(json.dumps({k: float(v) for k, v in pairs}, indent=2) + "\n", args.output)
    else:
        _emit(_kv_csv(pairs) if args.format == "csv" else _kv_text(pairs), args.output)
    return 0


def _cmd_verify(args) -> int:
    t0 = time.perf_counter()
    results = acceptance.run_all(quick=args.quick, full_headline=args.full_headline)
    _diag(f"acceptance suite finished in {time.perf_counter() - t0:.1f}s")
    text = "\n".join(r.line() for r in results) + "\n"
    if args.format == "json":
        payload = [
            {"criterion": r.index, "name": r.name, "passed": r.passed, "detail": r.detail}
            for r in results
        ]
        _emit(json.dumps(payload, indent=2) + "\n", args.output)
    else:
        _emit(text, args.output)
    return 0 if all(r.passed for r in results) else 1


def _cmd_path(args) -> int:
    path = sample_path(PathConfig(args.steps, args.seed, args.replicate))
    n = path.n_steps
    if args.format == "json":
        rows = [[k / n, float(x), float(y)] for k, (x, y) in enumerate(zip(path.xs, path.ys))]
        _emit(json.dumps({"rows": rows}, indent=2) + "\n", args.output)
    else:
        body = "".join(
            f"{_fmt(k / n)},{_fmt(float(x))},{_fmt(float(y))}\n"
            for k, (x, y) in enumerate(zip(path.xs, path.ys))
        )
        _emit("t,x,y\n" + body, args.output)
    return 0


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "bounds":
            return _cmd_bounds(args)
        if args.command == "simulate":
            return _cmd_simulate(args, parser)
        if args.command == "density":
            return _cmd_density(args, parser)
        if args.command == "integrate":
            return _cmd_integrate(args)
        if args.command == "optimize":
            return _cmd_optimize(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "path":
            return _cmd_path(args)
        parser.error(f"unknown command {args.command!r}")
    except SystemExit as exc:
        return int(exc.code or 0)
    except bounds.ConvergenceError as exc:
        _diag(f"numerical non-convergence: {exc}")
        return 3
    except AuditError as exc:
        _diag(f"audit failure: {exc}")
        return 1
    except ValueError as exc:
        _diag(f"usage error: {exc}")
        return 2
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
