"""Command-line surface: run sieves, compute constants, verify bounds.

Exit codes: 0 all pass, 1 a bound check failed, 2 usage or I/O error.
Identical configurations produce byte-identical output files.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import accumulators, constants, verifier
from .accumulators import BudgetError, CheckpointFormatError

EXIT_OK = 0
EXIT_BOUND_FAILED = 1
EXIT_USAGE = 2

OUTPUT_DIR_ENV = "MERTENS_OUT_DIR"

POW2_FIRST = 16
POW2_LAST = 26


class UsageError(Exception):
    pass


def parse_scale(text: str) -> int:
    """Accept integers in plain, 2^k, or 1e6 notation."""
    text = text.strip()
    try:
        if "^" in text:
            base, exp = text.split("^")
            return int(base) ** int(exp)
        if "e" in text.lower() or "." in text:
            v = float(text)
            if v != int(v):
                raise ValueError
            return int(v)
        return int(text)
    except ValueError:
        raise UsageError(f"cannot parse integer scale {text!r}") from None


def parse_schedule(spec: str, n_max: int) -> list[int]:
    """Schedule mini-language: 'pow2', comma list, or 'a..b:step'."""
    spec = spec.strip()
    if spec == "pow2":
        ts = [1 << k for k in range(POW2_FIRST, POW2_LAST + 1) if (1 << k) <= n_max]
        if not ts:
            ts = [n_max]
        return ts
    if ".." in spec:
        head, _, step_s = spec.partition(":")
        a_s, _, b_s = head.partition("..")
        if not step_s:
            raise UsageError("range schedule needs a..b:step")
        a, b, step = parse_scale(a_s), parse_scale(b_s), parse_scale(step_s)
        if step <= 0 or b < a:
            raise UsageError(f"bad range schedule {spec!r}")
        return list(range(a, b + 1, step))
    return [parse_scale(tok) for tok in spec.split(",") if tok.strip()]


def _out_path(path: str) -> str:
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not os.path.isabs(path):
        return os.path.join(base, path)
    return path


def _fmt_real(v: float) -> str:
    return f"{v:.16E}"


def cmd_sums(args) -> int:
    n_max = parse_scale(args.max)
    schedule = parse_schedule(args.schedule, n_max)
    path = _out_path(args.checkpoints)
    if os.path.exists(path) and args.resume:
        series = accumulators.load_checkpoints(path)
        series = accumulators.extend(
            series, n_max, schedule,
            workers=args.workers, force=args.force,
        )
    else:
        series = accumulators.accumulate(
            n_max, schedule, workers=args.workers, force=args.force,
        )
    accumulators.save_checkpoints(series, path)
    for cp in series:
        print(
            f"x={cp.x} pi={cp.pi} recip={_fmt_real(cp.recip)} "
            f"logp_over_p={_fmt_real(cp.logp)} theta={_fmt_real(cp.theta_value)}"
        )
    print(f"wrote {len(series)} checkpoints to {path}")
    return EXIT_OK


def cmd_constants(args) -> int:
    bundle = constants.compute_B(args.tol)
    doc = bundle.to_json_dict()
    if args.oracle:
        direct = constants.H_direct(parse_scale(args.prime_limit))
        doc["H_direct"] = {"value": direct.value, "err_bound": direct.err_bound}
        doc["H_agreement"] = abs(direct.value - bundle.H.value)
        doc["H_agreement_bound"] = direct.err_bound + bundle.H.err_bound
    json.dump(doc, sys.stdout, indent=2, sort_keys=True)
    print()
    return EXIT_OK


def _series_for_verify(args):
    if args.checkpoints and os.path.exists(_out_path(args.checkpoints)) \
            and not args.max:
        return accumulators.load_checkpoints(_out_path(args.checkpoints))
    if not args.max:
        raise UsageError("verify needs --max or an existing --checkpoints file")
    n_max = parse_scale(args.max)
    schedule = parse_schedule(args.schedule, n_max)
    series = accumulators.accumulate(
        n_max, schedule, workers=args.workers, force=args.force,
    )
    if args.checkpoints:
        accumulators.save_checkpoints(series, _out_path(args.checkpoints))
    return series


def cmd_verify(args) -> int:
    series = _series_for_verify(args)
    only = args.only.split(",") if args.only else None
    bundle = constants.compute_B(args.tol)
    reports, rows = verifier.run_suite(series, bundle, only=only)

    lines = []
    if args.wolf_table and rows:
        lines.append("x,true_error,schoenfeld_bound,ratio,signed_error")
        for r in rows:
            lines.append(
                f"{r.x},{_fmt_real(r.true_error)},"
                f"{_fmt_real(r.schoenfeld_bound)},{_fmt_real(r.ratio)},"
                f"{_fmt_real(r.signed_error)}"
            )
    for rep in reports:
        params = " ".join(f"{k}={v}" for k, v in sorted(rep.params.items()))
        lines.append(
            f"{'PASS' if rep.passed else 'FAIL'} {rep.name} {params} "
            f"observed={_fmt_real(rep.observed)} bound={_fmt_real(rep.bound)} "
            f"margin={_fmt_real(rep.margin)}"
        )
    n_fail = sum(not r.passed for r in reports)
    lines.append(f"checks: {len(reports)} run, {n_fail} failed")

    text = "\n".join(lines) + "\n"
    if args.report:
        with open(_out_path(args.report), "w", encoding="ascii", newline="\n") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return EXIT_OK if n_fail == 0 else EXIT_BOUND_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mertens",
        description="Prime reciprocal sums, the Mertens constant, and "
                    "explicit-bound verification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sums", help="sieve and record checkpointed prime sums")
    p.add_argument("--max", required=True, help="upper limit (e.g. 2^20, 1e6)")
    p.add_argument("--schedule", default="pow2")
    p.add_argument("--checkpoints", default="checkpoints.csv")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--force", action="store_true",
                   help="allow limits beyond the desk-scale budget")
    p.add_argument("--resume", action="store_true",
                   help="extend an existing checkpoint file")
    p.set_defaults(func=cmd_sums)

    p = sub.add_parser("constants", help="compute gamma, H, and B with ledger")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--oracle", action="store_true",
                   help="include the direct prime-power oracle for H")
    p.add_argument("--prime-limit", default="1e7")
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("verify", help="run the bound/identity suite")
    p.add_argument("--max", help="upper limit (e.g. 2^20)")
    p.add_argument("--schedule", default="pow2")
    p.add_argument("--checkpoints", help="checkpoint file to load or write")
    p.add_argument("--report", help="write the report to this file too")
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--only", help="comma list of checks "
                   f"({','.join(verifier.CHECK_NAMES)})")
    p.add_argument("--wolf-table", action="store_true")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--force", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        tol = getattr(args, "tol", None)
        if tol is not None and not constants.TOL_MIN <= tol <= constants.TOL_MAX:
            raise UsageError(
                f"--tol must be in [{constants.TOL_MIN}, {constants.TOL_MAX}]"
            )
        return args.func(args)
    except (UsageError, BudgetError, CheckpointFormatError, OSError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
