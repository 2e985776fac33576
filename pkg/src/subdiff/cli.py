"""Command-line entry point: convergence sweeps, field dumps, verification.

Every report writes its CSV and, unless --no-plot is given, a PNG with
the same stem next to it. Exit codes: 0 success, 1 configuration error,
2 numerical failure (a failed sweep cell, solver breakdown, or a failed
verification criterion).
"""

from __future__ import annotations

import argparse
import math
import os
import sys

from . import acceptance
from .sweeps import (
    SweepConfig,
    run_physical,
    run_sweep,
    write_physical_csv,
)


class _ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; route through our own
    # config-error path instead so 2 stays reserved for numerical failure
    def error(self, message):
        raise _ConfigError(message)


def _int_list(text: str, flag: str):
    try:
        values = tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError:
        raise _ConfigError(f"{flag} expects comma-separated integers, got {text!r}")
    if not values:
        raise _ConfigError(f"{flag} must not be empty")
    return values


def _figure_path(out_path: str) -> str:
    stem, _ = os.path.splitext(out_path)
    return stem + ".png"


def _cmd_sweep(args) -> int:
    if args.example != "physical" and args.c is None:
        raise _ConfigError(f"--c is required for example {args.example!r}")
    cfg = SweepConfig(
        scheme=args.scheme,
        example=args.example,
        gamma=args.gamma,
        c=0.0 if args.c is None else args.c,
        q_list=_int_list(args.q, "--q"),
        n_list=_int_list(args.n_list, "--n-list"),
        m_list=_int_list(args.m_list, "--m-list"),
        output_path=args.out,
    )
    rows = run_sweep(cfg)
    print(f"wrote {len(rows)} rows to {cfg.output_path}")
    if not args.no_plot:
        from .figures import render_sweep_figure

        fig_path = _figure_path(cfg.output_path)
        render_sweep_figure(rows, fig_path)
        print(f"wrote figure to {fig_path}")
    failed = [r for r in rows if r.note]
    if failed:
        print(f"{len(failed)} of {len(rows)} cells failed", file=sys.stderr)
        return 2
    if cfg.example != "physical" and any(
        not math.isfinite(r.max_error) for r in rows
    ):
        return 2
    return 0


def _cmd_physical(args) -> int:
    rows = run_physical(args.gamma, n_time=args.n, m_space=args.m, q=args.q)
    write_physical_csv(rows, args.out)
    print(f"wrote {len(rows)} rows to {args.out}")
    if not args.no_plot:
        from .figures import render_physical_figure

        fig_path = _figure_path(args.out)
        render_physical_figure(rows, fig_path)
        print(f"wrote figure to {fig_path}")
    return 0


def _cmd_verify(args) -> int:
    indices = None
    if args.criteria is not None:
        indices = _int_list(args.criteria, "--criteria")
    try:
        results = acceptance.run_all(indices)
    except ValueError as exc:
        raise _ConfigError(str(exc))
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        print(f"[{status}] criterion {r.index}: {r.name} ({r.runtime_s:.1f}s)")
        print(f"       {r.detail}")
    n_fail = sum(not r.passed for r in results)
    print(f"{len(results) - n_fail}/{len(results)} criteria passed")
    return 0 if n_fail == 0 else 2


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="subdiff",
        description="High-order solver experiments for sub-diffusion problems",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="convergence sweep to CSV (+ figure)")
    sweep.add_argument("--scheme", required=True, choices=("compact", "spectral"))
    sweep.add_argument(
        "--example", required=True, choices=("sin_x", "sin_pi_x", "physical")
    )
    sweep.add_argument("--gamma", required=True, type=float)
    sweep.add_argument("--c", type=float, default=None)
    sweep.add_argument("--q", default="1,2,3", help="comma-separated q values")
    sweep.add_argument("--n-list", required=True, help="comma-separated N values")
    sweep.add_argument(
        "--m-list", required=True, help="comma-separated M (or M') values"
    )
    sweep.add_argument("--out", required=True)
    sweep.add_argument("--no-plot", action="store_true")
    sweep.set_defaults(func=_cmd_sweep)

    phys = sub.add_parser("physical", help="field dump of the sourceless case")
    phys.add_argument("--gamma", required=True, type=float)
    phys.add_argument("--n", type=int, default=20)
    phys.add_argument("--m", type=int, default=20)
    phys.add_argument("--q", type=int, default=2)
    phys.add_argument("--out", required=True)
    phys.add_argument("--no-plot", action="store_true")
    phys.set_defaults(func=_cmd_physical)

    verify = sub.add_parser("verify", help="run the acceptance criteria")
    verify.add_argument(
        "--criteria", default=None, help="comma-separated criterion numbers"
    )
    verify.set_defaults(func=_cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except _ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except RuntimeError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
