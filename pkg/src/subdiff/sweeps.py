"""Convergence sweeps and field dumps for the command-line harness.

Errors are measured at the final collocation time t = T (the default node
family places a node there). Earlier columns carry the recovery division
by lambda'(mu(tau_0)), which amplifies solver round-off near t = 0 by an
amount that grows with both N and q; the last column is the one whose
error reflects the method rather than that amplification, and it is the
figure of merit reported throughout.
"""

from __future__ import annotations

import csv
import math
import sys
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .compact import compact_driver
from .problems import SolutionField, manufactured_case, physical_problem
from .spectral import SpectralSolution, sample_spectral, spectral_solve

SCHEMES = ("compact", "spectral")
EXAMPLES = ("sin_x", "sin_pi_x", "physical")
SPECTRAL_SAMPLE_POINTS = 1001

SWEEP_HEADER = ("scheme", "q", "gamma", "c", "N", "M", "max_error", "order", "runtime_ms")
PHYSICAL_HEADER = ("x", "t", "u")


def max_error(sol, exact) -> float:
    """Maximum |numeric - exact| over the spatial sample at t = T.

    Compact fields are compared on their native grid, spectral solutions
    on a fixed 1001-point uniform grid.
    """
    if isinstance(sol, SolutionField):
        x = sol.x_grid
        u = sol.values[:, -1]
    elif isinstance(sol, SpectralSolution):
        x = np.linspace(0.0, sol.basis.x_len, SPECTRAL_SAMPLE_POINTS)
        u = sample_spectral(sol, x)[:, -1]
    else:
        raise TypeError(f"unsupported solution type {type(sol).__name__}")
    diff = np.abs(u - np.asarray(exact(x, sol.t_grid[-1]), dtype=float))
    return float(diff.max())


def observed_order(err_coarse: float, err_fine: float, h_ratio: float) -> Optional[float]:
    """log(err_coarse/err_fine) / log(h_ratio); None when either error
    is nonpositive or not finite (no order is defined there)."""
    if h_ratio <= 1.0:
        raise ValueError(f"h_ratio must exceed 1, got {h_ratio}")
    if not (math.isfinite(err_coarse) and math.isfinite(err_fine)):
        return None
    if err_coarse <= 0.0 or err_fine <= 0.0:
        return None
    return math.log(err_coarse / err_fine) / math.log(h_ratio)


@dataclass(frozen=True)
class SweepConfig:
    """Cross-product sweep description; validated on construction."""

    scheme: str
    example: str
    gamma: float
    c: float
    q_list: tuple
    n_list: tuple
    m_list: tuple
    output_path: str

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if self.example not in EXAMPLES:
            raise ValueError(f"example must be one of {EXAMPLES}, got {self.example!r}")
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must lie in (0,1), got {self.gamma}")
        if self.example != "physical" and self.c <= -1.0:
            raise ValueError(f"c must exceed -1, got {self.c}")
        for name, vals, low in (
            ("q_list", self.q_list, 1),
            ("n_list", self.n_list, 0),
            ("m_list", self.m_list, 3),
        ):
            if len(vals) == 0:
                raise ValueError(f"{name} must not be empty")
            for v in vals:
                if int(v) != v or v < low:
                    raise ValueError(f"{name} entries must be integers >= {low}")
        if not self.output_path:
            raise ValueError("output_path must not be empty")


@dataclass(frozen=True)
class SweepRow:
    """One sweep cell; note is an in-memory failure marker, not a CSV field."""

    scheme: str
    q: int
    gamma: float
    c: float
    n_time: int
    m_space: int
    max_error: float
    observed_order: Optional[float]
    runtime_ms: float
    note: str = field(default="", compare=False)


def _solve_cell(cfg: SweepConfig, q: int, n_time: int, m_space: int):
    if cfg.example == "physical":
        problem, exact = physical_problem(cfg.gamma), None
    else:
        problem, case = manufactured_case(cfg.example, cfg.c, cfg.gamma)
        exact = case.exact
    start = time.perf_counter()
    if cfg.scheme == "compact":
        sol = compact_driver(problem, q=q, n_time=n_time, m_space=m_space)
    else:
        sol = spectral_solve(problem, q=q, n_time=n_time, m_prime=m_space)
    ms = 1e3 * (time.perf_counter() - start)
    err = max_error(sol, exact) if exact is not None else float("nan")
    return err, ms


def run_sweep(cfg: SweepConfig) -> list:
    """Execute the q x N x M cross-product and write cfg.output_path.

    Rows appear in deterministic (q, N, M) order. The order column tracks
    whichever of N/M takes more than one value (M wins if both do, being
    the innermost axis); cells that fail keep their row with a nan error
    and carry the message in the note field.
    """
    axis = "M" if len(cfg.m_list) > 1 else ("N" if len(cfg.n_list) > 1 else None)
    rows = []
    for q in cfg.q_list:
        prev_key = None
        prev = None  # (axis value, error) for the active refinement track
        for n_time in cfg.n_list:
            for m_space in cfg.m_list:
                start = time.perf_counter()
                note = ""
                try:
                    err, ms = _solve_cell(cfg, q, n_time, m_space)
                except (ValueError, RuntimeError) as exc:
                    err = float("nan")
                    ms = 1e3 * (time.perf_counter() - start)
                    note = str(exc)
                    print(
                        f"sweep cell q={q} N={n_time} M={m_space} failed: {exc}",
                        file=sys.stderr,
                    )

                if axis == "M":
                    key, value = (q, n_time), m_space
                elif axis == "N":
                    key, value = (q, m_space), n_time
                else:
                    key, value = None, None

                order = None
                if axis is not None and prev_key == key and value > prev[0]:
                    order = observed_order(prev[1], err, value / prev[0])
                if axis is not None:
                    prev_key, prev = key, (value, err)

                rows.append(
                    SweepRow(
                        scheme=cfg.scheme,
                        q=q,
                        gamma=cfg.gamma,
                        c=cfg.c,
                        n_time=n_time,
                        m_space=m_space,
                        max_error=err,
                        observed_order=order,
                        runtime_ms=ms,
                        note=note,
                    )
                )
    write_sweep_csv(rows, cfg.output_path)
    return rows


def _fmt_float(x: float) -> str:
    return f"{x:.6g}"


def _fmt_error(err: float) -> str:
    return f"{err:.5e}" if math.isfinite(err) else "nan"


def _fmt_order(order: Optional[float]) -> str:
    return "" if order is None else f"{order:.2f}"


def write_sweep_csv(rows, path: str):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_HEADER)
        for r in rows:
            writer.writerow(
                (
                    r.scheme,
                    r.q,
                    _fmt_float(r.gamma),
                    _fmt_float(r.c),
                    r.n_time,
                    r.m_space,
                    _fmt_error(r.max_error),
                    _fmt_order(r.observed_order),
                    f"{r.runtime_ms:.3f}",
                )
            )


def read_sweep_csv(path: str) -> list:
    """Parse a sweep CSV back into rows (values carry the file's rounding)."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != SWEEP_HEADER:
            raise ValueError(f"unexpected sweep header {header}")
        for rec in reader:
            rows.append(
                SweepRow(
                    scheme=rec[0],
                    q=int(rec[1]),
                    gamma=float(rec[2]),
                    c=float(rec[3]),
                    n_time=int(rec[4]),
                    m_space=int(rec[5]),
                    max_error=float(rec[6]),
                    observed_order=None if rec[7] == "" else float(rec[7]),
                    runtime_ms=float(rec[8]),
                )
            )
    return rows


def run_physical(gamma: float, n_time: int, m_space: int, q: int) -> list:
    """Field dump rows (x, t, u): the t=0 block from the initial data
    first, then every collocation column in time order."""
    problem = physical_problem(gamma)
    sol = compact_driver(problem, q=q, n_time=n_time, m_space=m_space)
    rows = []
    for k, x in enumerate(sol.x_grid):
        rows.append((float(x), 0.0, float(problem.phi(x))))
    for n, t in enumerate(sol.t_grid):
        for k, x in enumerate(sol.x_grid):
            rows.append((float(x), float(t), float(sol.values[k, n])))
    return rows


def write_physical_csv(rows, path: str):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(PHYSICAL_HEADER)
        for x, t, u in rows:
            writer.writerow((f"{x:.10g}", f"{t:.10g}", f"{u:.10e}"))


def read_physical_csv(path: str) -> list:
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = tuple(next(reader))
        if header != PHYSICAL_HEADER:
            raise ValueError(f"unexpected field-dump header {header}")
        for rec in reader:
            rows.append((float(rec[0]), float(rec[1]), float(rec[2])))
    return rows
