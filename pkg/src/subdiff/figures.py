"""Figure rendering for sweep tables and field dumps.

Every CLI report writes a PNG next to its CSV so a run leaves both the
numbers and a picture of them. Rendering is headless (Agg) and consumes
the in-memory rows, never the files, so the two outputs cannot drift.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np


def _finite_series(rows, axis_attr):
    by_q = {}
    for r in rows:
        if math.isfinite(r.max_error) and r.max_error > 0.0:
            by_q.setdefault(r.q, []).append((getattr(r, axis_attr), r.max_error))
    return {q: sorted(pts) for q, pts in by_q.items()}


def render_sweep_figure(rows, path: str):
    """Error-vs-refinement plot, one line per q.

    The x axis follows the varied parameter: log-log against M for
    spatial sweeps, log-linear against N for temporal ones.
    """
    if not rows:
        raise ValueError("no rows to plot")
    m_values = {r.m_space for r in rows}
    axis_attr = "m_space" if len(m_values) > 1 else "n_time"
    series = _finite_series(rows, axis_attr)

    fig, ax = plt.subplots(figsize=(6.0, 4.2))
    for q in sorted(series):
        pts = series[q]
        ax.plot([p[0] for p in pts], [p[1] for p in pts], marker="o", label=f"q = {q}")
    if axis_attr == "m_space":
        ax.set_xscale("log")
        ax.set_xlabel("M")
        ref = next((pts for pts in series.values() if len(pts) > 1), None)
        if ref is not None:
            m0, e0 = ref[0]
            ms = np.array([p[0] for p in ref], dtype=float)
            ax.plot(ms, e0 * (m0 / ms) ** 4, ls="--", color="gray", label="slope -4")
    else:
        ax.set_xlabel("N")
    ax.set_yscale("log")
    ax.set_ylabel("max error at t = T")
    first = rows[0]
    ax.set_title(f"{first.scheme}, gamma = {first.gamma:g}, c = {first.c:g}")
    if series:
        ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_physical_figure(rows, path: str):
    """Heatmap of u(x, t) plus solution profiles at a few times."""
    if not rows:
        raise ValueError("no rows to plot")
    xs = np.array(sorted({r[0] for r in rows}))
    ts = np.array(sorted({r[1] for r in rows}))
    grid = np.full((xs.size, ts.size), np.nan)
    xi = {x: i for i, x in enumerate(xs)}
    ti = {t: i for i, t in enumerate(ts)}
    for x, t, u in rows:
        grid[xi[x], ti[t]] = u

    fig, (ax0, ax1) = plt.subplots(1, 2, figsize=(9.6, 4.0))
    mesh = ax0.pcolormesh(ts, xs, grid, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax0, label="u")
    ax0.set_xlabel("t")
    ax0.set_ylabel("x")
    ax0.set_title("u(x, t)")

    picks = sorted({0, ts.size // 3, 2 * ts.size // 3, ts.size - 1})
    for j in picks:
        ax1.plot(xs, grid[:, j], label=f"t = {ts[j]:.3g}")
    ax1.set_xlabel("x")
    ax1.set_ylabel("u")
    ax1.set_title("profiles")
    ax1.legend()
    ax1.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
