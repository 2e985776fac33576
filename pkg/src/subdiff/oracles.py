"""Brute-force reference computations used to cross-check the fast paths.

Deliberately slow and simple: graded-panel quadrature for weakly singular
integrals, a closed-form moment recurrence, and a dense Kronecker solve
for the coupled space-time systems. These share nothing with the solvers
they validate except the Gauss rule generator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .quadrature import gauss_jacobi, gauss_legendre

# deepest panel length, relative to the data scale: raw-integrand panels
# closer to the singularity than this lose digits to the (hi - s)
# subtraction inside the integrand, so the Jacobi tail takes over there
PANEL_DEPTH_FLOOR = 1e-3
ORACLE_MAX_UNKNOWNS = 5000
_PANEL_POINTS = 30
_CHECK_POINTS = 45


@dataclass(frozen=True)
class SingularIntegralSpec:
    """Integral of `integrand` over (lo, hi) with a (hi-s)^(-alpha) blow-up at hi."""

    integrand: Callable
    interval: tuple[float, float]
    singular_exponent: float
    rel_tol: float = 1e-12

    def __post_init__(self):
        lo, hi = self.interval
        if not lo < hi:
            raise ValueError(f"need lo < hi, got {self.interval}")
        if not 0.0 < self.singular_exponent < 1.0:
            raise ValueError(
                f"singular exponent must lie in (0,1), got {self.singular_exponent}"
            )


@dataclass(frozen=True)
class SingularIntegralResult:
    value: float
    converged: bool
    est_rel_err: float


def _graded_estimate(spec: SingularIntegralSpec, n_points: int) -> float:
    lo, hi = spec.interval
    alpha = spec.singular_exponent
    length = hi - lo
    floor = PANEL_DEPTH_FLOOR * max(abs(lo), abs(hi), length)
    gl = gauss_legendre(n_points)
    pieces = []
    d = length
    while d >= floor:
        x, w = gl.mapped(hi - d, hi - d / 2.0)
        pieces.append(float(w @ np.asarray(spec.integrand(x), dtype=float)))
        d /= 2.0
    # tail panel touching hi: factor the weight analytically so only the
    # remainder integrand(s) * (hi-s)^alpha is sampled; a singular factor
    # computed as (hi-s)^(-alpha) inside the integrand cancels against it
    # at the rounded nodes, so no digits are lost here
    gj = gauss_jacobi(n_points, -alpha, 0.0)
    half = d / 2.0
    s = (hi - d) + half * (gj.nodes + 1.0)
    smooth = np.asarray(spec.integrand(s), dtype=float) * (hi - s) ** alpha
    pieces.append(half ** (1.0 - alpha) * float(gj.weights @ smooth))
    return math.fsum(pieces)


def singular_integral(spec: SingularIntegralSpec) -> SingularIntegralResult:
    """Geometrically graded panels accumulating at the singular endpoint.

    Panels halve toward hi down to the rounding-safe depth; each gets a
    30-point Gauss rule, and the tail panel a Gauss-Jacobi rule with the
    singular weight absorbed. A 45-point re-evaluation provides the
    error estimate; `converged` reports whether it met rel_tol. The
    integrand must be smooth away from hi.
    """
    coarse = _graded_estimate(spec, _PANEL_POINTS)
    fine = _graded_estimate(spec, _CHECK_POINTS)
    scale = max(abs(coarse), abs(fine))
    if scale == 0.0:
        return SingularIntegralResult(value=0.0, converged=True, est_rel_err=0.0)
    est = abs(fine - coarse) / scale
    return SingularIntegralResult(
        value=coarse, converged=bool(est <= spec.rel_tol), est_rel_err=est
    )


def singular_moment(tau: float, alpha: float, k: int) -> float:
    """Closed form of int_{-1}^{tau} (tau-s)^(-alpha) s^k ds.

    Integration by parts gives the recurrence
    I_k = ((-1)^k (tau+1)^(1-alpha) + k tau I_{k-1}) / (k + 1 - alpha).
    """
    if not -1.0 < tau <= 1.0:
        raise ValueError(f"tau must lie in (-1, 1], got {tau}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0,1), got {alpha}")
    if k < 0:
        raise ValueError(f"k must be nonnegative, got {k}")
    head = (tau + 1.0) ** (1.0 - alpha)
    val = head / (1.0 - alpha)
    for j in range(1, k + 1):
        val = ((-1.0) ** j * head + j * tau * val) / (j + 1.0 - alpha)
    return val


def kronecker_solve(t_mat, a_mat, w_mat, s_mat) -> np.ndarray:
    """Dense solve of T V - A V W^T = S via the column-stacked Kronecker form.

    vec(T V) = (I kron T) vec V and vec(A V W^T) = (W kron A) vec V for
    column stacking, so the assembled operator is (I kron T) - (W kron A).
    Intended as an oracle; refuses systems beyond 5000 unknowns.
    """
    t = np.asarray(t_mat, dtype=float)
    a = np.asarray(a_mat, dtype=float)
    w = np.asarray(w_mat, dtype=float)
    s = np.asarray(s_mat, dtype=float)
    if s.ndim != 2:
        raise ValueError("S must be a matrix")
    m, n = s.shape
    if t.shape != (m, m) or a.shape != (m, m) or w.shape != (n, n):
        raise ValueError(
            f"inconsistent shapes: T {t.shape}, A {a.shape}, W {w.shape}, S {s.shape}"
        )
    if m * n > ORACLE_MAX_UNKNOWNS:
        raise ValueError(f"oracle limited to {ORACLE_MAX_UNKNOWNS} unknowns")
    op = np.kron(np.eye(n), t) - np.kron(w, a)
    vec = np.linalg.solve(op, s.reshape(m * n, order="F"))
    v = vec.reshape((m, n), order="F")
    resid = t @ v - a @ v @ w.T - s
    denom = (
        np.abs(s).max(initial=0.0)
        + np.abs(t @ v).max(initial=0.0)
        + np.abs(a @ v @ w.T).max(initial=0.0)
    )
    if denom > 0 and np.abs(resid).max() > 1e-12 * denom:
        raise RuntimeError("oracle residual exceeds 1e-12; system too ill-conditioned")
    return v
