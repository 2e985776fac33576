"""Temporal collocation machinery for the weakly singular integral equation.

Collocating v(tau_n) = h(tau_n) + (1/Gamma(gamma)) * integral of
(tau_n - s)^(-alpha) H(tau_n, s) (Lv + g)(s) ds at Gauss nodes, with the
integrand's smooth part replaced by its Lagrange interpolant, yields
weights w[n,j] and the dense coupling matrix r[n,j] = w[n,j] H(tau_n,
tau_j) / Gamma(gamma). The coupling is deliberately not triangular: each
row integrates the interpolant built on all N+1 nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quadrature import gamma_fn, gauss_jacobi, gauss_legendre
from .smoothing import KernelEvaluator, SmoothingMap, kernel_H_matrix

MAX_TIME_DEGREE = 256

NODE_FAMILIES = ("radau", "legendre", "chebyshev")


def collocation_nodes(n_time: int, family: str = "legendre") -> np.ndarray:
    """N+1 collocation points in (-1, 1], ascending; tau = -1 never appears.

    The left endpoint must stay excluded: the recovered solution divides
    by lambda'(mu(tau)), which vanishes there for q >= 2.

    "radau" fixes tau = +1 as a node (interior points are the zeros of
    the Jacobi polynomial P_N^(1,0)), so the last collocation time is
    exactly t = b. Solution errors at that node are markedly smaller than
    at interior points near the right end, which is why the solvers
    default to it; "legendre" and "chebyshev" are plain Gauss families.
    """
    if not 0 <= n_time <= MAX_TIME_DEGREE:
        raise ValueError(f"n_time must be in [0, {MAX_TIME_DEGREE}], got {n_time}")
    if family == "radau":
        if n_time == 0:
            return np.array([1.0])
        interior = gauss_jacobi(n_time, 1.0, 0.0).nodes
        return np.append(interior, 1.0)
    if family == "legendre":
        return gauss_legendre(n_time + 1).nodes.copy()
    if family == "chebyshev":
        k = np.arange(n_time + 1)
        return np.sort(np.cos((2.0 * k + 1.0) * np.pi / (2.0 * n_time + 2.0)))
    raise ValueError(f"family must be one of {NODE_FAMILIES}, got {family!r}")


def barycentric_weights(nodes) -> np.ndarray:
    """Weights for the second-form barycentric interpolation formula."""
    x = np.asarray(nodes, dtype=float)
    n = x.size
    if np.unique(x).size != n:
        raise ValueError("nodes must be pairwise distinct")
    if n == 1:
        return np.ones(1)
    # scale differences so the product neither under- nor overflows at
    # large N, then normalize; both factors cancel in the second form
    c = 4.0 / (x.max() - x.min())
    w = np.empty(n)
    for j in range(n):
        w[j] = 1.0 / np.prod(c * (x[j] - np.delete(x, j)))
    return w / np.abs(w).max()


def lagrange_eval(nodes, bary, j: int, s: float) -> float:
    """Cardinal polynomial I_j at the point s (second barycentric form)."""
    x = np.asarray(nodes, dtype=float)
    b = np.asarray(bary, dtype=float)
    if not 0 <= j < x.size:
        raise ValueError(f"basis index {j} out of range")
    hit = np.nonzero(x == s)[0]
    if hit.size:
        return 1.0 if hit[0] == j else 0.0
    terms = b / (s - x)
    return float(terms[j] / terms.sum())


def _lagrange_matrix(x: np.ndarray, bary: np.ndarray, pts: np.ndarray) -> np.ndarray:
    # rows: basis index j, columns: evaluation points
    diff = pts[None, :] - x[:, None]
    exact = diff == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = bary[:, None] / diff
        table = terms / terms.sum(axis=0)
    collided = exact.any(axis=0)
    if collided.any():
        table[:, collided] = exact[:, collided].astype(float)
    return table


def singular_weights(nodes, alpha: float) -> np.ndarray:
    """Matrix of w[n,j] = integral over (-1, tau_n) of (tau_n-s)^(-alpha) I_j(s).

    Mapping the interval onto (-1,1) turns each row into a fixed
    Jacobi-weighted integral of a degree-N polynomial, so an (N+1)-point
    Gauss-Jacobi rule evaluates it exactly up to round-off.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0,1), got {alpha}")
    x = np.asarray(nodes, dtype=float)
    n = x.size
    bary = barycentric_weights(x)
    rule = gauss_jacobi(n, -alpha, 0.0)
    w = np.empty((n, n))
    for i, tau in enumerate(x):
        half = 0.5 * (tau + 1.0)
        s = half * (rule.nodes + 1.0) - 1.0
        table = _lagrange_matrix(x, bary, s)
        w[i] = half ** (1.0 - alpha) * (table @ rule.weights)
    return w


@dataclass(frozen=True)
class TemporalDiscretization:
    """Immutable collocation data: nodes, weights, and the coupling matrix."""

    n_time: int
    nodes: np.ndarray
    bary_weights: np.ndarray
    alpha: float
    w_sing: np.ndarray
    coupling_W: np.ndarray

    def __post_init__(self):
        for arr in (self.nodes, self.bary_weights, self.w_sing, self.coupling_W):
            arr.setflags(write=False)


def assemble_W(problem, smoothing_map: SmoothingMap, nodes) -> TemporalDiscretization:
    """Coupling matrix r[n,j] = w[n,j] H(tau_n, tau_j) / Gamma(gamma)."""
    x = np.asarray(nodes, dtype=float)
    if np.any(x <= -1.0) or np.any(x > 1.0) or np.any(np.diff(x) <= 0):
        raise ValueError("nodes must be ascending and inside (-1, 1]")
    alpha = 1.0 - problem.gamma
    evaluator = KernelEvaluator(map=smoothing_map, alpha=alpha)
    w_sing = singular_weights(x, alpha)
    h_grid = kernel_H_matrix(evaluator, x, x)
    coupling = w_sing * h_grid / gamma_fn(problem.gamma)
    return TemporalDiscretization(
        n_time=x.size - 1,
        nodes=x.copy(),
        bary_weights=barycentric_weights(x),
        alpha=alpha,
        w_sing=w_sing,
        coupling_W=coupling,
    )
