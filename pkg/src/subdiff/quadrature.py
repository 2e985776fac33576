"""Gauss quadrature rules, the gamma function, and Legendre polynomials.

Shared numerical kernel: Jacobi-Gauss rules supply the weakly singular
temporal weights, Legendre-Gauss rules drive node generation and spectral
right-side assembly, and the Legendre recurrences back the spectral basis.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

MAX_RULE_SIZE = 2048
MAX_LEGENDRE_DEGREE = 4096


def gamma_fn(x: float) -> float:
    """Gamma function for positive real arguments."""
    if x <= 0.0:
        raise ValueError(f"gamma_fn requires x > 0, got {x}")
    return math.gamma(x)


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule for the weight (1-x)^a (1+x)^b on (-1, 1).

    Nodes are strictly increasing and interior; weights are positive and
    sum to the zeroth moment of the weight function.
    """

    nodes: np.ndarray
    weights: np.ndarray
    weight_exponents: tuple[float, float]

    def integrate(self, values: np.ndarray) -> float:
        """Weighted sum of integrand values sampled at the nodes."""
        return float(self.weights @ np.asarray(values, dtype=float))

    def mapped(self, lo: float, hi: float) -> tuple[np.ndarray, np.ndarray]:
        """Affine image of nodes/weights on [lo, hi] (pure-Legendre rules only)."""
        if self.weight_exponents != (0.0, 0.0):
            raise ValueError("interval mapping only defined for unit weight")
        half = 0.5 * (hi - lo)
        return half * (self.nodes + 1.0) + lo, half * self.weights


def _jacobi_recurrence(n: int, a: float, b: float) -> tuple[np.ndarray, np.ndarray]:
    # Symmetric three-term recurrence coefficients (diagonal, off-diagonal)
    # of the Jacobi matrix for weight (1-x)^a (1+x)^b.
    k = np.arange(n, dtype=float)
    diag = np.zeros(n)
    s = a + b
    if n > 0:
        diag[0] = (b - a) / (s + 2.0)
    if n > 1:
        kk = k[1:]
        diag[1:] = (b * b - a * a) / ((2.0 * kk + s) * (2.0 * kk + s + 2.0))
    off = np.zeros(max(n - 1, 0))
    if n > 1:
        # k = 1 written with the (k+a+b)/(2k+a+b-1) factor cancelled, which
        # is 0/0 in the generic formula when a+b -> -1.
        off[0] = math.sqrt(4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + s) ** 2 * (3.0 + s)))
    if n > 2:
        kk = k[2:]
        num = 4.0 * kk * (kk + a) * (kk + b) * (kk + s)
        den = (2.0 * kk + s) ** 2 * (2.0 * kk + s + 1.0) * (2.0 * kk + s - 1.0)
        off[1:] = np.sqrt(num / den)
    return diag, off


@functools.lru_cache(maxsize=512)
def _gauss_jacobi_cached(n: int, a: float, b: float) -> QuadratureRule:
    diag, off = _jacobi_recurrence(n, a, b)
    if n == 1:
        nodes = diag.copy()
        vec0_sq = np.ones(1)
    else:
        nodes, vecs = eigh_tridiagonal(diag, off)
        vec0_sq = vecs[0, :] ** 2
    # zeroth moment: int (1-x)^a (1+x)^b dx = 2^(a+b+1) B(a+1, b+1)
    mu0 = 2.0 ** (a + b + 1.0) * math.exp(
        math.lgamma(a + 1.0) + math.lgamma(b + 1.0) - math.lgamma(a + b + 2.0)
    )
    weights = mu0 * vec0_sq
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(nodes=nodes, weights=weights, weight_exponents=(a, b))


def gauss_jacobi(n: int, a_exp: float, b_exp: float) -> QuadratureRule:
    """n-point Gauss-Jacobi rule, exact for polynomial degree <= 2n-1.

    Built by Golub-Welsch: eigenvalues of the symmetric tridiagonal
    recurrence matrix are the nodes, squared first eigenvector components
    scaled by the zeroth moment give the weights.
    """
    if not 1 <= n <= MAX_RULE_SIZE:
        raise ValueError(f"rule size must be in [1, {MAX_RULE_SIZE}], got {n}")
    if a_exp <= -1.0 or b_exp <= -1.0:
        raise ValueError("weight exponents must exceed -1")
    return _gauss_jacobi_cached(int(n), float(a_exp), float(b_exp))


def gauss_legendre(n: int) -> QuadratureRule:
    """n-point Gauss-Legendre rule on (-1, 1)."""
    return gauss_jacobi(n, 0.0, 0.0)


def legendre_eval(k: int, x_hat):
    """Legendre polynomial L_k by the three-term recurrence."""
    if k < 0 or k > MAX_LEGENDRE_DEGREE:
        raise ValueError(f"degree must be in [0, {MAX_LEGENDRE_DEGREE}], got {k}")
    x = np.asarray(x_hat, dtype=float)
    p_prev = np.ones_like(x)
    if k == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    p = x.copy()
    for j in range(1, k):
        p, p_prev = ((2 * j + 1) * x * p - j * p_prev) / (j + 1), p
    return p if p.ndim else float(p)


def legendre_deriv(k: int, x_hat):
    """Derivative L_k' via L_k' = L_{k-2}' + (2k-1) L_{k-1}."""
    if k < 0 or k > MAX_LEGENDRE_DEGREE:
        raise ValueError(f"degree must be in [0, {MAX_LEGENDRE_DEGREE}], got {k}")
    x = np.asarray(x_hat, dtype=float)
    d_prev = np.zeros_like(x)  # L_0'
    if k == 0:
        return d_prev if d_prev.ndim else float(d_prev)
    d = np.ones_like(x)  # L_1'
    p_prev, p = np.ones_like(x), x.copy()  # L_0, L_1
    for j in range(2, k + 1):
        d, d_prev = d_prev + (2 * j - 1) * p, d
        p, p_prev = ((2 * j - 1) * x * p - (j - 1) * p_prev) / j, p
    return d if d.ndim else float(d)


def legendre_table(kmax: int, x: np.ndarray) -> np.ndarray:
    """Values of L_0..L_kmax at the points x, shape (kmax+1, len(x))."""
    if kmax < 0 or kmax > MAX_LEGENDRE_DEGREE:
        raise ValueError(f"degree must be in [0, {MAX_LEGENDRE_DEGREE}], got {kmax}")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.empty((kmax + 1, x.size))
    out[0] = 1.0
    if kmax >= 1:
        out[1] = x
    for j in range(1, kmax):
        out[j + 1] = ((2 * j + 1) * x * out[j] - j * out[j - 1]) / (j + 1)
    return out
