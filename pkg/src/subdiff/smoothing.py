"""Change of variables that restores temporal regularity at the initial time.

The map lambda(t) = (b-a)^(1-q) (t-a)^q + a stretches the initial layer;
mu pulls [a,b] back to the reference interval [-1,1]. Solving for
v(x,tau) = lambda'(mu(tau)) u(x, lambda(mu(tau))) turns a solution with a
t^gamma-type layer into one with q-fold improved smoothness, at the price
of a modified weakly singular kernel H.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

MAX_SMOOTHING_EXPONENT = 6

EPS_DIV = 1e-14


@dataclass(frozen=True)
class SmoothingMap:
    """Monotone polynomial reparametrisation of [a, b] onto itself."""

    a: float
    b: float
    q: int

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError(f"need b > a, got a={self.a}, b={self.b}")
        if not isinstance(self.q, int) or not 1 <= self.q <= MAX_SMOOTHING_EXPONENT:
            raise ValueError(
                f"q must be an integer in [1, {MAX_SMOOTHING_EXPONENT}], got {self.q}"
            )


def _clip_to(t, lo: float, hi: float, what: str):
    # tolerate 1-ulp overshoot from composed affine maps, reject anything real
    t = np.asarray(t, dtype=float)
    tol = 1e-12 * (hi - lo)
    if np.any(t < lo - tol) or np.any(t > hi + tol):
        raise ValueError(f"{what} outside [{lo}, {hi}]")
    out = np.clip(t, lo, hi)
    return out if out.ndim else float(out)


def lambda_map(m: SmoothingMap, t):
    """lambda(t) = (b-a)^(1-q) (t-a)^q + a, fixing both endpoints."""
    t = _clip_to(t, m.a, m.b, "t")
    return (m.b - m.a) ** (1 - m.q) * (np.asarray(t) - m.a) ** m.q + m.a


def lambda_deriv(m: SmoothingMap, t):
    """lambda'(t) = q (b-a)^(1-q) (t-a)^(q-1); vanishes at t=a for q >= 2."""
    t = _clip_to(t, m.a, m.b, "t")
    return m.q * (m.b - m.a) ** (1 - m.q) * (np.asarray(t) - m.a) ** (m.q - 1)


def mu_map(m: SmoothingMap, r):
    """Affine map from the reference interval [-1, 1] onto [a, b]."""
    r = _clip_to(r, -1.0, 1.0, "r")
    return 0.5 * (m.b - m.a) * np.asarray(r) + 0.5 * (m.b + m.a)


@dataclass(frozen=True)
class KernelEvaluator:
    """Evaluates the transformed kernel for a fixed map and exponent alpha = 1-gamma."""

    map: SmoothingMap
    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must lie in (0,1), got {self.alpha}")


def _power_sum(m: SmoothingMap, t, s):
    # ((t-a)^q - (s-a)^q)/(t-s) written as sum_{i} (t-a)^i (s-a)^(q-1-i):
    # symmetric in (t, s), free of cancellation, and equal to q(s-a)^(q-1)
    # on the diagonal.
    ta = np.asarray(t, dtype=float) - m.a
    sa = np.asarray(s, dtype=float) - m.a
    total = np.zeros(np.broadcast(ta, sa).shape)
    for i in range(m.q):
        total = total + ta**i * sa ** (m.q - 1 - i)
    return total


def delta_alpha(k: KernelEvaluator, t: float, s: float) -> float:
    """Regularised kernel factor ((t-a)^q - (s-a)^q)^(-alpha) (t-s)^alpha.

    Continuous across the diagonal, where it equals (q (s-a)^(q-1))^(-alpha).
    """
    m = k.map
    if s > t:
        raise ValueError("delta_alpha requires s <= t")
    _clip_to(t, m.a, m.b, "t")
    _clip_to(s, m.a, m.b, "s")
    base = _power_sum(m, t, s)
    if np.any(base <= 0.0):
        raise ValueError("delta_alpha singular at t = s = a for q >= 2")
    result = base**-k.alpha
    return float(result) if np.ndim(result) == 0 else result


def _kernel_H_raw(k: KernelEvaluator, tau_t, tau_s):
    # formula is symmetric-extended: the power-sum base is well defined for
    # either argument order, which the collocation sum over all nodes needs
    m, alpha = k.map, k.alpha
    t_phys = mu_map(m, tau_t)
    s_phys = mu_map(m, tau_s)
    base = _power_sum(m, t_phys, s_phys)
    if np.any(base <= 0.0):
        raise ValueError("kernel singular: both arguments at the left endpoint")
    prefac = (0.5 * (m.b - m.a)) ** (1.0 - alpha) * ((m.b - m.a) ** (1 - m.q)) ** -alpha
    return prefac * lambda_deriv(m, t_phys) * base**-alpha


def kernel_H(k: KernelEvaluator, tau_t: float, tau_s: float) -> float:
    """Transformed kernel H on the reference square, finite for tau_s <= tau_t."""
    if tau_s > tau_t:
        raise ValueError("kernel_H requires tau_s <= tau_t")
    result = _kernel_H_raw(k, tau_t, tau_s)
    return float(result) if np.ndim(result) == 0 else result


def kernel_H_matrix(k: KernelEvaluator, tau_rows, tau_cols) -> np.ndarray:
    """H(tau_r, tau_c) on a grid, including entries above the diagonal.

    The collocation sum couples every node to every node, so H is needed
    for tau_c > tau_t as well; the power-sum base is symmetric in its
    arguments and extends the formula there continuously.
    """
    tr = np.asarray(tau_rows, dtype=float)[:, None]
    tc = np.asarray(tau_cols, dtype=float)[None, :]
    return np.asarray(_kernel_H_raw(k, tr, tc))


@dataclass(frozen=True)
class TransformedFields:
    """Forcing, initial data, and optional exact solution after the change of variables."""

    g: Callable
    h: Callable
    v_exact: Optional[Callable] = None


def transform_fields(problem, m: SmoothingMap) -> TransformedFields:
    """Build g(x,tau), h(x,tau), and v_exact from a problem's f, phi, u_exact.

    Callables broadcast over numpy arrays; pass x[:, None], tau[None, :]
    to evaluate on a grid.
    """

    def weight(tau):
        return lambda_deriv(m, mu_map(m, tau))

    def g(x, tau):
        return weight(tau) * problem.f(x, lambda_map(m, mu_map(m, tau)))

    def h(x, tau):
        return weight(tau) * problem.phi(x)

    v_exact = None
    if getattr(problem, "u_exact", None) is not None:

        def v_exact(x, tau):
            return weight(tau) * problem.u_exact(x, lambda_map(m, mu_map(m, tau)))

    return TransformedFields(g=g, h=h, v_exact=v_exact)


def recover_u(v_val, m: SmoothingMap, tau, eps_div: float = EPS_DIV):
    """Undo the smoothing weight: u(x, lambda(mu(tau))) = v / lambda'(mu(tau)).

    Ill-posed where the weight vanishes (tau = -1 with q >= 2); the initial
    value must come from the problem's phi there, not from v.
    """
    deriv = lambda_deriv(m, mu_map(m, tau))
    if np.any(np.asarray(deriv) <= eps_div):
        raise ValueError("smoothing weight vanishes; take u(x, 0) from phi")
    out = np.asarray(v_val) / deriv
    return float(out) if np.ndim(out) == 0 else out
