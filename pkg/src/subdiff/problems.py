"""Sub-diffusion problem definitions and manufactured test cases.

A problem is the data of u_t = D_t^(1-gamma)(K_gamma u_xx + f) on
(0, X) x (0, T] with initial value phi and Dirichlet boundary values,
where D_t^(1-gamma) is the Riemann-Liouville derivative. Manufactured
cases carry an exact solution u = t^(c+gamma) * (sine profile) whose
temporal regularity at t = 0 is controlled by the exponent c.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .quadrature import gamma_fn

CORNER_TOL = 1e-12

MANUFACTURED_KINDS = ("sin_x", "sin_pi_x")


@dataclass(frozen=True)
class SubdiffusionProblem:
    """Continuous problem data; all functions broadcast over numpy arrays."""

    gamma: float
    k_gamma: float
    x_len: float
    t_len: float
    source: Callable
    initial: Callable
    left_bc: Callable
    right_bc: Callable
    u_exact: Optional[Callable] = None

    def __post_init__(self):
        if not 0.0 < self.gamma < 1.0:
            raise ValueError(f"gamma must lie in (0,1), got {self.gamma}")
        if self.k_gamma <= 0 or self.x_len <= 0 or self.t_len <= 0:
            raise ValueError("k_gamma, x_len, t_len must be positive")
        if abs(float(self.initial(0.0)) - float(self.left_bc(0.0))) > CORNER_TOL:
            warnings.warn("initial and left boundary data disagree at the corner")
        if abs(float(self.initial(self.x_len)) - float(self.right_bc(0.0))) > CORNER_TOL:
            warnings.warn("initial and right boundary data disagree at the corner")

    # solver-facing aliases used throughout
    def f(self, x, t):
        return self.source(x, t)

    def phi(self, x):
        return self.initial(x)


@dataclass(frozen=True)
class ManufacturedCase:
    """Exact solution u = t^(c+gamma) * profile(x) with its source coefficient."""

    kind: str
    c: float
    gamma: float
    k_gamma_coeff: float
    exact: Callable


@dataclass(frozen=True)
class SolutionField:
    """Discrete solution u[k][n] on a space grid times collocation-time grid."""

    x_grid: np.ndarray
    t_grid: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape != (self.x_grid.size, self.t_grid.size):
            raise ValueError(
                f"values shape {self.values.shape} does not match grids "
                f"({self.x_grid.size}, {self.t_grid.size})"
            )


def manufactured_case(
    kind: str, c: float, gamma: float
) -> tuple[SubdiffusionProblem, ManufacturedCase]:
    """Problem with exact solution t^(c+gamma) sin(x) or t^(c+gamma) sin(pi x).

    The source coefficient Gamma(c+gamma+1)/Gamma(c+1) makes the pair
    satisfy the sub-diffusion equation with unit diffusivity on the unit
    square. c > -1 keeps the source integrable in time.
    """
    if kind not in MANUFACTURED_KINDS:
        raise ValueError(f"kind must be one of {MANUFACTURED_KINDS}, got {kind!r}")
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0,1), got {gamma}")
    if c <= -1.0:
        raise ValueError(f"c must exceed -1, got {c}")

    coeff = gamma_fn(c + gamma + 1.0) / gamma_fn(c + 1.0)
    r = c + gamma

    def tpow(t, p):
        # negative exponents (c < 0) are only ever sampled at t > 0:
        # collocation images stay interior
        return np.asarray(t, dtype=float) ** p

    if kind == "sin_x":
        profile = np.sin
        lap_factor = 1.0  # -(sin x)'' = sin x

        def right_bc(t):
            return tpow(t, r) * math.sin(1.0)

    else:
        def profile(x):
            return np.sin(np.pi * np.asarray(x, dtype=float))

        lap_factor = math.pi**2

        def right_bc(t):
            return np.zeros_like(np.asarray(t, dtype=float))

    def exact(x, t):
        return tpow(t, r) * profile(x)

    def source(x, t):
        return (coeff * tpow(t, c) + lap_factor * tpow(t, r)) * profile(x)

    def initial(x):
        return np.zeros_like(np.asarray(x, dtype=float))

    def left_bc(t):
        return np.zeros_like(np.asarray(t, dtype=float))

    problem = SubdiffusionProblem(
        gamma=gamma,
        k_gamma=1.0,
        x_len=1.0,
        t_len=1.0,
        source=source,
        initial=initial,
        left_bc=left_bc,
        right_bc=right_bc,
        u_exact=exact,
    )
    case = ManufacturedCase(
        kind=kind, c=c, gamma=gamma, k_gamma_coeff=coeff, exact=exact
    )
    return problem, case


def physical_problem(gamma: float) -> SubdiffusionProblem:
    """Sourceless problem with continuous piecewise-linear initial data.

    X = 2, T = 0.4, zero boundaries, phi rising to 1 at x = 0.5 then
    decaying linearly to 0 at x = 2. No exact solution is known; the
    initial data is only C^0, so no formal order is claimed.
    """
    if not 0.0 < gamma < 1.0:
        raise ValueError(f"gamma must lie in (0,1), got {gamma}")

    def initial(x):
        x = np.asarray(x, dtype=float)
        out = np.where(x <= 0.5, 2.0 * x, (4.0 - 2.0 * x) / 3.0)
        return out if out.ndim else float(out)

    def zero_t(t):
        return np.zeros_like(np.asarray(t, dtype=float))

    def source(x, t):
        return np.zeros(np.broadcast(np.asarray(x), np.asarray(t)).shape)

    return SubdiffusionProblem(
        gamma=gamma,
        k_gamma=1.0,
        x_len=2.0,
        t_len=0.4,
        source=source,
        initial=initial,
        left_bc=zero_t,
        right_bc=zero_t,
    )
