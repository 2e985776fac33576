"""Legendre spectral-Galerkin back-end with a Fourier-like basis.

The trial space is spanned by z_k = lambda_k (L_k - L_{k+2}) composed
with the affine map onto [0, X]; the scaling lambda_k = sqrt(X/(4(2k+3)))
makes the stiffness form the identity, (z'_i, z'_j) = delta_ij. Rotating
by the eigenvectors of the banded mass matrix Z gives functions zeta_k
that diagonalize mass and stiffness simultaneously, so the Galerkin
system splits into one dense (N+1)x(N+1) temporal solve per mode.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .problems import SubdiffusionProblem
from .smoothing import SmoothingMap, lambda_map, mu_map, recover_u, transform_fields
from .temporal import TemporalDiscretization, assemble_W, collocation_nodes
from .quadrature import gauss_legendre, legendre_table

MIN_MODES = 3
MAX_MODES = 400
COND_LIMIT = 1e14

RHS_QUAD_EXTRA = 16


def _check_degree(m_prime: int):
    if not MIN_MODES <= m_prime <= MAX_MODES:
        raise ValueError(f"m_prime must be in [{MIN_MODES}, {MAX_MODES}], got {m_prime}")


def _lambda_coeffs(m_prime: int, x_len: float) -> np.ndarray:
    k = np.arange(m_prime - 1)
    return np.sqrt(x_len / (4.0 * (2.0 * k + 3.0)))


def _z_table(m_prime: int, x, x_len: float) -> np.ndarray:
    """Values of z_0..z_{M'-2} at the points x, shape (M'-1, len(x))."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    x_hat = (2.0 / x_len) * (x - 0.5 * x_len)
    table = legendre_table(m_prime, x_hat)
    lam = _lambda_coeffs(m_prime, x_len)
    return lam[:, None] * (table[: m_prime - 1] - table[2 : m_prime + 1])


def basis_z(k: int, x, x_len: float):
    """z_k(x) = lambda_k (L_k - L_{k+2}) on the hat variable; vanishes at 0, X."""
    if k < 0 or k > MAX_MODES - 2:
        raise ValueError(f"basis index must be in [0, {MAX_MODES - 2}], got {k}")
    vals = _z_table(k + 3, x, x_len)[k]
    return vals if np.ndim(x) else float(vals[0])


def basis_z_deriv(k: int, x, x_len: float):
    # (L_k - L_{k+2})' = -(2k+3) L_{k+1}, chained with dx_hat/dx = 2/X
    if k < 0 or k > MAX_MODES - 2:
        raise ValueError(f"basis index must be in [0, {MAX_MODES - 2}], got {k}")
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    x_hat = (2.0 / x_len) * (x_arr - 0.5 * x_len)
    lam = float(_lambda_coeffs(k + 2, x_len)[k])
    vals = -lam * (2.0 * k + 3.0) * legendre_table(k + 1, x_hat)[k + 1] * (2.0 / x_len)
    return vals if np.ndim(x) else float(vals[0])


def mass_matrix_Z(m_prime: int, x_len: float) -> np.ndarray:
    """Analytic Gram matrix (z_i, z_j); zero unless |i - j| is 0 or 2."""
    _check_degree(m_prime)
    n = m_prime - 1
    lam = _lambda_coeffs(m_prime, x_len)
    i = np.arange(n)
    z = np.zeros((n, n))
    z[i, i] = lam**2 * (0.5 * x_len) * (2.0 / (2.0 * i + 1.0) + 2.0 / (2.0 * i + 5.0))
    off = -lam[:-2] * lam[2:] * (0.5 * x_len) * (2.0 / (2.0 * i[:-2] + 5.0))
    z[i[:-2], i[:-2] + 2] = off
    z[i[:-2] + 2, i[:-2]] = off
    return z


@dataclass(frozen=True)
class SpectralBasis:
    """Simultaneously diagonalizing basis zeta_k = sum_i q[i,k] z_i."""

    m_prime: int
    x_len: float
    combo_coeffs: np.ndarray
    mass_eigs: np.ndarray

    def __post_init__(self):
        self.combo_coeffs.setflags(write=False)
        self.mass_eigs.setflags(write=False)


def build_basis(m_prime: int, x_len: float) -> SpectralBasis:
    """Eigendecompose Z = Q Pi Q^T; columns of Q mix the z_i into zeta_k."""
    _check_degree(m_prime)
    if x_len <= 0.0:
        raise ValueError(f"x_len must be positive, got {x_len}")
    z = mass_matrix_Z(m_prime, x_len)
    try:
        eigs, q = np.linalg.eigh(z)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise RuntimeError("mass-matrix eigendecomposition failed") from exc
    if eigs.min() <= 0.0:
        raise RuntimeError("mass matrix lost positive definiteness")
    return SpectralBasis(m_prime=m_prime, x_len=x_len, combo_coeffs=q, mass_eigs=eigs)


def zeta_table(basis: SpectralBasis, x) -> np.ndarray:
    """Values of zeta_0..zeta_{M'-2} at the points x, shape (M'-1, len(x))."""
    return basis.combo_coeffs.T @ _z_table(basis.m_prime, x, basis.x_len)


def assemble_spectral_rhs(fields, basis: SpectralBasis, td: TemporalDiscretization):
    """Projections H_hat[i,n] = (h^n, zeta_i) and G_hat likewise, by quadrature."""
    rule = gauss_legendre(basis.m_prime + RHS_QUAD_EXTRA)
    half = 0.5 * basis.x_len
    x = half * (rule.nodes + 1.0)
    w = half * rule.weights
    zeta = zeta_table(basis, x)
    h_vals = fields.h(x[:, None], td.nodes[None, :])
    g_vals = fields.g(x[:, None], td.nodes[None, :])
    h_hat = zeta @ (w[:, None] * h_vals)
    g_hat = zeta @ (w[:, None] * g_vals)
    return h_hat, g_hat


@dataclass(frozen=True)
class SpectralSolution:
    """Coefficient field v_hat[i,n] plus everything needed to evaluate u."""

    coeffs: np.ndarray
    basis: SpectralBasis
    td: TemporalDiscretization
    map: SmoothingMap

    def __post_init__(self):
        if self.coeffs.shape != (self.basis.m_prime - 1, self.td.n_time + 1):
            raise ValueError(
                f"coefficient block must be (M'-1, N+1), got {self.coeffs.shape}"
            )
        self.coeffs.setflags(write=False)

    @property
    def t_grid(self) -> np.ndarray:
        return np.asarray(lambda_map(self.map, mu_map(self.map, self.td.nodes)))


def _batched_cond_estimate(mats: np.ndarray) -> float:
    # cheap 1-norm lower bound, same guard as the compact path
    norms = np.abs(mats).sum(axis=2).max(axis=1)
    inv_col = np.abs(np.linalg.solve(mats, np.ones(mats.shape[:2])[..., None])).max()
    return float(norms.max() * inv_col)


def solve_modes(
    basis: SpectralBasis, td: TemporalDiscretization, k_gamma: float, rhs: np.ndarray
) -> np.ndarray:
    """Batched solve of the decoupled systems (pi_i I + K W) v_i = rhs_i."""
    n1 = td.n_time + 1
    if rhs.shape != (basis.m_prime - 1, n1):
        raise ValueError(f"rhs must be (M'-1, N+1), got {rhs.shape}")
    mats = k_gamma * np.broadcast_to(td.coupling_W, (basis.m_prime - 1, n1, n1)).copy()
    idx = np.arange(n1)
    mats[:, idx, idx] += basis.mass_eigs[:, None]
    if _batched_cond_estimate(mats) > COND_LIMIT:
        raise RuntimeError("per-mode temporal systems are numerically singular")
    coeffs = np.linalg.solve(mats, rhs[..., None])[..., 0]
    if not np.all(np.isfinite(coeffs)):
        raise RuntimeError("spectral solve produced non-finite coefficients")
    return coeffs


def spectral_solve(
    problem: SubdiffusionProblem,
    q: int,
    n_time: int,
    m_prime: int,
    family: str = "radau",
) -> SpectralSolution:
    """Galerkin solve: one (pi_i I + K W) system per retained mode.

    Only zero boundary conditions are representable in this basis; any
    other data is rejected up front.
    """
    _check_degree(m_prime)
    smoothing_map = SmoothingMap(a=0.0, b=problem.t_len, q=q)
    nodes = collocation_nodes(n_time, family=family)
    t_probe = np.asarray(lambda_map(smoothing_map, mu_map(smoothing_map, nodes)))
    for bc in (problem.left_bc, problem.right_bc):
        if np.any(np.asarray(bc(t_probe), dtype=float) != 0.0):
            raise ValueError("spectral back-end supports zero boundary data only")

    td = assemble_W(problem, smoothing_map, nodes)
    basis = build_basis(m_prime, problem.x_len)
    fields = transform_fields(problem, smoothing_map)
    h_hat, g_hat = assemble_spectral_rhs(fields, basis, td)
    coeffs = solve_modes(basis, td, problem.k_gamma, h_hat + g_hat @ td.coupling_W.T)
    return SpectralSolution(coeffs=coeffs, basis=basis, td=td, map=smoothing_map)


def eval_spectral(sol: SpectralSolution, x: float, n: int) -> float:
    """u(x, t_n) recovered from the coefficient expansion at one point."""
    if not 0.0 <= x <= sol.basis.x_len:
        raise ValueError(f"x={x} outside [0, {sol.basis.x_len}]")
    if not 0 <= n <= sol.td.n_time:
        raise ValueError(f"time index {n} out of range")
    v_val = float(zeta_table(sol.basis, x)[:, 0] @ sol.coeffs[:, n])
    return float(recover_u(v_val, sol.map, float(sol.td.nodes[n])))


def sample_spectral(sol: SpectralSolution, x) -> np.ndarray:
    """u on an x-sample for every collocation time, shape (len(x), N+1)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x < 0.0) or np.any(x > sol.basis.x_len):
        raise ValueError("sample points must lie inside [0, X]")
    v = zeta_table(sol.basis, x).T @ sol.coeffs
    return np.asarray(recover_u(v, sol.map, sol.td.nodes[None, :]))
