"""Compact finite-difference back-end tests.

Derived anchors: the truncation residual bound for sin_x data (c=1.9,
gamma=0.6, q=1, N=8, M=10) was measured at 2.92e-06 against the exact
transformed solution; the bound below keeps ~3x headroom. Table values
quoted in the end-to-end tests come from the source material for the
c=1.9 / c=0.1 sin_x cases.
"""

import numpy as np
import pytest

from subdiff.compact import (
    assemble_compact,
    average_apply,
    compact_driver,
    solve_compact,
    sylvester_residual,
)
from subdiff.oracles import kronecker_solve
from subdiff.problems import SubdiffusionProblem, manufactured_case
from subdiff.smoothing import SmoothingMap, transform_fields
from subdiff.temporal import assemble_W, collocation_nodes


def _zero_problem():
    zero2 = lambda x, t: np.zeros(np.broadcast(np.asarray(x), np.asarray(t)).shape)
    zero1 = lambda s: np.zeros_like(np.asarray(s, dtype=float))
    return SubdiffusionProblem(
        gamma=0.5, k_gamma=1.0, x_len=1.0, t_len=1.0,
        source=zero2, initial=zero1, left_bc=zero1, right_bc=zero1,
    )


def _discretize(problem, q, n_time, m_space, family="radau"):
    m = SmoothingMap(0.0, problem.t_len, q)
    td = assemble_W(problem, m, collocation_nodes(n_time, family=family))
    return m, td, assemble_compact(problem, m, td, m_space)


# ---------------------------------------------------------------- averaging


def test_average_constant_is_identity():
    vals = np.full(11, 3.7)
    for k in range(11):
        assert average_apply(vals, k) == pytest.approx(3.7, rel=1e-15)


def test_average_linear_is_identity_at_interior():
    x = np.linspace(0.0, 1.0, 11)
    for k in range(1, 10):
        assert average_apply(x, k) == pytest.approx(x[k], rel=1e-14)


def test_average_quadratic_adds_sixth_of_dx_squared():
    # second difference of x^2 is exactly 2 dx^2, so A(x^2) = x^2 + dx^2/6
    dx = 0.1
    x = dx * np.arange(11)
    for k in range(1, 10):
        assert average_apply(x**2, k) == pytest.approx(x[k] ** 2 + dx**2 / 6.0, rel=1e-13)


def test_average_boundary_untouched():
    vals = np.linspace(1.0, 2.0, 6) ** 3
    assert average_apply(vals, 0) == vals[0]
    assert average_apply(vals, 5) == vals[-1]


def test_average_index_out_of_range():
    with pytest.raises(ValueError):
        average_apply(np.ones(5), 5)
    with pytest.raises(ValueError):
        average_apply(np.ones(5), -1)


# ----------------------------------------------------------------- assembly


def test_matrices_have_compact_stencil_structure():
    problem, _ = manufactured_case("sin_x", c=1.9, gamma=0.6)
    _, _, sys = _discretize(problem, q=1, n_time=4, m_space=8)
    T, A = sys.mat_T, sys.mat_A
    assert T.shape == (7, 7) and A.shape == (7, 7)
    assert np.allclose(np.diag(T), 1.0 - 2.0 / 12.0)
    assert np.allclose(np.diag(T, 1), 1.0 / 12.0)
    assert np.allclose(np.diag(T, -1), 1.0 / 12.0)
    assert np.allclose(np.triu(T, 2), 0.0)
    diff = problem.k_gamma / sys.dx**2
    assert np.allclose(np.diag(A), -2.0 * diff)
    assert np.allclose(np.diag(A, 1), diff)
    assert np.allclose(A, A.T)
    # strict diagonal dominance of T: |10/12| > 2 * |1/12|
    dom = np.abs(np.diag(T)) - (np.abs(T).sum(axis=1) - np.abs(np.diag(T)))
    assert np.all(dom > 0.5)


def test_zero_problem_assembles_zero_rhs():
    _, _, sys = _discretize(_zero_problem(), q=2, n_time=5, m_space=9)
    assert np.all(sys.rhs_S == 0.0)
    assert np.all(sys.b_v == 0.0) and np.all(sys.b_h == 0.0) and np.all(sys.b_g == 0.0)


def test_zero_boundary_case_drops_boundary_blocks():
    # sin(pi x) data vanishes at both ends; the blocks are zero up to the
    # float residue of sin(pi) = 1.2e-16 in phi(X) and f(X, t)
    problem, _ = manufactured_case("sin_pi_x", c=2.5, gamma=0.4)
    m, td, sys = _discretize(problem, q=2, n_time=6, m_space=12)
    assert np.all(sys.b_v == 0.0)
    assert np.abs(sys.b_h).max() < 1e-13 and np.abs(sys.b_g).max() < 1e-13

    fields = transform_fields(problem, m)
    x_int = sys.dx * np.arange(1, 12)
    v0 = fields.h(x_int[:, None], td.nodes[None, :])
    g = fields.g(x_int[:, None], td.nodes[None, :])
    d = np.zeros((11, 11))
    idx = np.arange(11)
    d[idx, idx] = -2.0
    d[idx[:-1], idx[:-1] + 1] = 1.0
    d[idx[1:], idx[1:] - 1] = 1.0
    expect = v0 + (d @ v0) / 12.0 + (g + (d @ g) / 12.0) @ td.coupling_W.T
    assert np.allclose(sys.rhs_S, expect, rtol=0.0, atol=1e-11)


def test_boundary_blocks_only_touch_first_and_last_rows():
    problem, _ = manufactured_case("sin_x", c=1.9, gamma=0.6)  # right edge nonzero
    _, _, sys = _discretize(problem, q=1, n_time=5, m_space=10)
    for block in (sys.b_v, sys.b_h, sys.b_g):
        assert np.all(block[1:-1] == 0.0)
    assert np.abs(sys.b_v[-1]).max() > 0.0


def test_truncation_residual_at_exact_solution():
    # measured 2.92e-06 for these sizes; failure here means an assembly term
    # is wrong, which inflates the residual by orders of magnitude
    problem, _ = manufactured_case("sin_x", c=1.9, gamma=0.6)
    m, td, sys = _discretize(problem, q=1, n_time=8, m_space=10)
    fields = transform_fields(problem, m)
    x_int = sys.dx * np.arange(1, 10)
    v_star = fields.v_exact(x_int[:, None], td.nodes[None, :])
    resid = sys.mat_T @ v_star - sys.mat_A @ v_star @ td.coupling_W.T - sys.rhs_S
    assert np.abs(resid).max() < 1e-5
    assert np.abs(resid).max() > 1e-8


def test_assemble_rejects_tiny_grid():
    problem, _ = manufactured_case("sin_x", c=1.9, gamma=0.6)
    m = SmoothingMap(0.0, 1.0, 1)
    td = assemble_W(problem, m, collocation_nodes(3))
    with pytest.raises(ValueError):
        assemble_compact(problem, m, td, 2)


# ------------------------------------------------------------------- solves


def test_zero_rhs_solves_to_zero():
    _, td, sys = _discretize(_zero_problem(), q=1, n_time=4, m_space=8)
    v = solve_compact(sys, td)
    assert np.all(v == 0.0)


def test_solve_matches_kronecker_oracle_on_random_systems():
    rng = np.random.default_rng(20240817)
    problem, _ = manufactured_case("sin_x", c=1.9, gamma=0.6)
    for _ in range(10):
        m_space = int(rng.integers(4, 13))
        n_time = int(rng.integers(0, 9))
        _, td, sys = _discretize(problem, q=2, n_time=n_time, m_space=m_space)
        s = rng.standard_normal(sys.rhs_S.shape)
        object.__setattr__(sys, "rhs_S", s)
        v = solve_compact(sys, td)
        v_ref = kronecker_solve(sys.mat_T, sys.mat_A, td.coupling_W, s)
        assert np.abs(v - v_ref).max() < 1e-11 * max(1.0, np.abs(v_ref).max())


def test_single_column_solve_is_scalar_per_mode():
    problem, _ = manufactured_case("sin_x", c=1.9, gamma=0.6)
    _, td, sys = _discretize(problem, q=1, n_time=0, m_space=6)
    v = solve_compact(sys, td)
    assert v.shape == (5, 1)
    v_ref = kronecker_solve(sys.mat_T, sys.mat_A, td.coupling_W, sys.rhs_S)
    assert np.allclose(v, v_ref, rtol=0.0, atol=1e-13)


def test_solve_is_deterministic():
    problem, _ = manufactured_case("sin_x", c=0.5, gamma=0.8)
    _, td, sys = _discretize(problem, q=3, n_time=7, m_space=20)
    a = solve_compact(sys, td)
    b = solve_compact(sys, td)
    assert np.array_equal(a, b)


def test_residual_scale_reported_with_norm_parts():
    problem, _ = manufactured_case("sin_x", c=1.9, gamma=0.6)
    _, td, sys = _discretize(problem, q=1, n_time=6, m_space=30)
    v = solve_compact(sys, td)
    resid, scale = sylvester_residual(sys, td, v)
    assert resid <= 1e-12 * scale


# ------------------------------------------------------------------- driver


def test_driver_headline_error_smooth_case():
    # c=1.9 table anchor: max error at t=T for N=30, M=10 is about 2.11e-08
    problem, case = manufactured_case("sin_x", c=1.9, gamma=0.6)
    sol = compact_driver(problem, q=1, n_time=30, m_space=10)
    exact = case.exact(sol.x_grid[:, None], sol.t_grid[None, :])
    err = np.abs(sol.values[:, -1] - exact[:, -1]).max()
    assert err == pytest.approx(2.11e-08, rel=0.3)


def test_driver_fourth_order_in_space():
    problem, case = manufactured_case("sin_x", c=1.9, gamma=0.6)
    errs = []
    for m_space in (10, 20, 40):
        sol = compact_driver(problem, q=1, n_time=40, m_space=m_space)
        exact = case.exact(sol.x_grid[:, None], sol.t_grid[None, :])
        errs.append(np.abs(sol.values[:, -1] - exact[:, -1]).max())
    for coarse, fine in zip(errs, errs[1:]):
        order = np.log(coarse / fine) / np.log(2.0)
        assert order == pytest.approx(4.0, abs=0.05)


def test_driver_order_collapse_and_restoration():
    # low-regularity case: q=1 stalls at M>=30 while q=2 holds fourth order
    problem, case = manufactured_case("sin_x", c=0.1, gamma=0.6)

    def final_errs(q):
        out = []
        for m_space in (30, 40, 50):
            sol = compact_driver(problem, q=q, n_time=100, m_space=m_space)
            exact = case.exact(sol.x_grid[:, None], sol.t_grid[None, :])
            out.append(np.abs(sol.values[:, -1] - exact[:, -1]).max())
        return out

    ratios = np.array([4.0 / 3.0, 5.0 / 4.0])
    e1 = final_errs(1)
    orders1 = np.log(np.array(e1[:-1]) / np.array(e1[1:])) / np.log(ratios)
    assert np.all(orders1 < 1.0)
    e2 = final_errs(2)
    orders2 = np.log(np.array(e2[:-1]) / np.array(e2[1:])) / np.log(ratios)
    assert np.allclose(orders2, 4.0, atol=0.05)


def test_driver_zero_problem_yields_zero_field():
    sol = compact_driver(_zero_problem(), q=2, n_time=6, m_space=12)
    assert np.all(sol.values == 0.0)


def test_driver_boundary_rows_equal_boundary_data():
    problem, _ = manufactured_case("sin_x", c=1.9, gamma=0.6)
    sol = compact_driver(problem, q=2, n_time=9, m_space=10)
    assert np.array_equal(sol.values[0], np.asarray(problem.left_bc(sol.t_grid), dtype=float))
    assert np.array_equal(sol.values[-1], np.asarray(problem.right_bc(sol.t_grid), dtype=float))


def test_driver_radau_grid_ends_at_final_time():
    problem, _ = manufactured_case("sin_x", c=1.9, gamma=0.6)
    sol = compact_driver(problem, q=3, n_time=12, m_space=8)
    assert sol.t_grid[-1] == pytest.approx(problem.t_len, rel=0.0, abs=1e-15)
    legacy = compact_driver(problem, q=3, n_time=12, m_space=8, family="legendre")
    assert legacy.t_grid[-1] < problem.t_len
