"""Acceptance suite: ten numbered criteria behind `verify` and the tests.

Each criterion re-runs its experiment from scratch and reports a single
pass/fail with the measured values. Time limits are part of the pass
condition. Criterion 2 runs its temporal resolution at N=100: at N=40
the temporal error floor (about 1e-10 for q=2 at this c) sits above the
demanded 5e-10 margin only barely and breaks the final refinement step,
so the spatial orders are read against a floor well below them.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .compact import CompactSystem, compact_driver, solve_compact
from .oracles import (
    SingularIntegralSpec,
    kronecker_solve,
    singular_integral,
)
from .problems import manufactured_case, physical_problem
from .quadrature import gauss_legendre
from .smoothing import SmoothingMap
from .spectral import (
    basis_z_deriv,
    build_basis,
    sample_spectral,
    solve_modes,
    spectral_solve,
    zeta_table,
)
from .sweeps import max_error, observed_order
from .temporal import (
    _lagrange_matrix,
    assemble_W,
    barycentric_weights,
    collocation_nodes,
    singular_weights,
)


@dataclass(frozen=True)
class CriterionResult:
    index: int
    name: str
    passed: bool
    detail: str
    runtime_s: float
    time_limit_s: float


def _finish(index, name, limit, start, ok, detail) -> CriterionResult:
    elapsed = time.perf_counter() - start
    in_time = elapsed < limit
    if not in_time:
        detail += f"; runtime {elapsed:.1f}s exceeds {limit:.0f}s"
    return CriterionResult(
        index=index,
        name=name,
        passed=bool(ok and in_time),
        detail=detail,
        runtime_s=elapsed,
        time_limit_s=limit,
    )


def _compact_err(example, c, gamma, q, n_time, m_space) -> float:
    problem, case = manufactured_case(example, c=c, gamma=gamma)
    sol = compact_driver(problem, q=q, n_time=n_time, m_space=m_space)
    return max_error(sol, case.exact)


def _spectral_err(c, gamma, q, n_time, m_prime) -> float:
    problem, case = manufactured_case("sin_pi_x", c=c, gamma=gamma)
    sol = spectral_solve(problem, q=q, n_time=n_time, m_prime=m_prime)
    return max_error(sol, case.exact)


def _orders(m_list, errs):
    return [
        observed_order(errs[i - 1], errs[i], m_list[i] / m_list[i - 1])
        for i in range(1, len(m_list))
    ]


def criterion_1() -> CriterionResult:
    start = time.perf_counter()
    m_list = (10, 20, 30, 40, 50)
    ok = True
    parts = []
    for q in (1, 2, 3):
        errs = [_compact_err("sin_x", 1.9, 0.6, q, 40, m) for m in m_list]
        orders = _orders(m_list, errs)
        if any(o is None or abs(o - 4.0) > 0.05 for o in orders):
            ok = False
        if not 2.11e-08 / 5.0 <= errs[0] <= 2.11e-08 * 5.0:
            ok = False
        parts.append(
            f"q={q}: err(M=10)={errs[0]:.2e}, orders "
            + "/".join(f"{o:.2f}" for o in orders)
        )
    return _finish(1, "spatial fourth order, c=1.9", 10.0, start, ok, "; ".join(parts))


def criterion_2() -> CriterionResult:
    start = time.perf_counter()
    m_list = (10, 20, 30, 40, 50)
    n_time = 100  # temporal floor at N=40 sits inside the demanded margins
    ok = True
    parts = []
    for q in (1, 2, 3):
        errs = [_compact_err("sin_x", 0.1, 0.6, q, n_time, m) for m in m_list]
        orders = _orders(m_list, errs)
        if q == 1:
            # orders attached to the rows M=30,40,50
            if any(o is None or o > 1.0 for o in orders[1:]):
                ok = False
            parts.append(
                f"q=1: orders at M>=30 " + "/".join(f"{o:.2f}" for o in orders[1:])
            )
        else:
            if any(o is None or abs(o - 4.0) > 0.05 for o in orders):
                ok = False
            if errs[-1] > 5e-10:
                ok = False
            parts.append(
                f"q={q}: err(M=50)={errs[-1]:.2e}, orders "
                + "/".join(f"{o:.2f}" for o in orders)
            )
    return _finish(
        2, "order collapse and restoration, c=0.1", 10.0, start, ok, "; ".join(parts)
    )


def criterion_3() -> CriterionResult:
    start = time.perf_counter()
    final = {}
    for q in (1, 2, 3):
        errs = [_compact_err("sin_x", 0.5, 0.8, q, n, 2000) for n in (6, 8, 10, 12, 14)]
        final[q] = errs[-1]
    ok = final[1] >= 1e-7 and final[2] <= 3e-9 and final[3] <= 1e-9
    detail = (
        f"err(N=14): q=1 {final[1]:.2e} (>=1e-7), "
        f"q=2 {final[2]:.2e} (<=3e-9), q=3 {final[3]:.2e} (<=1e-9)"
    )
    return _finish(3, "temporal gain from smoothing, c=0.5", 120.0, start, ok, detail)


def criterion_4() -> CriterionResult:
    start = time.perf_counter()
    err = {
        (q, n): _compact_err("sin_x", 3.1, 0.5, q, n, 2000)
        for q in (1, 2, 3)
        for n in (6, 14)
    }
    ok = (
        err[(1, 6)] < err[(3, 6)]
        and err[(2, 14)] <= 1e-10
        and err[(3, 14)] <= 1e-10
    )
    detail = (
        f"N=6: q=1 {err[(1, 6)]:.2e} < q=3 {err[(3, 6)]:.2e}; "
        f"N=14: q=2 {err[(2, 14)]:.2e}, q=3 {err[(3, 14)]:.2e} (<=1e-10)"
    )
    return _finish(4, "smooth-solution crossover, c=3.1", 120.0, start, ok, detail)


def criterion_5() -> CriterionResult:
    start = time.perf_counter()
    err = _spectral_err(2.5, 0.4, q=2, n_time=14, m_prime=200)
    return _finish(
        5,
        "spectral high accuracy, c=2.5",
        30.0,
        start,
        err <= 5e-12,
        f"max error {err:.2e} (<=5e-12)",
    )


def criterion_6() -> CriterionResult:
    start = time.perf_counter()
    err_q1 = _spectral_err(-0.1, 0.4, q=1, n_time=50, m_prime=200)
    err_q3 = _spectral_err(-0.1, 0.4, q=3, n_time=50, m_prime=200)
    ok = err_q1 >= 1e-8 and err_q3 <= 1e-10
    detail = f"N=50: q=1 {err_q1:.2e} (>=1e-8), q=3 {err_q3:.2e} (<=1e-10)"
    return _finish(6, "severe low regularity, c=-0.1", 60.0, start, ok, detail)


def criterion_7() -> CriterionResult:
    start = time.perf_counter()
    alphas = (0.1, 0.3, 0.5, 0.7, 0.9)
    worst_sum = 0.0
    worst_oracle = 0.0
    for family in ("radau", "legendre"):
        for n_time in range(2, 41):
            nodes = collocation_nodes(n_time, family=family)
            for alpha in alphas:
                w = singular_weights(nodes, alpha)
                moments = (nodes + 1.0) ** (1.0 - alpha) / (1.0 - alpha)
                rel = np.abs(w.sum(axis=1) - moments) / moments
                worst_sum = max(worst_sum, float(rel.max()))
        for n_time in range(2, 9):
            nodes = collocation_nodes(n_time, family=family)
            bary = barycentric_weights(nodes)
            for alpha in alphas:
                w = singular_weights(nodes, alpha)
                for i, tau in enumerate(nodes):
                    for j in range(nodes.size):

                        def full_integrand(s, tau=tau, alpha=alpha, j=j):
                            s = np.atleast_1d(np.asarray(s, dtype=float))
                            return (tau - s) ** -alpha * _lagrange_matrix(
                                nodes, bary, s
                            )[j]

                        spec = SingularIntegralSpec(
                            integrand=full_integrand,
                            interval=(-1.0, float(tau)),
                            singular_exponent=alpha,
                        )
                        ref = singular_integral(spec).value
                        worst_oracle = max(worst_oracle, abs(w[i, j] - ref))
    ok = worst_sum <= 1e-11 and worst_oracle <= 1e-10
    detail = (
        f"row-sum rel err {worst_sum:.1e} (<=1e-11), "
        f"oracle abs err {worst_oracle:.1e} (<=1e-10), both node families"
    )
    return _finish(7, "weight identity suite", 30.0, start, ok, detail)


def criterion_8() -> CriterionResult:
    start = time.perf_counter()
    rng = np.random.default_rng(20240819)
    worst_compact = 0.0
    for _ in range(50):
        m = int(rng.integers(4, 13))
        n_time = int(rng.integers(1, 9))
        gamma = float(rng.uniform(0.2, 0.9))
        q = int(rng.integers(1, 4))
        family = ("radau", "legendre")[int(rng.integers(0, 2))]
        problem, _ = manufactured_case("sin_x", c=1.0, gamma=gamma)
        td = assemble_W(
            problem, SmoothingMap(0.0, 1.0, q), collocation_nodes(n_time, family)
        )
        dx = 1.0 / m
        eye = np.eye(m - 1)
        d = -2.0 * eye + np.eye(m - 1, k=1) + np.eye(m - 1, k=-1)
        k_gamma = float(rng.uniform(0.5, 2.0))
        zeros = np.zeros((m - 1, n_time + 1))
        sys = CompactSystem(
            m_space=m,
            dx=dx,
            k_gamma=k_gamma,
            mat_T=eye + d / 12.0,
            mat_A=(k_gamma / dx**2) * d,
            rhs_S=rng.standard_normal((m - 1, n_time + 1)),
            b_v=zeros,
            b_h=zeros,
            b_g=zeros,
        )
        got = solve_compact(sys, td)
        ref = kronecker_solve(sys.mat_T, sys.mat_A, td.coupling_W, sys.rhs_S)
        scale = max(1.0, float(np.abs(ref).max()))
        worst_compact = max(worst_compact, float(np.abs(got - ref).max()) / scale)

    worst_spectral = 0.0
    for _ in range(50):
        m_prime = int(rng.integers(3, 11))
        n_time = int(rng.integers(0, 7))
        gamma = float(rng.uniform(0.2, 0.9))
        q = int(rng.integers(1, 4))
        problem, _ = manufactured_case("sin_pi_x", c=1.0, gamma=gamma)
        td = assemble_W(problem, SmoothingMap(0.0, 1.0, q), collocation_nodes(n_time))
        basis = build_basis(m_prime, 1.0)
        k_gamma = float(rng.uniform(0.5, 2.0))
        rhs = rng.standard_normal((m_prime - 1, n_time + 1))
        got = solve_modes(basis, td, k_gamma, rhs)
        ref = kronecker_solve(
            np.diag(basis.mass_eigs), -k_gamma * np.eye(m_prime - 1), td.coupling_W, rhs
        )
        scale = max(1.0, float(np.abs(ref).max()))
        worst_spectral = max(worst_spectral, float(np.abs(got - ref).max()) / scale)

    ok = worst_compact <= 1e-11 and worst_spectral <= 1e-11
    detail = (
        f"50 compact systems, worst {worst_compact:.1e}; "
        f"50 spectral systems, worst {worst_spectral:.1e} (<=1e-11)"
    )
    return _finish(8, "eigen-path vs dense-oracle equivalence", 30.0, start, ok, detail)


def criterion_9() -> CriterionResult:
    start = time.perf_counter()
    worst = 0.0
    for m_prime in (8, 16, 64):
        basis = build_basis(m_prime, 1.0)
        rule = gauss_legendre(m_prime + 8)
        x = 0.5 * (rule.nodes + 1.0)
        w = 0.5 * rule.weights
        zeta = zeta_table(basis, x)
        mass = zeta @ (w[:, None] * zeta.T)
        worst = max(worst, float(np.abs(mass - np.diag(basis.mass_eigs)).max()))
        dz = np.array([basis_z_deriv(k, x, 1.0) for k in range(m_prime - 1)])
        dzeta = basis.combo_coeffs.T @ dz
        stiff = dzeta @ (w[:, None] * dzeta.T)
        worst = max(worst, float(np.abs(stiff - np.eye(m_prime - 1)).max()))
    return _finish(
        9,
        "basis Gram identities",
        10.0,
        start,
        worst <= 1e-10,
        f"worst Gram deviation {worst:.1e} (<=1e-10) for M' in (8, 16, 64)",
    )


def criterion_10() -> CriterionResult:
    start = time.perf_counter()
    fields = {}
    ok = True
    notes = []
    for gamma in (0.1, 0.5, 0.9):
        problem = physical_problem(gamma)
        sol = compact_driver(problem, q=2, n_time=20, m_space=20)
        fields[gamma] = sol.values
        finite = bool(np.all(np.isfinite(sol.values)))
        bc_zero = bool(np.all(sol.values[0] == 0.0) and np.all(sol.values[-1] == 0.0))
        peak = float(sol.values[:, -1].max())
        if not (finite and bc_zero and peak < 1.0):
            ok = False
        notes.append(f"gamma={gamma}: max u(x,0.4)={peak:.3f}")
    pairs = [(0.1, 0.5), (0.5, 0.9), (0.1, 0.9)]
    if not all(np.abs(fields[a] - fields[b]).max() > 0.0 for a, b in pairs):
        ok = False
    detail = "; ".join(notes) + "; boundaries 0, fields finite, gammas distinct"
    return _finish(10, "physical-case sanity", 5.0, start, ok, detail)


CRITERIA = (
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
)


def run_all(indices=None) -> list:
    """Run the numbered criteria (all by default), in order."""
    if indices is None:
        indices = range(1, len(CRITERIA) + 1)
    results = []
    for i in indices:
        if not 1 <= i <= len(CRITERIA):
            raise ValueError(f"criterion index {i} out of range")
        results.append(CRITERIA[i - 1]())
    return results
