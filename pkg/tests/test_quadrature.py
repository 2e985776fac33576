"""Quadrature rules, gamma function, and Legendre recurrences."""

import math

import mpmath
import numpy as np
import pytest

mpmath.mp.dps = 50

from subdiff.quadrature import (
    QuadratureRule,
    gamma_fn,
    gauss_jacobi,
    gauss_legendre,
    legendre_deriv,
    legendre_eval,
    legendre_table,
)

# mpmath, 50 digits: gamma(3.5) / gamma(2.9)
GAMMA_RATIO_35_29 = 1.8186673217954599683920330906035857768

# mpmath, 50 digits: int_{-1}^{1} (1-x)^{-0.4} dx = 2^{0.6} / 0.6
MOMENT_04 = 2.5261942775173301372454330021774087311


def jacobi_moment(k: int, alpha: float) -> float:
    # int_{-1}^1 (1-x)^{-alpha} x^k dx, by u = 1-x and binomial expansion;
    # summed at 50 digits since the alternating terms cancel badly for large k
    a = mpmath.mpf(repr(alpha))
    total = mpmath.mpf(0)
    for m in range(k + 1):
        total += (
            math.comb(k, m) * (-1) ** m * mpmath.mpf(2) ** (m - a + 1) / (m - a + 1)
        )
    return float(total)


def test_gamma_matches_reference_ratio():
    assert gamma_fn(3.5) / gamma_fn(2.9) == pytest.approx(
        GAMMA_RATIO_35_29, rel=1e-14
    )


def test_gamma_integer_factorial():
    assert gamma_fn(6.0) == 120.0
    assert gamma_fn(1.0) == 1.0


def test_gamma_rejects_nonpositive():
    with pytest.raises(ValueError):
        gamma_fn(0.0)
    with pytest.raises(ValueError):
        gamma_fn(-1.3)


@pytest.mark.parametrize("n", [1, 2, 5, 16, 40])
def test_legendre_rule_nodes_and_weights(n):
    rule = gauss_legendre(n)
    assert rule.nodes.shape == (n,)
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.all(rule.nodes > -1.0) and np.all(rule.nodes < 1.0)
    assert np.all(rule.weights > 0)
    assert rule.weights.sum() == pytest.approx(2.0, rel=1e-14)


@pytest.mark.parametrize("n", [1, 3, 8, 20])
def test_legendre_rule_exact_to_degree(n):
    rule = gauss_legendre(n)
    for k in range(2 * n):
        exact = 0.0 if k % 2 else 2.0 / (k + 1)
        got = rule.integrate(rule.nodes**k)
        assert got == pytest.approx(exact, abs=1e-13)


def test_jacobi_zeroth_moment_frozen_value():
    rule = gauss_jacobi(6, -0.4, 0.0)
    assert rule.weights.sum() == pytest.approx(MOMENT_04, rel=1e-14)


@pytest.mark.parametrize("alpha", [0.1, 0.3, 0.5, 0.7, 0.9])
@pytest.mark.parametrize("n", [2, 5, 9])
def test_jacobi_rule_exact_for_singular_moments(n, alpha):
    rule = gauss_jacobi(n, -alpha, 0.0)
    for k in range(2 * n):
        got = rule.integrate(rule.nodes**k)
        assert got == pytest.approx(jacobi_moment(k, alpha), rel=1e-12)


def test_jacobi_nodes_interior_and_weights_positive():
    rule = gauss_jacobi(30, -0.9, 0.0)
    assert np.all(np.diff(rule.nodes) > 0)
    assert np.all(np.abs(rule.nodes) < 1.0)
    assert np.all(rule.weights > 0)


def test_rule_size_and_exponent_validation():
    with pytest.raises(ValueError):
        gauss_jacobi(0, 0.0, 0.0)
    with pytest.raises(ValueError):
        gauss_jacobi(4, -1.0, 0.0)
    with pytest.raises(ValueError):
        gauss_jacobi(4, 0.0, -1.5)


def test_rules_are_cached_and_immutable():
    r1 = gauss_jacobi(7, -0.5, 0.0)
    r2 = gauss_jacobi(7, -0.5, 0.0)
    assert r1 is r2
    with pytest.raises(ValueError):
        r1.nodes[0] = 0.0


def test_mapped_interval_integrates_shifted_polynomial():
    rule = gauss_legendre(6)
    x, w = rule.mapped(0.0, 2.0)
    assert w @ x**3 == pytest.approx(4.0, rel=1e-14)
    with pytest.raises(ValueError):
        gauss_jacobi(4, -0.2, 0.0).mapped(0.0, 1.0)


def test_single_point_rule_is_midpoint():
    rule = gauss_legendre(1)
    assert rule.nodes[0] == pytest.approx(0.0, abs=1e-15)
    assert rule.weights[0] == pytest.approx(2.0, rel=1e-15)


def test_legendre_values_at_unit_endpoints():
    for k in range(0, 12):
        assert legendre_eval(k, 1.0) == pytest.approx(1.0, rel=1e-13)
        assert legendre_eval(k, -1.0) == pytest.approx((-1.0) ** k, rel=1e-13)


def test_legendre_orthogonality():
    rule = gauss_legendre(24)
    for i in range(8):
        for j in range(8):
            val = rule.integrate(
                legendre_eval(i, rule.nodes) * legendre_eval(j, rule.nodes)
            )
            exact = 2.0 / (2 * i + 1) if i == j else 0.0
            assert val == pytest.approx(exact, abs=1e-13)


def test_legendre_derivative_endpoint_identity():
    # L_k'(1) = k (k+1) / 2
    for k in range(0, 14):
        assert legendre_deriv(k, 1.0) == pytest.approx(k * (k + 1) / 2.0, rel=1e-12)


def test_legendre_derivative_matches_difference_quotient():
    x = np.linspace(-0.9, 0.9, 7)
    eps = 1e-6
    for k in [2, 5, 9]:
        numeric = (legendre_eval(k, x + eps) - legendre_eval(k, x - eps)) / (2 * eps)
        assert np.allclose(legendre_deriv(k, x), numeric, atol=1e-7)


def test_legendre_table_matches_scalar_eval():
    x = np.array([-0.7, 0.0, 0.31, 1.0])
    table = legendre_table(9, x)
    assert table.shape == (10, 4)
    for k in range(10):
        assert np.allclose(table[k], legendre_eval(k, x), atol=1e-14)


def test_legendre_degree_validation():
    with pytest.raises(ValueError):
        legendre_eval(-1, 0.0)
    with pytest.raises(ValueError):
        legendre_deriv(-2, 0.0)
    with pytest.raises(ValueError):
        legendre_table(-1, np.array([0.0]))


def test_rule_dataclass_fields():
    rule = gauss_jacobi(5, -0.3, 0.0)
    assert isinstance(rule, QuadratureRule)
    assert rule.weight_exponents == (-0.3, 0.0)
