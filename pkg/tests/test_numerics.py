"""Quadrature and differentiation helpers."""
import numpy as np
import pytest

from linepack.errors import InvalidParameterError
from linepack.numerics import (
    cumulative_integral,
    derivative_of_callable,
    derivative_on_grid,
    fd_weights,
    integral,
    uniform_spacing,
)


def test_uniform_spacing_returns_step():
    x = np.linspace(0.0, 2.0, 9)
    assert uniform_spacing(x) == pytest.approx(0.25, rel=1e-15)


@pytest.mark.parametrize(
    "x",
    [
        np.array([0.0, 0.1, 0.3]),
        np.array([0.0, -0.1, -0.2]),
        np.array([1.0]),
    ],
)
def test_uniform_spacing_rejects_bad_grids(x):
    with pytest.raises(InvalidParameterError):
        uniform_spacing(x)


@pytest.mark.parametrize("degree", [0, 1, 2, 3])
@pytest.mark.parametrize("n", [4, 5, 11, 64])
def test_cumulative_integral_exact_on_cubics(degree, n):
    # The composite rule integrates the cubic interpolant, so polynomials
    # up to degree 3 must come out exact to round-off.
    rng = np.random.default_rng(42 + degree)
    coeff = rng.standard_normal(degree + 1)
    x = np.linspace(0.0, 1.5, n)
    y = np.polyval(coeff, x)
    anti = np.polyint(coeff)
    expected = np.polyval(anti, x) - np.polyval(anti, x[0])
    got = cumulative_integral(y, float(x[1] - x[0]))
    np.testing.assert_allclose(got, expected, atol=1e-13)


def test_cumulative_integral_two_point_trapezoid():
    got = cumulative_integral(np.array([1.0, 3.0]), 0.5)
    np.testing.assert_allclose(got, [0.0, 1.0])


def test_cumulative_integral_three_point_exact_on_quadratics():
    x = np.array([0.0, 0.5, 1.0])
    y = x**2
    got = cumulative_integral(y, 0.5)
    np.testing.assert_allclose(got, x**3 / 3.0, atol=1e-15)


def test_cumulative_integral_fourth_order():
    errs = []
    for n in (33, 65):
        x = np.linspace(0.0, 1.0, n)
        got = integral(np.sin(np.pi * x), float(x[1] - x[0]))
        errs.append(abs(got - 2.0 / np.pi))
    assert errs[0] / errs[1] > 12.0  # ~16 for a 4th-order rule


def test_integral_matches_cumulative_endpoint():
    rng = np.random.default_rng(7)
    y = rng.standard_normal(23)
    assert integral(y, 0.1) == cumulative_integral(y, 0.1)[-1]


def test_fd_weights_centered_first_derivative():
    w = fd_weights(np.arange(-2.0, 3.0), 0.0, 1)
    np.testing.assert_allclose(w, [1 / 12, -2 / 3, 0.0, 2 / 3, -1 / 12], atol=1e-14)


def test_fd_weights_exact_on_matching_degree():
    # 5 nodes differentiate quartics exactly, at any evaluation point.
    nodes = np.array([0.0, 0.3, 0.7, 1.1, 1.6])
    x0 = 0.52
    w = fd_weights(nodes, x0, 1)
    coeff = np.array([2.0, -1.0, 0.5, 3.0, -0.7])
    got = float(np.dot(w, np.polyval(coeff, nodes)))
    expected = float(np.polyval(np.polyder(coeff), x0))
    assert got == pytest.approx(expected, rel=1e-12)


def test_fd_weights_needs_enough_nodes():
    with pytest.raises(InvalidParameterError):
        fd_weights(np.array([0.0, 1.0]), 0.0, 2)


def test_derivative_of_callable_interior():
    got = derivative_of_callable(np.exp, 0.3, 1e-2)
    assert got == pytest.approx(np.exp(0.3), rel=1e-9)


def test_derivative_of_callable_respects_domain():
    # Near t=0 the stencil shifts right instead of sampling negative times.
    seen = []

    def f(t):
        seen.append(t)
        return np.exp(t)

    got = derivative_of_callable(f, 0.0, 1e-2, domain=(0.0, 1.0))
    assert min(seen) >= -1e-15
    assert got == pytest.approx(1.0, rel=1e-8)


def test_derivative_of_callable_vector_input():
    t = np.array([0.1, 0.4, 0.9])
    got = derivative_of_callable(np.sin, t, 1e-2, domain=(0.0, 1.0))
    np.testing.assert_allclose(got, np.cos(t), rtol=1e-9)


def test_derivative_of_callable_rejects_bad_step():
    with pytest.raises(InvalidParameterError):
        derivative_of_callable(np.exp, 0.5, 0.0)


def test_derivative_on_grid_matches_analytic():
    x = np.linspace(0.0, 1.0, 101)
    got = derivative_on_grid(np.sin(2.0 * np.pi * x), float(x[1] - x[0]))
    np.testing.assert_allclose(got, 2.0 * np.pi * np.cos(2.0 * np.pi * x), atol=2e-5)


def test_derivative_on_grid_exact_on_quartics():
    x = np.linspace(0.0, 1.0, 9)
    coeff = np.array([1.0, -2.0, 0.5, 1.5, -0.3])
    got = derivative_on_grid(np.polyval(coeff, x), float(x[1] - x[0]))
    np.testing.assert_allclose(got, np.polyval(np.polyder(coeff), x), atol=1e-12)


def test_derivative_on_grid_needs_five_points():
    with pytest.raises(InvalidParameterError):
        derivative_on_grid(np.ones(4), 0.1)
