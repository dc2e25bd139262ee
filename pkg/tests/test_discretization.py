import json

import numpy as np
import pytest
from scipy.integrate import quad

from cqdw.discretization import (
    DELTA,
    EXPONENTIAL,
    GAUSSIAN,
    ConvolutionPlan,
    DiscretizationError,
    Grid,
    GridFunction,
    Kernel,
    PotentialParams,
    build_grid,
    convolve,
    grid_function_from_csv,
    grid_function_from_json,
    grid_function_to_csv,
    grid_function_to_json,
    kernel_eval,
    kernel_matrix,
    parity_residuals,
    potential_profile,
    reflect,
)


def brute_force_convolution(kernel, f, grid):
    """O(n^2) quadrature oracle: (R*f)(x_i) = sum_j R(x_i - x_j) f_j dx."""
    x = grid.points
    diff = x[:, None] - x[None, :]
    return kernel_eval(kernel, diff) @ np.asarray(f) * grid.spacing


def test_grid_layout():
    grid = build_grid(20.0, 0.1)
    assert grid.n_points == 401
    assert grid.points[0] == pytest.approx(-20.0)
    assert grid.points[-1] == pytest.approx(20.0)
    assert grid.points[grid.center_index] == 0.0
    np.testing.assert_allclose(np.diff(grid.points), 0.1)


def test_grid_weights_are_trapezoid():
    grid = build_grid(1.0, 0.25)
    w = grid.weights
    assert w[0] == pytest.approx(0.125)
    assert w[-1] == pytest.approx(0.125)
    np.testing.assert_allclose(w[1:-1], 0.25)
    # exact for polynomials of degree 1
    assert grid.integrate(3.0 + 2.0 * grid.points) == pytest.approx(6.0, abs=1e-14)


@pytest.mark.parametrize(
    "half_width, spacing",
    [(-1.0, 0.1), (1.0, -0.1), (1.0, 0.0), (1.0, 0.3), (0.05, 0.1)],
)
def test_grid_validation(half_width, spacing):
    with pytest.raises(DiscretizationError):
        build_grid(half_width, spacing)


def test_potential_profile_shape():
    grid = build_grid(20.0, 0.1)
    v = potential_profile(grid, PotentialParams())
    c = grid.center_index
    assert v[c] == pytest.approx(1.0)  # barrier height at x = 0
    # far wings are parabolic: V(20) ~ 0.5 * 0.1^2 * 400 = 2.0
    assert v[-1] == pytest.approx(2.0, abs=1e-15)
    # two minima, symmetric
    np.testing.assert_allclose(v, v[::-1], atol=1e-15)
    assert v.min() < v[c]


def test_potential_params_validation():
    with pytest.raises(DiscretizationError):
        PotentialParams(trap_frequency=-0.1).validate()
    with pytest.raises(DiscretizationError):
        PotentialParams(barrier_width=0.0).validate()


def test_kernel_eval_values():
    assert kernel_eval(Kernel(GAUSSIAN, 1.0), 0.0) == pytest.approx(
        1.0 / np.sqrt(np.pi), rel=1e-12
    )
    assert kernel_eval(Kernel(EXPONENTIAL, 2.0), 0.0) == pytest.approx(0.25)
    x = np.linspace(-3, 3, 41)
    for k in (Kernel(GAUSSIAN, 0.7), Kernel(EXPONENTIAL, 1.3)):
        np.testing.assert_allclose(kernel_eval(k, x), kernel_eval(k, -x))
    with pytest.raises(DiscretizationError):
        kernel_eval(Kernel(DELTA), 0.0)


def test_kernel_validation():
    with pytest.raises(DiscretizationError):
        Kernel(GAUSSIAN, -1.0)
    with pytest.raises(DiscretizationError):
        Kernel(GAUSSIAN, 0.0)
    with pytest.raises(DiscretizationError):
        Kernel("lorentzian", 1.0)
    Kernel(DELTA)  # no range needed


def test_kernel_unit_mass():
    # continuum normalization holds for every family and range
    for k in (Kernel(GAUSSIAN, 1.0), Kernel(GAUSSIAN, 0.3), Kernel(EXPONENTIAL, 0.8)):
        mass, _ = quad(lambda x: kernel_eval(k, x), -np.inf, np.inf)
        assert mass == pytest.approx(1.0, abs=1e-10)
    # the grid sum reproduces it for kernels smooth on the grid scale
    grid = build_grid(20.0, 0.1)
    for sigma in (0.5, 1.0, 3.0):
        mass = kernel_eval(Kernel(GAUSSIAN, sigma), grid.points).sum() * grid.spacing
        assert mass == pytest.approx(1.0, abs=1e-8)


def test_convolution_of_ones_is_one_inside():
    grid = build_grid(20.0, 0.1)
    out = convolve(Kernel(GAUSSIAN, 0.5), np.ones(grid.n_points), grid)
    interior = np.abs(grid.points) <= 10.0
    assert np.max(np.abs(out[interior] - 1.0)) < 1e-8


def test_convolution_matches_bruteforce_oracle():
    grid = build_grid(10.0, 0.05)
    rng = np.random.default_rng(7)
    f = np.exp(-grid.points**2) * rng.normal(size=grid.n_points)
    for k in (Kernel(GAUSSIAN, 0.9), Kernel(EXPONENTIAL, 1.7)):
        fast = convolve(k, f, grid)
        slow = brute_force_convolution(k, f, grid)
        np.testing.assert_allclose(fast, slow, atol=1e-10)


def test_convolution_complex_input():
    grid = build_grid(8.0, 0.1)
    rng = np.random.default_rng(3)
    f = rng.normal(size=grid.n_points) + 1j * rng.normal(size=grid.n_points)
    k = Kernel(GAUSSIAN, 1.0)
    out = convolve(k, f, grid)
    np.testing.assert_allclose(out.real, convolve(k, f.real, grid), atol=1e-12)
    np.testing.assert_allclose(out.imag, convolve(k, f.imag, grid), atol=1e-12)


def test_delta_kernel_is_identity():
    grid = build_grid(5.0, 0.1)
    rng = np.random.default_rng(11)
    f = rng.normal(size=grid.n_points)
    np.testing.assert_allclose(convolve(Kernel(DELTA), f, grid), f, atol=1e-14)
    np.testing.assert_allclose(kernel_matrix(Kernel(DELTA), grid), np.eye(grid.n_points))


def test_convolution_linearity_and_parity():
    grid = build_grid(10.0, 0.1)
    rng = np.random.default_rng(5)
    k = Kernel(GAUSSIAN, 1.2)
    f, g = rng.normal(size=(2, grid.n_points))
    lhs = convolve(k, 2.5 * f - 1.5 * g, grid)
    rhs = 2.5 * convolve(k, f, grid) - 1.5 * convolve(k, g, grid)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)
    even = np.exp(-grid.points**2)
    odd = grid.points * even
    r_even = convolve(k, even, grid)
    r_odd = convolve(k, odd, grid)
    np.testing.assert_allclose(r_even, reflect(r_even), atol=1e-12)
    np.testing.assert_allclose(r_odd, -reflect(r_odd), atol=1e-12)


def test_kernel_matrix_agrees_with_plan():
    grid = build_grid(6.0, 0.1)
    k = Kernel(EXPONENTIAL, 0.6)
    rng = np.random.default_rng(13)
    f = rng.normal(size=grid.n_points)
    plan = ConvolutionPlan(k, grid)
    np.testing.assert_allclose(kernel_matrix(k, grid) @ f, plan.apply(f), atol=1e-12)


def test_parity_residuals():
    grid = build_grid(5.0, 0.1)
    even = np.exp(-(grid.points**2))
    odd = np.sin(grid.points)
    r_even = parity_residuals(grid, even)
    r_odd = parity_residuals(grid, odd)
    assert r_even[0] < 1e-14 and r_even[1] > 0.1
    assert r_odd[1] < 1e-14 and r_odd[0] > 0.1
    mixed = even + 0.5 * odd
    rm = parity_residuals(grid, mixed)
    assert rm[0] > 1e-3 and rm[1] > 1e-3


def test_grid_function_validation():
    grid = build_grid(5.0, 0.1)
    with pytest.raises(DiscretizationError):
        GridFunction(grid, np.zeros(grid.n_points - 1))


def test_csv_roundtrip_is_lossless(tmp_path):
    grid = build_grid(5.0, 0.1)
    rng = np.random.default_rng(17)
    values = rng.normal(size=grid.n_points) + 1j * rng.normal(size=grid.n_points)
    gf = GridFunction(grid, values)
    path = tmp_path / "state.csv"
    grid_function_to_csv(gf, path)
    header = path.read_text().splitlines()[0]
    assert header == "x,re,im"
    back = grid_function_from_csv(path)
    assert np.array_equal(back.values, values)
    assert back.grid.n_points == grid.n_points
    assert back.grid.spacing == grid.spacing


def test_json_roundtrip_is_lossless():
    grid = build_grid(3.0, 0.25)
    rng = np.random.default_rng(19)
    gf = GridFunction(grid, rng.normal(size=grid.n_points))
    text = grid_function_to_json(gf)
    json.loads(text)  # valid JSON document
    back = grid_function_from_json(text)
    assert np.array_equal(back.values, gf.values)
