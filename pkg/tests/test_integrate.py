import numpy as np
import pytest

from sqbath.integrate import solve_adaptive, solve_fixed_rk4


def decay(t, y):
    return -y


def test_adaptive_matches_exponential():
    grid = np.linspace(0.0, 3.0, 7)
    out = solve_adaptive(decay, np.array([1.0]), grid)
    assert np.abs(out[:, 0] - np.exp(-grid)).max() < 1e-7


def test_fixed_rk4_matches_exponential():
    grid = np.linspace(0.0, 3.0, 7)
    out = solve_fixed_rk4(decay, np.array([1.0]), grid, max_step=1e-3)
    assert np.abs(out[:, 0] - np.exp(-grid)).max() < 1e-10


def test_fixed_rk4_fourth_order_convergence():
    grid = np.array([0.0, 1.0])

    def err(step):
        out = solve_fixed_rk4(decay, np.array([1.0]), grid, max_step=step)
        return abs(out[-1, 0] - np.exp(-1.0))

    ratio = err(0.1) / err(0.05)
    assert ratio == pytest.approx(16.0, rel=0.05)


def test_fixed_rk4_is_deterministic():
    grid = np.linspace(0.0, 2.0, 5)
    a = solve_fixed_rk4(decay, np.array([1.0, 2.0]), grid, max_step=1e-2)
    b = solve_fixed_rk4(decay, np.array([1.0, 2.0]), grid, max_step=1e-2)
    assert np.array_equal(a, b)


def test_complex_state_supported():
    grid = np.linspace(0.0, 1.0, 3)

    def rotate(t, y):
        return 1.0j * y

    out = solve_fixed_rk4(rotate, np.array([1.0 + 0.0j]), grid,
                          max_step=1e-3)
    assert out.dtype == complex
    assert abs(out[-1, 0] - np.exp(1.0j)) < 1e-10


def test_grid_validation():
    with pytest.raises(ValueError):
        solve_adaptive(decay, np.array([1.0]), np.array([0.0, -1.0]))
    with pytest.raises(ValueError):
        solve_fixed_rk4(decay, np.array([1.0]), np.array([]), max_step=0.1)


def test_single_point_grid():
    out = solve_adaptive(decay, np.array([2.0]), np.array([0.0]))
    assert np.array_equal(out, np.array([[2.0]]))
