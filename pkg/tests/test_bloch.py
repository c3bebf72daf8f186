import math

import numpy as np
import pytest

from oracles import (atomic_generator, random_bath, random_x_bloch,
                     steady_from_superoperator, x_matrix)
from sqbath import BathParams, UnsupportedInitialState
from sqbath.bloch import (INITIAL_STATES, BlochVector, bloch_from_density,
                          bloch_rhs, evolve, reconstruct_density,
                          steady_state)


def rhs_tuple(v, n, m):
    out = bloch_rhs(BlochVector(*v), BathParams(n, m))
    return np.array([out.p_ee, out.p_eg, out.p_ge, out.coh])


def oracle_rhs_tuple(v, n, m):
    gen = atomic_generator(x_matrix(*v), n, m)
    return np.array([gen[0, 0].real, gen[1, 1].real, gen[2, 2].real,
                     gen[0, 3].real])


def test_rhs_matches_lindblad_oracle():
    rng = np.random.default_rng(31)
    for _ in range(50):
        n, m = random_bath(rng)
        v = random_x_bloch(rng)
        assert np.allclose(rhs_tuple(v, n, m), oracle_rhs_tuple(v, n, m),
                           atol=1e-12)


def test_generator_closes_on_x_states():
    # off-X matrix elements of the derivative stay exactly zero, which is
    # what justifies the four-variable reduction
    rng = np.random.default_rng(32)
    for _ in range(20):
        n, m = random_bath(rng)
        gen = atomic_generator(x_matrix(*random_x_bloch(rng)), n, m)
        mask = np.ones((4, 4), dtype=bool)
        for i, j in ((0, 0), (1, 1), (2, 2), (3, 3), (0, 3), (3, 0)):
            mask[i, j] = False
        assert np.abs(gen[mask]).max() < 1e-14
        assert abs(gen[0, 3].imag) < 1e-14
        assert abs(np.trace(gen)) < 1e-14


def test_rhs_frozen_points():
    n, m = 0.7, 0.902
    assert np.allclose(rhs_tuple((0.0, 0.0, 0.0, 0.0), n, m),
                       [0.0, n, n, m], atol=1e-15)
    assert np.allclose(rhs_tuple((1.0, 0.0, 0.0, 0.0), n, m),
                       [-2.0 * (n + 1.0), n + 1.0, n + 1.0, m], atol=1e-15)


def test_steady_state_closed_form_and_superoperator_oracle():
    rng = np.random.default_rng(33)
    for _ in range(20):
        n, m = random_bath(rng)
        ss = steady_state(BathParams(n, m))
        denom = (2.0 * n + 1.0) ** 2 - 4.0 * m * m
        p_s = (n * (n + 1.0) - m * m) / denom
        coh = m / ((2.0 * n + 1.0) * denom)
        assert ss.p_eg == pytest.approx(p_s, abs=1e-12)
        assert ss.p_ge == pytest.approx(p_s, abs=1e-12)
        assert ss.coh == pytest.approx(coh, abs=1e-12)
        rho = steady_from_superoperator(n, m)
        assert ss.p_ee == pytest.approx(rho[0, 0].real, abs=1e-9)
        assert ss.coh == pytest.approx(rho[0, 3].real, abs=1e-9)


def test_steady_state_frozen_point():
    ss = steady_state(BathParams(0.7, 0.902))
    assert ss.p_ee == pytest.approx(0.14144380445171004, abs=1e-12)
    assert ss.p_eg == pytest.approx(0.15022286221495662, abs=1e-12)
    assert ss.p_ge == pytest.approx(0.15022286221495662, abs=1e-12)
    assert ss.coh == pytest.approx(0.14999829713684856, abs=1e-12)


def test_steady_state_pure_at_minimum_uncertainty():
    for n in (0.3, 0.7, 1.5):
        bath = BathParams(n, math.sqrt(n * (n + 1.0)))
        ss = steady_state(bath)
        assert abs(ss.p_eg) < 1e-12 and abs(ss.p_ge) < 1e-12
        assert ss.p_ee == pytest.approx(n / (2.0 * n + 1.0), abs=1e-12)
        assert ss.coh == pytest.approx(bath.m / (2.0 * n + 1.0), abs=1e-12)


def test_steady_state_thermal_limit():
    ss = steady_state(BathParams(0.5, 0.0))
    # product of independent thermal qubits: p_e = n/(2n+1)
    p_e = 0.5 / 2.0
    assert ss.p_ee == pytest.approx(p_e * p_e, abs=1e-12)
    assert ss.coh == 0.0


def test_evolve_converges_to_steady_state():
    bath = BathParams(0.7, 0.902)
    ss = steady_state(bath).as_array()
    grid = np.linspace(0.0, 50.0, 11)
    traj = evolve(INITIAL_STATES["gg"], bath, grid)
    assert np.abs(traj.states[-1] - ss).max() < 1e-6


def test_steady_state_is_a_fixed_point_of_evolve():
    bath = BathParams(0.7, 0.902)
    ss = steady_state(bath)
    traj = evolve(ss, bath, np.linspace(0.0, 10.0, 21))
    assert np.abs(traj.states - ss.as_array()).max() < 1e-8


def test_fixed_step_matches_adaptive():
    bath = BathParams(0.7, 1.09)
    grid = np.linspace(0.0, 5.0, 26)
    adaptive = evolve(INITIAL_STATES["gg"], bath, grid)
    fixed = evolve(INITIAL_STATES["gg"], bath, grid, method="fixed")
    assert np.abs(adaptive.states - fixed.states).max() < 1e-6


def test_fixed_step_is_bit_reproducible():
    bath = BathParams(0.7, 1.09)
    grid = np.linspace(0.0, 3.0, 7)
    one = evolve(INITIAL_STATES["gg"], bath, grid, method="fixed")
    two = evolve(INITIAL_STATES["gg"], bath, grid, method="fixed")
    assert np.array_equal(one.states, two.states)


def test_exchange_symmetry_is_preserved():
    bath = BathParams(0.9, 1.0)
    rng = np.random.default_rng(34)
    v = random_x_bloch(rng)
    grid = np.linspace(0.0, 4.0, 9)
    forward = evolve(BlochVector(v[0], v[1], v[2], v[3]), bath, grid)
    swapped = evolve(BlochVector(v[0], v[2], v[1], v[3]), bath, grid)
    assert np.abs(forward.p_eg - swapped.p_ge).max() < 1e-9
    assert np.abs(forward.p_ge - swapped.p_eg).max() < 1e-9
    assert np.abs(forward.p_ee - swapped.p_ee).max() < 1e-9


def test_trajectory_samples_stay_physical():
    bath = BathParams(0.7, 1.09)
    traj = evolve(INITIAL_STATES["gg"], bath, np.linspace(0.0, 15.0, 61))
    for i in range(len(traj.times)):
        v = traj.vector(i)
        total = v.p_ee + v.p_eg + v.p_ge + v.p_gg
        assert abs(total - 1.0) < 1e-9
        v.validate(psd_tol=1e-8)


def test_evolve_rejects_unphysical_start():
    bath = BathParams(0.7, 0.902)
    bad = BlochVector(0.9, 0.0, 0.0, 0.5)
    with pytest.raises(ValueError):
        evolve(bad, bath, np.linspace(0.0, 1.0, 3))


def test_evolve_rejects_bad_grid():
    bath = BathParams(0.7, 0.902)
    with pytest.raises(ValueError):
        evolve(INITIAL_STATES["gg"], bath, np.array([0.0, 1.0, 0.5]))
    with pytest.raises(ValueError):
        evolve(INITIAL_STATES["gg"], bath, np.array([]))


def test_single_point_grid_returns_initial_state():
    bath = BathParams(0.7, 0.902)
    traj = evolve(INITIAL_STATES["ee"], bath, np.array([0.0]))
    assert np.array_equal(traj.states[0],
                          INITIAL_STATES["ee"].as_array())


def test_density_roundtrip():
    rng = np.random.default_rng(35)
    for _ in range(10):
        v = BlochVector(*random_x_bloch(rng))
        state = reconstruct_density(v)
        back = bloch_from_density(state.rho)
        assert back.p_ee == pytest.approx(v.p_ee, abs=1e-12)
        assert back.coh == pytest.approx(v.coh, abs=1e-12)


def test_bloch_from_density_rejects_non_x_states():
    rho = np.eye(4, dtype=complex) / 4.0
    rho[0, 1] = rho[1, 0] = 0.1
    with pytest.raises(UnsupportedInitialState):
        bloch_from_density(rho)
    rho_complex = x_matrix(0.4, 0.1, 0.1, 0.2).astype(complex)
    rho_complex[0, 3] = 0.2j
    rho_complex[3, 0] = -0.2j
    with pytest.raises(UnsupportedInitialState):
        bloch_from_density(rho_complex)


def test_initial_state_table():
    assert INITIAL_STATES["gg"].p_gg == 1.0
    assert INITIAL_STATES["ee"].p_ee == 1.0
    assert INITIAL_STATES["eg"].p_eg == 1.0
    assert INITIAL_STATES["ge"].p_ge == 1.0
