import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relwaves import acceptance
from relwaves import actionwave as aw
from relwaves.core import ConfigurationError, DomainError, ExtendedState
from relwaves.dynamics import HamiltonianSpec, eom_rhs

SQRT2 = np.sqrt(2.0)


def make_state(p0, p1, center=(0.0, 0.0), n=128, d=0.05, **kw):
    grid = aw.Grid.uniform(n, n, d, d)
    return aw.ActionWaveState(grid, aw.gaussian_blob(grid, center, (0.4, 0.4)),
                              aw.plane_wave_action(grid, p0, p1), **kw)


def run_to(state, u_end):
    steps = int(np.ceil(u_end / aw.max_stable_step(state)))
    return aw.evolve(state, u_end / steps, steps)


@pytest.mark.parametrize("p0, p1, expected", [(-SQRT2, 1.0, 0.0), (-1.0, 0.0, 0.0), (-2.0, 1.0, 2.0)])
def test_hj_residual(p0, p1, expected):
    res = aw.hj_residual(make_state(p0, p1, n=32))
    assert np.allclose(res, expected, atol=1e-12)


def test_blob_follows_characteristics():
    state = make_state(-SQRT2, 1.0, center=(-1.0, -1.0), n=160)
    m = aw.spacetime_moments(run_to(state, 1.0))
    d = state.grid.d0
    assert abs(m.mean_t - (-1 + SQRT2)) <= 0.02 * d
    assert abs(m.mean_q1 - 0.0) <= 0.02 * d


def test_rest_action_moves_only_in_time():
    state = make_state(-1.0, 0.0, center=(-1.0, 0.3))
    end = run_to(state, 1.5)
    m = aw.spacetime_moments(end)
    assert m.mean_t == pytest.approx(0.5, abs=1e-6)
    assert m.mean_q1 == pytest.approx(0.3, abs=1e-12)


def test_cfl_violation_is_rejected_and_state_untouched():
    state = make_state(-SQRT2, 1.0, n=32)
    n_before = state.n.copy()
    with pytest.raises(ConfigurationError, match="CFL"):
        aw.evolve(state, 2 * aw.max_stable_step(state), 3)
    assert np.array_equal(state.n, n_before) and state.u == 0.0
    with pytest.raises(ConfigurationError):
        aw.evolve(state, -1.0, 3)


@pytest.mark.parametrize("boundary", [aw.PERIODIC, aw.REFLECTING])
def test_mass_is_conserved_and_density_stays_nonnegative(boundary):
    state = make_state(-1.25, 0.75, n=64, boundary=boundary)
    end = aw.evolve(state, aw.max_stable_step(state), 400)
    assert abs(end.total_mass - state.total_mass) <= 1e-12
    assert np.all(end.n >= 0)


def test_reflecting_boundary_keeps_mass_inside():
    # blob pushed hard into the upper q0 edge piles up instead of wrapping
    state = make_state(-1.0, 0.0, center=(1.0, 0.0), n=64, boundary=aw.REFLECTING)
    end = aw.evolve(state, aw.max_stable_step(state), 600)
    assert aw.spacetime_moments(end).mean_t > 1.4
    assert abs(end.total_mass - state.total_mass) <= 1e-12


def test_moments_examples():
    grid = aw.Grid.uniform(64, 64, 0.1, 0.1, origin=(-3.2 + 0.05, -3.2 + 0.05))
    n = aw.gaussian_blob(grid, (0.0, 0.0), (0.5, 0.5))
    m = aw.spacetime_moments(aw.ActionWaveState(grid, n, aw.plane_wave_action(grid, -1.0, 0.0)))
    assert m.mean_t == pytest.approx(0.0, abs=1e-12) and m.mean_E == pytest.approx(1.0)
    m = aw.spacetime_moments(aw.ActionWaveState(grid, n, aw.plane_wave_action(grid, -SQRT2, 1.0)))
    assert m.mean_E == pytest.approx(SQRT2) and m.mean_p_parallel == pytest.approx(1.0)
    shifted = aw.gaussian_blob(grid, (1.5, 0.0), (0.3, 0.3))
    m = aw.spacetime_moments(aw.ActionWaveState(grid, shifted, aw.plane_wave_action(grid, -1.0, 0.0), c=0.5))
    assert m.mean_t == pytest.approx(3.0, abs=1e-6)  # Gaussian tail cut by the grid edge


def test_zero_density_has_no_moments():
    grid = aw.Grid.uniform(8, 8, 0.1, 0.1)
    with pytest.raises(DomainError):
        aw.spacetime_moments(aw.ActionWaveState(grid, np.zeros((8, 8)), np.zeros((8, 8))))


def test_state_validation():
    grid = aw.Grid.uniform(8, 8, 0.1, 0.1)
    with pytest.raises(ConfigurationError):
        aw.ActionWaveState(grid, np.ones((8, 7)), np.zeros((8, 8)))
    with pytest.raises(DomainError):
        aw.ActionWaveState(grid, -np.ones((8, 8)), np.zeros((8, 8)))
    with pytest.raises(ConfigurationError):
        aw.ActionWaveState(grid, np.ones((8, 8)), np.zeros((8, 8)), boundary="open")


def test_action_gains_rest_phase():
    state = make_state(-1.0, 0.0, n=16, m0=2.0, c=1.5)
    end = aw.evolve(state, aw.max_stable_step(state), 4)
    assert np.allclose(end.action - state.action, 2.0 * 1.5 ** 2 * end.u)


@pytest.mark.parametrize("p1, slope", [(0.0, 1.0), (0.75, 1.25)])
def test_linear_time_law(p1, slope):
    state = make_state(-np.sqrt(1 + p1 ** 2), p1, center=(-1.5, -0.8))
    steps = int(np.ceil(1.5 / aw.max_stable_step(state)))
    _, series = aw.evolve_with_moments(state, 1.5 / steps, steps, every=5)
    got, _, _ = aw.linear_time_slope([(u, m.mean_t) for u, m in series])
    assert got == pytest.approx(slope, abs=0.01)


def test_slope_needs_distinct_samples():
    with pytest.raises(DomainError):
        aw.linear_time_slope([(1.0, 0.0), (1.0, 1.0)])
    with pytest.raises(DomainError):
        aw.linear_time_slope([(1.0, 0.0), (1.0, 1.0), (1.0, 2.0)])
    slope, intercept, resid = aw.linear_time_slope([(0, 1), (1, 3), (2, 5)])
    assert (slope, intercept) == pytest.approx((2.0, 1.0)) and resid < 1e-12


@given(st.floats(-1.5, 1.5))
def test_centroid_velocity_matches_hamiltonian_velocity(p1):
    measured, expected = acceptance.plane_wave_centroid_velocity(p1, n=96, u_end=0.5)
    assert np.linalg.norm(measured - expected) <= 0.02 * np.linalg.norm(expected)


def test_flux_velocity_is_extended_hamiltonian_velocity():
    state = make_state(-1.25, 0.75, n=16)
    a0, a1 = aw.flux_velocity(state)
    rhs = eom_rhs(HamiltonianSpec.free(), ExtendedState(p0=-1.25, p=(0.75, 0, 0)))
    assert np.allclose(a0, rhs[0]) and np.allclose(a1, rhs[1])


def test_curved_front_converges_at_first_order():
    errs = [np.linalg.norm(acceptance.curved_front_error(d)) for d in (0.1, 0.05)]
    assert errs[1] < 0.02
    assert 1.6 < errs[0] / errs[1] < 2.4


def test_csv_writers(tmp_path):
    state = make_state(-1.0, 0.0, n=8)
    aw.write_field_csv(state, tmp_path / "f.csv")
    lines = (tmp_path / "f.csv").read_text().splitlines()
    assert lines[0] == "q0,q1,n,S" and len(lines) == 65
    _, series = aw.evolve_with_moments(state, aw.max_stable_step(state), 4, every=2)
    aw.write_moments_csv(series, tmp_path / "m.csv")
    lines = (tmp_path / "m.csv").read_text().splitlines()
    assert lines[0] == "u,mean_t,mean_E,mean_p" and len(lines) == 4
