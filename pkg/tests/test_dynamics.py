import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relwaves.core import DomainError, ExtendedState, numeric_jacobian
from relwaves.dynamics import (
    HamiltonianSpec,
    eom_rhs,
    hamiltonian_eval,
    inertial_parameters,
    integrate_trajectory,
    read_trajectory_csv,
    velocity_from_momentum,
    write_trajectory_csv,
)

FREE = HamiltonianSpec.free()
SQRT2 = np.sqrt(2.0)


@pytest.mark.parametrize("p0, p, H", [(-1.0, (0, 0, 0), -1.0), (-SQRT2, (1, 0, 0), -1.0)])
def test_free_hamiltonian_values(p0, p, H):
    assert hamiltonian_eval(FREE, ExtendedState(p0=p0, p=p)) == pytest.approx(H, abs=1e-14)


def test_spacelike_input_is_rejected():
    with pytest.raises(DomainError, match="radicand"):
        hamiltonian_eval(FREE, ExtendedState(p0=-1.0, p=(2, 0, 0)))
    with pytest.raises(DomainError):
        eom_rhs(FREE, ExtendedState(p0=-1.0, p=(0, 1, 0)))


def test_eom_free_examples():
    rhs = eom_rhs(FREE, ExtendedState(p0=-SQRT2, p=(1, 0, 0)))
    assert np.allclose(rhs, [SQRT2, 1, 0, 0, 0, 0, 0, 0], atol=1e-14)
    rhs = eom_rhs(FREE, ExtendedState())
    assert np.allclose(rhs, [1, 0, 0, 0, 0, 0, 0, 0], atol=1e-14)


def test_eom_matches_numeric_hamiltonian_gradient(rng):
    # d_u q = dH/dp, d_u p = -dH/dq, checked against finite differences of H
    V = lambda q: 0.3 * float(q @ q)  # noqa: E731
    spec = HamiltonianSpec.with_potential(V, lambda q: 0.6 * q)
    for _ in range(5):
        x = ExtendedState.on_shell(rng.uniform(-1, 1, 3), q=rng.uniform(-1, 1, 3), m0=2.0)
        grad = numeric_jacobian(lambda y: hamiltonian_eval(spec, ExtendedState.from_array(y)),
                                x.as_array(), h=1e-6)[0]
        expected = np.concatenate([grad[4:], -grad[:4]])
        assert np.allclose(eom_rhs(spec, x), expected, atol=1e-7)


def test_nonrelativistic_time_is_universal_time():
    spec = HamiltonianSpec.nonrelativistic(m0=1.0, c=1.0)
    x = ExtendedState(q0=0.3, p0=-1.0, p=(0.5, 0.0, 0.0))
    rhs = eom_rhs(spec, x)
    assert rhs[0] == 1.0  # d_u t = 1 with c = 1
    assert rhs[4] == pytest.approx(0.0, abs=1e-12)  # energy conserved
    assert np.allclose(rhs[1:4], [0.5, 0, 0], atol=1e-9)


def test_free_trajectory_closed_form():
    x0 = ExtendedState(p0=-SQRT2, p=(1, 0, 0))
    states = integrate_trajectory(FREE, x0, 0.1, 100)
    assert len(states) == 101
    end = states[-1]
    assert end.q0 == pytest.approx(10 * SQRT2, abs=1e-9)
    assert np.allclose(end.q, [10, 0, 0], atol=1e-9)
    assert end.u == pytest.approx(10.0, abs=1e-12)


@given(st.lists(st.floats(-3, 3), min_size=3, max_size=3), st.floats(0.2, 3))
def test_free_flow_conserves_hamiltonian(p, m0):
    x0 = ExtendedState.on_shell(p, m0)
    spec = HamiltonianSpec.free(m0)
    states = integrate_trajectory(spec, x0, 0.37, 20)
    assert abs(hamiltonian_eval(spec, states[-1]) - hamiltonian_eval(spec, x0)) <= 1e-10


def test_zero_potential_equals_free(rng):
    spec = HamiltonianSpec.with_potential(lambda q: 0.0, lambda q: np.zeros(3))
    x0 = ExtendedState.on_shell(rng.uniform(-1, 1, 3), q=rng.uniform(-1, 1, 3))
    a = integrate_trajectory(FREE, x0, 0.05, 40)
    b = integrate_trajectory(spec, x0, 0.05, 40)
    assert max(np.max(np.abs(s.as_array() - t.as_array())) for s, t in zip(a, b)) <= 1e-12


def test_potential_flow_conserves_energy_to_rk4_accuracy():
    spec = HamiltonianSpec.with_potential(lambda q: 0.5 * float(q @ q), lambda q: np.asarray(q))
    x0 = ExtendedState.on_shell((0.2, 0.0, 0.0), q=(0.3, 0, 0))
    H0 = hamiltonian_eval(spec, x0)
    drift = [abs(hamiltonian_eval(spec, integrate_trajectory(spec, x0, du, int(2 / du))[-1]) - H0)
             for du in (0.1, 0.05)]
    assert drift[1] < 1e-6
    assert drift[0] / drift[1] > 10  # fourth order: ratio near 16


def test_trajectory_failure_names_the_step():
    spec = HamiltonianSpec.with_potential(lambda q: 25.0 * float(q @ q), lambda q: 50.0 * np.asarray(q))
    with pytest.raises(DomainError, match="aborted at step"):
        integrate_trajectory(spec, ExtendedState(p0=-SQRT2, p=(1, 0, 0)), 0.5, 50)


def test_integrator_argument_checks():
    with pytest.raises(DomainError):
        integrate_trajectory(FREE, ExtendedState(), 0.0, 5)
    with pytest.raises(DomainError):
        integrate_trajectory(FREE, ExtendedState(), 0.1, 0)


def test_velocity_from_momentum():
    assert np.allclose(velocity_from_momentum(ExtendedState()), 0)
    assert np.allclose(velocity_from_momentum(ExtendedState(p0=-SQRT2, p=(1, 0, 0))), [1 / SQRT2, 0, 0])
    speeds = [np.linalg.norm(velocity_from_momentum(ExtendedState.on_shell((p, 0, 0)))) for p in (1, 10, 100)]
    assert speeds[0] < speeds[1] < speeds[2] < 1.0
    with pytest.raises(DomainError):
        velocity_from_momentum(ExtendedState(p0=0.0))


@pytest.mark.parametrize("m0", [1.0, 2.0])
def test_inertial_parameters_on_shell(m0):
    for p in [(0, 0, 0), (0.3, -1.2, 0.0), (2.0, 1.0, 0.5)]:
        got = inertial_parameters(ExtendedState.on_shell(p, m0))
        assert np.allclose(got, [-m0, m0, m0, m0], atol=1e-12)


def test_inertial_parameters_off_shell_is_not_an_error():
    got = inertial_parameters(ExtendedState(p0=-2.0, p=(1, 0, 0)))
    assert np.allclose(got, -np.sqrt(3) * np.array([1, -1, -1, -1]))


def test_trajectory_csv_round_trip(tmp_path):
    states = integrate_trajectory(FREE, ExtendedState(p0=-SQRT2, p=(1, 0, 0)), 0.1, 10)
    path = tmp_path / "t.csv"
    write_trajectory_csv(states, path)
    back = read_trajectory_csv(path)
    assert all(np.array_equal(a.as_array(), b.as_array()) and a.u == b.u for a, b in zip(states, back))
    assert path.read_text().splitlines()[0] == "u,q0,q1,q2,q3,p0,p1,p2,p3"
