import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relwaves.core import DomainError, ExtendedState, mass_shell_residual
from relwaves.dynamics import HamiltonianSpec, hamiltonian_eval
from relwaves.symmetry import (
    GALILEI_LIFT,
    LORENTZ,
    LORENTZ_LIFT,
    SO4,
    ExtendedLinearMap,
    GalileiElement,
    boost_finite,
    boost_generator,
    check_canonical,
    galilei_act,
    intrinsic_frame_boost,
    lift_to_extended,
    lorentz_act_infinitesimal,
    rodrigues,
    rotate,
)

speed = st.floats(0.0, 0.95)
unit = st.lists(st.floats(-1, 1), min_size=3, max_size=3).filter(lambda v: np.linalg.norm(v) > 0.1)


def velocity(s, direction):
    d = np.asarray(direction)
    return s * d / np.linalg.norm(d)


def test_galilei_action_examples():
    q, t = galilei_act(GalileiElement(d=(1, 0, 0)), (0, 0, 0), 5.0)
    assert np.allclose(q, [-1, 0, 0]) and t == 5.0
    q, t = galilei_act(GalileiElement(v=(0.1, 0, 0)), (2, 0, 0), 3.0)
    assert np.allclose(q - [2, 0, 0], [-0.3, 0, 0]) and t == 3.0
    _, t = galilei_act(GalileiElement(tau=1.0), (4, 5, 6), 2.0)
    assert t == 1.0


def test_lorentz_infinitesimal_action():
    _, t = lorentz_act_infinitesimal(GalileiElement(v=(0.1, 0, 0)), (2, 0, 0), 0.0)
    assert t == pytest.approx(-0.2)
    g = GalileiElement(xi=GalileiElement.rotation_generator((0, 0, 0.1)), d=(1, 2, 3), tau=0.5)
    a, b = galilei_act(g, (1, 1, 1), 2.0), lorentz_act_infinitesimal(g, (1, 1, 1), 2.0)
    assert np.allclose(a[0], b[0]) and a[1] == b[1]
    _, t = lorentz_act_infinitesimal(GalileiElement(v=(0, 0.3, 0), tau=0.25), (5, 0, 7), 1.0)
    assert t == pytest.approx(0.75)


def test_xi_must_be_antisymmetric():
    with pytest.raises(DomainError):
        GalileiElement(xi=np.eye(3))


def test_lift_structure():
    g = GalileiElement(v=(0.2, 0, 0))
    gal = lift_to_extended(g, m=1.0, mode=GALILEI_LIFT)
    assert np.allclose(gal.b_p, [0.2, 0, 0, 0])
    assert gal.A[3, 0] == pytest.approx(0.2) and gal.A[0, 3] == 0
    lor = lift_to_extended(g, mode=LORENTZ_LIFT)
    assert np.allclose(lor.b_p, 0)
    assert lor.A[3, 0] == pytest.approx(0.2) and lor.A[0, 3] == pytest.approx(0.2)
    so4 = lift_to_extended(g, mode=LORENTZ_LIFT, branch=SO4)
    assert so4.A[0, 3] == pytest.approx(-0.2)
    trans = lift_to_extended(GalileiElement(d=(1, 0, 0), tau=2.0), c=3.0)
    assert np.allclose(trans.A, 0) and np.allclose(trans.b_q, [1, 0, 0, 6.0])
    with pytest.raises(ValueError):
        lift_to_extended(g, mode="other")


def test_infinitesimal_lift_reproduces_lorentz_action():
    g = GalileiElement(v=(0.01, 0.0, 0.0), d=(0.02, 0, 0), tau=0.03)
    x = ExtendedState(q0=0.5, q=(2.0, 1.0, 0.0))
    y = lift_to_extended(g).apply(x)
    q, t = lorentz_act_infinitesimal(g, x.q, x.q0)
    assert np.allclose(y.q, q) and y.q0 == pytest.approx(t)


def test_boost_rest_state():
    y = boost_finite(ExtendedState(), (0.6, 0, 0))
    assert y.p[0] == pytest.approx(-0.75) and y.p0 == pytest.approx(-1.25)
    x = ExtendedState(q0=1.0, q=(1, 2, 3), p0=-2.0, p=(0.1, 0.2, 0.3))
    assert boost_finite(x, (0, 0, 0)) is x


@given(speed, unit)
def test_boost_group_inverse(s, d):
    V = velocity(s, d)
    x = ExtendedState(q0=0.4, q=(1.0, -2.0, 0.5), p0=-2.0, p=(0.3, 0.2, -0.1))
    back = boost_finite(boost_finite(x, V), -V)
    assert np.allclose(back.as_array(), x.as_array(), atol=1e-12)


@given(speed, unit, st.lists(st.floats(-3, 3), min_size=3, max_size=3))
def test_boost_preserves_mass_shell_and_hamiltonian(s, d, p):
    x = ExtendedState.on_shell(p, 1.5)
    y = boost_finite(x, velocity(s, d))
    assert abs(mass_shell_residual(y, 1.5)) <= 1e-10 * max(1.0, y.p0 ** 2)
    assert hamiltonian_eval(HamiltonianSpec.free(1.5), y) == pytest.approx(-1.5, abs=1e-10)


@pytest.mark.parametrize("branch", [LORENTZ, SO4])
def test_closed_form_matches_matrix_exponential(branch, rng):
    for _ in range(5):
        V = rng.uniform(-0.5, 0.5, 3)
        x = ExtendedState.from_array(rng.uniform(-2, 2, 8))
        a = boost_finite(x, V, 1.0, branch)
        b = boost_generator(V, 1.0, branch).flow(x)
        assert np.allclose(a.as_array(), b.as_array(), atol=1e-12)


def test_rapidities_add_along_an_axis():
    x = ExtendedState.on_shell((0.2, 0.1, 0))
    v1, v2 = 0.5, 0.3
    composed = boost_finite(boost_finite(x, (v1, 0, 0)), (v2, 0, 0))
    direct = boost_finite(x, (np.tanh(np.arctanh(v1) + np.arctanh(v2)), 0, 0))
    assert np.allclose(composed.as_array(), direct.as_array(), atol=1e-12)
    rep = check_canonical(lambda y: boost_finite(boost_finite(y, (v1, 0, 0)), (v2, 0, 0)), rng=1)
    assert rep.ok()


def test_lorentz_branch_refuses_superluminal_speed():
    with pytest.raises(DomainError):
        boost_finite(ExtendedState(), (1.0, 0, 0))
    # the SO(4) branch has no speed limit
    y = boost_finite(ExtendedState(p0=1.0), (np.pi, 0, 0), branch=SO4)
    assert y.p0 == pytest.approx(-1.0)


def test_check_canonical_boost_and_counterexample():
    rep = check_canonical(lambda x: boost_finite(x, (0.6, 0, 0)), samples=5, rng=0)
    assert rep.max_deviation <= 1e-10 and rep.samples == 5

    def stretch(x):
        q = x.q.copy()
        q[0] *= 2
        return ExtendedState(q0=x.q0, q=q, p0=x.p0, p=x.p)

    bad = check_canonical(stretch, samples=3, rng=0)
    assert bad.max_deviation == pytest.approx(1.0, abs=1e-9)
    assert not bad.ok()
    with pytest.raises(DomainError):
        check_canonical(stretch, samples=0)


def test_generic_lifts_are_canonical(rng):
    for mode in (GALILEI_LIFT, LORENTZ_LIFT):
        g = GalileiElement(xi=GalileiElement.rotation_generator(rng.normal(size=3)),
                           d=rng.normal(size=3), v=0.5 * rng.normal(size=3), tau=0.3)
        assert check_canonical(lift_to_extended(g, mode=mode), rng=rng).ok()
    # a generator that is not of the lifted form is not canonical as a first-order map
    m = ExtendedLinearMap(0.1 * rng.normal(size=(4, 4)), np.zeros(4), np.zeros(4))
    assert not check_canonical(m.apply, rng=rng).ok(1e-6)


def test_rotations():
    R = rodrigues((0, 0, np.pi / 2))
    assert np.allclose(R @ [1, 0, 0], [0, 1, 0])
    assert np.allclose(rodrigues((0, 0, 0)), np.eye(3))
    x = ExtendedState.on_shell((1, 0, 0), q=(0, 2, 0))
    y = rotate(x, (0, 0, np.pi / 2))
    assert np.allclose(y.p, [0, 1, 0]) and np.allclose(y.q, [-2, 0, 0])
    assert check_canonical(lambda s: rotate(s, (0.3, -0.2, 0.9)), rng=2).ok()


def test_intrinsic_frame_boost():
    assert intrinsic_frame_boost(0.0, 1.0) == 0.0
    assert intrinsic_frame_boost(0.75, 1.25) == pytest.approx(0.6)
    with pytest.raises(DomainError):
        intrinsic_frame_boost(1.3, 1.25)
    with pytest.raises(DomainError):
        intrinsic_frame_boost(0.1, -1.0)
