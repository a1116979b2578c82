"""Galilei and Lorentz group actions on the extended phase space.

Block vectors use the ordering q~ = (q1, q2, q3, q0) and p~ = (p1, p2, p3, p0),
so the 4x4 generator ``A`` has the rotation generator xi in its upper-left
3x3 block.  An infinitesimal element acts as

    q~' = q~ - Y~ - A^T q~,     p~' = p~ - X~ + A p~

and its finite flow replaces (1 - A^T, 1 + A) by (exp(-A^T), exp(A)).

For positive energy the velocity enters A symmetrically (Lorentz boosts,
cosh/sinh of the rapidity); for negative energy it enters antisymmetrically
and the boosts become SO(4) rotations (cos/sin of an angle).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np
from scipy.linalg import expm

from .core import (
    DomainError,
    ExtendedState,
    bracket_matrix,
    numeric_jacobian,
    symplectic_form,
)

LORENTZ = "lorentz"
SO4 = "so4"
GALILEI_LIFT = "galilei"
LORENTZ_LIFT = "lorentz"


def _frozen(a, shape):
    a = np.array(a, dtype=float).reshape(shape)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GalileiElement:
    """Lie-algebra element (rotation xi, translation d, boost v, time shift tau)."""

    xi: np.ndarray = field(default_factory=lambda: np.zeros((3, 3)))
    d: np.ndarray = field(default_factory=lambda: np.zeros(3))
    v: np.ndarray = field(default_factory=lambda: np.zeros(3))
    tau: float = 0.0

    def __post_init__(self):
        xi = _frozen(self.xi, (3, 3))
        if np.max(np.abs(xi + xi.T)) > 1e-14:
            raise DomainError("xi must be antisymmetric")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "d", _frozen(self.d, 3))
        object.__setattr__(self, "v", _frozen(self.v, 3))
        object.__setattr__(self, "tau", float(self.tau))

    @staticmethod
    def rotation_generator(omega) -> np.ndarray:
        """Antisymmetric xi with xi @ q = omega x q."""
        wx, wy, wz = np.asarray(omega, dtype=float)
        return np.array([[0.0, -wz, wy], [wz, 0.0, -wx], [-wy, wx, 0.0]])


def galilei_act(g: GalileiElement, q, t: float):
    q = np.asarray(q, dtype=float)
    return q + g.xi @ q - g.d - t * g.v, t - g.tau


def lorentz_act_infinitesimal(g: GalileiElement, q, t: float, c: float = 1.0):
    q = np.asarray(q, dtype=float)
    return q + g.xi @ q - g.d - t * g.v, t - g.v @ q / c ** 2 - g.tau


@dataclass(frozen=True)
class ExtendedLinearMap:
    """Affine canonical action on (q~, p~) given by generator A and shifts b_q = Y~, b_p = X~."""

    A: np.ndarray
    b_q: np.ndarray
    b_p: np.ndarray
    sign_branch: str = LORENTZ

    def __post_init__(self):
        object.__setattr__(self, "A", _frozen(self.A, (4, 4)))
        object.__setattr__(self, "b_q", _frozen(self.b_q, 4))
        object.__setattr__(self, "b_p", _frozen(self.b_p, 4))

    def apply(self, x: ExtendedState) -> ExtendedState:
        """First-order (infinitesimal) action."""
        qt, pt = _split(x)
        return _join(qt - self.b_q - self.A.T @ qt, pt - self.b_p + self.A @ pt, x.u)

    def flow(self, x: ExtendedState, s: float = 1.0) -> ExtendedState:
        """Finite flow exp(s A) of the linear part followed by the shifts."""
        qt, pt = _split(x)
        return _join(expm(-s * self.A.T) @ qt - s * self.b_q,
                     expm(s * self.A) @ pt - s * self.b_p, x.u)


def _split(x: ExtendedState):
    return np.append(x.q, x.q0), np.append(x.p, x.p0)


def _join(qt, pt, u) -> ExtendedState:
    return ExtendedState(q0=qt[3], q=qt[:3], p0=pt[3], p=pt[:3], u=u)


def lift_to_extended(g: GalileiElement, m: float = 1.0, c: float = 1.0,
                     mode: str = LORENTZ_LIFT, branch: str = LORENTZ) -> ExtendedLinearMap:
    """Canonical lift of a Galilei algebra element to the extended phase space.

    ``galilei``: A = [[xi, 0], [v/c, 0]], X~ = (m v, 0).
    ``lorentz``: A = [[xi, +-v/c], [v/c, 0]], X~ = 0, with + on the positive
    energy (Lorentz) branch and - on the SO(4) branch.
    The time shift enters Y~ as c tau so that q0' = q0 - c tau.
    """
    A = np.zeros((4, 4))
    A[:3, :3] = g.xi
    A[3, :3] = g.v / c
    b_q = np.append(g.d, c * g.tau)
    if mode == GALILEI_LIFT:
        b_p = np.append(m * g.v, 0.0)
    elif mode == LORENTZ_LIFT:
        A[:3, 3] = (g.v if branch == LORENTZ else -g.v) / c
        b_p = np.zeros(4)
    else:
        raise ValueError(f"unknown lift mode {mode!r}")
    return ExtendedLinearMap(A, b_q, b_p, branch)


def rodrigues(omega) -> np.ndarray:
    """Rotation matrix exp(xi) for the axis-angle vector omega."""
    omega = np.asarray(omega, dtype=float)
    theta = np.linalg.norm(omega)
    if theta == 0:
        return np.eye(3)
    K = GalileiElement.rotation_generator(omega / theta)
    return np.eye(3) + np.sin(theta) * K + (1 - np.cos(theta)) * (K @ K)


def rotate(x: ExtendedState, omega) -> ExtendedState:
    R = rodrigues(omega)
    return ExtendedState(q0=x.q0, q=R @ x.q, p0=x.p0, p=R @ x.p, u=x.u)


def boost_finite(x: ExtendedState, V, c: float = 1.0, branch: str = LORENTZ) -> ExtendedState:
    """Finite boost along V (3-vector).

    Lorentz branch: rapidity rho = atanh(|V|/c), requires |V| < c.
    SO(4) branch: rotation angle rho = |V|/c in the (q_par, q0) and
    (p_par, p0) planes; no velocity meaning is attached.
    """
    V = np.asarray(V, dtype=float)
    speed = float(np.linalg.norm(V))
    if speed == 0:
        return x
    n = V / speed
    if branch == LORENTZ:
        if speed >= c:
            raise DomainError(f"|V| = {speed!r} must be below c = {c!r}")
        rho = np.arctanh(speed / c)
        ch, sh = np.cosh(rho), np.sinh(rho)
        sign = 1.0
    elif branch == SO4:
        rho = speed / c
        ch, sh = np.cos(rho), np.sin(rho)
        sign = -1.0
    else:
        raise ValueError(f"unknown branch {branch!r}")

    q_par, p_par = x.q @ n, x.p @ n
    q_perp, p_perp = x.q - q_par * n, x.p - p_par * n
    # q' = exp(-rho a0^T) q, p' = exp(rho a0) p with a0 = [[0, s], [1, 0]] on (par, 0)
    q_par2 = ch * q_par - sh * x.q0
    q0_2 = ch * x.q0 - sign * sh * q_par
    p_par2 = ch * p_par + sign * sh * x.p0
    p0_2 = ch * x.p0 + sh * p_par
    return ExtendedState(q0=q0_2, q=q_perp + q_par2 * n, p0=p0_2, p=p_perp + p_par2 * n, u=x.u)


def boost_generator(V, c: float = 1.0, branch: str = LORENTZ) -> ExtendedLinearMap:
    """Generator whose unit-time flow equals ``boost_finite`` (oracle path via expm)."""
    V = np.asarray(V, dtype=float)
    speed = float(np.linalg.norm(V))
    if speed == 0:
        return ExtendedLinearMap(np.zeros((4, 4)), np.zeros(4), np.zeros(4), branch)
    rho = np.arctanh(speed / c) if branch == LORENTZ else speed / c
    # a lift with v = rho c n has A = rho a0
    g = GalileiElement(v=rho * c * V / speed)
    return lift_to_extended(g, c=c, mode=LORENTZ_LIFT, branch=branch)


@dataclass
class CanonicalReport:
    max_deviation: float
    samples: int
    worst_state: np.ndarray

    def ok(self, tol: float = 1e-10) -> bool:
        return self.max_deviation <= tol


MapLike = Union[ExtendedLinearMap, Callable[[ExtendedState], ExtendedState]]


def check_canonical(mapping: MapLike, samples: int = 10, rng=None, scale: float = 1.0,
                    h: float = 1e-3) -> CanonicalReport:
    """Max |{x'_a, x'_b} - J_ab| over random states and all 64 coordinate pairs.

    ``mapping`` is an ExtendedLinearMap (its finite flow is checked) or any
    callable ExtendedState -> ExtendedState.  Derivatives use the five-point
    stencil, exact for affine maps up to round-off.
    """
    if samples < 1:
        raise DomainError("samples must be >= 1")
    if isinstance(mapping, ExtendedLinearMap):
        fn = mapping.flow
    else:
        fn = mapping
    rng = np.random.default_rng(rng)
    J = symplectic_form(4)

    def flat(y):
        return fn(ExtendedState.from_array(y)).as_array()

    worst, worst_x = 0.0, None
    for _ in range(samples):
        x = rng.uniform(-scale, scale, size=8)
        D = numeric_jacobian(flat, x, h=h * max(1.0, scale), order=4)
        dev = float(np.max(np.abs(bracket_matrix(D) - J)))
        if worst_x is None or dev > worst:
            worst, worst_x = dev, x
    return CanonicalReport(worst, samples, worst_x)


def intrinsic_frame_boost(mean_p_parallel: float, mean_E: float, c: float = 1.0) -> float:
    """Boost speed V that brings the mean momentum along the axis to zero."""
    if not mean_E > 0:
        raise DomainError(f"mean energy must be positive, got {mean_E!r}")
    beta = c * mean_p_parallel / mean_E
    if abs(beta) >= 1:
        raise DomainError(f"superluminal moment pair: c<p>/<E> = {beta!r}")
    V = c * beta
    moved = boost_finite(ExtendedState(p0=-mean_E / c, p=(mean_p_parallel, 0, 0)),
                         (V, 0.0, 0.0), c)
    assert abs(moved.p[0]) <= 1e-9 * max(1.0, abs(mean_p_parallel))
    return V
