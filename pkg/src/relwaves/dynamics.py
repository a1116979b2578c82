"""Extended Hamiltonians and their canonical flow in universal time u.

Three Hamiltonians are supported:

* ``free``       H = -c sqrt(p0^2 - |p|^2)
* ``nonrel``     H = H_N(q, p, t) + c p0, with t = q0 / c
* ``potential``  H = -c sqrt((p0 + V(q)/c)^2 - |p|^2)

The integrator is a fixed-step classical RK4.  The free flow is affine in u
so RK4 reproduces it to round-off; with a potential, halve ``du`` until the
observables of interest stop changing.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .core import DomainError, ExtendedState, numeric_jacobian

FREE = "free"
NONREL = "nonrel"
POTENTIAL = "potential"
KINDS = (FREE, NONREL, POTENTIAL)

TRAJECTORY_COLUMNS = ("u", "q0", "q1", "q2", "q3", "p0", "p1", "p2", "p3")


def free_particle_hamiltonian(m0: float) -> Callable:
    def H(q, p, t):
        return float(p @ p) / (2 * m0)
    return H


@dataclass(frozen=True)
class HamiltonianSpec:
    kind: str = FREE
    m0: float = 1.0
    c: float = 1.0
    # static scalar potential V(q) and its gradient (``potential`` kind)
    potential: Optional[Callable[[np.ndarray], float]] = None
    potential_grad: Optional[Callable[[np.ndarray], np.ndarray]] = None
    # H_N(q, p, t) for the ``nonrel`` kind; defaults to |p|^2 / 2 m0
    base_nonrel: Optional[Callable[[np.ndarray, np.ndarray, float], float]] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown Hamiltonian kind {self.kind!r}; expected one of {KINDS}")
        if not self.m0 > 0:
            raise DomainError(f"m0 must be positive, got {self.m0!r}")
        if not self.c > 0:
            raise DomainError(f"c must be positive, got {self.c!r}")
        if self.kind == POTENTIAL and self.potential is None:
            raise ValueError("potential kind needs a potential V(q)")

    @classmethod
    def free(cls, m0=1.0, c=1.0):
        return cls(FREE, m0, c)

    @classmethod
    def nonrelativistic(cls, m0=1.0, c=1.0, H=None):
        return cls(NONREL, m0, c, base_nonrel=H)

    @classmethod
    def with_potential(cls, V, grad_V=None, m0=1.0, c=1.0):
        return cls(POTENTIAL, m0, c, potential=V, potential_grad=grad_V)

    def _H_N(self):
        return self.base_nonrel or free_particle_hamiltonian(self.m0)

    def _V(self, q) -> float:
        return float(self.potential(q))

    def _grad_V(self, q) -> np.ndarray:
        if self.potential_grad is not None:
            return np.asarray(self.potential_grad(q), dtype=float)
        return numeric_jacobian(lambda y: self._V(y), q)[0]


def _radicand(spec: HamiltonianSpec, x: ExtendedState):
    w = x.p0
    if spec.kind == POTENTIAL:
        w = w + spec._V(x.q) / spec.c
    r2 = w * w - x.p @ x.p
    if not r2 > 0:
        raise DomainError(f"spacelike argument: radicand (p0+V/c)^2 - |p|^2 = {float(r2)!r} <= 0")
    return w, np.sqrt(r2)


def hamiltonian_eval(spec: HamiltonianSpec, x: ExtendedState) -> float:
    if spec.kind == NONREL:
        return float(spec._H_N()(x.q, x.p, x.q0 / spec.c) + spec.c * x.p0)
    _, R = _radicand(spec, x)
    return float(-spec.c * R)


def eom_rhs(spec: HamiltonianSpec, x: ExtendedState) -> np.ndarray:
    """d/du of the flat state (q0, q, p0, p)."""
    c = spec.c
    if spec.kind == NONREL:
        H = spec._H_N()

        def Hflat(y):
            return H(y[1:4], y[4:7], y[0])

        # y = (t, q, p)
        y = np.concatenate(([x.q0 / c], x.q, x.p))
        grad = numeric_jacobian(Hflat, y)[0]
        dH_dt, dH_dq, dH_dp = grad[0], grad[1:4], grad[4:7]
        # d_u t = 1, d_u E = dH/dt  ->  d_u q0 = c, d_u p0 = -(dH/dt)/c
        return np.concatenate(([c], dH_dp, [-dH_dt / c], -dH_dq))

    w, R = _radicand(spec, x)
    dq0 = -c * w / R
    dq = c * x.p / R
    if spec.kind == FREE:
        return np.concatenate(([dq0], dq, [0.0], np.zeros(3)))
    # dH/dq = -c (w/R) grad V / c
    dp = w * spec._grad_V(x.q) / R
    return np.concatenate(([dq0], dq, [0.0], dp))


def integrate_trajectory(spec: HamiltonianSpec, x0: ExtendedState, du: float, n: int) -> list:
    """RK4 in u; returns the n + 1 states x0, x1, ..., xn."""
    if not du > 0:
        raise DomainError(f"du must be positive, got {du!r}")
    if n < 1:
        raise DomainError(f"need at least one step, got n={n!r}")

    def f(y, u):
        return eom_rhs(spec, ExtendedState.from_array(y, u))

    out = [x0]
    y = x0.as_array()
    u = x0.u
    for step in range(n):
        try:
            k1 = f(y, u)
            k2 = f(y + 0.5 * du * k1, u + 0.5 * du)
            k3 = f(y + 0.5 * du * k2, u + 0.5 * du)
            k4 = f(y + du * k3, u + du)
        except DomainError as exc:
            raise DomainError(f"trajectory aborted at step {step}: {exc}") from exc
        y = y + (du / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        u = x0.u + (step + 1) * du
        out.append(ExtendedState.from_array(y, u))
    return out


def velocity_from_momentum(x: ExtendedState, c: float = 1.0) -> np.ndarray:
    """Coordinate velocity v = -c p / p0."""
    if x.p0 == 0:
        raise DomainError("p0 = 0: velocity undefined")
    return -c * x.p / x.p0


def inertial_parameters(x: ExtendedState, c: float = 1.0) -> np.ndarray:
    """(I0, I1, I2, I3) from 1/I_mu = (1/p_mu) dH/dp_mu for the free Hamiltonian.

    Where p_mu = 0 the ratio is replaced by its limit, -R/c for mu = 0 and
    R/c otherwise, R = sqrt(p0^2 - |p|^2); on shell these are -m0 and m0.
    """
    _, R = _radicand(HamiltonianSpec.free(c=c), x)
    pe = np.concatenate(([x.p0], x.p))
    dH = np.concatenate(([-c * x.p0 / R], c * x.p / R))
    limit = np.array([-R / c, R / c, R / c, R / c])
    out = limit.copy()
    nz = pe != 0
    out[nz] = pe[nz] / dH[nz]
    return out


def write_trajectory_csv(states: Sequence[ExtendedState], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(TRAJECTORY_COLUMNS)
        for s in states:
            w.writerow([repr(float(v)) for v in (s.u, *s.as_array())])


def read_trajectory_csv(path) -> list:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return [ExtendedState.from_array([float(r[k]) for k in TRAJECTORY_COLUMNS[1:]], float(r["u"]))
            for r in rows]
