"""Action distributions n(q0, q_par), S(q0, q_par) on a 1+1 space-time grid.

The density obeys the continuity equation in universal time

    m0 du n = d0 (n d0 S) - d_par (n d_par S),

i.e. it is advected by the velocity field (-d0 S / m0, d_par S / m0), which
coincides with the characteristic velocity of the free extended Hamiltonian
when S is on shell.  S itself only gains the phase m0 c^2 u, so it is stored
as its u = 0 shape and never time-stepped.

Axis 0 of every field is q0, axis 1 is q_par.  Boundaries are periodic by
default; ``reflecting`` closes the boundary faces (zero normal flux).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from .core import ConfigurationError, DomainError

PERIODIC = "periodic"
REFLECTING = "reflecting"
CFL_LIMIT = 0.5

FIELD_COLUMNS = ("q0", "q1", "n", "S")
MOMENT_COLUMNS = ("u", "mean_t", "mean_E", "mean_p")


@dataclass(frozen=True)
class Grid:
    q0: np.ndarray
    q1: np.ndarray

    @classmethod
    def uniform(cls, n0: int, n1: int, d0: float, d1: float, origin=(None, None)) -> "Grid":
        """n0 x n1 points with spacings d0, d1, centred on 0 unless origin is given."""
        o0 = -0.5 * d0 * n0 if origin[0] is None else origin[0]
        o1 = -0.5 * d1 * n1 if origin[1] is None else origin[1]
        return cls(o0 + d0 * np.arange(n0), o1 + d1 * np.arange(n1))

    @property
    def d0(self) -> float:
        return float(self.q0[1] - self.q0[0])

    @property
    def d1(self) -> float:
        return float(self.q1[1] - self.q1[0])

    @property
    def shape(self):
        return (self.q0.size, self.q1.size)

    def mesh(self):
        return np.meshgrid(self.q0, self.q1, indexing="ij")


@dataclass(frozen=True)
class ActionWaveState:
    grid: Grid
    n: np.ndarray
    S: np.ndarray  # shape of the action at u = 0
    u: float = 0.0
    m0: float = 1.0
    c: float = 1.0
    boundary: str = PERIODIC

    def __post_init__(self):
        if self.n.shape != self.grid.shape or self.S.shape != self.grid.shape:
            raise ConfigurationError("n and S must match the grid shape")
        if np.any(self.n < 0):
            raise DomainError("density must be nonnegative")
        if self.boundary not in (PERIODIC, REFLECTING):
            raise ConfigurationError(f"unknown boundary mode {self.boundary!r}")

    @property
    def action(self) -> np.ndarray:
        """Full action S(q, u) = S_shape + m0 c^2 u."""
        return self.S + self.m0 * self.c ** 2 * self.u

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.n) * self.grid.d0 * self.grid.d1)


def gaussian_blob(grid: Grid, center=(0.0, 0.0), width=(0.5, 0.5)) -> np.ndarray:
    Q0, Q1 = grid.mesh()
    n = np.exp(-0.5 * (((Q0 - center[0]) / width[0]) ** 2 + ((Q1 - center[1]) / width[1]) ** 2))
    return n / (np.sum(n) * grid.d0 * grid.d1)


def plane_wave_action(grid: Grid, p0: float, p1: float) -> np.ndarray:
    """S = p0 q0 + p1 q_par (constant four-momentum)."""
    Q0, Q1 = grid.mesh()
    return p0 * Q0 + p1 * Q1


def on_shell_plane_wave(grid: Grid, p1: float = 0.0, m0: float = 1.0, c: float = 1.0):
    return plane_wave_action(grid, -np.sqrt((m0 * c) ** 2 + p1 ** 2), p1)


def action_gradient(state: ActionWaveState):
    return np.gradient(state.S, state.grid.d0, state.grid.d1, edge_order=2)


def hj_residual(state: ActionWaveState) -> np.ndarray:
    """(d0 S)^2 - (d_par S)^2 - m0^2 c^2 on the grid."""
    g0, g1 = action_gradient(state)
    return g0 ** 2 - g1 ** 2 - (state.m0 * state.c) ** 2


def flux_velocity(state: ActionWaveState):
    g0, g1 = action_gradient(state)
    return -g0 / state.m0, g1 / state.m0


def max_stable_step(state: ActionWaveState) -> float:
    g0, g1 = action_gradient(state)
    vmax = max(float(np.max(np.abs(g0))), float(np.max(np.abs(g1)))) / state.m0
    if vmax == 0:
        return np.inf
    return CFL_LIMIT * min(state.grid.d0, state.grid.d1) / vmax


def _face_flux(n, a, axis, periodic):
    # upwind flux through the face between cell i and i+1 along ``axis``
    n_next = np.roll(n, -1, axis=axis)
    a_face = 0.5 * (a + np.roll(a, -1, axis=axis))
    F = np.where(a_face > 0, a_face * n, a_face * n_next)
    if not periodic:
        idx = [slice(None)] * n.ndim
        idx[axis] = -1
        F[tuple(idx)] = 0.0
    return F


def _step(n, a0, a1, du, d0, d1, periodic):
    F0 = _face_flux(n, a0, 0, periodic)
    F1 = _face_flux(n, a1, 1, periodic)
    return n - du / d0 * (F0 - np.roll(F0, 1, axis=0)) - du / d1 * (F1 - np.roll(F1, 1, axis=1))


def evolve(state: ActionWaveState, du: float, n_steps: int) -> ActionWaveState:
    """Advance n by first-order upwind / explicit Euler; S gains m0 c^2 du per step."""
    if not du > 0 or n_steps < 0:
        raise ConfigurationError(f"need du > 0 and n_steps >= 0, got du={du!r}, n_steps={n_steps!r}")
    limit = max_stable_step(state)
    if du > limit * (1 + 1e-12):
        raise ConfigurationError(f"CFL violated: du={du!r} exceeds the stable limit {limit!r}")
    a0, a1 = flux_velocity(state)
    periodic = state.boundary == PERIODIC
    n = state.n
    for _ in range(n_steps):
        n = _step(n, a0, a1, du, state.grid.d0, state.grid.d1, periodic)
    # round-off can leave -1e-300 style values; the scheme itself is positive
    n = np.maximum(n, 0.0)
    return replace(state, n=n, u=state.u + n_steps * du)


@dataclass(frozen=True)
class Moments:
    mean_t: float
    mean_E: float
    mean_p_parallel: float
    var_t: float
    mean_q1: float


def spacetime_moments(state: ActionWaveState) -> Moments:
    w = state.n
    total = float(np.sum(w))
    if not total > 0:
        raise DomainError("zero total mass: moments undefined")
    Q0, Q1 = state.grid.mesh()
    g0, g1 = action_gradient(state)
    c = state.c
    mean_q0 = float(np.sum(w * Q0)) / total
    var_q0 = float(np.sum(w * (Q0 - mean_q0) ** 2)) / total
    return Moments(
        mean_t=mean_q0 / c,
        mean_E=-c * float(np.sum(w * g0)) / total,
        mean_p_parallel=float(np.sum(w * g1)) / total,
        var_t=var_q0 / c ** 2,
        mean_q1=float(np.sum(w * Q1)) / total,
    )


def evolve_with_moments(state: ActionWaveState, du: float, n_steps: int, every: int = 1):
    """Evolve and record (u, moments) every ``every`` steps, including u0."""
    series = [(state.u, spacetime_moments(state))]
    done = 0
    while done < n_steps:
        k = min(every, n_steps - done)
        state = evolve(state, du, k)
        done += k
        series.append((state.u, spacetime_moments(state)))
    return state, series


def linear_time_slope(samples: Sequence) -> tuple:
    """Least-squares slope of mean_t against u; returns (slope, intercept, residual_norm)."""
    data = np.asarray(samples, dtype=float)
    if data.ndim != 2 or data.shape[0] < 3:
        raise DomainError("need at least 3 (u, mean_t) samples")
    u, t = data[:, 0], data[:, 1]
    if np.ptp(u) == 0:
        raise DomainError("degenerate u values")
    A = np.column_stack([u, np.ones_like(u)])
    (slope, intercept), *_ = np.linalg.lstsq(A, t, rcond=None)
    resid = float(np.linalg.norm(t - A @ np.array([slope, intercept])))
    return float(slope), float(intercept), resid


def write_field_csv(state: ActionWaveState, path) -> None:
    Q0, Q1 = state.grid.mesh()
    S = state.action
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(FIELD_COLUMNS)
        for row in zip(Q0.ravel(), Q1.ravel(), state.n.ravel(), S.ravel()):
            w.writerow([repr(float(v)) for v in row])


def write_moments_csv(series, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(MOMENT_COLUMNS)
        for u, m in series:
            w.writerow([repr(float(v)) for v in (u, m.mean_t, m.mean_E, m.mean_p_parallel)])
