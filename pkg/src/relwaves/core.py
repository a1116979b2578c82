"""Extended phase-space points, numerical Poisson brackets and mass-shell helpers.

Coordinates follow the convention q0 = c t and p0 = -E/c, so physical
(positive-energy) states carry p0 < 0.  Everything is in model units with
c = m0 = sigma = 1 unless the caller passes other constants.

Flat 8-vectors are ordered (q0, q1, q2, q3, p0, p1, p2, p3).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np


class DomainError(ValueError):
    """An argument lies outside the domain of a physical formula."""


class EvaluationError(ArithmeticError):
    """An observable returned a non-finite value."""


class ConfigurationError(ValueError):
    """Numerical setup (grid, step, CFL) is inconsistent."""


class NumericalError(ArithmeticError):
    """A numerical procedure (quadrature, fit) failed to converge."""


def _vec3(v) -> np.ndarray:
    a = np.array(v, dtype=float).reshape(3)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ExtendedState:
    """Point (q0, q, p0, p) of the 8-dimensional extended phase space at universal time u."""

    q0: float = 0.0
    q: np.ndarray = field(default_factory=lambda: _vec3((0.0, 0.0, 0.0)))
    p0: float = -1.0
    p: np.ndarray = field(default_factory=lambda: _vec3((0.0, 0.0, 0.0)))
    u: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "q0", float(self.q0))
        object.__setattr__(self, "p0", float(self.p0))
        object.__setattr__(self, "u", float(self.u))
        object.__setattr__(self, "q", _vec3(self.q))
        object.__setattr__(self, "p", _vec3(self.p))

    @classmethod
    def from_array(cls, x, u: float = 0.0) -> "ExtendedState":
        x = np.asarray(x, dtype=float)
        return cls(q0=x[0], q=x[1:4], p0=x[4], p=x[5:8], u=u)

    @classmethod
    def physical(cls, q0=0.0, q=(0.0, 0.0, 0.0), E=1.0, p=(0.0, 0.0, 0.0), c=1.0, u=0.0):
        """Build a state from energy E > 0 (sets p0 = -E/c)."""
        if not E > 0:
            raise DomainError(f"physical states need E > 0, got E={E!r}")
        return cls(q0=q0, q=q, p0=-E / c, p=p, u=u)

    @classmethod
    def on_shell(cls, p=(0.0, 0.0, 0.0), m0=1.0, c=1.0, q0=0.0, q=(0.0, 0.0, 0.0), u=0.0):
        """Positive-energy state with p0 = -sqrt(m0^2 c^2 + |p|^2)."""
        p = np.asarray(p, dtype=float)
        return cls(q0=q0, q=q, p0=-np.sqrt((m0 * c) ** 2 + p @ p), p=p, u=u)

    def as_array(self) -> np.ndarray:
        return np.concatenate(([self.q0], self.q, [self.p0], self.p))

    def energy(self, c: float = 1.0) -> float:
        return -c * self.p0

    def require_physical(self) -> "ExtendedState":
        if not self.p0 < 0:
            raise DomainError(f"physical states need p0 < 0, got p0={self.p0!r}")
        return self

    def with_u(self, u: float) -> "ExtendedState":
        return replace(self, u=u)


@dataclass(frozen=True)
class Units:
    c: float = 1.0
    sigma: float = 1.0
    m0: float = 1.0

    def __post_init__(self):
        for name in ("c", "sigma", "m0"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be a positive finite number, got {value!r}")


def default_step(x: np.ndarray) -> float:
    return 1e-5 * max(1.0, float(np.max(np.abs(x))))


def _checked(fn, x):
    value = fn(x)
    value = np.asarray(value, dtype=float)
    if not np.all(np.isfinite(value)):
        raise EvaluationError(f"observable returned non-finite value {value!r} at {x!r}")
    return value


def numeric_jacobian(fn: Callable[[np.ndarray], np.ndarray], x, h: float | None = None,
                     order: int = 2) -> np.ndarray:
    """Finite-difference Jacobian d fn_a / d x_i of a map R^n -> R^m (or scalar).

    ``order`` 2 uses the central stencil, 4 the five-point stencil.  The
    divisor is the actually representable step (x+h) - (x-h), which makes
    linear observables differentiate to round-off.
    """
    x = np.asarray(x, dtype=float)
    if h is None:
        h = default_step(x)
    if not h > 0:
        raise DomainError(f"step size must be positive, got {h!r}")
    cols = []
    for i in range(x.size):
        xp, xm = x.copy(), x.copy()
        xp[i] += h
        xm[i] -= h
        span = xp[i] - xm[i]
        if order == 2:
            d = (_checked(fn, xp) - _checked(fn, xm)) / span
        elif order == 4:
            xpp, xmm = x.copy(), x.copy()
            xpp[i] += 2 * h
            xmm[i] -= 2 * h
            d = (8 * (_checked(fn, xp) - _checked(fn, xm))
                 - (_checked(fn, xpp) - _checked(fn, xmm))) / (6 * span)
        else:
            raise ValueError("order must be 2 or 4")
        cols.append(np.atleast_1d(d))
    return np.stack(cols, axis=-1)


def symplectic_form(n: int = 4) -> np.ndarray:
    """Canonical matrix J with {x_a, x_b} = J_ab for x = (q, p)."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def poisson_bracket_numeric(f, g, x, h: float | None = None) -> float:
    """Extended bracket sum_mu (df/dq_mu dg/dp_mu - df/dp_mu dg/dq_mu) by central differences.

    ``f`` and ``g`` take the flat 8-vector; ``x`` may be an ExtendedState or
    an 8-vector.  Truncation error is O(h^2).
    """
    if isinstance(x, ExtendedState):
        x = x.as_array()
    df = numeric_jacobian(f, x, h)[0]
    dg = numeric_jacobian(g, x, h)[0]
    return float(df[:4] @ dg[4:] - df[4:] @ dg[:4])


def bracket_matrix(jacobian: np.ndarray) -> np.ndarray:
    """All brackets {y_a, y_b} of the image coordinates y = F(x), given dF/dx."""
    J = symplectic_form(jacobian.shape[1] // 2)
    return jacobian @ J @ jacobian.T


def mass_shell_residual(x: ExtendedState, m0: float = 1.0, c: float = 1.0) -> float:
    """p0^2 - |p|^2 - m0^2 c^2; zero on the mass shell."""
    return float(x.p0 ** 2 - x.p @ x.p - (m0 * c) ** 2)
