"""Nondegenerate relativistic gas at equilibrium.

Temperatures are energies (k_B = 1).  eps_p = sqrt(p^2 c^2 + m0^2 c^4).
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import integrate, optimize

from .core import DomainError, NumericalError

SWEEP_COLUMNS = ("T", "mu", "N", "E", "eps_star")
QUAD_RTOL = 1e-10


@dataclass(frozen=True)
class GasParams:
    mu: float = 0.0
    T: float = 1.0
    m0: float = 1.0
    c: float = 1.0
    V: float = 1.0
    h: float = 1.0

    def __post_init__(self):
        if not self.T > 0:
            raise DomainError(f"temperature must be positive, got {self.T!r}")
        if not self.V > 0:
            raise DomainError(f"volume must be positive, got {self.V!r}")
        if not (self.m0 > 0 and self.c > 0 and self.h > 0):
            raise DomainError("m0, c and h must be positive")

    @property
    def rest_energy(self) -> float:
        return self.m0 * self.c ** 2


def particle_energy(p, m0: float = 1.0, c: float = 1.0):
    p = np.asarray(p, dtype=float)
    p2 = np.sum(p * p, axis=-1) if p.ndim and p.shape[-1] == 3 else p * p
    return np.sqrt(p2 * c ** 2 + (m0 * c ** 2) ** 2)


def equilibrium_f(params: GasParams, p):
    """(2/h^3) exp((mu - eps_p)/T) for momentum vectors p[..., 3]."""
    eps = particle_energy(p, params.m0, params.c)
    return 2.0 / params.h ** 3 * np.exp((params.mu - eps) / params.T)


def g_T(eps, T: float, m0: float = 1.0, c: float = 1.0):
    eps = np.asarray(eps, dtype=float)
    mc2 = m0 * c ** 2
    return eps ** 2 * np.sqrt(np.maximum(eps ** 2 - mc2 ** 2, 0.0)) * np.exp(-eps / T)


def _quad(fn, a, b, what):
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            out = integrate.quad(fn, a, b, epsabs=0.0, epsrel=QUAD_RTOL, limit=400, full_output=True)
        except integrate.IntegrationWarning as exc:
            raise NumericalError(f"{what}: quadrature did not converge on [{a}, {b}]: {exc}") from exc
    val, err, info = out[:3]
    if len(out) > 3:
        # with full_output quad reports trouble through a message instead of a warning
        raise NumericalError(f"{what}: quadrature did not converge on [{a}, {b}] after "
                             f"{info['neval']} evaluations: {out[3].strip()}")
    if not np.isfinite(val) or (val != 0 and abs(err) > 1e-8 * abs(val)):
        raise NumericalError(f"{what}: value {val!r}, error estimate {err!r}, "
                             f"{info['neval']} evaluations")
    return val


def _energy_integral(integrand, params: GasParams, eps_max: float, what: str):
    # eps = mc2 (1 + t/(1-t)) maps t in [0, 1) onto [mc2, inf)
    mc2 = params.rest_energy
    if np.isinf(eps_max):
        t_max = 1.0
    else:
        x = eps_max / mc2 - 1
        t_max = x / (1 + x)

    def fn(t):
        if t >= 1.0:
            return 0.0
        eps = mc2 * (1 + t / (1 - t))
        return integrand(eps) * mc2 / (1 - t) ** 2

    return _quad(fn, 0.0, t_max, what)


def thermo_integrals(params: GasParams, eps_max: float = np.inf, cross_check: bool = True):
    """Particle number N and total energy E, optionally cut at eps_max.

    N and E are integrated over energy with the tail mapping; E is
    cross-checked against an independent integral over |p|.
    """
    mc2 = params.rest_energy
    if eps_max < mc2:
        raise DomainError(f"eps_max must be at least m0 c^2 = {mc2!r}, got {eps_max!r}")
    if eps_max == mc2:
        return 0.0, 0.0
    T, c = params.T, params.c
    pref = 8 * np.pi * params.V / (params.h ** 3 * c ** 3) * np.exp(params.mu / T)

    def n_integrand(eps):
        return eps * np.sqrt(max(eps * eps - mc2 * mc2, 0.0)) * np.exp(-eps / T)

    N = pref * _energy_integral(n_integrand, params, eps_max, "N")
    E = pref * _energy_integral(lambda e: float(g_T(e, T, params.m0, c)), params, eps_max, "E")

    if cross_check and E > 0:
        E_p = energy_via_momentum(params, eps_max)
        if abs(E_p - E) > 1e-7 * abs(E):
            raise NumericalError(f"energy routes disagree: {E!r} (energy) vs {E_p!r} (momentum)")
    return N, E


def energy_via_momentum(params: GasParams, eps_max: float = np.inf) -> float:
    """E = V int d^3p eps_p f(p) as a radial integral over |p|."""
    mc2, c = params.rest_energy, params.c
    p_max = np.inf if np.isinf(eps_max) else np.sqrt(eps_max ** 2 - mc2 ** 2) / c

    def fn(p):
        eps = np.sqrt(p * p * c * c + mc2 * mc2)
        return 4 * np.pi * p * p * eps * float(equilibrium_f(params, np.array(p)))

    if np.isinf(p_max):
        # split so the adaptive rule sees the peak region at finite resolution
        p_knee = 40 * max(params.T / c, params.m0 * c)
        return params.V * (_quad(fn, 0.0, p_knee, "E(p)") + _quad(fn, p_knee, np.inf, "E(p) tail"))
    return params.V * _quad(fn, 0.0, p_max, "E(p)")


def gT_argmax(T: float, m0: float = 1.0, c: float = 1.0, tol: float = 1e-8) -> float:
    """Energy of the maximum of g_T on (m0 c^2, 20 m0 c^2), by golden-section search."""
    if not T > 0:
        raise DomainError(f"temperature must be positive, got {T!r}")
    mc2 = m0 * c ** 2
    lo, hi = mc2, 20 * mc2
    scan = np.linspace(lo, hi, 2001)[1:-1]
    i = int(np.argmax(g_T(scan, T, m0, c)))
    a = scan[max(i - 1, 0)]
    b = scan[i]
    cc = scan[min(i + 1, scan.size - 1)]
    if not (a < b < cc):
        # maximum at the edge of the admissible interval
        return float(b)
    res = optimize.minimize_scalar(lambda e: -float(g_T(e, T, m0, c)), bracket=(a, b, cc),
                                   method="golden", tol=tol)
    return float(res.x)


def sound_velocity(T: float, m0: float = 1.0) -> float:
    """Nonrelativistic estimate sqrt(k_B T / m0)."""
    return float(np.sqrt(T / m0))


def velocity_cutoff_fraction(eps_max: float, m0: float = 1.0, c: float = 1.0) -> float:
    """v_max / c for particles with energy up to eps_max."""
    mc2 = m0 * c ** 2
    if eps_max < mc2:
        raise DomainError(f"eps_max must be at least m0 c^2 = {mc2!r}, got {eps_max!r}")
    if np.isinf(eps_max):
        return 1.0
    return float(np.sqrt(1 - (mc2 / eps_max) ** 2))


@dataclass(frozen=True)
class MomentumGrid:
    p: np.ndarray  # 1-D axis used for all three components

    @classmethod
    def cube(cls, n: int = 64, p_max: float = 6.0) -> "MomentumGrid":
        return cls(np.linspace(-p_max, p_max, n))

    @property
    def dp(self) -> float:
        return float(self.p[1] - self.p[0])

    def mesh(self):
        return np.meshgrid(self.p, self.p, self.p, indexing="ij")


def _divergence(fields, dp):
    # central differences, interior points only
    out = 0.0
    for axis, F in enumerate(fields):
        sl_p = [slice(1, -1)] * 3
        sl_m = [slice(1, -1)] * 3
        sl_p[axis] = slice(2, None)
        sl_m[axis] = slice(None, -2)
        out = out + (F[tuple(sl_p)] - F[tuple(sl_m)]) / (2 * dp)
    return out


def fokker_planck_rhs(f, params: GasParams, grid: MomentumGrid, gamma: float):
    """gamma div_p((p/m) f + T grad_p f) on interior points, m = eps_p / c^2.

    Since p/m = grad_p eps_p, the flux equals T M grad_p(f / M) with the
    Boltzmann factor M = exp(-eps_p / T); the face fluxes are built from that
    form with second-order differences.
    """
    P = np.stack(grid.mesh(), axis=-1)
    eps = particle_energy(P, params.m0, params.c)
    M = np.exp(-(eps - params.rest_energy) / params.T)
    g = f / M
    dp = grid.dp
    out = np.zeros(tuple(s - 2 for s in f.shape))
    for axis in range(3):
        M_face = np.sqrt(M * np.roll(M, -1, axis=axis))
        J = params.T * M_face * (np.roll(g, -1, axis=axis) - g) / dp  # face i+1/2
        div = (J - np.roll(J, 1, axis=axis)) / dp
        out = out + div[1:-1, 1:-1, 1:-1]
    return gamma * out


def fokker_planck_term_scale(f, params: GasParams, grid: MomentumGrid, gamma: float) -> float:
    """max |gamma div_p((p/m) f)| on interior points."""
    P = grid.mesh()
    eps = particle_energy(np.stack(P, axis=-1), params.m0, params.c)
    inv_m = params.c ** 2 / eps
    drift = _divergence([Pi * inv_m * f for Pi in P], grid.dp)
    return float(np.max(np.abs(gamma * drift)))


def fokker_planck_residual(params: GasParams, grid: MomentumGrid | None = None,
                           gamma: float = 1.0, f=None):
    """Residual of the homogeneous stationary Fokker-Planck equation.

    With grad_q f = 0 the stationary equation reduces to the collision side;
    returns (residual field on interior points, term scale).  ``f`` defaults
    to the equilibrium distribution.
    """
    grid = grid or MomentumGrid.cube()
    if f is None:
        f = equilibrium_f(params, np.stack(grid.mesh(), axis=-1))
    res = fokker_planck_rhs(f, params, grid, gamma)
    scale = fokker_planck_term_scale(f, params, grid, gamma)
    return res, scale


def finite_fourier(samples, delta: float, n_max: int):
    """Coefficients f_n = int_{-delta}^{delta} exp(i n pi X / delta) f(X) dX, n = -n_max..n_max.

    ``samples`` are uniform on [-delta, delta] including both endpoints;
    the integral is the composite trapezoidal rule.
    """
    if n_max < 0:
        raise DomainError("n_max must be nonnegative")
    f = np.asarray(samples)
    X = np.linspace(-delta, delta, f.size)
    w = np.full(f.size, X[1] - X[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    n = np.arange(-n_max, n_max + 1)
    return n, np.exp(1j * np.pi * np.outer(n, X) / delta) @ (w * f)


def reconstruct(coefficients, X, delta: float):
    """(1 / 2 delta) sum_n exp(-i n pi X / delta) f_n."""
    n, fn = coefficients
    X = np.asarray(X, dtype=float)
    return np.exp(-1j * np.pi * np.multiply.outer(X, n) / delta) @ fn / (2 * delta)


def write_sweep_csv(rows, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SWEEP_COLUMNS)
        for row in rows:
            w.writerow([repr(float(v)) for v in row])
