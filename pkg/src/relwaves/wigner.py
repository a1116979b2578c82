"""Extended quantum distributions and their phase-space (Wigner) forms.

Everything is reduced to the two coordinates (q0, q_par) and their conjugate
momenta (p0, p_par).  A wave packet is a product Psi = chi(q0) psi(q_par)
with chi a Glauber coherent state in the time-energy plane and psi sampled
on a uniform spatial grid.

Conventions:
    f~(q, k)  = Psi(q + sigma k / 2) Psi*(q - sigma k / 2)
    f~(q, k)  = int dp exp(i k.p) f(q, p)
    W(x, p)   = (1 / 2 pi sigma) int dy exp(-i p y / sigma) psi(x + y/2) psi*(x - y/2)

With d reduced dimensions the overlap of two pure-state distributions is
|<Psi1|Psi2>|^2 / (2 pi sigma)^d; here d = 2.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .core import DomainError

REDUCED_DIM = 2
WIGNER_COLUMNS = ("q", "p", "f")


@dataclass(frozen=True)
class GlauberPacket:
    """Gaussian time-energy packet centred at (Q0, P0); P0 = -<E>/c."""

    Q0: float = 0.0
    P0: float = -1.0
    Omega: float = 1.0
    sigma: float = 1.0
    c: float = 1.0

    def __post_init__(self):
        if not self.Omega > 0:
            raise DomainError(f"Omega must be positive, got {self.Omega!r}")
        if not (self.sigma > 0 and self.c > 0):
            raise DomainError("sigma and c must be positive")

    @property
    def var_q0(self) -> float:
        return self.c ** 2 / (2 * self.Omega ** 2)

    @property
    def var_p0(self) -> float:
        return (self.sigma * self.Omega) ** 2 / (2 * self.c ** 2)

    def at(self, u: float, m0: float = 1.0) -> "GlauberPacket":
        """Packet after universal time u; the centroid moves as Q0 - u P0 / m0."""
        return replace(self, Q0=self.Q0 - u * self.P0 / m0)

    def grid(self, n: int = 1024, half_width: float = 14.0) -> np.ndarray:
        """Uniform q0 grid of n points covering Q0 +- half_width standard deviations."""
        s = np.sqrt(self.var_q0)
        return self.Q0 + s * np.linspace(-half_width, half_width, n, endpoint=False)


def glauber_eval(packet: GlauberPacket, q0):
    q0 = np.asarray(q0, dtype=float)
    W, c, s = packet.Omega, packet.c, packet.sigma
    amp = np.sqrt(W / (c * np.sqrt(np.pi)))
    return amp * np.exp(-W ** 2 * (q0 - packet.Q0) ** 2 / (2 * c ** 2)
                        + 1j * packet.P0 * (q0 - packet.Q0 / 2) / s)


def glauber_wigner(packet: GlauberPacket, q0, p0):
    """Closed-form time-energy factor of the extended Wigner function."""
    W, c, s = packet.Omega, packet.c, packet.sigma
    q0, p0 = np.asarray(q0, dtype=float), np.asarray(p0, dtype=float)
    return np.exp(-W ** 2 * (q0 - packet.Q0) ** 2 / c ** 2
                  - c ** 2 * (p0 - packet.P0) ** 2 / (W ** 2 * s ** 2)) / (np.pi * s)


def gaussian_psi(x, x0: float = 0.0, width: float = 1.0, p: float = 0.0, sigma: float = 1.0):
    """Normalized Gaussian with |psi|^2 standard deviation ``width`` and mean momentum p."""
    x = np.asarray(x, dtype=float)
    return ((2 * np.pi * width ** 2) ** -0.25
            * np.exp(-(x - x0) ** 2 / (4 * width ** 2) + 1j * p * (x - x0) / sigma))


def hermite_psi(x, order: int = 1, x0: float = 0.0, scale: float = 1.0):
    """Normalized Hermite-Gaussian of order 0 or 1, ~ exp(-(x-x0)^2 / 2 scale^2)."""
    y = (np.asarray(x, dtype=float) - x0) / scale
    g = np.pi ** -0.25 * np.exp(-y ** 2 / 2) / np.sqrt(scale)
    if order == 0:
        return g.astype(complex)
    if order == 1:
        return (np.sqrt(2.0) * y * g).astype(complex)
    raise ValueError("only orders 0 and 1 are provided")


@dataclass(frozen=True)
class WavePacket:
    chi: GlauberPacket
    x: np.ndarray
    psi: np.ndarray
    m0: float = 1.0

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        psi = np.asarray(self.psi, dtype=complex)
        if x.shape != psi.shape or x.ndim != 1:
            raise DomainError("psi must be sampled on the 1-D grid x")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "psi", psi)

    @property
    def sigma(self) -> float:
        return self.chi.sigma

    @property
    def c(self) -> float:
        return self.chi.c

    @property
    def dx(self) -> float:
        return float(self.x[1] - self.x[0])

    def norm(self) -> float:
        """int int |Psi|^2; the time factor is normalized analytically."""
        return float(np.sum(np.abs(self.psi) ** 2) * self.dx)

    def psi_at(self, q1):
        q1 = np.asarray(q1, dtype=float)
        if np.any(q1 < self.x[0]) or np.any(q1 > self.x[-1]):
            raise DomainError("evaluation point outside the spatial grid")
        return np.interp(q1, self.x, self.psi.real) + 1j * np.interp(q1, self.x, self.psi.imag)

    def __call__(self, q):
        """Psi at reduced points q[..., 0] = q0, q[..., 1] = q_par."""
        q = np.asarray(q, dtype=float)
        return glauber_eval(self.chi, q[..., 0]) * self.psi_at(q[..., 1])


def quantum_distribution(Psi: Callable, q, k, sigma: float = 1.0):
    """Psi(q + sigma k/2) Psi*(q - sigma k/2) for any callable Psi of reduced points."""
    q, k = np.asarray(q, dtype=float), np.asarray(k, dtype=float)
    return Psi(q + 0.5 * sigma * k) * np.conj(Psi(q - 0.5 * sigma * k))


def quantum_distribution_eval(wp: WavePacket, q, k):
    return quantum_distribution(wp, q, k, wp.sigma)


def action_distribution_fourier(n: Callable, grad_S: Callable, q, k):
    """Classical limit n(q) exp(i k . dS(q)) of the quantum distribution."""
    q, k = np.asarray(q, dtype=float), np.asarray(k, dtype=float)
    return n(q) * np.exp(1j * np.sum(k * grad_S(q), axis=-1))


def current_density(Psi: Callable, q, sigma: float = 1.0, axis: int = 1, h: float = 1e-4):
    """-i d f~/d k_axis at k = 0 (momentum density along ``axis``), central differences."""
    q = np.asarray(q, dtype=float)
    e = np.zeros(q.shape[-1])
    e[axis] = h
    fp = quantum_distribution(Psi, q, np.broadcast_to(e, q.shape), sigma)
    fm = quantum_distribution(Psi, q, np.broadcast_to(-e, q.shape), sigma)
    return (-1j * (fp - fm) / (2 * h)).real


def wigner_1d(psi, x, sigma: float = 1.0, p_center: float | None = None):
    """Discrete Wigner function of psi sampled on the uniform grid x.

    Returns (p, W, imag_residue) with W[j, l] at (x[j], p[l]).  The momentum grid has
    len(x) points, spacing pi sigma / (N dx), centred on ``p_center``
    (default: the mean momentum of psi).  Correlations psi(x+m dx) psi*(x-m dx)
    outside the grid are taken as zero.
    """
    psi = np.asarray(psi, dtype=complex)
    x = np.asarray(x, dtype=float)
    N = x.size
    dx = float(x[1] - x[0])
    if p_center is None:
        p_center = mean_momentum(psi, x, sigma)
    phi = psi * np.exp(-1j * p_center * x / sigma)

    m = np.arange(-(N // 2), N - N // 2)
    j = np.arange(N)[:, None]
    ip, im = j + m[None, :], j - m[None, :]
    ok = (ip >= 0) & (ip < N) & (im >= 0) & (im < N)
    C = np.where(ok, phi[np.clip(ip, 0, N - 1)] * np.conj(phi[np.clip(im, 0, N - 1)]), 0.0)
    F = np.fft.fftshift(np.fft.fft(np.fft.ifftshift(C, axes=1), axis=1), axes=1)
    W = (dx / (np.pi * sigma)) * F
    l = np.arange(-(N // 2), N - N // 2)
    p = p_center + np.pi * sigma * l / (N * dx)
    return p, W.real, float(np.max(np.abs(W.imag)))


def mean_momentum(psi, x, sigma: float = 1.0) -> float:
    p, prob = momentum_distribution(psi, x, sigma)
    return float(np.sum(p * prob) / np.sum(prob))


def momentum_distribution(psi, x, sigma: float = 1.0):
    """(p, |psi^(p)|^2) on the FFT momentum grid, normalized so sum * dp = int |psi|^2."""
    psi = np.asarray(psi, dtype=complex)
    N = psi.size
    dx = float(x[1] - x[0])
    k = 2 * np.pi * np.fft.fftfreq(N, dx)
    phat = np.fft.fft(psi) * dx / np.sqrt(2 * np.pi * sigma)
    p = sigma * k
    order = np.argsort(p)
    return p[order], np.abs(phat[order]) ** 2


def momentum_density_at(psi, x, p, sigma: float = 1.0):
    """|psi^(p)|^2 at arbitrary momenta by direct quadrature of the Fourier integral."""
    x = np.asarray(x, dtype=float)
    dx = float(x[1] - x[0])
    amp = np.exp(-1j * np.outer(np.asarray(p, dtype=float), x) / sigma) @ np.asarray(psi) * dx
    return np.abs(amp) ** 2 / (2 * np.pi * sigma)


@dataclass
class WignerField:
    """Factorized extended Wigner function f = T(q0, p0) * X(q_par, p_par)."""

    q0: np.ndarray
    p0: np.ndarray
    time_factor: np.ndarray
    q1: np.ndarray
    p1: np.ndarray
    space_factor: np.ndarray
    imag_residue: float = 0.0
    extras: dict = field(default_factory=dict)

    def field(self) -> np.ndarray:
        """Full 4-D array indexed [q0, q1, p0, p1]; only for small grids."""
        return np.einsum("ac,bd->abcd", self.time_factor, self.space_factor)

    @property
    def dq0(self):
        return float(self.q0[1] - self.q0[0])

    @property
    def dp0(self):
        return float(self.p0[1] - self.p0[0])

    @property
    def dq1(self):
        return float(self.q1[1] - self.q1[0])

    @property
    def dp1(self):
        return float(self.p1[1] - self.p1[0])

    def position_marginal(self):
        """int f dp0 dp1 on the (q0, q1) grid."""
        return np.outer(self.time_factor.sum(1) * self.dp0, self.space_factor.sum(1) * self.dp1)

    def momentum_marginal(self):
        return np.outer(self.time_factor.sum(0) * self.dq0, self.space_factor.sum(0) * self.dq1)

    def total(self) -> float:
        return float(self.time_factor.sum() * self.dq0 * self.dp0
                     * self.space_factor.sum() * self.dq1 * self.dp1)

    def purity(self) -> float:
        """int f^2 dq dp."""
        return float((self.time_factor ** 2).sum() * self.dq0 * self.dp0
                     * (self.space_factor ** 2).sum() * self.dq1 * self.dp1)

    def energy_variance(self) -> float:
        """delta p0^2 from the time-energy factor by quadrature."""
        w = self.time_factor.sum(0)
        mean = np.sum(w * self.p0) / np.sum(w)
        return float(np.sum(w * (self.p0 - mean) ** 2) / np.sum(w))


def time_energy_grid(packet: GlauberPacket, n: int = 256, half_width: float = 10.0):
    sq = np.sqrt(packet.var_q0)
    sp = np.sqrt(packet.var_p0)
    a = np.linspace(-half_width, half_width, n)
    return packet.Q0 + sq * a, packet.P0 + sp * a


def wigner_transform(wp: WavePacket, n_time: int = 256) -> WignerField:
    """Extended Wigner function of wp: exact Gaussian time factor times the discrete spatial Wigner."""
    q0, p0 = time_energy_grid(wp.chi, n_time)
    T = glauber_wigner(wp.chi, q0[:, None], p0[None, :])
    p1, X, resid = wigner_1d(wp.psi, wp.x, wp.sigma)
    return WignerField(q0, p0, T, wp.x, p1, X, resid)


def amplitude(wp1: WavePacket, wp2: WavePacket) -> complex:
    """<Psi1|Psi2> = <chi1|chi2> <psi1|psi2>."""
    _check_common(wp1, wp2)
    return glauber_overlap(wp1.chi, wp2.chi) * complex(np.sum(np.conj(wp1.psi) * wp2.psi) * wp1.dx)


def glauber_overlap(a: GlauberPacket, b: GlauberPacket, n: int = 4096) -> complex:
    """<chi_a|chi_b> by trapezoidal quadrature on a grid covering both packets."""
    s = max(np.sqrt(a.var_q0), np.sqrt(b.var_q0))
    lo, hi = min(a.Q0, b.Q0) - 14 * s, max(a.Q0, b.Q0) + 14 * s
    q = np.linspace(lo, hi, n)
    return complex(np.sum(np.conj(glauber_eval(a, q)) * glauber_eval(b, q)) * (q[1] - q[0]))


def _check_common(wp1: WavePacket, wp2: WavePacket):
    if wp1.x.shape != wp2.x.shape or not np.array_equal(wp1.x, wp2.x):
        raise DomainError("wave packets live on different spatial grids")
    if wp1.sigma != wp2.sigma or wp1.c != wp2.c:
        raise DomainError("wave packets use different sigma or c")


@dataclass(frozen=True)
class OverlapSides:
    amplitude_side: float
    phase_space_side: float

    @property
    def relative_gap(self) -> float:
        scale = max(abs(self.amplitude_side), abs(self.phase_space_side))
        return 0.0 if scale == 0 else abs(self.amplitude_side - self.phase_space_side) / scale


def overlap_sides(wp1: WavePacket, wp2: WavePacket, n_time: int = 512) -> OverlapSides:
    """Both sides of the overlap identity for the reduced (d = 2) distributions."""
    _check_common(wp1, wp2)
    sigma = wp1.sigma
    amp_side = abs(amplitude(wp1, wp2)) ** 2 / (2 * np.pi * sigma) ** REDUCED_DIM

    a, b = wp1.chi, wp2.chi
    sq = max(np.sqrt(a.var_q0), np.sqrt(b.var_q0))
    sp = max(np.sqrt(a.var_p0), np.sqrt(b.var_p0))
    q0 = np.linspace(min(a.Q0, b.Q0) - 10 * sq, max(a.Q0, b.Q0) + 10 * sq, n_time)
    p0 = np.linspace(min(a.P0, b.P0) - 10 * sp, max(a.P0, b.P0) + 10 * sp, n_time)
    Ta = glauber_wigner(a, q0[:, None], p0[None, :])
    Tb = glauber_wigner(b, q0[:, None], p0[None, :])
    time_part = float(np.sum(Ta * Tb) * (q0[1] - q0[0]) * (p0[1] - p0[0]))

    pc = 0.5 * (mean_momentum(wp1.psi, wp1.x, sigma) + mean_momentum(wp2.psi, wp2.x, sigma))
    p1, X1, _ = wigner_1d(wp1.psi, wp1.x, sigma, p_center=pc)
    _, X2, _ = wigner_1d(wp2.psi, wp2.x, sigma, p_center=pc)
    space_part = float(np.sum(X1 * X2) * wp1.dx * (p1[1] - p1[0]))
    return OverlapSides(amp_side, time_part * space_part)


def phase_space_overlap(wp1: WavePacket, wp2: WavePacket) -> float:
    """<f1 f2> from the amplitude formula |<Psi1|Psi2>|^2 / (2 pi sigma)^2."""
    _check_common(wp1, wp2)
    return abs(amplitude(wp1, wp2)) ** 2 / (2 * np.pi * wp1.sigma) ** REDUCED_DIM


def uncertainty_products(wp) -> tuple:
    """(delta_E, delta_t, delta_E * delta_t) of the time factor, by quadrature on a grid.

    Accepts a WavePacket or a bare GlauberPacket.
    """
    packet = wp.chi if isinstance(wp, WavePacket) else wp
    q0 = packet.grid()
    chi = glauber_eval(packet, q0)
    dq = q0[1] - q0[0]
    prob = np.abs(chi) ** 2
    norm = np.sum(prob) * dq
    mean = np.sum(q0 * prob) * dq / norm
    var_q0 = np.sum((q0 - mean) ** 2 * prob) * dq / norm
    p0, pprob = momentum_distribution(chi, q0, packet.sigma)
    pmean = np.sum(p0 * pprob) / np.sum(pprob)
    var_p0 = np.sum((p0 - pmean) ** 2 * pprob) / np.sum(pprob)
    dt = np.sqrt(var_q0) / packet.c
    dE = packet.c * np.sqrt(var_p0)
    return float(dE), float(dt), float(dE * dt)


def kg_residual_plane_wave(p0: float, p1: float, m0: float = 1.0, c: float = 1.0,
                           sigma: float = 1.0, amplitude: complex = 1.0) -> complex:
    """-sigma^2 box Psi - m0^2 c^2 Psi for Psi = A exp(i (p0 q0 + p1 q1) / sigma).

    box acts on the plane wave as multiplication by (p1^2 - p0^2) / sigma^2.
    """
    box = (p1 ** 2 - p0 ** 2) / sigma ** 2
    return (-sigma ** 2 * box - (m0 * c) ** 2) * amplitude


def box_operator(psi, d0: float, d1: float):
    """Second-difference d'Alembertian d0^2 - d1^2 on interior points (axis 0 = q0)."""
    psi = np.asarray(psi)
    core = psi[1:-1, 1:-1]
    dd0 = (psi[2:, 1:-1] - 2 * core + psi[:-2, 1:-1]) / d0 ** 2
    dd1 = (psi[1:-1, 2:] - 2 * core + psi[1:-1, :-2]) / d1 ** 2
    return dd0 - dd1


def kg_residual_grid(psi, d0: float, d1: float, m0: float = 1.0, c: float = 1.0,
                     sigma: float = 1.0):
    """Residual field -sigma^2 box Psi - m0^2 c^2 Psi on interior grid points."""
    psi = np.asarray(psi)
    return -sigma ** 2 * box_operator(psi, d0, d1) - (m0 * c) ** 2 * psi[1:-1, 1:-1]


def kg_residual(mode, m0: float = 1.0, c: float = 1.0, sigma: float = 1.0, spacing=None):
    """Dispatch: ``mode`` is a momentum pair (p0, p_par) or a gridded Psi with ``spacing``."""
    if spacing is None:
        p0, p1 = mode
        return kg_residual_plane_wave(p0, p1, m0, c, sigma)
    return kg_residual_grid(mode, spacing[0], spacing[1], m0, c, sigma)


def fit_box_eigenvalue(psi, d0: float, d1: float) -> float:
    """Least-squares a in box Psi = a Psi over interior points."""
    psi = np.asarray(psi)
    b = box_operator(psi, d0, d1).ravel()
    v = psi[1:-1, 1:-1].ravel()
    return float((np.vdot(v, b) / np.vdot(v, v)).real)


def effective_mass(m0: float, var_p0: float, c: float = 1.0) -> float:
    """m_x = sqrt(m0^2 - delta p0^2 / c^2)."""
    m2 = m0 ** 2 - var_p0 / c ** 2
    if not m2 > 0:
        raise DomainError(f"energy spread too large: m0^2 - dp0^2/c^2 = {m2!r} <= 0")
    return float(np.sqrt(m2))


def nonrel_correction(m_x: float, mean_p2: float, c: float) -> float:
    return 1.0 - mean_p2 / (2 * m_x ** 2 * c ** 2)


def evolve_nonrel(psi0, x, m_x: float, mean_p2: float, sigma: float = 1.0, c: float = 1.0,
                  t_span=(0.0, 1.0), n_steps: int = 10):
    """Spectral free evolution in the mean time <t> with the relativistic correction.

    Each Fourier mode k gets the phase exp(-i t (sigma k^2 / 2 m_x)(1 - <p^2>/2 m_x^2 c^2)).
    Returns (times, psi[times, x]).
    """
    if not m_x > 0:
        raise DomainError(f"effective mass must be positive, got {m_x!r}")
    psi0 = np.asarray(psi0, dtype=complex)
    x = np.asarray(x, dtype=float)
    dx = float(x[1] - x[0])
    norm = np.sum(np.abs(psi0) ** 2) * dx
    if abs(norm - 1) > 1e-6:
        raise DomainError(f"psi0 must be normalized, got norm {norm!r}")
    k = 2 * np.pi * np.fft.fftfreq(x.size, dx)
    omega = sigma * k ** 2 / (2 * m_x) * nonrel_correction(m_x, mean_p2, c)
    times = np.linspace(t_span[0], t_span[1], n_steps + 1)
    spec0 = np.fft.fft(psi0)
    out = np.array([np.fft.ifft(spec0 * np.exp(-1j * omega * (t - t_span[0]))) for t in times])
    return times, out


def position_width(psi, x) -> float:
    """Standard deviation of |psi|^2."""
    prob = np.abs(psi) ** 2
    prob = prob / prob.sum()
    mean = np.sum(x * prob)
    return float(np.sqrt(np.sum((x - mean) ** 2 * prob)))


def hydrogen_corrections(mean_p2: float, mean_p4: float, alpha: float = 1 / 137.035999084):
    """(H_c, H'_1, Dirac reference) in atomic units (hbar = m = 1, c = 1/alpha).

    H_c = hbar^2 <p^2> <lap> / 4 m^3 c^2 with <lap> = -<p^2>, H'_1 = -<p^4> / 8 m^3 c^2.
    """
    a2 = alpha ** 2
    return -a2 * mean_p2 ** 2 / 4, -a2 * mean_p4 / 8, -a2 / 8


@dataclass(frozen=True)
class SqrtOperatorResult:
    field: np.ndarray
    leakage: float
    p0: np.ndarray
    p1: np.ndarray


def conjugate_momenta(k0, k1):
    """FFT momentum grids conjugate to uniform k grids (fft ordering)."""
    return (2 * np.pi * np.fft.fftfreq(len(k0), k0[1] - k0[0]),
            2 * np.pi * np.fft.fftfreq(len(k1), k1[1] - k1[0]))


def apply_sqrt_operator(ftilde, k0, k1, m0: float = 1.0, c: float = 1.0) -> SqrtOperatorResult:
    """Apply -c sqrt((-i d_k0)^2 - (-i d_k1)^2) spectrally.

    ``ftilde`` is sampled on the centred uniform grids k0 (axis 0), k1 (axis 1).
    Spacelike momentum components (p0^2 <= p1^2) are zeroed; the reported
    leakage is the fraction of sum |f(p)| they carried.  The multiplier does
    not depend on m0; data supported on the m0 shell come back scaled by -m0 c^2.
    """
    ftilde = np.asarray(ftilde, dtype=complex)
    F = np.fft.fft2(np.fft.ifftshift(ftilde))
    p0, p1 = conjugate_momenta(k0, k1)
    P0, P1 = np.meshgrid(p0, p1, indexing="ij")
    r2 = P0 ** 2 - P1 ** 2
    timelike = r2 > 0
    mult = np.where(timelike, -c * np.sqrt(np.where(timelike, r2, 0.0)), 0.0)
    weight = np.abs(F)
    total = float(weight.sum())
    leakage = float(weight[~timelike].sum() / total) if total > 0 else 0.0
    out = np.fft.fftshift(np.fft.ifft2(F * mult))
    return SqrtOperatorResult(out, leakage, np.fft.fftshift(p0), np.fft.fftshift(p1))


def write_wigner_csv(p, W, x, path) -> None:
    """Spatial Wigner factor as long-format CSV (q, p, f)."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(WIGNER_COLUMNS)
        for j, xj in enumerate(x):
            for l, pl in enumerate(p):
                w.writerow((repr(float(xj)), repr(float(pl)), repr(float(W[j, l]))))
