"""Rubin model: parameters, quadratic Hamiltonians and spectral densities.

A heavy oscillator ``(M, omega_S)`` sits between the two ends of an open
chain of ``N`` identical oscillators ``(m, omega_B)``; every spring,
including the two attaching the system, has constant ``f = m omega_R**2 / 4``.
"""
from dataclasses import dataclass
from functools import cached_property
import math

import numpy as np

from .errors import DomainError

__all__ = [
    "ModelParams",
    "QuadraticHamiltonian",
    "make_params",
    "params_from_gamma",
    "bath_hamiltonian",
    "system_hamiltonian",
    "full_hamiltonian",
    "spectral_density",
    "ohmic_spectral_density",
    "format_matrix",
]


@dataclass(frozen=True)
class ModelParams:
    M: float
    m: float
    omega_S: float
    omega_B: float
    omega_R: float
    N: int
    hbar: float = 1.0
    k_B: float = 1.0

    def __post_init__(self):
        for name in ("M", "m", "omega_S", "hbar", "k_B"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")
        if not (math.isfinite(self.omega_B) and self.omega_B >= 0):
            raise DomainError(f"omega_B must be >= 0, got {self.omega_B!r}")
        if not (math.isfinite(self.omega_R) and self.omega_R >= 0):
            raise DomainError(f"omega_R must be >= 0, got {self.omega_R!r}")
        if int(self.N) != self.N or self.N < 1:
            raise DomainError(f"N must be an integer >= 1, got {self.N!r}")
        # omega_R == 0 is the decoupled limit and has no spectral band to check
        if self.omega_R > 0 and self.omega_B >= self.omega_R:
            raise DomainError(
                f"omega_B >= omega_R ({self.omega_B} >= {self.omega_R}): "
                "spectral density undefined"
            )
        object.__setattr__(self, "N", int(self.N))

    @property
    def gamma(self):
        """Ohmic friction coefficient ``m omega_R / 2M``."""
        return self.m * self.omega_R / (2.0 * self.M)

    @property
    def Gamma_D(self):
        """Debye cutoff of the Ohmic limit."""
        return self.omega_R

    @property
    def f(self):
        """Spring constant of every chain bond."""
        return self.m * self.omega_R ** 2 / 4.0

    @property
    def band_top(self):
        """Upper edge of the bath phonon band, ``sqrt(omega_B**2 + omega_R**2)``."""
        return math.hypot(self.omega_B, self.omega_R)

    def with_gamma(self, gamma):
        return params_from_gamma(gamma, self.M, self.m, self.omega_S, self.omega_B,
                                 self.N, hbar=self.hbar, k_B=self.k_B)


def make_params(M, m, omega_S, omega_B, omega_R, N, hbar=1.0, k_B=1.0):
    """Validated :class:`ModelParams`; raises :class:`DomainError` on bad input."""
    return ModelParams(float(M), float(m), float(omega_S), float(omega_B),
                       float(omega_R), N, float(hbar), float(k_B))


def params_from_gamma(gamma, M, m, omega_S, omega_B, N, hbar=1.0, k_B=1.0):
    """Parameters for a given friction ``gamma``; ``omega_R = 2 gamma M / m``."""
    if gamma < 0:
        raise DomainError(f"gamma must be >= 0, got {gamma!r}")
    return make_params(M, m, omega_S, omega_B, 2.0 * gamma * M / m, N, hbar, k_B)


class QuadraticHamiltonian:
    """``H = sum_i p_i**2 / 2 m_i + x^T V x / 2``.

    The normal-mode decomposition is computed on first use and cached.
    """

    def __init__(self, potential, masses):
        potential = np.array(potential, dtype=float)
        masses = np.array(masses, dtype=float).ravel()
        if potential.ndim != 2 or potential.shape[0] != potential.shape[1]:
            raise ValueError("potential must be a square matrix")
        if potential.shape[0] != masses.size:
            raise ValueError("masses and potential have different dimensions")
        if np.any(masses <= 0):
            raise DomainError("masses must be positive")
        scale = max(np.abs(potential).max(), np.finfo(float).tiny)
        if np.abs(potential - potential.T).max() > 1e-12 * scale:
            raise ValueError("potential is not symmetric")
        self.potential = 0.5 * (potential + potential.T)
        self.masses = masses
        self.potential.setflags(write=False)
        self.masses.setflags(write=False)

    @property
    def dimension(self):
        return self.masses.size

    @cached_property
    def normal_modes(self):
        """``(omega, U)`` with ``M^-1/2 V M^-1/2 = U diag(omega**2) U^T``."""
        s = 1.0 / np.sqrt(self.masses)
        k = self.potential * s[:, None] * s[None, :]
        w2, u = np.linalg.eigh(k)
        if w2[0] <= 0:
            raise DomainError(f"Hamiltonian is not positive definite (min eigenvalue {w2[0]:.3e})")
        return np.sqrt(w2), u

    def is_positive_definite(self):
        return bool(np.linalg.eigvalsh(self.potential)[0] > 0)

    def energy_form(self):
        """Phase-space matrix E with ``H = xi^T E xi / 2`` in interleaved ordering."""
        n = self.dimension
        e = np.zeros((2 * n, 2 * n))
        e[0::2, 0::2] = self.potential
        e[1::2, 1::2] = np.diag(1.0 / self.masses)
        return e

    def dump(self):
        return format_matrix(self.potential)

    def __repr__(self):
        return f"QuadraticHamiltonian(dimension={self.dimension})"


def format_matrix(a):
    """Row-major, whitespace separated, 17 significant digits."""
    return "\n".join(" ".join(f"{x:.17g}" for x in row) for row in np.atleast_2d(a)) + "\n"


def _chain_potential(p):
    n = p.N
    v = np.zeros((n, n))
    v[np.diag_indices(n)] = p.m * p.omega_B ** 2
    f = p.f
    for a in range(n - 1):
        v[a, a] += f
        v[a + 1, a + 1] += f
        v[a, a + 1] -= f
        v[a + 1, a] -= f
    return v


def bath_hamiltonian(p):
    """Isolated open chain of ``N`` oscillators."""
    return QuadraticHamiltonian(_chain_potential(p), np.full(p.N, p.m))


def system_hamiltonian(p):
    return QuadraticHamiltonian([[p.M * p.omega_S ** 2]], [p.M])


def full_hamiltonian(p):
    """System + chain + the two springs closing the ring through ``q``.

    Coordinates are ordered ``(q, x_1, ..., x_N)``.  For ``N = 1`` both
    springs join ``q`` to ``x_1``.
    """
    n = p.N + 1
    f = p.f
    v = np.zeros((n, n))
    v[0, 0] = p.M * p.omega_S ** 2
    v[1:, 1:] = _chain_potential(p)
    for end in (1, p.N):
        v[0, 0] += f
        v[end, end] += f
        v[0, end] -= f
        v[end, 0] -= f
    return QuadraticHamiltonian(v, np.r_[p.M, np.full(p.N, p.m)])


def spectral_density(p, omega):
    """Exact Rubin spectral density, zero at the upper band edge."""
    omega = np.asarray(omega, dtype=float)
    upper = (p.omega_R - p.omega_B) * p.omega_R - omega ** 2
    # tolerate rounding at the band edge
    edge = (p.omega_R - p.omega_B) * p.omega_R
    if np.any(omega < 0) or np.any(upper < -1e-12 * max(edge, 1.0)):
        raise DomainError("omega outside [0, sqrt((omega_R - omega_B) omega_R)]")
    upper = np.maximum(upper, 0.0)
    j = 0.5 * p.m * np.sqrt(omega ** 2 + p.omega_R * p.omega_B) * np.sqrt(upper)
    return j if j.ndim else float(j)


def ohmic_spectral_density(p, omega):
    """Drude-regularised Ohmic density ``gamma M omega G**2 / (omega**2 + G**2)``."""
    omega = np.asarray(omega, dtype=float)
    if np.any(omega < 0):
        raise DomainError("omega must be >= 0")
    g = p.Gamma_D
    j = p.gamma * p.M * omega * g ** 2 / (omega ** 2 + g ** 2)
    return j if j.ndim else float(j)
