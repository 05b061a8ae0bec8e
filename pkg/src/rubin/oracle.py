"""Independent cross-checks.

* :func:`quadrature_integrals` evaluates the stationary variances of the
  Drude-damped oscillator from the fluctuation-dissipation theorem by
  adaptive quadrature.  It shares no code with :mod:`rubin.thermo`.
* :func:`fock_negativity` builds the exact two-mode ground state of an
  ``N = 1`` Rubin model in a truncated Fock basis and partially transposes
  the density matrix by index exchange.  Only the Hamiltonian builder is
  shared with the covariance route.
"""
from dataclasses import dataclass
import math
import warnings

import numpy as np
from scipy import integrate

from .errors import DomainError, ToleranceError
from .kernels import hermite_functions
from .model import full_hamiltonian

__all__ = [
    "QuadratureIntegralSpec",
    "FockOracleSpec",
    "quadrature_integrals",
    "fock_negativity",
    "fock_ground_state",
]


@dataclass(frozen=True)
class QuadratureIntegralSpec:
    params: object  # OhmicParams
    omega_max: float = None
    rel_tol: float = 1e-11

    def __post_init__(self):
        p = self.params
        floor = 50.0 * max(p.omega_S, p.Gamma_D)
        if self.omega_max is None:
            object.__setattr__(self, "omega_max", floor)
        elif self.omega_max < floor:
            raise DomainError(f"omega_max must be >= {floor:g}")
        if not 0 < self.rel_tol <= 1e-8:
            raise DomainError("rel_tol must lie in (0, 1e-8]")


def _integrand_factors(p):
    hbar, M, w0, g, G = p.hbar, p.M, p.omega_S, p.gamma, p.Gamma_D
    kT = p.k_B * p.T

    def im_chi_over_omega(w):
        lor = G * G / (G * G + w * w)
        re = w0 * w0 - w * w + g * G * w * w / (G * G + w * w)
        im = g * w * lor
        return g * lor / (M * (re * re + im * im))

    def omega_coth(w):
        x = hbar * w / (2.0 * kT)
        if x < 1e-6:
            return (2.0 * kT / hbar) * (1.0 + x * x / 3.0)
        if x > 350.0:
            return w
        return w / math.tanh(x)

    return im_chi_over_omega, omega_coth


def _integrate(f, breaks, omega_max, rel_tol):
    total = 0.0
    err = 0.0
    edges = sorted(set(b for b in breaks if 0.0 < b < omega_max))
    pieces = list(zip([0.0] + edges, edges + [omega_max])) + [(omega_max, np.inf)]
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        for a, b in pieces:
            try:
                val, e = integrate.quad(f, a, b, epsabs=0.0, epsrel=0.1 * rel_tol, limit=500)
            except integrate.IntegrationWarning as exc:
                raise ToleranceError(f"quadrature on [{a:g}, {b:g}] did not converge: {exc}")
            total += val
            err += e
    if err > rel_tol * abs(total):
        raise ToleranceError(f"estimated error {err:.2e} exceeds {rel_tol:g} relative")
    return total


def quadrature_integrals(spec):
    """``(<q^2>, <p^2>)`` from the spectral integrals of ``coth * Im chi``."""
    p = spec.params
    if not p.T > 0:
        raise DomainError("the integral oracle needs T > 0")
    im_chi_over_omega, omega_coth = _integrand_factors(p)
    w0, g = p.omega_S, p.gamma
    breaks = [w0, p.Gamma_D, w0 - 5.0 * g, w0 + 5.0 * g]
    q_int = _integrate(lambda w: omega_coth(w) * im_chi_over_omega(w),
                       breaks, spec.omega_max, spec.rel_tol)
    p_int = _integrate(lambda w: w * w * omega_coth(w) * im_chi_over_omega(w),
                       breaks, spec.omega_max, spec.rel_tol)
    return p.hbar / math.pi * q_int, p.hbar * p.M ** 2 / math.pi * p_int


@dataclass(frozen=True)
class FockOracleSpec:
    params: object  # ModelParams with N == 1
    T: float = 0.0
    cutoff: int = 40

    def __post_init__(self):
        if self.params.N != 1:
            raise DomainError("the Fock oracle handles N = 1 only")
        if self.T != 0:
            raise DomainError("the Fock oracle handles the pure T = 0 ground state only")
        if self.cutoff < 20:
            raise DomainError("cutoff must be >= 20")


def _local_lengths(params):
    hbar = params.hbar
    w_eff = math.sqrt((params.m * params.omega_B ** 2 + 2.0 * params.f) / params.m)
    return math.sqrt(hbar / (params.M * params.omega_S)), math.sqrt(hbar / (params.m * w_eff))


def fock_ground_state(spec, tail_tol=1e-8):
    """Coefficients ``c[j, k]`` of the ground state in the local Fock bases."""
    params = spec.params
    H = full_hamiltonian(params)
    hbar = params.hbar
    s = 1.0 / np.sqrt(H.masses)
    w2, u = np.linalg.eigh(H.potential * s[:, None] * s[None, :])
    if w2[0] <= 0:
        raise DomainError("Hamiltonian is not positive definite")
    # psi ~ exp(-r^T A r / 2 hbar), A = M^1/2 (M^-1/2 V M^-1/2)^1/2 M^1/2
    root = (u * np.sqrt(w2)) @ u.T
    sq = np.sqrt(H.masses)
    a = root * sq[:, None] * sq[None, :]
    lengths = np.array(_local_lengths(params))
    a_dimless = a * lengths[:, None] * lengths[None, :] / hbar

    n = spec.cutoff
    widths = np.sqrt(np.diag(np.linalg.inv(a_dimless)))
    half = max(math.sqrt(2 * n + 1) + 8.0, 14.0 * widths.max())
    xi = np.linspace(-half, half, 2 * int(half / 0.06) + 1)
    step = xi[1] - xi[0]
    norm = (np.linalg.det(a_dimless) / math.pi ** 2) ** 0.25
    psi = norm * np.exp(-0.5 * (a_dimless[0, 0] * xi[:, None] ** 2
                                + 2.0 * a_dimless[0, 1] * xi[:, None] * xi[None, :]
                                + a_dimless[1, 1] * xi[None, :] ** 2))
    phi = hermite_functions(n, xi)
    c = phi @ psi @ phi.T * step * step
    tail = 1.0 - float(np.sum(c * c))
    if tail > tail_tol:
        raise ToleranceError(f"Fock cutoff {n} too small: weight {tail:.2e} beyond it")
    return c


def fock_negativity(spec):
    """Sum of the moduli of the negative eigenvalues of the partially transposed ground state."""
    c = fock_ground_state(spec)
    d = c.shape[0]
    # <j k| rho^T_S |j' k'> = c[j', k] c[j, k']
    rho_pt = np.einsum("Jk,jK->jkJK", c, c).reshape(d * d, d * d)
    ev = np.linalg.eigvalsh(rho_pt)
    return float(-ev[ev < 0].sum())
