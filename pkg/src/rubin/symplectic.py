"""Gaussian-state engine.

Covariance matrices use the interleaved ordering ``(q, p, x_1, p_1, ...)``
and the convention ``Gamma_jk = <{xi_j, xi_k}>/2``, so the vacuum of a
unit oscillator has symplectic eigenvalue ``hbar / 2``.  First moments are
zero for every state used here and are not represented.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NumericalDegeneracyError
from .kernels import rotate_normal_modes
from .model import format_matrix

__all__ = [
    "CovarianceMatrix",
    "SymplecticSpectrum",
    "Evolution",
    "symplectic_form",
    "thermal_covariance",
    "ground_state_covariance",
    "direct_sum",
    "propagator",
    "evolve",
    "symplectic_eigenvalues",
    "williamson_eigenvalues",
    "partial_transpose_system",
    "min_symplectic_eigenvalue",
]

# coth(x) == 1 to double precision beyond this
_COTH_SATURATION = 700.0


class CovarianceMatrix:
    """Symmetric ``2n x 2n`` second-moment matrix of a zero-mean Gaussian state."""

    def __init__(self, data, hbar=1.0):
        data = np.array(data, dtype=float)
        if data.ndim != 2 or data.shape[0] != data.shape[1] or data.shape[0] % 2:
            raise ValueError(f"covariance must be 2n x 2n, got shape {data.shape}")
        scale = max(np.abs(data).max(), np.finfo(float).tiny)
        if np.abs(data - data.T).max() > 1e-12 * scale:
            raise ValueError("covariance matrix is not symmetric")
        self.data = 0.5 * (data + data.T)
        self.data.setflags(write=False)
        self.hbar = float(hbar)

    @property
    def n_modes(self):
        return self.data.shape[0] // 2

    def block(self, mode):
        """2x2 covariance of a single mode."""
        i = 2 * mode
        return self.data[i:i + 2, i:i + 2]

    def is_physical(self, tol=1e-9):
        """Uncertainty relation: every symplectic eigenvalue >= hbar/2 - tol."""
        nu = symplectic_eigenvalues(self).values
        return bool(nu[0] >= 0.5 * self.hbar - tol)

    def dump(self):
        return format_matrix(self.data)

    def __repr__(self):
        return f"CovarianceMatrix(n_modes={self.n_modes}, hbar={self.hbar})"


@dataclass(frozen=True)
class SymplecticSpectrum:
    values: np.ndarray

    @property
    def min(self):
        return float(self.values[0])

    def __len__(self):
        return len(self.values)


def symplectic_form(n_modes):
    """Block-diagonal ``Omega`` with blocks ``[[0, 1], [-1, 0]]``."""
    if n_modes < 1:
        raise ValueError("n_modes must be >= 1")
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _coth_weights(omega, T, hbar, k_B):
    if T < 0:
        raise DomainError(f"temperature must be >= 0, got {T!r}")
    if T == 0:
        return np.ones_like(omega)
    with np.errstate(over="ignore"):  # inf is fine: saturates below
        x = hbar * omega / (2.0 * k_B * T)
    out = np.ones_like(x)
    live = x < _COTH_SATURATION
    out[live] = 1.0 / np.tanh(x[live])
    return out


def _interleave(xx, xp, pp):
    n = xx.shape[0]
    g = np.empty((2 * n, 2 * n))
    g[0::2, 0::2] = xx
    g[0::2, 1::2] = xp
    g[1::2, 0::2] = xp.T
    g[1::2, 1::2] = pp
    return g


def thermal_covariance(H, T, hbar=1.0, k_B=1.0):
    """Covariance of the Gibbs state of ``H`` at temperature ``T`` (``T=0``: ground state)."""
    omega, u = H.normal_modes
    c = _coth_weights(omega, T, hbar, k_B)
    sq = np.sqrt(H.masses)
    a_inv = u / sq[:, None]
    b_inv = u * sq[:, None]
    xx = (a_inv * (0.5 * hbar * c / omega)) @ a_inv.T
    pp = (b_inv * (0.5 * hbar * c * omega)) @ b_inv.T
    return CovarianceMatrix(_interleave(xx, np.zeros_like(xx), pp), hbar)


def ground_state_covariance(M, omega_S, hbar=1.0):
    if M <= 0 or omega_S <= 0:
        raise DomainError("M and omega_S must be positive")
    return CovarianceMatrix(np.diag([hbar / (2.0 * M * omega_S), 0.5 * M * hbar * omega_S]), hbar)


def direct_sum(a, b):
    """Product state ``a (x) b``; the modes of ``a`` come first."""
    na, nb = a.data.shape[0], b.data.shape[0]
    g = np.zeros((na + nb, na + nb))
    g[:na, :na] = a.data
    g[na:, na:] = b.data
    return CovarianceMatrix(g, a.hbar)


class Evolution:
    """Exact free evolution of one initial covariance under a quadratic ``H``.

    The initial state is transformed to normal-mode coordinates once; each
    call to :meth:`at` is then a per-mode rotation plus one back-transform.
    """

    def __init__(self, gamma0, H):
        if gamma0.n_modes != H.dimension:
            raise ValueError(
                f"covariance has {gamma0.n_modes} modes, Hamiltonian has {H.dimension}"
            )
        self.hbar = gamma0.hbar
        self.omega, u = H.normal_modes
        sq = np.sqrt(H.masses)
        a = u.T * sq[None, :]
        b = u.T / sq[None, :]
        self._a_inv = u / sq[:, None]
        self._b_inv = u * sq[:, None]
        g = gamma0.data
        self._qq = a @ g[0::2, 0::2] @ a.T
        self._qp = a @ g[0::2, 1::2] @ b.T
        self._pp = b @ g[1::2, 1::2] @ b.T

    def at(self, t):
        if t < 0:
            raise DomainError("time must be >= 0")
        qq, qp, pp = rotate_normal_modes(self._qq, self._qp, self._pp, self.omega, t)
        xx = self._a_inv @ qq @ self._a_inv.T
        xp = self._a_inv @ qp @ self._b_inv.T
        ppp = self._b_inv @ pp @ self._b_inv.T
        return CovarianceMatrix(_interleave(xx, xp, ppp), self.hbar)


def evolve(gamma0, H, t):
    """``Gamma(t) = S(t) Gamma(0) S(t)^T`` under the flow of ``H``."""
    return Evolution(gamma0, H).at(t)


def propagator(H, t):
    """Symplectic propagator ``S(t)`` in interleaved site coordinates."""
    omega, u = H.normal_modes
    sq = np.sqrt(H.masses)
    c = np.cos(omega * t)
    sn = np.sin(omega * t)
    a = u.T * sq[None, :]
    b = u.T / sq[None, :]
    a_inv = u / sq[:, None]
    b_inv = u * sq[:, None]
    s_xx = (a_inv * c) @ a
    s_xp = (a_inv * (sn / omega)) @ b
    s_px = (b_inv * (-omega * sn)) @ a
    s_pp = (b_inv * c) @ b
    n = omega.size
    s = np.empty((2 * n, 2 * n))
    s[0::2, 0::2] = s_xx
    s[0::2, 1::2] = s_xp
    s[1::2, 0::2] = s_px
    s[1::2, 1::2] = s_pp
    return s


def _balanced(g):
    # local symplectic rescaling x -> s x, p -> p / s equalising <x^2> and <p^2>;
    # leaves the symplectic spectrum unchanged but tames the conditioning
    d = np.diag(g)
    x, p = d[0::2], d[1::2]
    if np.any(x <= 0) or np.any(p <= 0):
        return g
    s = (p / x) ** 0.25
    scale = np.empty(g.shape[0])
    scale[0::2] = s
    scale[1::2] = 1.0 / s
    return g * scale[:, None] * scale[None, :]


def symplectic_eigenvalues(gamma, real_tol=1e-6):
    """Moduli of the eigenvalue pairs ``+-i nu`` of ``Omega Gamma``, ascending.

    Works for any symmetric matrix, including partial transposes that are
    not physical covariances.
    """
    g = _balanced(gamma.data)
    n = gamma.n_modes
    ev = np.linalg.eigvals(symplectic_form(n) @ g)
    scale = np.abs(ev).max()
    if scale == 0:
        return SymplecticSpectrum(np.zeros(n))
    worst = np.abs(ev.real).max() / scale
    if worst > real_tol:
        raise NumericalDegeneracyError(
            f"Omega Gamma has eigenvalues with relative real part {worst:.2e}"
        )
    im = np.sort(np.abs(ev.imag))
    nu = 0.5 * (im[0::2] + im[1::2])
    return SymplecticSpectrum(nu)


def williamson_eigenvalues(gamma):
    """Symplectic eigenvalues of a positive-definite matrix by a symmetric route.

    With ``Gamma = L L^T`` and ``K = L^T Omega L``, the symmetric matrix
    ``K^T K`` has eigenvalues ``nu_j**2``, each twice.
    """
    g = _balanced(gamma.data)
    try:
        low = np.linalg.cholesky(g)
    except np.linalg.LinAlgError as exc:
        raise DomainError("Williamson form needs a positive-definite matrix") from exc
    k = low.T @ symplectic_form(gamma.n_modes) @ low
    nu2 = np.sort(np.linalg.eigvalsh(k.T @ k))
    nu = np.sqrt(np.maximum(nu2, 0.0))
    return SymplecticSpectrum(0.5 * (nu[0::2] + nu[1::2]))


def partial_transpose_system(gamma):
    """Flip the sign of the system momentum (mode 0)."""
    if gamma.n_modes < 2:
        raise ValueError("partial transpose needs at least two modes")
    g = gamma.data.copy()
    g[1, :] *= -1.0
    g[:, 1] *= -1.0
    return CovarianceMatrix(g, gamma.hbar)


def min_symplectic_eigenvalue(gamma):
    return symplectic_eigenvalues(gamma).min
