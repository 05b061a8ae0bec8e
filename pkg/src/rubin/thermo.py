"""Stationary thermodynamics of a Drude-damped (Ohmic) quantum oscillator.

The stationary variances are closed-form sums over the three characteristic
frequencies of the damped oscillator weighted by the complex digamma
function.  Heat and entropy changes are taken with respect to the system
mass at fixed ``gamma``, ``Gamma_D``, ``omega_S`` and ``T``.
"""
from dataclasses import dataclass, field, replace
import logging
import math

import numpy as np

from .errors import DomainError, NumericalDegeneracyError
from .kernels import cubic_roots, digamma

log = logging.getLogger(__name__)

__all__ = [
    "OhmicParams",
    "OhmicStationaryState",
    "CharacteristicFrequencies",
    "ClausiusTerms",
    "T_FLOOR",
    "characteristic_frequencies",
    "digamma",
    "q_variance",
    "p_variance",
    "stationary_state",
    "entropy",
    "heat_per_dM",
    "entropy_derivative_per_dM",
    "clausius_terms",
    "clausius_deviation",
]

# the closed forms are evaluated at this temperature when asked for T = 0
T_FLOOR = 1e-4

_DEGENERATE = 1e-8
_IMAG_RESIDUE = 1e-10


@dataclass(frozen=True)
class OhmicParams:
    M: float
    omega_S: float
    gamma: float
    Gamma_D: float
    T: float
    hbar: float = 1.0
    k_B: float = 1.0
    # testing hook: relative error injected into the linear cubic coefficient
    cubic_perturbation: float = 0.0

    def __post_init__(self):
        for name in ("M", "omega_S", "Gamma_D", "hbar", "k_B"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)!r}")
        if not self.gamma >= 0:
            raise DomainError(f"gamma must be >= 0, got {self.gamma!r}")
        if not self.T >= 0:
            raise DomainError(f"T must be >= 0, got {self.T!r}")

    @classmethod
    def from_model(cls, params, T):
        """Ohmic limit of a Rubin model: ``gamma = m omega_R / 2M``, ``Gamma_D = omega_R``."""
        return cls(params.M, params.omega_S, params.gamma, params.Gamma_D, T,
                   params.hbar, params.k_B)

    def replace(self, **changes):
        return replace(self, **changes)

    @property
    def T_eff(self):
        return max(self.T, T_FLOOR)

    @property
    def beta(self):
        return 1.0 / (self.k_B * self.T_eff)


@dataclass(frozen=True)
class CharacteristicFrequencies:
    lambdas: np.ndarray

    def __iter__(self):
        return iter(self.lambdas)


@dataclass(frozen=True)
class OhmicStationaryState:
    q2: float
    p2: float
    T_q: float
    T_p: float
    v: float
    S: float
    U: float
    flags: tuple = ()


def _cubic_coefficients(p):
    """``lambda^3 + a lambda^2 + b lambda + c``."""
    w2 = p.omega_S ** 2
    b = (w2 + p.gamma * p.Gamma_D) * (1.0 + p.cubic_perturbation)
    return -p.Gamma_D, b, -w2 * p.Gamma_D


def characteristic_frequencies(p):
    """Roots of ``l^3 - G l^2 + (w^2 + gamma G) l - w^2 G``: one real, one conjugate pair."""
    roots = cubic_roots(*_cubic_coefficients(p))
    # real root first, then the pair with positive imaginary part leading
    order = np.argsort(np.abs(roots.imag), kind="stable")
    roots = roots[order]
    if abs(roots[1].imag) > 0 and roots[1].imag < 0:
        roots[[1, 2]] = roots[[2, 1]]
    # gamma = 0 leaves the pair on the imaginary axis up to rounding
    if np.any(roots.real < -1e-12 * np.abs(roots).max()):
        raise DomainError(f"unstable characteristic frequencies {roots}")
    return CharacteristicFrequencies(roots)


def _weights(lam):
    scale = np.abs(lam).max()
    denom = np.empty(3, dtype=complex)
    for i in range(3):
        d1 = lam[(i + 1) % 3] - lam[i]
        d2 = lam[(i - 1) % 3] - lam[i]
        if min(abs(d1), abs(d2)) < _DEGENERATE * scale:
            raise NumericalDegeneracyError(
                "characteristic frequencies are (nearly) degenerate: critical damping"
            )
        denom[i] = d1 * d2
    return denom


def _real(z, what):
    if abs(z.imag) > _IMAG_RESIDUE * max(abs(z.real), 1e-300):
        log.warning("%s: discarding imaginary residue %.3e of %.3e", what, z.imag, z.real)
    return z.real


def _digamma_sums(p):
    lam = characteristic_frequencies(p).lambdas
    denom = _weights(lam)
    psi = np.array([digamma(1.0 + p.beta * p.hbar * l / (2.0 * math.pi)) for l in lam])
    s_q = np.sum((lam - p.Gamma_D) * psi / denom)
    s_p = np.sum(lam * psi / denom)
    return s_q, s_p


def _variances(p):
    s_q, s_p = _digamma_sums(p)
    w2 = p.omega_S ** 2
    q2 = p.k_B * p.T_eff / (p.M * w2) + p.hbar / (p.M * math.pi) * s_q
    p2 = p.M ** 2 * w2 * q2 + p.M * p.hbar * p.gamma * p.Gamma_D / math.pi * s_p
    return _real(q2, "<q^2>"), _real(p2, "<p^2>")


def q_variance(p):
    """Stationary ``<q^2>``."""
    return _variances(p)[0]


def p_variance(p):
    """Stationary ``<p^2>``."""
    return _variances(p)[1]


def entropy(v):
    """Von Neumann entropy (units of k_B) of a single mode with ``v = sqrt(<q^2><p^2>)/hbar``."""
    if v < 0.5:
        if v < 0.5 - 1e-12:
            raise DomainError(f"uncertainty product v={v!r} below 1/2")
        v = 0.5
    a, b = v + 0.5, v - 0.5
    return a * math.log(a) - (b * math.log(b) if b > 0 else 0.0)


def stationary_state(p):
    q2, p2 = _variances(p)
    v = math.sqrt(q2 * p2) / p.hbar
    flags = ("T_floor",) if p.T < T_FLOOR else ()
    return OhmicStationaryState(
        q2=q2,
        p2=p2,
        T_q=p.M * p.omega_S ** 2 * q2 / p.k_B,
        T_p=p2 / (p.M * p.k_B),
        v=v,
        S=entropy(v),
        U=p2 / (2.0 * p.M) + 0.5 * p.M * p.omega_S ** 2 * q2,
        flags=flags,
    )


def _d_dM(func, p, rel_step):
    """Central difference in M with one Richardson level."""
    def central(h):
        hi = np.asarray(func(p.replace(M=p.M + h)))
        lo = np.asarray(func(p.replace(M=p.M - h)))
        return (hi - lo) / (2.0 * h)

    h = rel_step * p.M
    return (4.0 * central(0.5 * h) - central(h)) / 3.0


def heat_per_dM(p, rel_step=1e-5):
    """``dQ/dM = (M w^2/2) d<q^2>/dM + (1/2M) d<p^2>/dM``."""
    dq2, dp2 = _d_dM(_variances, p, rel_step)
    return float(0.5 * p.M * p.omega_S ** 2 * dq2 + dp2 / (2.0 * p.M))


def _v(p):
    q2, p2 = _variances(p)
    return math.sqrt(q2 * p2) / p.hbar


def _entropy_derivative(p, rel_step):
    v = _v(p)
    if v - 0.5 < 1e-12:
        return 0.0, True
    ds_dv = math.log((v + 0.5) / (v - 0.5))
    return float(ds_dv * _d_dM(_v, p, rel_step)), False


def entropy_derivative_per_dM(p, rel_step=1e-5):
    """``dS/dM = ln((v + 1/2)/(v - 1/2)) dv/dM``; zero for a pure state."""
    return _entropy_derivative(p, rel_step)[0]


@dataclass(frozen=True)
class ClausiusTerms:
    heat: float
    T_dS: float
    delta: float
    flags: tuple = field(default=())


def clausius_terms(p, rel_step=1e-5):
    heat = heat_per_dM(p, rel_step)
    ds, pure = _entropy_derivative(p, rel_step)
    flags = []
    if pure:
        flags.append("pure_state_dS")
    if p.T < T_FLOOR:
        flags.append("T_floor")
    t_ds = p.k_B * p.T_eff * ds
    return ClausiusTerms(heat, t_ds, heat - t_ds, tuple(flags))


def clausius_deviation(p, rel_step=1e-5):
    """``Delta = dQ - T dS`` per unit mass change; positive values violate Clausius."""
    return clausius_terms(p, rel_step).delta
