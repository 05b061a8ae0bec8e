"""System-bath negativity of the Rubin chain and its critical temperature."""
from dataclasses import dataclass, field
import logging
import math

import numpy as np

from .errors import BracketError, DomainError, StabilityError
from .model import bath_hamiltonian, full_hamiltonian
from .symplectic import (
    Evolution,
    direct_sum,
    ground_state_covariance,
    partial_transpose_system,
    symplectic_eigenvalues,
    thermal_covariance,
)

log = logging.getLogger(__name__)

__all__ = [
    "StationaryProtocol",
    "NegativityResult",
    "ChainSimulation",
    "default_protocol",
    "negativity_from_covariance",
    "negativity_from_spectrum",
    "trace_norm_product",
    "stationary_negativity",
    "critical_temperature",
    "anders_estimate",
]

# Above the threshold the partial transpose keeps one eigenvalue a hair
# below hbar/2 (the pure initial system mode spread over the chain), giving
# a residual of 1e-6 .. 1e-9 that is not entanglement of the stationary state.
ZERO_NEGATIVITY = 1e-5
SPECTRUM_NOISE = 1e-9


@dataclass(frozen=True)
class StationaryProtocol:
    t_min: float
    t_max: float
    n_samples: int = 8
    stability_tol: float = 0.02
    zero_tol: float = ZERO_NEGATIVITY

    def __post_init__(self):
        if not (0 < self.t_min < self.t_max):
            raise DomainError(f"need 0 < t_min < t_max, got {self.t_min}, {self.t_max}")
        if self.n_samples < 3:
            raise DomainError("n_samples must be >= 3")
        if self.stability_tol <= 0:
            raise DomainError("stability_tol must be positive")
        if self.zero_tol < 0:
            raise DomainError("zero_tol must be >= 0")

    @property
    def times(self):
        return np.linspace(self.t_min, self.t_max, self.n_samples)

    def replace(self, **changes):
        values = {k: getattr(self, k) for k in self.__dataclass_fields__}
        values.update({k: v for k, v in changes.items() if v is not None})
        return StationaryProtocol(**values)


def default_protocol(params):
    """Sample window after ten relaxation times and before the chain echo."""
    gamma = params.gamma
    if gamma == 0:
        # decoupled: the state never changes, any window will do
        return StationaryProtocol(1.0, 2.0)
    t_min = 10.0 / gamma
    t_rec = 2.0 * params.N / params.omega_R
    t_max = min(2.0 * t_min, 0.8 * t_rec)
    if t_max <= t_min:
        raise DomainError(
            f"chain of N={params.N} too short: recurrence at {t_rec:.3g} "
            f"precedes the end of the transient at {t_min:.3g}"
        )
    return StationaryProtocol(t_min, t_max)


@dataclass
class NegativityResult:
    negativity: float
    nu_min: float
    spread: float
    sample_times: list
    q2: float = math.nan
    p2: float = math.nan
    per_sample: list = field(default_factory=list)


def trace_norm_product(spectrum, hbar=1.0):
    """``||rho^T_S||`` as a product over the symplectic spectrum."""
    nu = np.asarray(getattr(spectrum, "values", spectrum), dtype=float) / hbar
    if np.any(nu <= 0):
        raise DomainError("symplectic eigenvalues must be positive")
    # values within rounding of 1/2 are thermal modes frozen at the vacuum
    low = nu[nu < 0.5 - SPECTRUM_NOISE]
    return float(np.prod(1.0 / (2.0 * low))) if low.size else 1.0


def negativity_from_spectrum(spectrum, hbar=1.0):
    """Negativity of a 1 x N Gaussian state from its partial-transpose spectrum."""
    nu = np.asarray(getattr(spectrum, "values", spectrum), dtype=float) / hbar
    nu_min = nu.min()
    if nu_min >= 0.5:
        return 0.0
    simple = 1.0 / (4.0 * nu_min) - 0.5
    # thermal modes with hbar omega >> k_B T sit at 1/2 up to rounding
    below = np.count_nonzero(nu < 0.5 - SPECTRUM_NOISE)
    if below > 1:
        product = 0.5 * (trace_norm_product(nu) - 1.0)
        log.warning("%d symplectic eigenvalues below hbar/2; using the full product "
                    "(%.6g) instead of the single-eigenvalue form (%.6g)",
                    below, product, simple)
        return product
    return simple


def negativity_from_covariance(gamma):
    """Negativity of the bipartition (mode 0) | (modes 1..n-1)."""
    spectrum = symplectic_eigenvalues(partial_transpose_system(gamma))
    return negativity_from_spectrum(spectrum, gamma.hbar)


class ChainSimulation:
    """Coupled dynamics of the system started in its ground state.

    The normal modes of the full and bath Hamiltonians are computed once and
    reused for every temperature and sample time.
    """

    def __init__(self, params):
        self.params = params
        self.H = full_hamiltonian(params)
        self.bath = bath_hamiltonian(params)
        self.H.normal_modes  # noqa: B018 - fail early on a bad Hamiltonian
        self._ground = ground_state_covariance(params.M, params.omega_S, params.hbar)

    @property
    def bound_weight(self):
        """System weight carried by normal modes above the bath band (no relaxation there)."""
        omega, u = self.H.normal_modes
        above = omega > self.params.band_top * (1.0 + 1e-9)
        return float(np.sum(u[0, above] ** 2))

    def initial_covariance(self, T):
        p = self.params
        return direct_sum(self._ground, thermal_covariance(self.bath, T, p.hbar, p.k_B))

    def evolution(self, T):
        return Evolution(self.initial_covariance(T), self.H)

    def negativity(self, T, proto=None, check_stability=True):
        p = self.params
        proto = proto or default_protocol(p)
        evo = self.evolution(T)
        times = proto.times
        nus, negs, q2, p2 = [], [], [], []
        for t in times:
            cov = evo.at(t)
            spectrum = symplectic_eigenvalues(partial_transpose_system(cov))
            n = negativity_from_spectrum(spectrum, p.hbar)
            nus.append(spectrum.min)
            negs.append(n if n >= proto.zero_tol else 0.0)
            q2.append(cov.data[0, 0])
            p2.append(cov.data[1, 1])
        nus = np.array(nus)
        spread = float((nus.max() - nus.min()) / nus.mean())
        result = NegativityResult(
            negativity=float(np.mean(negs)),
            nu_min=float(nus.mean()),
            spread=spread,
            sample_times=[float(t) for t in times],
            q2=float(np.mean(q2)),
            p2=float(np.mean(p2)),
            per_sample=[float(x) for x in negs],
        )
        if check_stability and spread > proto.stability_tol:
            raise StabilityError(
                f"nu_min varies by {spread:.3g} over [{proto.t_min:g}, {proto.t_max:g}] "
                f"(tolerance {proto.stability_tol:g})",
                spread=spread,
            )
        return result


def stationary_negativity(params, T, proto=None):
    """Mean negativity over the stationary window, with spread diagnostics."""
    if T < 0:
        raise DomainError("temperature must be >= 0")
    return ChainSimulation(params).negativity(T, proto)


def critical_temperature(params, gamma=None, proto=None, bracket=(0.01, 10.0),
                         rel_width=1e-3, simulation=None):
    """Temperature above which the stationary negativity vanishes (bisection)."""
    if gamma is not None:
        params = params.with_gamma(gamma)
    sim = simulation or ChainSimulation(params)
    proto = proto or default_protocol(params)
    lo, hi = map(float, bracket)
    if not 0 <= lo < hi:
        raise BracketError(f"invalid bracket {bracket!r}")

    def entangled(T):
        return sim.negativity(T, proto).negativity > 0.0

    if not entangled(lo):
        raise BracketError(f"negativity already zero at T={lo:g}")
    if entangled(hi):
        raise BracketError(f"negativity still positive at T={hi:g}")
    while (hi - lo) > rel_width * 0.5 * (hi + lo):
        mid = 0.5 * (lo + hi)
        if entangled(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def anders_estimate(params):
    """``hbar gamma M / (2 m k_B)``, the identical-chain threshold in Rubin units."""
    return params.hbar * params.gamma * params.M / (2.0 * params.m * params.k_B)
