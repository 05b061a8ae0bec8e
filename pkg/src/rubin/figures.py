"""Figure reproductions, parameter sweeps and the validation suite."""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
import logging
import math
import time

import numpy as np

from . import __version__
from .entanglement import (
    ChainSimulation,
    anders_estimate,
    critical_temperature,
    default_protocol,
)
from .errors import RubinError
from .model import params_from_gamma
from .thermo import OhmicParams, clausius_terms, stationary_state

log = logging.getLogger(__name__)

__all__ = [
    "SweepConfig",
    "MODES",
    "run_fig1",
    "run_fig2",
    "run_fig3",
    "run_fig4",
    "run_thermo_sweep",
    "run_negativity_sweep",
    "run",
]

MODES = ("fig1", "fig2", "fig3", "fig4", "thermo-sweep", "negativity-sweep", "validate")

DEFAULT_TEMPS = (0.02, 10.0, 200)
FIG2_TEMPS = (0.1, 1.0, 2.0)
# starts above gamma = m omega_S / 2M, where omega_S enters the bath band
FIG2_GAMMAS = tuple(round(0.05 * k, 10) for k in range(6, 21))
CAPTION_GAMMAS = (0.3, 0.6, 0.9)
BOUND_WEIGHT = 1e-3

_FAILURES = (RubinError, ArithmeticError, ValueError, np.linalg.LinAlgError)


def log_grid(t_lo, t_hi, count):
    if not (0 < t_lo < t_hi) or count < 2:
        raise ValueError("temperature range must satisfy 0 < min < max with count >= 2")
    return [float(x) for x in np.geomspace(t_lo, t_hi, int(count))]


@dataclass
class SweepConfig:
    mode: str = "fig1"
    gammas: tuple = None
    temps: tuple = None
    M: float = 10.0
    m: float = 1.0
    omega_S: float = 5.0
    omega_B: float = 0.01
    N: int = 200
    t_min: float = None
    t_max: float = None
    n_samples: int = None
    stability_tol: float = None
    workers: int = 1
    bracket: tuple = (0.01, 10.0)
    cubic_perturbation: float = 0.0

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.gammas is None:
            self.gammas = {"fig2": FIG2_GAMMAS, "fig4": (0.6,)}.get(self.mode, CAPTION_GAMMAS)
        if self.temps is None:
            self.temps = FIG2_TEMPS if self.mode == "fig2" else tuple(log_grid(*DEFAULT_TEMPS))
        self.gammas = tuple(float(g) for g in self.gammas)
        self.temps = tuple(float(t) for t in self.temps)
        if not self.gammas or not self.temps:
            raise ValueError("parameter grids must be non-empty")
        if any(t <= 0 for t in self.temps):
            raise ValueError("temperatures must be positive")
        if any(g < 0 for g in self.gammas):
            raise ValueError("gamma must be >= 0")

    def model(self, gamma):
        return params_from_gamma(gamma, self.M, self.m, self.omega_S, self.omega_B, self.N)

    def ohmic(self, gamma, T):
        p = self.model(gamma)
        return replace(OhmicParams.from_model(p, T), cubic_perturbation=self.cubic_perturbation)

    def protocol(self, params):
        proto = default_protocol(params)
        return proto.replace(t_min=self.t_min, t_max=self.t_max, n_samples=self.n_samples,
                             stability_tol=self.stability_tol)


def _map(config, func, items):
    if config.workers > 1:
        with ThreadPoolExecutor(config.workers) as pool:
            return list(pool.map(func, items))
    return [func(x) for x in items]


def _error_text(exc):
    return f"{type(exc).__name__}: {exc}"


# --------------------------------------------------------------------------
# thermodynamic branch

THERMO_COLUMNS = ["gamma", "T", "delta", "heat_per_dM", "TdS_per_dM", "T_q", "T_p",
                  "S", "U", "v", "q2", "p2", "M", "omega_S", "Gamma_D", "version",
                  "flags", "error"]
FIG1_COLUMNS = ["gamma", "T", "delta", "heat_per_dM", "TdS_per_dM", "T_q", "T_p",
                "M", "omega_S", "Gamma_D", "version", "flags", "error"]


def _thermo_point(config, gamma, T, columns):
    from .records import SweepRecord

    p = config.ohmic(gamma, T)
    rec = SweepRecord(columns, {"gamma": gamma, "T": T, "M": p.M, "omega_S": p.omega_S,
                                "Gamma_D": p.Gamma_D, "version": __version__,
                                "flags": "", "error": ""})
    try:
        terms = clausius_terms(p)
        state = stationary_state(p)
    except _FAILURES as exc:
        for c in ("delta", "heat_per_dM", "TdS_per_dM", "T_q", "T_p"):
            rec[c] = math.nan
        rec["error"] = _error_text(exc)
        return rec
    values = {"delta": terms.delta, "heat_per_dM": terms.heat, "TdS_per_dM": terms.T_dS,
              "T_q": state.T_q, "T_p": state.T_p, "S": state.S, "U": state.U,
              "v": state.v, "q2": state.q2, "p2": state.p2}
    for c, v in values.items():
        if c in rec.values:
            rec[c] = float(v)
    rec["flags"] = ";".join(sorted(set(terms.flags) | set(state.flags)))
    return rec


def run_fig1(config):
    """Clausius deviation against temperature, one curve per gamma."""
    points = [(g, T) for g in config.gammas for T in config.temps]
    return _map(config, lambda gt: _thermo_point(config, gt[0], gt[1], FIG1_COLUMNS), points)


def run_thermo_sweep(config):
    points = [(g, T) for g in config.gammas for T in config.temps]
    return _map(config, lambda gt: _thermo_point(config, gt[0], gt[1], THERMO_COLUMNS), points)


# --------------------------------------------------------------------------
# entanglement branch

PROVENANCE = ["M", "m", "omega_S", "omega_B", "N", "Gamma_D", "t_min", "t_max",
              "n_samples", "stability_tol", "version", "flags", "error"]
FIG2_COLUMNS = ["T", "gamma", "negativity", "nu_min", "spread", "t_samples"] + PROVENANCE
FIG3_COLUMNS = ["gamma", "T", "negativity", "nu_min", "spread", "t_samples", "T_c",
                "anders_estimate"] + PROVENANCE
NEG_SWEEP_COLUMNS = ["gamma", "T", "negativity", "nu_min", "spread", "t_samples",
                     "q2", "p2"] + PROVENANCE
FIG4_COLUMNS = ["T", "delta", "negativity", "T_c_marker", "gamma", "nu_min", "Gamma_D",
                "version", "flags", "error"]


class _Chains:
    """One cached :class:`ChainSimulation` per gamma."""

    def __init__(self, config):
        self.config = config
        self._sims = {}

    def __call__(self, gamma):
        if gamma not in self._sims:
            self._sims[gamma] = ChainSimulation(self.config.model(gamma))
        return self._sims[gamma]


def _negativity_point(config, chains, gamma, T, columns, extra=None):
    from .records import SweepRecord

    params = config.model(gamma)
    rec = SweepRecord(columns, {"gamma": gamma, "T": T, "version": __version__,
                                "flags": "", "error": ""})
    for c, v in (("M", params.M), ("m", params.m), ("omega_S", params.omega_S),
                 ("omega_B", params.omega_B), ("N", params.N), ("Gamma_D", params.Gamma_D)):
        rec[c] = v
    try:
        proto = config.protocol(params)
        rec["t_min"], rec["t_max"] = proto.t_min, proto.t_max
        rec["n_samples"], rec["stability_tol"] = proto.n_samples, proto.stability_tol
        res = chains(gamma).negativity(T, proto, check_stability=False)
    except _FAILURES as exc:
        rec["negativity"] = math.nan
        rec["error"] = _error_text(exc)
        return rec
    rec["negativity"] = res.negativity
    rec["nu_min"] = res.nu_min
    rec["spread"] = res.spread
    rec["t_samples"] = res.sample_times
    if "q2" in rec.values:
        rec["q2"], rec["p2"] = res.q2, res.p2
    if res.spread > proto.stability_tol:
        rec["error"] = (f"StabilityError: nu_min spread {res.spread:.3g} exceeds "
                        f"{proto.stability_tol:g}")
    if chains(gamma).bound_weight > BOUND_WEIGHT:
        # a mode above the band keeps part of the initial system state
        rec["flags"] = "bound_mode"
    for c, v in (extra or {}).items():
        rec[c] = v
    return rec


def run_fig2(config):
    """Negativity against gamma, one curve per temperature."""
    chains = _Chains(config)
    points = [(T, g) for T in config.temps for g in config.gammas]
    return _map(config, lambda tg: _negativity_point(config, chains, tg[1], tg[0], FIG2_COLUMNS),
                points)


def _critical(config, chains, gamma):
    params = config.model(gamma)
    return critical_temperature(params, proto=config.protocol(params),
                                bracket=config.bracket, simulation=chains(gamma))


def run_fig3(config):
    """Negativity against temperature per gamma, with the located T_c."""
    chains = _Chains(config)
    tcs = {}
    for g in config.gammas:
        try:
            tcs[g] = _critical(config, chains, g)
        except _FAILURES as exc:
            log.warning("T_c search failed for gamma=%g: %s", g, exc)
            tcs[g] = math.nan
    points = [(g, T) for g in config.gammas for T in config.temps]

    def point(gt):
        g, T = gt
        extra = {"T_c": tcs[g], "anders_estimate": anders_estimate(config.model(g))}
        return _negativity_point(config, chains, g, T, FIG3_COLUMNS, extra)

    return _map(config, point, points)


def run_negativity_sweep(config):
    chains = _Chains(config)
    points = [(g, T) for g in config.gammas for T in config.temps]
    return _map(config, lambda gt: _negativity_point(config, chains, gt[0], gt[1],
                                                     NEG_SWEEP_COLUMNS), points)


def run_fig4(config):
    """Clausius deviation and negativity on a shared temperature grid."""
    from .records import SweepRecord

    gamma = config.gammas[0]
    chains = _Chains(config)
    try:
        t_c = _critical(config, chains, gamma)
    except _FAILURES as exc:
        log.warning("T_c search failed for gamma=%g: %s", gamma, exc)
        t_c = math.nan

    def point(T):
        th = _thermo_point(config, gamma, T, FIG1_COLUMNS)
        ng = _negativity_point(config, chains, gamma, T, FIG2_COLUMNS)
        rec = SweepRecord(FIG4_COLUMNS, {
            "T": T, "delta": th["delta"], "negativity": ng["negativity"], "T_c_marker": t_c,
            "gamma": gamma, "nu_min": ng["nu_min"], "Gamma_D": th["Gamma_D"],
            "version": __version__, "flags": th["flags"],
            "error": "; ".join(e for e in (th["error"], ng["error"]) if e),
        })
        return rec

    return _map(config, point, list(config.temps))


def run(config):
    """Dispatch on ``config.mode``; returns ``(records, wall_time)``."""
    start = time.perf_counter()
    runner = {
        "fig1": run_fig1,
        "fig2": run_fig2,
        "fig3": run_fig3,
        "fig4": run_fig4,
        "thermo-sweep": run_thermo_sweep,
        "negativity-sweep": run_negativity_sweep,
    }[config.mode]
    records = runner(config)
    return records, time.perf_counter() - start
