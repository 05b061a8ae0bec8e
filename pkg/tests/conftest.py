import numpy as np
import pytest

from rubin.entanglement import ChainSimulation
from rubin.model import params_from_gamma

FIG_MASSES = dict(M=10.0, m=1.0, omega_S=5.0, omega_B=0.01)


def fig_params(gamma, N=200):
    return params_from_gamma(gamma, N=N, **FIG_MASSES)


@pytest.fixture(scope="session")
def chains():
    """Session cache of N=200 chain simulations keyed by gamma."""
    cache = {}

    def get(gamma):
        if gamma not in cache:
            cache[gamma] = ChainSimulation(fig_params(gamma))
        return cache[gamma]

    return get


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def critical(chains):
    """Located T_c for the caption couplings."""
    from rubin.entanglement import critical_temperature

    return {g: critical_temperature(fig_params(g), simulation=chains(g)) for g in (0.3, 0.6, 0.9)}


@pytest.fixture(scope="session")
def negativity_curve(chains):
    """Negativity on the default temperature grid, cached per gamma."""
    from rubin.figures import DEFAULT_TEMPS, log_grid

    temps = np.array(log_grid(*DEFAULT_TEMPS))
    cache = {}

    def get(gamma):
        if gamma not in cache:
            sim = chains(gamma)
            res = [sim.negativity(T, check_stability=False) for T in temps]
            cache[gamma] = (temps, np.array([r.negativity for r in res]),
                            np.array([r.spread for r in res]))
        return cache[gamma]

    return get


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
