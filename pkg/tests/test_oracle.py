import numpy as np
import pytest

from rubin.entanglement import negativity_from_covariance
from rubin.errors import DomainError
from rubin.model import full_hamiltonian, make_params
from rubin.oracle import (
    FockOracleSpec,
    QuadratureIntegralSpec,
    fock_ground_state,
    fock_negativity,
    quadrature_integrals,
)
from rubin.symplectic import thermal_covariance
from rubin.thermo import OhmicParams, p_variance, q_variance
from rubin.validate import coupling_for_nu_min, fock_test_params


@pytest.mark.parametrize("gamma,T", [(0.1, 0.05), (0.5, 1.0), (0.9, 5.0), (2.0, 0.3)])
def test_integrals_match_closed_form(gamma, T):
    p = OhmicParams(10.0, 5.0, gamma, 20 * gamma, T)
    q2, p2 = quadrature_integrals(QuadratureIntegralSpec(p))
    assert q2 == pytest.approx(q_variance(p), rel=1e-9)
    assert p2 == pytest.approx(p_variance(p), rel=1e-9)


def test_integral_spec_validation():
    p = OhmicParams(10.0, 5.0, 0.5, 10.0, 1.0)
    with pytest.raises(DomainError):
        QuadratureIntegralSpec(p, omega_max=10.0)
    with pytest.raises(DomainError):
        QuadratureIntegralSpec(p, rel_tol=1e-4)
    with pytest.raises(DomainError):
        quadrature_integrals(QuadratureIntegralSpec(p.replace(T=0.0)))


@pytest.fixture(scope="module")
def couplings():
    return {t: coupling_for_nu_min(t) for t in (0.48, 0.40, 0.30)}


def test_fock_state_is_normalised(couplings):
    c = fock_ground_state(FockOracleSpec(fock_test_params(couplings[0.40])))
    assert np.sum(c * c) == pytest.approx(1.0, abs=1e-10)


@pytest.mark.parametrize("target", [0.48, 0.40, 0.30])
def test_fock_cutoff_convergence(couplings, target):
    p = fock_test_params(couplings[target])
    a = fock_negativity(FockOracleSpec(p, cutoff=20))
    b = fock_negativity(FockOracleSpec(p, cutoff=40))
    assert abs(a - b) < 1e-4
    assert b == pytest.approx(1 / (4 * target) - 0.5, abs=1e-9)


def test_fock_matches_covariance_off_target():
    p = make_params(M=2.0, m=0.7, omega_S=1.3, omega_B=0.05, omega_R=1.1, N=1)
    cov = thermal_covariance(full_hamiltonian(p), 0.0)
    assert fock_negativity(FockOracleSpec(p)) == pytest.approx(negativity_from_covariance(cov),
                                                               abs=1e-9)


def test_fock_spec_validation():
    p = fock_test_params(1.0)
    with pytest.raises(DomainError):
        FockOracleSpec(p, cutoff=10)
    with pytest.raises(DomainError):
        FockOracleSpec(p, T=0.1)
    with pytest.raises(DomainError):
        FockOracleSpec(make_params(1, 1, 1, 0.1, 1.0, 2))
