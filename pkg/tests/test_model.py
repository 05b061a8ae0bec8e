import numpy as np
import pytest

from rubin.errors import DomainError
from rubin.model import (
    QuadraticHamiltonian,
    bath_hamiltonian,
    format_matrix,
    full_hamiltonian,
    make_params,
    ohmic_spectral_density,
    params_from_gamma,
    spectral_density,
)


def small(N=4, omega_R=2.0):
    return make_params(M=3.0, m=1.0, omega_S=1.5, omega_B=0.2, omega_R=omega_R, N=N)


def test_derived_quantities():
    p = small()
    assert p.gamma == pytest.approx(1.0 * 2.0 / (2 * 3.0))
    assert p.Gamma_D == 2.0
    assert p.f == pytest.approx(1.0)


def test_params_from_gamma_round_trip():
    p = params_from_gamma(0.6, M=10, m=1, omega_S=5, omega_B=0.01, N=200)
    assert p.omega_R == pytest.approx(12.0)
    assert p.gamma == pytest.approx(0.6)
    assert p.with_gamma(0.3).omega_R == pytest.approx(6.0)


@pytest.mark.parametrize("kwargs", [
    dict(M=0.0), dict(m=-1.0), dict(omega_S=np.nan), dict(N=0), dict(N=2.5),
    dict(omega_B=2.0), dict(omega_B=3.0), dict(omega_R=-1.0),
])
def test_invalid_parameters_raise(kwargs):
    base = dict(M=3.0, m=1.0, omega_S=1.5, omega_B=0.2, omega_R=2.0, N=4)
    base.update(kwargs)
    with pytest.raises(DomainError):
        make_params(**base)


def test_negative_gamma_rejected():
    with pytest.raises(DomainError):
        params_from_gamma(-0.1, 10, 1, 5, 0.01, 200)


def test_full_hamiltonian_structure():
    p = small(N=4)
    v = full_hamiltonian(p).potential
    f = p.f
    mb = p.m * p.omega_B ** 2
    assert v[0, 0] == pytest.approx(p.M * p.omega_S ** 2 + 2 * f)
    assert v[0, 1] == v[0, 4] == -f
    assert v[0, 2] == v[0, 3] == 0.0
    # every bath site now has two springs
    np.testing.assert_allclose(np.diag(v)[1:], mb + 2 * f)
    np.testing.assert_allclose(np.diag(v, 1)[1:], -f)


def test_n1_doubles_the_coupling():
    p = small(N=1)
    v = full_hamiltonian(p).potential
    assert v[0, 1] == pytest.approx(-2 * p.f)
    assert v[1, 1] == pytest.approx(p.m * p.omega_B ** 2 + 2 * p.f)


def test_open_chain_edges():
    p = small(N=5)
    v = bath_hamiltonian(p).potential
    mb = p.m * p.omega_B ** 2
    assert v[0, 0] == pytest.approx(mb + p.f)
    assert v[2, 2] == pytest.approx(mb + 2 * p.f)


def test_ring_without_system_matches_dispersion():
    # with the system spring removed the bath plus q form a ring; translation-invariant
    # spectrum omega_k^2 = omega_B^2 + omega_R^2 sin^2(pi k / n) when M = m
    p = make_params(M=1.0, m=1.0, omega_S=0.2, omega_B=0.2, omega_R=2.0, N=7)
    v = full_hamiltonian(p).potential.copy()
    v[0, 0] = p.m * p.omega_B ** 2 + 2 * p.f
    w, _ = QuadraticHamiltonian(v, np.ones(8)).normal_modes
    k = np.arange(8)
    want = np.sqrt(p.omega_B ** 2 + p.omega_R ** 2 * np.sin(np.pi * k / 8) ** 2)
    np.testing.assert_allclose(np.sort(w), np.sort(want), rtol=1e-12)


def test_bath_band_edges():
    p = params_from_gamma(0.6, 10, 1, 5, 0.01, 200)
    w, _ = bath_hamiltonian(p).normal_modes
    assert w.min() >= p.omega_B * (1 - 1e-12)
    assert w.max() <= np.hypot(p.omega_B, p.omega_R) * (1 + 1e-12)


def test_normal_modes_diagonalise():
    p = small(N=6)
    H = full_hamiltonian(p)
    w, u = H.normal_modes
    s = 1 / np.sqrt(H.masses)
    k = H.potential * s[:, None] * s[None, :]
    np.testing.assert_allclose(u.T @ k @ u, np.diag(w ** 2), atol=1e-12)


def test_hamiltonian_validation():
    with pytest.raises(ValueError):
        QuadraticHamiltonian([[1.0, 0.5], [0.4, 1.0]], [1.0, 1.0])
    with pytest.raises(DomainError):
        QuadraticHamiltonian(np.eye(2), [1.0, -1.0])
    H = QuadraticHamiltonian([[1.0, 2.0], [2.0, 1.0]], [1.0, 1.0])
    assert not H.is_positive_definite()
    with pytest.raises(DomainError):
        H.normal_modes


def test_hamiltonian_arrays_are_read_only():
    H = full_hamiltonian(small())
    with pytest.raises(ValueError):
        H.potential[0, 0] = 1.0


def test_format_matrix_round_trips():
    a = np.array([[1 / 3, -2e-17], [np.pi, 1e300]])
    back = np.array([[float(x) for x in row.split()] for row in format_matrix(a).splitlines()])
    assert np.array_equal(a, back)


def test_spectral_densities():
    p = small()
    edge = np.sqrt((p.omega_R - p.omega_B) * p.omega_R)
    assert spectral_density(p, edge) < 1e-6 * spectral_density(p, 0.5)
    assert spectral_density(p, 0.5) > 0
    with pytest.raises(DomainError):
        spectral_density(p, edge * 1.01)
    # low-frequency slope of the Drude form is gamma M
    assert ohmic_spectral_density(p, 1e-6) / 1e-6 == pytest.approx(p.gamma * p.M, rel=1e-9)
