import cmath

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rubin import kernels
from rubin.errors import DomainError

EULER = 0.57721566490153286061


def mp_digamma(z):
    return complex(mpmath.digamma(mpmath.mpc(z.real, z.imag)))


@pytest.mark.parametrize("z", [1.0, 0.5, 2.5 + 3j, 1 + 0.001j, 1 + 250j, 40 - 7j,
                               -2.5 + 0.1j, -0.3 - 4j, 1e-3 + 1e-3j])
def test_digamma_matches_mpmath(z):
    got = kernels.digamma(z)
    want = mp_digamma(complex(z))
    assert abs(got - want) <= 1e-13 * abs(want)


def test_digamma_at_one_is_minus_euler():
    assert kernels.digamma(1.0) == pytest.approx(-EULER, rel=1e-15)


@pytest.mark.parametrize("z", [0, -1, -7])
def test_digamma_poles(z):
    with pytest.raises(DomainError):
        kernels.digamma(z)


@settings(max_examples=200, deadline=None)
@given(st.floats(0.05, 60), st.floats(-80, 80))
def test_digamma_recurrence_and_conjugation(x, y):
    z = complex(x, y)
    lhs = kernels.digamma(z + 1)
    assert abs(lhs - kernels.digamma(z) - 1 / z) <= 1e-12 * max(1.0, abs(lhs))
    assert abs(kernels.digamma(z.conjugate()) - kernels.digamma(z).conjugate()) <= 1e-14 * abs(lhs)


def test_digamma_array_backends_agree(rng):
    z = rng.uniform(-20, 40, 500) + 1j * rng.uniform(-50, 50, 500)
    a = kernels.digamma_array(z)
    b = kernels.digamma_numpy(z)
    c = np.array([kernels.digamma(x) for x in z])
    np.testing.assert_allclose(a, b, rtol=1e-13)
    np.testing.assert_allclose(a, c, rtol=1e-13)


@pytest.mark.parametrize("coeffs", [
    (-12.0, 32.2, -300.0),      # underdamped: one real, one complex pair
    (-6.0, 11.0, -6.0),         # roots 1, 2, 3
    (0.0, 0.0, -8.0),           # x^3 = 8
    (-1.0, 25.0, -25.0),        # (x - 1)(x^2 + 25)
    (3.0, 3.0, 1.0),            # triple root -1
])
def test_cubic_roots_against_companion_matrix(coeffs):
    got = np.sort_complex(kernels.cubic_roots(*coeffs))
    want = np.sort_complex(np.roots([1.0, *coeffs]))
    tol = 1e-5 if coeffs == (3.0, 3.0, 1.0) else 1e-12
    np.testing.assert_allclose(got, want, rtol=tol, atol=tol)


@pytest.mark.parametrize("a,b,c", [(-12.0, 32.2, -300.0), (-1.7, 0.4, -0.05)])
def test_cubic_backends_agree(a, b, c):
    np.testing.assert_allclose(kernels.cubic_roots(a, b, c), kernels.cubic_roots_numpy(a, b, c),
                               rtol=1e-14)


def test_hermite_functions_are_orthonormal():
    xi = np.linspace(-20, 20, 4001)
    phi = kernels.hermite_functions(30, xi)
    gram = phi @ phi.T * (xi[1] - xi[0])
    np.testing.assert_allclose(gram, np.eye(31), atol=1e-12)
    np.testing.assert_allclose(phi, kernels.hermite_numpy(30, xi), atol=1e-14)


def test_rotate_backends_agree(rng):
    n = 40
    a = rng.normal(size=(n, n))
    qq = a @ a.T
    b = rng.normal(size=(n, n))
    pp = b @ b.T
    qp = rng.normal(size=(n, n))
    omega = rng.uniform(0.01, 5, n)
    for t in (0.0, 0.3, 17.0):
        got = kernels.rotate_normal_modes(qq, qp, pp, omega, t)
        want = kernels.rotate_numpy(qq, qp, pp, omega, t)
        for x, y in zip(got, want):
            np.testing.assert_allclose(x, y, rtol=1e-12, atol=1e-12)


def test_rotate_single_oscillator_closed_form():
    # x(t) = x0 cos + p0 sin / w, start from <x^2> = 1, others 0
    w, t = 2.0, 0.7
    qq, qp, pp = kernels.rotate_normal_modes(np.eye(1), np.zeros((1, 1)), np.zeros((1, 1)),
                                             np.array([w]), t)
    assert qq[0, 0] == pytest.approx(np.cos(w * t) ** 2)
    assert qp[0, 0] == pytest.approx(-w * np.cos(w * t) * np.sin(w * t))
    assert pp[0, 0] == pytest.approx((w * np.sin(w * t)) ** 2)


def test_backend_flag_is_reported():
    assert kernels.BACKEND in ("numba", "numpy")
    assert cmath.isfinite(kernels.digamma(3 + 4j))
