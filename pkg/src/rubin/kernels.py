"""Hot numeric kernels.

Every kernel has two implementations with identical semantics: a loop
version compiled with numba (``*_numba``) and a vectorised numpy version
(``*_numpy``).  The public name is bound to the numba version unless numba
is missing or ``RUBIN_DISABLE_NUMBA=1`` is set, see :mod:`rubin._accel`.
"""
import cmath
import math

import numpy as np

from ._accel import HAVE_NUMBA, njit

__all__ = [
    "BACKEND",
    "cubic_roots",
    "digamma",
    "digamma_array",
    "hermite_functions",
    "rotate_normal_modes",
]

EULER_GAMMA = 0.57721566490153286061

# B_{2k} / (2k) for k = 1..7, i.e. through B_14
_ASYMPTOTIC = np.array([
    1.0 / 6.0 / 2.0,
    -1.0 / 30.0 / 4.0,
    1.0 / 42.0 / 6.0,
    -1.0 / 30.0 / 8.0,
    5.0 / 66.0 / 10.0,
    -691.0 / 2730.0 / 12.0,
    7.0 / 6.0 / 14.0,
])

_RECURRENCE_FLOOR = 10.0


# --------------------------------------------------------------------------
# complex digamma

def _digamma_scalar(z):
    reflect = 0j
    if z.real < 0.0:
        # psi(z) = psi(1 - z) - pi cot(pi z)
        reflect = -math.pi * cmath.cos(math.pi * z) / cmath.sin(math.pi * z)
        z = 1.0 - z
    shift = 0j
    while z.real < _RECURRENCE_FLOOR:
        shift -= 1.0 / z
        z += 1.0
    w = 1.0 / (z * z)
    series = 0j
    for k in range(_ASYMPTOTIC.shape[0] - 1, -1, -1):
        series = series * w + _ASYMPTOTIC[k]
    series *= w
    return cmath.log(z) - 0.5 / z - series + shift + reflect


_digamma_numba = njit(_digamma_scalar)


def digamma_numpy(z):
    """Vectorised complex digamma.  ``z`` must avoid the poles."""
    z = np.array(z, dtype=np.complex128, ndmin=1)
    out = np.zeros_like(z)
    neg = z.real < 0.0
    if neg.any():
        zn = z[neg]
        out[neg] = -np.pi / np.tan(np.pi * zn)
        z = z.copy()
        z[neg] = 1.0 - zn
    n_shift = np.maximum(0, np.ceil(_RECURRENCE_FLOOR - z.real)).astype(np.int64)
    zz = z.copy()
    for k in range(int(n_shift.max(initial=0))):
        active = n_shift > k
        out[active] -= 1.0 / zz[active]
        zz[active] += 1.0
    w = 1.0 / (zz * zz)
    series = np.zeros_like(zz)
    for c in _ASYMPTOTIC[::-1]:
        series = series * w + c
    series *= w
    return out + np.log(zz) - 0.5 / zz - series


@njit
def _digamma_array_numba(z):
    out = np.empty(z.shape[0], dtype=np.complex128)
    for i in range(z.shape[0]):
        out[i] = _digamma_numba(z[i])
    return out


def _check_poles(z):
    z = np.asarray(z, dtype=np.complex128)
    bad = (z.imag == 0.0) & (z.real <= 0.0) & (z.real == np.round(z.real))
    if np.any(bad):
        from .errors import DomainError

        raise DomainError(f"digamma has a pole at {z[bad].ravel()[0].real:g}")


def digamma(z):
    """Complex digamma function psi(z) for a scalar argument."""
    z = complex(z)
    _check_poles(z)
    if HAVE_NUMBA:
        return complex(_digamma_numba(z))
    return complex(_digamma_scalar(z))


def digamma_array(z):
    z = np.array(z, dtype=np.complex128, ndmin=1)
    _check_poles(z)
    if HAVE_NUMBA:
        return _digamma_array_numba(np.ascontiguousarray(z.ravel())).reshape(z.shape)
    return digamma_numpy(z)


# --------------------------------------------------------------------------
# cubic roots

def _cubic_roots_impl(a, b, c):
    """Roots of x^3 + a x^2 + b x + c with real coefficients."""
    roots = np.empty(3, dtype=np.complex128)
    q = (a * a - 3.0 * b) / 9.0
    r = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0
    if r * r < q * q * q:
        theta = math.acos(r / math.sqrt(q * q * q))
        sq = -2.0 * math.sqrt(q)
        roots[0] = sq * math.cos(theta / 3.0) - a / 3.0
        roots[1] = sq * math.cos((theta + 2.0 * math.pi) / 3.0) - a / 3.0
        roots[2] = sq * math.cos((theta - 2.0 * math.pi) / 3.0) - a / 3.0
    else:
        big = (abs(r) + math.sqrt(r * r - q * q * q)) ** (1.0 / 3.0)
        if r > 0.0:
            big = -big
        small = q / big if big != 0.0 else 0.0
        re = -0.5 * (big + small) - a / 3.0
        im = 0.5 * math.sqrt(3.0) * (big - small)
        roots[0] = (big + small) - a / 3.0
        roots[1] = complex(re, im)
        roots[2] = complex(re, -im)
    # one Newton step per root
    for i in range(3):
        x = roots[i]
        p = ((x + a) * x + b) * x + c
        dp = (3.0 * x + 2.0 * a) * x + b
        if dp != 0.0:
            roots[i] = x - p / dp
    return roots


_cubic_roots_numba = njit(_cubic_roots_impl)


def cubic_roots_numpy(a, b, c):
    return _cubic_roots_impl(float(a), float(b), float(c))


def cubic_roots(a, b, c):
    """Roots of the monic cubic ``x**3 + a x**2 + b x + c``."""
    if HAVE_NUMBA:
        return _cubic_roots_numba(float(a), float(b), float(c))
    return cubic_roots_numpy(a, b, c)


# --------------------------------------------------------------------------
# free evolution of a covariance in normal-mode coordinates

@njit
def _rotate_numba(qq, qp, pp, omega, t):
    n = omega.shape[0]
    c = np.empty(n)
    s = np.empty(n)
    w = np.empty(n)
    for k in range(n):
        c[k] = math.cos(omega[k] * t)
        sn = math.sin(omega[k] * t)
        s[k] = sn / omega[k]
        w[k] = -omega[k] * sn
    qq_t = np.empty((n, n))
    qp_t = np.empty((n, n))
    pp_t = np.empty((n, n))
    for k in range(n):
        for l in range(n):
            a = qq[k, l]
            b = qp[k, l]
            d = qp[l, k]  # <P_k Q_l>
            e = pp[k, l]
            qq_t[k, l] = c[k] * c[l] * a + c[k] * s[l] * b + s[k] * c[l] * d + s[k] * s[l] * e
            qp_t[k, l] = c[k] * w[l] * a + c[k] * c[l] * b + s[k] * w[l] * d + s[k] * c[l] * e
            pp_t[k, l] = w[k] * w[l] * a + w[k] * c[l] * b + c[k] * w[l] * d + c[k] * c[l] * e
    return qq_t, qp_t, pp_t


def rotate_numpy(qq, qp, pp, omega, t):
    c = np.cos(omega * t)
    sn = np.sin(omega * t)
    s = sn / omega
    w = -omega * sn
    pq = qp.T
    qq_t = (np.outer(c, c) * qq + np.outer(c, s) * qp + np.outer(s, c) * pq
            + np.outer(s, s) * pp)
    qp_t = (np.outer(c, w) * qq + np.outer(c, c) * qp + np.outer(s, w) * pq
            + np.outer(s, c) * pp)
    pp_t = (np.outer(w, w) * qq + np.outer(w, c) * qp + np.outer(c, w) * pq
            + np.outer(c, c) * pp)
    return qq_t, qp_t, pp_t


def rotate_normal_modes(qq, qp, pp, omega, t):
    """Evolve the second moments of independent oscillators for a time ``t``.

    ``qq[k, l] = <Q_k Q_l>``, ``qp[k, l] = <Q_k P_l>`` (symmetrised) and
    ``pp[k, l] = <P_k P_l>`` in unit-mass normal coordinates with
    frequencies ``omega``.  Returns the same three blocks at time ``t``.
    """
    if HAVE_NUMBA:
        return _rotate_numba(np.ascontiguousarray(qq), np.ascontiguousarray(qp),
                             np.ascontiguousarray(pp), np.ascontiguousarray(omega),
                             float(t))
    return rotate_numpy(qq, qp, pp, omega, t)


# --------------------------------------------------------------------------
# normalised Hermite functions

@njit
def _hermite_numba(n_max, xi):
    out = np.empty((n_max + 1, xi.shape[0]))
    norm = math.pi ** -0.25
    for j in range(xi.shape[0]):
        x = xi[j]
        h0 = norm * math.exp(-0.5 * x * x)
        out[0, j] = h0
        if n_max >= 1:
            out[1, j] = math.sqrt(2.0) * x * h0
        for n in range(1, n_max):
            out[n + 1, j] = (math.sqrt(2.0 / (n + 1)) * x * out[n, j]
                             - math.sqrt(n / (n + 1.0)) * out[n - 1, j])
    return out


def hermite_numpy(n_max, xi):
    xi = np.asarray(xi, dtype=float)
    out = np.empty((n_max + 1, xi.size))
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * xi * xi)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * xi * out[0]
    for n in range(1, n_max):
        out[n + 1] = np.sqrt(2.0 / (n + 1)) * xi * out[n] - np.sqrt(n / (n + 1.0)) * out[n - 1]
    return out


def hermite_functions(n_max, xi):
    """Orthonormal Hermite functions ``phi_0 .. phi_{n_max}`` on the grid ``xi``."""
    if HAVE_NUMBA:
        return _hermite_numba(int(n_max), np.ascontiguousarray(xi, dtype=float))
    return hermite_numpy(int(n_max), xi)


BACKEND = "numba" if HAVE_NUMBA else "numpy"
