"""Independent reference computations.

Nothing here imports :mod:`hornlab`. Values asserted as frozen constants in
the test modules were produced by these functions (see
``test_oracles.py``, which re-derives the cheap ones).
"""

from fractions import Fraction
import itertools
import math

import mpmath as mp
import numpy as np
from scipy import integrate
from scipy.stats import unitary_group

mp.mp.dps = 30


def _vdm(x):
    out = mp.mpf(1)
    n = len(x)
    for k in range(n):
        for l in range(k):
            out *= x[k] - x[l]
    return out


def hciz_mp(x, s):
    """Determinant ratio ``prod j! det[e^{x_j s_k}] / (Delta(x) Delta(s))`` in mpmath."""
    x = [mp.mpc(v) for v in x]
    s = [mp.mpc(v) for v in s]
    n = len(x)
    M = mp.matrix(n, n)
    for j in range(n):
        for k in range(n):
            M[j, k] = mp.exp(x[j] * s[k])
    const = mp.mpf(1)
    for j in range(n):
        const *= mp.factorial(j)
    return complex(const * mp.det(M) / (_vdm(x) * _vdm(s)))


def hciz_haar_mc(x, s, N=200_000, seed=0):
    """Haar average of ``exp(tr U x U^dagger s)`` with scipy's sampler; returns (mean, stderr)."""
    x = np.asarray(x, dtype=float)
    s = np.asarray(s, dtype=float)
    U = unitary_group.rvs(len(x), size=N, random_state=seed)
    P = np.abs(U) ** 2  # tr U x U^dagger s = sum_jk |U_jk|^2 s_j x_k
    vals = np.exp(np.einsum("j,njk,k->n", s, P, x))
    return float(vals.mean()), float(vals.std(ddof=1) / math.sqrt(N))


def gn_mp(x_log, s):
    """``prod j! det[e^{x_j s_k}] / (Delta(e^x) Delta(s))``."""
    x = [mp.mpf(v) for v in x_log]
    s = [mp.mpc(v) for v in s]
    n = len(x)
    M = mp.matrix(n, n)
    for j in range(n):
        for k in range(n):
            M[j, k] = mp.exp(x[j] * s[k])
    const = mp.mpf(1)
    for j in range(n):
        const *= mp.factorial(j)
    return complex(const * mp.det(M) / (_vdm([mp.exp(v) for v in x]) * _vdm(s)))


def _complete_h(k, z):
    if k < 0:
        return 0
    return sum(np.prod(c) for c in itertools.combinations_with_replacement(z, k)) if k else 1


def schur(lam, z):
    """Schur polynomial by the Jacobi-Trudi identity ``det[h_{lam_i - i + j}]``."""
    m = len(lam)
    M = np.empty((m, m), dtype=complex)
    for i in range(m):
        for j in range(m):
            M[i, j] = _complete_h(lam[i] - i + j, z)
    return complex(np.linalg.det(M))


def character_schur(theta, s):
    """Normalised U(n) character ``s_lam(e^{i theta}) / s_lam(1, ..., 1)``, ``lam = s - delta``.

    Valid at coincident phases, unlike the Weyl quotient.
    """
    n = len(theta)
    lam = [int(s[j]) - (n - 1 - j) for j in range(n)]
    if lam[-1] < 0:
        shift = -lam[-1]  # multiply by det^{-shift}
        lam = [v + shift for v in lam]
    else:
        shift = 0
    z = [complex(math.cos(t), math.sin(t)) for t in theta]
    val = schur(lam, z) / schur(lam, [1.0] * n)
    return val * np.exp(-1j * shift * sum(theta))


def theta_jacobi(x, eps):
    """``(1/2pi) sum_k e^{-eps^2 k^2 - i k x}`` via the Jacobi theta function."""
    q = mp.exp(-mp.mpf(eps) ** 2)
    return float(mp.jtheta(3, mp.mpf(x) / 2, q) / (2 * mp.pi))


def additive_marginal_n2(t, a1=1.0, a2=0.0, b=0.5):
    """``Delta(c)/(b Delta(a))`` on ``a1 < t < a1 + b``, for ``c_2 = a1 + a2 + b - t``."""
    if not a1 < t < a1 + b:
        return 0.0
    c2 = a1 + a2 + b - t
    return (t - c2) / (b * (a1 - a2))


def positive_marginal_n2_mp(t, a=(1.0, 0.0), b=0.5):
    t = mp.mpf(t)
    a1, a2 = (mp.mpf(v) for v in a)
    c2 = a1 + a2 + b - t
    return float((mp.exp(t) - mp.exp(c2)) / ((mp.exp(b) - 1) * (mp.exp(a1) - mp.exp(a2))))


def unitary_marginal_n2_mp(t, a=(1.0, -1.0), b=0.8):
    """Complex-exponential form ``(i/(e^{ib}-1)) Delta(e^{ic}) / Delta(e^{ia})``."""
    t = mp.mpf(t)
    a1, a2 = (mp.mpf(v) for v in a)
    c2 = a1 + a2 + b - t
    val = (1j / (mp.expj(b) - 1)) * (mp.expj(t) - mp.expj(c2)) / (mp.expj(a1) - mp.expj(a2))
    return complex(val)


def additive_cdf_n2(t, a1=1.0, a2=0.0, b=0.5):
    lo, hi = a1, a1 + b
    if t <= lo:
        return 0.0
    if t >= hi:
        return 1.0
    return integrate.quad(lambda c: additive_marginal_n2(c, a1, a2, b), lo, t, epsabs=1e-13)[0]


def additive_mean_c1_exact():
    """``int_1^{3/2} c * 2(2c - 3/2) dc`` as a fraction."""
    lo, hi = Fraction(1), Fraction(3, 2)
    F = lambda c: Fraction(4, 3) * c ** 3 - Fraction(3, 2) * c ** 2  # noqa: E731
    return F(hi) - F(lo)


def total_mass_quad(f, lo, hi):
    return integrate.quad(f, lo, hi, epsabs=1e-13, limit=200)[0]


def mb_normalisation_quad(eps):
    """Normalisation of the n = 2 Muttalib-Borodin kernel by adaptive 2-D quadrature."""
    g = lambda x: math.exp(-x * x / (4 * eps * eps)) / (2 * math.sqrt(math.pi) * eps)  # noqa: E731
    dg = lambda x: x / (2 * eps * eps) * g(x)  # -(d/dx) g  # noqa: E731

    def f(x2, x1):
        det = g(x1) * dg(x2) - g(x2) * dg(x1)
        return (math.exp(x2) - math.exp(x1)) * det * math.exp(x1 + x2)

    w = 16 * eps
    return integrate.dblquad(f, -w, w, -w, w, epsabs=1e-12)[0]


def ks_critical(alpha):
    """Asymptotic one-sample KS critical value ``c(alpha)`` from scipy."""
    from scipy.stats import kstwobign

    return float(kstwobign.isf(alpha))
