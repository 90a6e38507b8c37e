"""Spherical functions of Herm(n), Herm+(n) and U(n).

All three share the determinant ratio

.. math:: K(\\mathbf x, \\mathbf s) = \\prod_{j=0}^{n-1} j!\\,
          \\frac{\\det[e^{x_j s_k}]}{\\Delta(\\mathbf x)\\Delta(\\mathbf s)},
          \\qquad \\Delta(\\mathbf x) = \\prod_{k>l}(x_k - x_l).

* HCIZ integral: ``hciz(x, s) = K(x, s)``.
* Gelfand-Naimark integral: ``gn_spherical(x, s) = K(x, s) Delta(x)/Delta(e^x)``.
* Normalised U(n) character: ``char_spherical(t, s) = K(i t, s) Delta(i t)/Delta(e^{i t})``.

When two arguments get closer than ``CONFLUENCE_THRESHOLD`` (relative to
the vector's scale) the ratio is evaluated through bivariate divided
differences of ``exp(x s)`` instead: by Opitz' formula these are entries of
``expm(kron(Z_s, Z_x))`` with ``Z`` the bidiagonal node matrices, which
stays accurate all the way to exact coincidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .exceptions import DegenerateIndex, InvalidCase, LengthMismatch
from .instance import HornCase
from .matrix_core import (
    is_hermitian,
    is_positive_definite,
    is_unitary,
    vandermonde,
    wrap_phase,
)
from .validation import check_complex_index, check_integer_index, check_random_state

__all__ = [
    "CONFLUENCE_THRESHOLD",
    "hciz",
    "hciz_rank1",
    "gn_spherical",
    "gn_rank1",
    "char_spherical",
    "char_rank1",
    "spherical_function",
    "divided_difference_exp",
    "FactorizationReport",
    "mc_factorization_check",
]

CONFLUENCE_THRESHOLD = 1e-4


def _log_superfactorial(n):
    # log prod_{j=0}^{n-1} j!
    return sum(math.lgamma(j + 1) for j in range(n))


def _superfactorial(n):
    return math.exp(_log_superfactorial(n))


def _min_separation(v):
    v = np.asarray(v)
    n = v.shape[-1]
    if n < 2:
        return np.full(v.shape[:-1], np.inf)
    d = np.abs(v[..., :, None] - v[..., None, :])
    iu = np.triu_indices(n, 1)
    return d[..., iu[0], iu[1]].min(axis=-1)


def _confluent_mask(v):
    v = np.asarray(v)
    scale = np.maximum(1.0, np.max(np.abs(v), axis=-1))
    return _min_separation(v) < CONFLUENCE_THRESHOLD * scale


def _merge_close(z):
    # expm divides by differences of diagonal entries on triangular input;
    # merging entries closer than 1e-13 (relative) keeps subnormal gaps from
    # overflowing at a cost of order 1e-13
    z = np.array(z, dtype=complex)
    tol = 1e-13 * max(1.0, float(np.max(np.abs(z))))
    for k in range(1, z.shape[0]):
        near = np.abs(z[:k] - z[k]) < tol
        if np.any(near):
            z[k] = z[:k][near][0]
    return z


def _bidiagonal(z):
    z = _merge_close(z)
    n = z.shape[0]
    return np.diag(z) + np.diag(np.ones(n - 1), 1)


def divided_difference_exp(lam, nodes):
    """``[z_1, ..., z_n] exp(lam * z)`` via ``expm(lam * Z)`` (Opitz)."""
    nodes = np.asarray(nodes, dtype=complex).reshape(-1)
    n = nodes.shape[0]
    if n == 1:
        return complex(np.exp(lam * nodes[0]))
    return complex(expm(lam * _bidiagonal(nodes))[0, n - 1])


def _det_ratio_confluent(x, s):
    # det of the matrix of bivariate divided differences of exp(x s);
    # equals det[e^{x_j s_k}] / (Delta(x) Delta(s)) without any division
    n = x.shape[0]
    K = np.kron(_bidiagonal(s), _bidiagonal(x))
    idx = np.arange(n * n)
    K[idx, idx] = _merge_close(np.diag(K))
    E = expm(K)
    D = E[0].reshape(n, n)
    return np.linalg.det(D)


def _kernel(x, s):
    """``K(x, s)`` for a batch ``x`` of shape (m, n) and a single ``s``."""
    x = np.asarray(x, dtype=complex)
    s = np.asarray(s, dtype=complex)
    m, n = x.shape
    pref = math.exp(_log_superfactorial(n))
    if n == 1:
        return np.exp(x[:, 0] * s[0])
    out = np.empty(m, dtype=complex)
    if _confluent_mask(s):
        for i in range(m):
            out[i] = _det_ratio_confluent(x[i], s)
        return pref * out
    conf = _confluent_mask(x)
    gen = ~conf
    if np.any(gen):
        xg = x[gen]
        M = np.exp(xg[:, :, None] * s[None, None, :])
        out[gen] = np.linalg.det(M) / (vandermonde(xg) * vandermonde(s))
    for i in np.flatnonzero(conf):
        out[i] = _det_ratio_confluent(x[i], s)
    return pref * out


def _phi1(d):
    # expm1(d)/d with the removable singularity filled in
    d = np.asarray(d, dtype=complex)
    small = np.abs(d) < 1e-12
    safe = np.where(small, 1.0, d)
    return np.where(small, 1.0 + 0.5 * d, np.expm1(safe) / safe)


def _vandermonde_exp_ratio(z):
    """``Delta(z) / Delta(e^z)`` evaluated pairwise without cancellation."""
    z = np.asarray(z, dtype=complex)
    n = z.shape[-1]
    out = np.ones(z.shape[:-1], dtype=complex)
    for k in range(n):
        for l in range(k):
            d = z[..., k] - z[..., l]
            out = out * np.exp(-z[..., l]) / _phi1(d)
    return out


def _batched(x, n=None):
    x = np.asarray(x)
    single = x.ndim == 1
    xb = np.atleast_2d(x)
    if n is not None and xb.shape[-1] != n:
        raise LengthMismatch(f"argument has length {xb.shape[-1]}, index has length {n}")
    return xb, single


def hciz(x, s):
    """Harish-Chandra-Itzykson-Zuber integral ``int dU exp(tr U x U^dagger s)``.

    Parameters
    ----------
    x : (n,) or (m, n) array_like of complex
        Eigenvalues; a 2-D input is evaluated row by row.
    s : (n,) array_like of complex

    Returns
    -------
    complex or (m,) ndarray
    """
    s = check_complex_index(s)
    xb, single = _batched(np.asarray(x, dtype=complex), s.shape[0])
    out = _kernel(xb, s)
    return complex(out[0]) if single else out


def gn_spherical(x_log, s):
    """Gelfand-Naimark integral ``int dU |U e^x U^dagger|^s``.

    ``x_log`` holds the logarithms of the eigenvalues. Equals 1 at
    ``s = (n-1, ..., 0)``.
    """
    s = check_complex_index(s)
    xb, single = _batched(np.asarray(x_log, dtype=complex), s.shape[0])
    out = _kernel(xb, s) * _vandermonde_exp_ratio(xb)
    return complex(out[0]) if single else out


def char_spherical(theta, s):
    """Normalised irreducible character ``ch_s(e^{i theta}) / ch_s(1)`` of U(n).

    ``s`` must be a strictly decreasing integer vector.
    """
    s = check_integer_index(s)
    tb, single = _batched(np.asarray(theta, dtype=float), s.shape[0])
    z = 1j * tb
    out = _kernel(z, s.astype(complex)) * _vandermonde_exp_ratio(z)
    return complex(out[0]) if single else out


def _rank1_sum(lam, s):
    """``sum_p e^{lam s_p} / prod_{l != p} (s_l - s_p)``."""
    n = s.shape[0]
    if n == 1:
        return complex(np.exp(lam * s[0]))
    if _confluent_mask(s):
        return (-1) ** (n - 1) * divided_difference_exp(lam, s)
    total = 0.0 + 0.0j
    for p in range(n):
        den = np.prod([s[l] - s[p] for l in range(n) if l != p])
        total += np.exp(lam * s[p]) / den
    return complex(total)


def hciz_rank1(b, s):
    """HCIZ integral at ``x = (-i b, 0, ..., 0)`` in closed rank-1 form."""
    s = check_complex_index(s)
    b = complex(b)
    if b == 0:
        raise DegenerateIndex("rank-1 strength b must be non-zero")
    n = s.shape[0]
    pref = (-1j) ** (n - 1) * math.factorial(n - 1) / b ** (n - 1)
    return complex(pref * _rank1_sum(-1j * b, s))


def gn_rank1(b, s):
    """Gelfand-Naimark integral at ``x = (b, 0, ..., 0)`` in closed rank-1 form."""
    s = check_complex_index(s)
    b = float(b)
    if b == 0:
        raise DegenerateIndex("rank-1 strength b must be non-zero")
    n = s.shape[0]
    pref = math.factorial(n - 1) / (-np.expm1(b)) ** (n - 1)
    return complex(pref * _rank1_sum(b, s))


def char_rank1(b, s):
    """Normalised character at ``diag(e^{ib}, 1, ..., 1)`` in closed rank-1 form."""
    s = check_integer_index(s)
    b = float(b)
    n = s.shape[0]
    if n > 1 and abs(wrap_phase(b)) < 1e-12:
        raise DegenerateIndex("b must not be a multiple of 2 pi")
    if n == 1:
        return complex(np.exp(1j * b * s[0]))
    pref = math.factorial(n - 1) / (-np.expm1(1j * b)) ** (n - 1)
    return complex(pref * _rank1_sum(1j * b, s.astype(complex)))


def spherical_function(case, x, s):
    """Dispatch on the Horn case: HCIZ, Gelfand-Naimark or normalised character."""
    case = HornCase.parse(case)
    if case is HornCase.ADDITIVE:
        return hciz(x, s)
    if case is HornCase.POSITIVE:
        return gn_spherical(x, s)
    return char_spherical(x, s)


@dataclass(frozen=True)
class FactorizationReport:
    mean: complex
    stderr: float
    reference: complex
    zscore: float
    n_samples: int


class _Welford:
    """Streaming mean and sum of squared deviations for complex samples."""

    def __init__(self):
        self.n = 0
        self.mean = 0.0 + 0.0j
        self.m2 = 0.0

    def add_batch(self, values):
        values = np.asarray(values, dtype=complex)
        nb = values.shape[0]
        if nb == 0:
            return
        mb = values.mean()
        m2b = float(np.sum(np.abs(values - mb) ** 2))
        n = self.n + nb
        delta = mb - self.mean
        self.mean = self.mean + delta * nb / n
        self.m2 = self.m2 + m2b + abs(delta) ** 2 * self.n * nb / n
        self.n = n

    @property
    def stderr(self):
        if self.n < 2:
            return float("inf")
        return math.sqrt(self.m2 / (self.n - 1) / self.n)


def _psd_sqrt(X):
    w, V = np.linalg.eigh(0.5 * (X + X.conj().T))
    return (V * np.sqrt(w)) @ V.conj().T


def mc_factorization_check(case, X1, X2, s, N=100_000, rng=None, chunk=20_000):
    """Monte Carlo check of ``E_U phi(X1 * U X2 U^dagger, s) = phi(X1, s) phi(X2, s)``.

    ``*`` is the group operation of the case: the sum on Herm(n), the
    symmetrised product ``A^{1/2} B A^{1/2}`` on Herm+(n) and the matrix
    product on U(n).

    Returns
    -------
    FactorizationReport
        ``zscore = |mean - reference| / stderr`` with the complex standard
        error ``sqrt(E|phi - mean|^2 / N)``.
    """
    from .sampling import haar_unitary

    case = HornCase.parse(case) if not isinstance(case, HornCase) else case
    X1 = np.asarray(X1, dtype=complex)
    X2 = np.asarray(X2, dtype=complex)
    if X1.shape != X2.shape or X1.ndim != 2 or X1.shape[0] != X1.shape[1]:
        raise InvalidCase("X1 and X2 must be square matrices of equal size")
    N = int(N)
    if N < 1000:
        raise ValueError("N must be at least 1000")
    n = X1.shape[0]
    gen = check_random_state(rng)

    if case is HornCase.ADDITIVE:
        if not (is_hermitian(X1) and is_hermitian(X2)):
            raise InvalidCase("additive case needs Hermitian matrices")
        spec = lambda M: np.linalg.eigvalsh(M)  # noqa: E731
        phi = hciz
        ref = hciz(np.linalg.eigvalsh(X1), s) * hciz(np.linalg.eigvalsh(X2), s)
        R = None
    elif case is HornCase.POSITIVE:
        if not (is_positive_definite(X1) and is_positive_definite(X2)):
            raise InvalidCase("positive case needs positive-definite matrices")
        R = _psd_sqrt(X1)
        spec = lambda M: np.log(np.linalg.eigvalsh(M))  # noqa: E731
        phi = gn_spherical
        ref = gn_spherical(np.log(np.linalg.eigvalsh(X1)), s) * gn_spherical(
            np.log(np.linalg.eigvalsh(X2)), s
        )
    else:
        if not (is_unitary(X1) and is_unitary(X2)):
            raise InvalidCase("unitary case needs unitary matrices")
        spec = lambda M: np.angle(np.linalg.eigvals(M))  # noqa: E731
        phi = char_spherical
        ref = char_spherical(np.angle(np.linalg.eigvals(X1)), s) * char_spherical(
            np.angle(np.linalg.eigvals(X2)), s
        )
        R = None

    acc = _Welford()
    done = 0
    while done < N:
        m = min(chunk, N - done)
        U = haar_unitary(n, gen, size=m)
        rot = U @ X2 @ np.conj(np.swapaxes(U, -1, -2))
        if case is HornCase.ADDITIVE:
            M = X1 + rot
            M = 0.5 * (M + np.conj(np.swapaxes(M, -1, -2)))
        elif case is HornCase.POSITIVE:
            M = R @ rot @ R
            M = 0.5 * (M + np.conj(np.swapaxes(M, -1, -2)))
        else:
            M = X1 @ rot
        acc.add_batch(phi(spec(M), s))
        done += m

    se = acc.stderr
    diff = abs(acc.mean - ref)
    if se <= 1e-13 * max(1.0, abs(ref)):
        z = 0.0 if diff <= 1e-10 * max(1.0, abs(ref)) else float("inf")
    else:
        z = diff / se
    return FactorizationReport(complex(acc.mean), float(se), complex(ref), float(z), acc.n)
