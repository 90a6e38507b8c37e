"""Seeded samplers for the three rank-1 Horn models.

Every sampler takes ``rng`` as an :class:`~hornlab.rng.RngStream`, an
integer seed or a :class:`numpy.random.Generator` (see
:func:`~hornlab.validation.check_random_state`) and an optional ``size``.
With ``size=None`` a single draw is returned; otherwise the draws are
stacked along a new leading axis. Spectra come back sorted descending.
"""

from __future__ import annotations

import numpy as np

from .exceptions import InvalidInstance, NonPositiveEigenvalue
from .instance import HornCase, HornInstance
from .matrix_core import qr_phase_fixed, wrap_phase
from .validation import check_random_state

__all__ = [
    "haar_unitary",
    "sample_gue",
    "sample_unit_vector",
    "sample_additive_rank1",
    "sample_mult_pos",
    "sample_mult_unitary",
    "sample_singular_rank1",
    "sample_instance",
]


def _batch(size):
    if size is None:
        return 1, True
    size = int(size)
    if size < 0:
        raise ValueError("size must be non-negative")
    return size, False


def _ginibre(gen, m, n):
    z = gen.standard_normal((m, n, n, 2))
    return (z[..., 0] + 1j * z[..., 1]) / np.sqrt(2.0)


def haar_unitary(n, rng=None, size=None):
    """Haar-distributed unitary matrix (phase-fixed QR of a Ginibre matrix)."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    gen = check_random_state(rng)
    m, single = _batch(size)
    Q = qr_phase_fixed(_ginibre(gen, m, n)) if m else np.empty((0, n, n), complex)
    return Q[0] if single else Q


def sample_unit_vector(n, rng=None, size=None):
    """Uniform unit vector in C^n; the law of one column of a Haar unitary."""
    gen = check_random_state(rng)
    m, single = _batch(size)
    z = gen.standard_normal((m, n, 2))
    w = z[..., 0] + 1j * z[..., 1]
    w /= np.linalg.norm(w, axis=-1, keepdims=True)
    return w[0] if single else w


def sample_gue(n, eps, rng=None, size=None):
    """GUE matrix with density proportional to ``exp(-tr H^2 / (4 eps^2))``.

    Diagonal entries have variance ``2 eps^2``; real and imaginary parts of
    the off-diagonal entries have variance ``eps^2`` each.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    gen = check_random_state(rng)
    m, single = _batch(size)
    z = gen.standard_normal((m, n, n, 2))
    G = z[..., 0] + 1j * z[..., 1]
    H = (G + np.conj(np.swapaxes(G, -1, -2))) * (eps / np.sqrt(2.0))
    return H[0] if single else H


def _require(inst, case):
    if not isinstance(inst, HornInstance):
        raise InvalidInstance("expected a HornInstance")
    if inst.case is not case:
        raise InvalidInstance(f"sampler expects a {case.value} instance, got {inst.case.value}")


def _eigvalsh_desc(M):
    return np.linalg.eigvalsh(M)[..., ::-1]


def sample_additive_rank1(inst, rng=None, size=None, literal=False):
    """Eigenvalues of ``diag(a) + b w w^dagger`` with ``w`` a uniform unit vector.

    With ``literal=True`` the two-Haar model ``U a U^dagger + V b V^dagger``
    is sampled instead (same law, twice the cost).
    """
    _require(inst, HornCase.ADDITIVE)
    gen = check_random_state(rng)
    m, single = _batch(size)
    n, a, b = inst.n, inst.a, inst.b
    if literal:
        U = haar_unitary(n, gen, size=m)
        V = haar_unitary(n, gen, size=m)
        A = (U * a[None, None, :]) @ np.conj(np.swapaxes(U, -1, -2))
        v = V[..., :, 0]
        M = A + b * v[..., :, None] * np.conj(v[..., None, :])
    else:
        w = sample_unit_vector(n, gen, size=m)
        M = b * w[..., :, None] * np.conj(w[..., None, :])
        idx = np.arange(n)
        M[..., idx, idx] += a
    M = 0.5 * (M + np.conj(np.swapaxes(M, -1, -2)))
    c = _eigvalsh_desc(M)
    return c[0] if single else c


def sample_mult_pos(inst, rng=None, size=None):
    """Log-eigenvalues of ``e^{a/2} W diag(e^b, 1, ..., 1) W^dagger e^{a/2}``.

    Only the first column ``w`` of ``W`` matters:
    ``W diag(e^b,1,..) W^dagger = 1 + (e^b - 1) w w^dagger``.
    """
    _require(inst, HornCase.POSITIVE)
    gen = check_random_state(rng)
    m, single = _batch(size)
    n, a, b = inst.n, inst.a, inst.b
    w = sample_unit_vector(n, gen, size=m)
    v = np.exp(0.5 * a) * w
    M = np.expm1(b) * v[..., :, None] * np.conj(v[..., None, :])
    idx = np.arange(n)
    M[..., idx, idx] += np.exp(a)
    M = 0.5 * (M + np.conj(np.swapaxes(M, -1, -2)))
    lam = _eigvalsh_desc(M)
    if np.any(lam <= 0):
        raise NonPositiveEigenvalue("numerical eigenvalue <= 0 in a positive-definite product")
    c = np.log(lam)
    return c[0] if single else c


def sample_mult_unitary(inst, rng=None, size=None):
    """Eigenphases of ``diag(e^{ia}) V diag(e^{ib}, 1, ..., 1) V^dagger``."""
    _require(inst, HornCase.UNITARY)
    gen = check_random_state(rng)
    m, single = _batch(size)
    n, a, b = inst.n, inst.a, inst.b
    w = sample_unit_vector(n, gen, size=m)
    B = np.expm1(1j * b) * w[..., :, None] * np.conj(w[..., None, :])
    idx = np.arange(n)
    B[..., idx, idx] += 1.0
    C = np.exp(1j * a)[:, None] * B
    lam = np.linalg.eigvals(C)
    c = np.sort(wrap_phase(np.angle(lam)), axis=-1)[..., ::-1]
    return c[0] if single else c


def sample_singular_rank1(x, y_scalar, rng=None, size=None):
    """Squared singular values of ``U X U^dagger V Y V^dagger``.

    ``X = diag(x)`` with ``x`` positive and strictly decreasing and
    ``Y = diag(y_scalar, 1, ..., 1)``. The law equals that of
    :func:`sample_mult_pos` with ``a = 2 log x`` and ``b = 2 log y_scalar``
    (after taking logarithms).
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    y = float(y_scalar)
    if x.size == 0 or np.any(x <= 0) or np.any(np.diff(x) >= 0):
        raise InvalidInstance("x must be positive and strictly decreasing")
    if not y > 0 or y == 1.0:
        raise InvalidInstance("y_scalar must be positive and different from 1")
    gen = check_random_state(rng)
    m, single = _batch(size)
    n = x.shape[0]
    U = haar_unitary(n, gen, size=m)
    V = haar_unitary(n, gen, size=m)
    yv = np.ones(n)
    yv[0] = y
    X = (U * x[None, None, :]) @ np.conj(np.swapaxes(U, -1, -2))
    Y = (V * yv[None, None, :]) @ np.conj(np.swapaxes(V, -1, -2))
    sv = np.linalg.svd(X @ Y, compute_uv=False)
    out = np.sort(sv**2, axis=-1)[..., ::-1]
    return out[0] if single else out


def sample_instance(inst, rng=None, size=None):
    """Dispatch to the sampler matching ``inst.case``."""
    if inst.case is HornCase.ADDITIVE:
        return sample_additive_rank1(inst, rng, size)
    if inst.case is HornCase.POSITIVE:
        return sample_mult_pos(inst, rng, size)
    return sample_mult_unitary(inst, rng, size)
