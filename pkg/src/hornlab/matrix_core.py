"""Dense complex matrix kernels.

Eigenvalues of Hermitian matrices, eigenphases of unitary matrices, the
phase-fixed QR step used for Haar sampling, leading principal minors and
Selberg's generalised power function

.. math:: |X|^{\\mathbf s} = \\prod_{j=1}^{n-1} \\det(X_{j\\times j})^{s_j-s_{j+1}-1}
          \\det(X)^{s_n}.

All functions are pure; array inputs are never modified.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import (
    ConvergenceFailure,
    IndexOutOfRange,
    NotHermitian,
    NotUnitary,
    SingularInput,
    SingularMinor,
)

__all__ = [
    "Spectrum",
    "PhaseSpectrum",
    "default_tol",
    "is_hermitian",
    "is_unitary",
    "is_positive_definite",
    "vandermonde",
    "hermitian_eigenvalues",
    "unitary_eigenphases",
    "wrap_phase",
    "qr_phase_fixed",
    "leading_principal_minor",
    "generalized_power",
]


def _frozen(values, dtype=float):
    arr = np.array(values, dtype=dtype, copy=True).reshape(-1)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class Spectrum:
    """Real eigenvalues sorted in descending order.

    ``ties`` is set when two consecutive values are closer than ``tol``; the
    density code refuses such spectra.
    """

    values: np.ndarray
    tol: float = 0.0
    ties: bool = field(init=False)

    def __post_init__(self):
        vals = _frozen(self.values)
        if not np.all(np.isfinite(vals)):
            raise ValueError("spectrum contains non-finite values")
        if np.any(np.diff(vals) > self.tol):
            raise ValueError("spectrum values must be sorted in descending order")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "ties", bool(np.any(-np.diff(vals) <= self.tol)))

    @classmethod
    def from_unsorted(cls, values, tol=0.0):
        vals = np.asarray(values, dtype=float).reshape(-1)
        return cls(np.sort(vals, kind="stable")[::-1], tol=tol)

    @property
    def n(self):
        return self.values.shape[0]

    def __len__(self):
        return self.n

    def __array__(self, dtype=None, copy=None):
        return np.array(self.values, dtype=dtype)


@dataclass(frozen=True)
class PhaseSpectrum:
    """Eigenphases in ``(-pi, pi]``, sorted in descending order."""

    angles: np.ndarray
    tol: float = 0.0
    ties: bool = field(init=False)

    def __post_init__(self):
        ang = _frozen(self.angles)
        if not np.all(np.isfinite(ang)):
            raise ValueError("phase spectrum contains non-finite values")
        if np.any(ang <= -np.pi) or np.any(ang > np.pi):
            raise ValueError("phases must lie in (-pi, pi]")
        if np.any(np.diff(ang) > self.tol):
            raise ValueError("phases must be sorted in descending order")
        object.__setattr__(self, "angles", ang)
        object.__setattr__(self, "ties", bool(np.any(-np.diff(ang) <= self.tol)))

    @classmethod
    def from_unsorted(cls, angles, tol=0.0):
        ang = wrap_phase(np.asarray(angles, dtype=float).reshape(-1))
        return cls(np.sort(ang, kind="stable")[::-1], tol=tol)

    @property
    def n(self):
        return self.angles.shape[0]

    def __len__(self):
        return self.n

    def __array__(self, dtype=None, copy=None):
        return np.array(self.angles, dtype=dtype)


def _as_square(M):
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] == 0:
        raise ValueError(f"expected a non-empty square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix contains non-finite entries")
    return M


def default_tol(M):
    """Structural tolerance ``1e-10 * n * max|M_ij|`` (at least ``1e-10 * n``)."""
    M = np.asarray(M)
    n = M.shape[-1]
    scale = float(np.max(np.abs(M))) if M.size else 0.0
    return 1e-10 * n * max(scale, 1.0)


def is_hermitian(M, tol=None):
    M = _as_square(M)
    tol = default_tol(M) if tol is None else tol
    return bool(np.max(np.abs(M - M.conj().T)) <= tol)


def is_unitary(M, tol=None):
    M = _as_square(M)
    tol = default_tol(M) if tol is None else tol
    n = M.shape[0]
    return bool(np.max(np.abs(M.conj().T @ M - np.eye(n))) <= tol)


def is_positive_definite(M, tol=None):
    if not is_hermitian(M, tol):
        return False
    M = np.asarray(M)
    tol = default_tol(M) if tol is None else tol
    H = 0.5 * (M + M.conj().T)
    return bool(np.linalg.eigvalsh(H)[0] > tol)


def vandermonde(x):
    """``prod_{k>l} (x_k - x_l)`` over the last axis (complex input allowed)."""
    x = np.asarray(x)
    n = x.shape[-1]
    out = np.ones(x.shape[:-1], dtype=np.result_type(x.dtype, float))
    for k in range(n):
        for l in range(k):
            out = out * (x[..., k] - x[..., l])
    return out


def hermitian_eigenvalues(H, tol=None):
    """Eigenvalues of a Hermitian matrix, sorted descending.

    Parameters
    ----------
    H : (n, n) array_like
        Hermitian matrix.
    tol : float, optional
        Symmetry tolerance; defaults to :func:`default_tol`.

    Returns
    -------
    Spectrum
    """
    H = _as_square(H)
    tol = default_tol(H) if tol is None else tol
    if not is_hermitian(H, tol):
        raise NotHermitian("matrix is not Hermitian within tolerance %g" % tol)
    try:
        vals = np.linalg.eigvalsh(0.5 * (H + H.conj().T))
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    return Spectrum(vals[::-1], tol=tol)


def wrap_phase(theta):
    """Map angles into ``(-pi, pi]``."""
    theta = np.asarray(theta, dtype=float)
    out = np.pi - np.mod(np.pi - theta, 2 * np.pi)
    return out


def unitary_eigenphases(U, tol=None):
    """Eigenphases of a unitary matrix in ``(-pi, pi]``, sorted descending."""
    U = _as_square(U)
    tol = default_tol(U) if tol is None else tol
    if not is_unitary(U, tol):
        raise NotUnitary("matrix is not unitary within tolerance %g" % tol)
    try:
        lam = np.linalg.eigvals(U)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(str(exc)) from exc
    if np.max(np.abs(np.abs(lam) - 1.0)) > 1e-8:
        raise ConvergenceFailure("eigenvalues of a unitary input left the unit circle")
    ang = wrap_phase(np.angle(lam))
    return PhaseSpectrum(np.sort(ang)[::-1], tol=tol)


def qr_phase_fixed(G, tol=None):
    """Q factor of ``G = QR`` with the phases chosen so that ``diag(R) > 0``.

    Works on a single matrix or a stack ``(..., n, n)``. With ``G`` drawn
    from the complex Ginibre ensemble the result is Haar distributed.
    """
    G = np.asarray(G)
    if G.ndim < 2 or G.shape[-1] != G.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {G.shape}")
    Q, R = np.linalg.qr(G)
    d = np.diagonal(R, axis1=-2, axis2=-1)
    mag = np.abs(d)
    if tol is None:
        tol = 1e-14 * G.shape[-1] * max(float(np.max(np.abs(G))), 1e-300)
    if np.any(mag <= tol):
        raise SingularInput("input matrix is numerically singular")
    return Q * (d / mag)[..., None, :]


def leading_principal_minor(M, j):
    """Determinant of the upper-left ``j x j`` block (``1 <= j <= n``)."""
    M = _as_square(M)
    n = M.shape[0]
    if not 1 <= j <= n:
        raise IndexOutOfRange(f"minor order {j} outside 1..{n}")
    return complex(np.linalg.det(M[:j, :j]))


def _is_nonneg_int(e):
    return abs(e.imag) == 0 and float(e.real).is_integer() and e.real >= 0


def generalized_power(X, s, tol=None):
    """Selberg's generalised power function ``|X|^s``.

    Non-integer (or negative) exponents use the principal branch of the
    logarithm of the corresponding minor; those minors must not vanish.

    Parameters
    ----------
    X : (n, n) array_like
    s : (n,) array_like of complex
    tol : float, optional
        A minor with modulus below ``tol`` counts as zero.

    Returns
    -------
    complex
    """
    X = _as_square(X)
    n = X.shape[0]
    s = np.asarray(s, dtype=complex).reshape(-1)
    if s.shape[0] != n:
        raise ValueError(f"index length {s.shape[0]} does not match dimension {n}")
    tol = default_tol(X) if tol is None else tol
    exps = [s[j] - s[j + 1] - 1 for j in range(n - 1)] + [s[n - 1]]
    out = 1.0 + 0.0j
    for j, e in enumerate(exps, start=1):
        e = complex(e)
        if e == 0:
            continue
        m = leading_principal_minor(X, j)
        if _is_nonneg_int(e):
            out *= m ** int(e.real)
            continue
        if abs(m) <= tol:
            raise SingularMinor(f"leading minor of order {j} vanishes")
        if e.imag == 0 and float(e.real).is_integer():
            out *= m ** int(e.real)
        else:
            out *= np.exp(e * np.log(m))
    return complex(out)
