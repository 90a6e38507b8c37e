"""Regularised forward and inverse spherical transforms.

Each inversion adds an independent regulariser ``H_eps`` to the random
matrix: a GUE matrix (Herm), a Muttalib-Borodin matrix (Herm+) or a
heat-kernel matrix (U(n)). The regularised densities are smooth, so they
can be evaluated by series or quadrature and compared against the closed
forms in :mod:`hornlab.densities` after integrating across the constraint
direction.

Conventions
-----------
* Unitary lattice sums use the weight ``exp(-eps^2 sum_j (s_j - (n-1)/2)^2)``.
* "Unordered" densities integrate to 1 over all of eigenvalue space; the
  density of the decreasingly ordered eigenvalues is ``n!`` times that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import eval_hermite

from .exceptions import (
    InvalidInstance,
    QuadratureNotConverged,
    TruncationTooSmall,
    UnsupportedDimension,
)
from .instance import HornCase
from .matrix_core import vandermonde
from .spherical import hciz, gn_spherical

__all__ = [
    "RegularizerEps",
    "TruncationSpec",
    "theta_kernel",
    "unitary_series_density",
    "unitary_series_literal",
    "inverse_unitary_series",
    "hermitian_integrand",
    "positive_integrand",
    "inverse_hermitian_quadrature",
    "inverse_pos_quadrature",
    "quadrature_marginal",
    "TransformReport",
    "forward_transform_check",
    "pdf_regularizer",
    "mb_normalization",
]

_TINY = 1e-16
_GAUSS_CUT = math.sqrt(-math.log(_TINY))  # e^{-u^2} < 1e-16 beyond this


@dataclass(frozen=True)
class RegularizerEps:
    """Width ``eps > 0`` of the Gaussian regulariser."""

    eps: float

    def __post_init__(self):
        if not (np.isfinite(self.eps) and self.eps > 0):
            raise ValueError("eps must be a positive finite number")


@dataclass(frozen=True)
class TruncationSpec:
    """Truncation of lattice sums and quadratures.

    ``S`` bounds the lattice ``[-S, S]^n``; ``quad_pts`` is the number of
    Gauss-Legendre nodes per axis; ``domain_halfwidth`` cuts the real
    integration domain to ``[-L, L]^n``. ``None`` picks a default from eps.
    """

    S: int | None = None
    quad_pts: int = 64
    domain_halfwidth: float | None = None

    def __post_init__(self):
        if self.S is not None and int(self.S) < 1:
            raise ValueError("S must be at least 1")
        if int(self.quad_pts) < 16:
            raise ValueError("quad_pts must be at least 16")
        if self.domain_halfwidth is not None and not self.domain_halfwidth > 0:
            raise ValueError("domain_halfwidth must be positive")


def _eps(reg):
    if isinstance(reg, RegularizerEps):
        return reg.eps
    return RegularizerEps(float(reg)).eps


def _trunc(trunc):
    return TruncationSpec() if trunc is None else trunc


@lru_cache(maxsize=64)
def _gl(q, lo, hi):
    x, w = np.polynomial.legendre.leggauss(q)
    half = 0.5 * (hi - lo)
    return lo + half * (x + 1.0), half * w


# --- theta kernel -----------------------------------------------------------


def _theta_fourier(x, eps, n, derivative):
    h = 0.5 * (n - 1)
    K = int(math.ceil(_GAUSS_CUT / eps + abs(h))) + 1
    s = np.arange(-K, K + 1) + math.ceil(h) - h  # offsets s - h
    w = np.exp(-(eps * s) ** 2)
    keep = w >= _TINY
    s, w = s[keep], w[keep]
    phase = np.exp(-1j * np.multiply.outer(x, s))
    return phase @ (w * (-1j * s) ** derivative) / (2 * np.pi)


def _theta_dual(x, eps, n, derivative):
    reach = 2 * eps * _GAUSS_CUT
    mlo = int(math.floor((-np.max(x) - reach) / (2 * np.pi)))
    mhi = int(math.ceil((-np.min(x) + reach) / (2 * np.pi)))
    m = np.arange(mlo, mhi + 1)
    sign = np.where((n - 1) * m % 2 == 0, 1.0, -1.0)
    u = np.add.outer(x, 2 * np.pi * m) / (2 * eps)
    gauss = np.exp(-(u ** 2))
    if derivative:
        # d^k/dx^k e^{-u^2} = (-1/(2 eps))^k H_k(u) e^{-u^2}
        gauss = gauss * (-1.0 / (2 * eps)) ** derivative * eval_hermite(derivative, u)
    return (gauss @ sign) / (2 * math.sqrt(math.pi) * eps)


def theta_kernel(x, eps, n=1, representation="auto", derivative=0):
    """Heat kernel ``g_eps`` on the circle.

    .. math:: g_\\varepsilon(x) = \\frac1{2\\pi}\\sum_{s\\in\\mathbb Z}
              e^{-\\varepsilon^2 (s-h)^2 - i x (s-h)}
              = \\sum_{m\\in\\mathbb Z} \\frac{(-1)^{(n-1)m}}{2\\sqrt\\pi\\,\\varepsilon}
              e^{-(x+2\\pi m)^2/4\\varepsilon^2}, \\qquad h = (n-1)/2.

    Parameters
    ----------
    x : float or array_like
    eps : float
    n : int, default 1
        Only the parity of ``n - 1`` matters; for even ``n`` the kernel is
        ``2 pi``-antiperiodic.
    representation : {"auto", "fourier", "gaussian"}
        ``"auto"`` uses the Gaussian sum for ``eps < 1``.
    derivative : int, default 0
        Order of the ``x``-derivative.

    Returns
    -------
    float or ndarray
        Real values; terms below ``1e-16`` are dropped.
    """
    eps = _eps(eps)
    x_arr = np.asarray(x, dtype=float)
    xs = np.atleast_1d(x_arr).ravel()
    if representation == "auto":
        representation = "gaussian" if eps < 1 else "fourier"
    if representation == "gaussian":
        out = _theta_dual(xs, eps, n, derivative)
    elif representation == "fourier":
        out = np.real(_theta_fourier(xs, eps, n, derivative))
    else:
        raise ValueError(f"unknown representation {representation!r}")
    out = out.reshape(x_arr.shape)
    return float(out) if out.ndim == 0 else out


# --- unitary character series ----------------------------------------------


def _unitary_instance(inst):
    if inst.case is not HornCase.UNITARY:
        raise InvalidInstance("expected a unitary instance")
    if inst.n > 3:
        raise UnsupportedDimension("lattice sums are implemented for n <= 3")


def _default_S(eps, n):
    return int(math.ceil(6.0 / eps + n))


def _rank1_sum(lam, z):
    """``sum_p e^{lam z_p} / prod_{l != p}(z_l - z_p)`` over the last axis.

    Entries with coinciding ``z`` must be masked by the caller, except at
    ``n = 2`` where the removable singularity is handled.
    """
    z = np.asarray(z, dtype=complex)
    n = z.shape[-1]
    if n == 1:
        return np.exp(lam * z[..., 0])
    if n == 2:
        d = lam * (z[..., 1] - z[..., 0])
        small = np.abs(d) < 1e-12
        safe = np.where(small, 1.0, d)
        phi1 = np.where(small, 1.0 + 0.5 * d, np.expm1(safe) / safe)
        return -lam * np.exp(lam * z[..., 0]) * phi1
    total = np.zeros(z.shape[:-1], dtype=complex)
    for p in range(n):
        den = np.ones(z.shape[:-1], dtype=complex)
        for l in range(n):
            if l != p:
                den = den * (z[..., l] - z[..., p])
        total = total + np.exp(lam * z[..., p]) / den
    return total


def _lattice(S, n):
    axis = np.arange(-S, S + 1)
    grids = np.meshgrid(*([axis] * n), indexing="ij")
    return np.stack(grids, axis=-1)  # (2S+1,)*n + (n,)


def _series_coefficients(inst, eps, S):
    """``w(s) phi_b(s) det[e^{i a_j s_k}]`` on the lattice; zero at coincident ``s``."""
    n = inst.n
    s = _lattice(S, n).astype(float)
    h = 0.5 * (n - 1)
    w = np.exp(-(eps ** 2) * np.sum((s - h) ** 2, axis=-1))
    distinct = np.ones(s.shape[:-1], dtype=bool)
    for j in range(n):
        for k in range(j + 1, n):
            distinct &= s[..., j] != s[..., k]
    det_a = np.linalg.det(np.exp(1j * inst.a[None, :, None] * s[..., None, :].reshape(-1, 1, n)))
    det_a = det_a.reshape(s.shape[:-1])
    b = inst.b
    sm = np.where(distinct[..., None], s, np.arange(n, dtype=float))
    if n == 1:
        phi_b = np.exp(1j * b * s[..., 0])
    else:
        pref = math.factorial(n - 1) / (-np.expm1(1j * b)) ** (n - 1)
        phi_b = pref * _rank1_sum(1j * b, sm)
    coef = np.where(distinct, w * phi_b * det_a, 0.0)
    return coef


def _check_tail(coef, S):
    n = coef.ndim
    total = np.sum(np.abs(coef))
    inner = np.abs(coef[(slice(1, -1),) * n]).sum() if S > 1 else 0.0
    shell = total - inner
    if total > 0 and shell / total > 1e-3:
        raise TruncationTooSmall(
            f"outer lattice shell carries {shell / total:.2e} of the series; increase S"
        )


def unitary_series_density(inst, c, reg, trunc=None, return_complex=False):
    """Regularised unordered eigenphase density at full points ``c``.

    Evaluates the truncated character series of the heat-regularised
    product through the collapsed form
    ``Delta(e^{ic}) / ((2 pi)^n n! Delta(e^{ia})) * sum_s w(s) phi_b(s) det[e^{i a_j s_k}] e^{-i c.s}``.

    Parameters
    ----------
    inst : HornInstance
        Unitary instance with ``n <= 3``.
    c : (n,) or (m, n) array_like
    reg : float or RegularizerEps
    trunc : TruncationSpec, optional
    return_complex : bool, default False
        Return the raw complex sums (their imaginary part is round-off).
    """
    _unitary_instance(inst)
    eps = _eps(reg)
    n = inst.n
    S = _trunc(trunc).S or _default_S(eps, n)
    C = np.asarray(c, dtype=float)
    single = C.ndim == 1
    C = np.atleast_2d(C)
    coef = _series_coefficients(inst, eps, S)
    _check_tail(coef, S)
    axis = np.arange(-S, S + 1)
    out = np.empty(C.shape[0], dtype=complex)
    for i, ci in enumerate(C):
        t = coef
        for j in range(n - 1, -1, -1):
            t = t @ np.exp(-1j * ci[j] * axis)
        out[i] = t
    pref = vandermonde(np.exp(1j * C)) / (
        (2 * np.pi) ** n * math.factorial(n) * vandermonde(np.exp(1j * inst.a))
    )
    out = pref * out
    if not return_complex:
        out = out.real
    return out[0] if single else out


def unitary_series_literal(inst, c, reg, S=10, ordered=True):
    """Unordered series density at one full point ``c``, term by term.

    Uses the characters of :mod:`hornlab.spherical`. With ``ordered=True``
    only strictly decreasing ``s`` are summed and the result is multiplied
    by ``n!``; otherwise all distinct ``s`` are summed (coincident ``s``
    contribute nothing). Both give the same value. Slow; for cross-checks.
    """
    from itertools import product

    from .spherical import char_rank1, char_spherical

    _unitary_instance(inst)
    eps = _eps(reg)
    n = inst.n
    c = np.asarray(c, dtype=float).reshape(-1)
    h = 0.5 * (n - 1)
    total = 0.0 + 0.0j
    for s in product(range(-S, S + 1), repeat=n):
        s = np.array(s)
        if len(set(s.tolist())) < n:
            continue
        if ordered and np.any(np.diff(s) >= 0):
            continue
        order = np.argsort(-s, kind="stable")
        sd = s[order]
        dsq = vandermonde(sd.astype(float)) ** 2
        w = math.exp(-(eps ** 2) * float(np.sum((s - h) ** 2)))
        rank1 = char_rank1(inst.b, sd) if n > 1 else np.exp(1j * inst.b * sd[0])
        total += (dsq * w * char_spherical(inst.a, sd) * rank1
                  * char_spherical(-c, sd))
    if ordered:
        total *= math.factorial(n)
    sup = math.prod(math.factorial(j) for j in range(n + 1))
    absd = abs(vandermonde(np.exp(1j * c))) ** 2
    return complex(absd * total / ((2 * np.pi) ** n * sup ** 2))


def _esym(z):
    """Elementary symmetric polynomials ``e_0..e_m`` of the last axis."""
    m = z.shape[-1]
    e = [np.ones(z.shape[:-1], dtype=complex)] + [
        np.zeros(z.shape[:-1], dtype=complex) for _ in range(m)
    ]
    for j in range(m):
        for k in range(j + 1, 0, -1):
            e[k] = e[k] + z[..., j] * e[k - 1]
    return e


def inverse_unitary_series(inst, free_grid, reg, trunc=None, return_complex=False):
    """Regularised density of the ordered leading phases ``(c_1..c_{n-1})``.

    The unordered series density is integrated exactly over ``c_n`` (only
    Fourier modes ``s_n = 0..n-1`` survive) and multiplied by ``n!``. At
    points away from the support edges this approximates
    :func:`hornlab.densities.pdf_mult_unitary` as ``eps -> 0``.

    Parameters
    ----------
    inst : HornInstance
        Unitary instance, ``2 <= n <= 3``.
    free_grid : (n-1,) or (m, n-1) array_like
    reg : float or RegularizerEps
    trunc : TruncationSpec, optional
        ``S`` defaults to ``ceil(6/eps + n)``.
    return_complex : bool, default False
    """
    _unitary_instance(inst)
    n = inst.n
    if n < 2:
        raise UnsupportedDimension("the ordered marginal needs n >= 2")
    eps = _eps(reg)
    S = _trunc(trunc).S or _default_S(eps, n)
    F = np.asarray(free_grid, dtype=float)
    single = F.ndim == 1
    F = F.reshape(-1, n - 1)
    coef = _series_coefficients(inst, eps, S)
    _check_tail(coef, S)
    axis = np.arange(-S, S + 1)
    out = np.empty(F.shape[0], dtype=complex)
    for i, f in enumerate(F):
        z = np.exp(1j * f)
        e = _esym(-z)
        acc = 0.0 + 0.0j
        for m in range(n):
            if m + S >= coef.shape[-1]:
                continue
            t = coef[..., m + S]
            for j in range(n - 2, -1, -1):
                t = t @ np.exp(-1j * f[j] * axis)
            # coefficient of z_n^m in prod_{l<n}(z_n - z_l)
            acc += e[n - 1 - m] * t
        out[i] = vandermonde(z) * acc
    out = out / ((2 * np.pi) ** (n - 1) * vandermonde(np.exp(1j * inst.a)))
    if not return_complex:
        out = out.real
    return out[0] if single else out


# --- Hermitian and positive quadratures -------------------------------------


def hermitian_integrand(y, c, inst, reg):
    """Integrand of the regularised additive inversion at real ``y``.

    ``prod e^{-eps^2 y_j^2} det[e^{i c_j y_k}] det[e^{-i a_j y_k}]
    sum_p e^{-i b y_p} / prod_{l != p}(y_l - y_p)``
    """
    eps = _eps(reg)
    y = np.asarray(y, dtype=float)
    c = np.asarray(c, dtype=float)
    a = np.asarray(inst.a, dtype=float)
    gauss = np.exp(-(eps ** 2) * np.sum(y ** 2, axis=-1))
    det_c = np.linalg.det(np.exp(1j * c[:, None] * y[..., None, :]))
    det_a = np.linalg.det(np.exp(-1j * a[:, None] * y[..., None, :]))
    return gauss * det_c * det_a * _rank1_sum(-1j * inst.b, y)


def _positive_core(s, inst, eps):
    # every factor of the Herm+ integrand except det[e^{-c_j z_k}]
    s = np.asarray(s, dtype=complex)
    a = np.asarray(inst.a, dtype=float)
    n = s.shape[-1]
    j = np.arange(1, n + 1)
    z = j - 1 + 1j * s
    reg_fac = np.exp(np.sum((eps ** 2) * ((j + 1j * s) ** 2 - j ** 2), axis=-1))
    det_a = np.linalg.det(np.exp(a[:, None] * z[..., None, :]))
    return _rank1_sum(inst.b, z) * reg_fac * det_a, z


def positive_integrand(s, c, inst, reg):
    """Integrand of the regularised Herm+ inversion at complex ``s``.

    ``sum_p e^{b z_p}/prod_{l != p}(z_l - z_p) prod_j e^{eps^2 (j + i s_j)^2 - eps^2 j^2}
    det[e^{-c_j z_k}] det[e^{a_j z_k}]`` with ``z_k = k - 1 + i s_k``.
    """
    eps = _eps(reg)
    c = np.asarray(c, dtype=float)
    core, z = _positive_core(s, inst, eps)
    det_c = np.linalg.det(np.exp(-c[:, None] * z[..., None, :]))
    return core * det_c


def _quad_setup(inst, c, eps, trunc):
    n = inst.n
    if n != 2:
        raise UnsupportedDimension("quadrature inversions are implemented for n = 2")
    trunc = _trunc(trunc)
    L = trunc.domain_halfwidth or 8.0 / (math.sqrt(n) * eps)
    if math.exp(-((eps * L) ** 2)) > 1e-12:
        raise TruncationTooSmall(f"domain half-width {L:g} leaves Gaussian tail above 1e-12")
    spread = np.max(np.abs(np.asarray(c) - np.mean(inst.a))) + np.ptp(inst.a) + abs(inst.b)
    needed = int(math.ceil(1.3 * spread * L + 40))
    Q = max(int(trunc.quad_pts), needed)
    return L, Q


def _herm_quadrature(inst, C, eps, trunc):
    """Unordered regularised additive density at full points ``C`` (m, 2)."""
    C = np.atleast_2d(np.asarray(C, dtype=float))
    shift = float(np.mean(inst.a))
    a = inst.a - shift
    Cs = C - shift
    L, Q = _quad_setup(inst, Cs, eps, trunc)
    y, w = _gl(Q, -L, L)
    Y1, Y2 = np.meshgrid(y, y, indexing="ij")
    Y = np.stack([Y1, Y2], axis=-1)
    gauss = np.exp(-(eps ** 2) * (Y1 ** 2 + Y2 ** 2))
    det_a = np.exp(-1j * (a[0] * Y1 + a[1] * Y2)) - np.exp(-1j * (a[0] * Y2 + a[1] * Y1))
    A = np.outer(w, w) * gauss * det_a * _rank1_sum(-1j * inst.b, Y)
    out = np.empty(C.shape[0], dtype=complex)
    for i, ci in enumerate(Cs):
        u1, u2 = np.exp(1j * ci[0] * y), np.exp(1j * ci[1] * y)
        out[i] = u1 @ A @ u2 - u2 @ A @ u1
    n = 2
    pref = ((-1j) ** (n - 1) * math.factorial(n - 1)
            / (math.factorial(n) ** 2 * inst.b ** (n - 1) * (2 * np.pi) ** n))
    pref = pref * vandermonde(C) / vandermonde(inst.a)
    return pref * out


def inverse_hermitian_quadrature(inst, c, reg, trunc=None, return_complex=False):
    """Regularised unordered eigenvalue density of ``A + b w w^dagger + GUE_eps``.

    Tensor Gauss-Legendre quadrature of the inversion integral over
    ``[-L, L]^2`` with ``L = 8/(sqrt(n) eps)`` by default; the node count
    grows with the oscillation frequency. ``n = 2`` only.

    Parameters
    ----------
    inst : HornInstance
        Additive instance with ``n = 2``.
    c : (2,) or (m, 2) array_like
        Full eigenvalue points (not constrained).
    reg : float or RegularizerEps
    trunc : TruncationSpec, optional
    return_complex : bool, default False
    """
    if inst.case is not HornCase.ADDITIVE:
        raise InvalidInstance("expected an additive instance")
    eps = _eps(reg)
    C = np.asarray(c, dtype=float)
    out = _herm_quadrature(inst, C, eps, trunc)
    if not return_complex:
        out = out.real
    return out[0] if C.ndim == 1 else out


def inverse_pos_quadrature(inst, c, reg, trunc=None, return_complex=False,
                           keep_vanishing_factor=False):
    """Regularised unordered log-eigenvalue density for the Herm+ product, ``n = 2``.

    Integrates :func:`positive_integrand` along ``s_j = -y_j + i j``.
    ``keep_vanishing_factor=False`` drops the constant
    ``prod_j e^{-eps^2 j^2}``, which tends to 1 with ``eps``.
    """
    if inst.case is not HornCase.POSITIVE:
        raise InvalidInstance("expected a positive instance")
    eps = _eps(reg)
    C = np.atleast_2d(np.asarray(c, dtype=float))
    n = inst.n
    L, Q = _quad_setup(inst, C, eps, trunc)
    y, w = _gl(Q, -L, L)
    Y1, Y2 = np.meshgrid(y, y, indexing="ij")
    S = np.stack([-Y1 + 1j, -Y2 + 2j], axis=-1)
    # c-independent part of the integrand, with det[e^{-c_j z_k}] factored out
    A = np.outer(w, w) * _positive_core(S, inst, eps)[0]
    z = -1.0 - 1j * y  # z_1 and z_2 both take this form along the contour
    out = np.empty(C.shape[0], dtype=complex)
    for i, ci in enumerate(C):
        u1, u2 = np.exp(-ci[0] * z), np.exp(-ci[1] * z)
        out[i] = u1 @ A @ u2 - u2 @ A @ u1
    pref = (math.factorial(n - 1)
            / (math.factorial(n) ** 2 * (-math.expm1(inst.b)) ** (n - 1) * (2 * np.pi) ** n))
    pref = pref * vandermonde(np.exp(C)) / vandermonde(np.exp(inst.a))
    out = pref * out
    if not keep_vanishing_factor:
        out = out * math.exp((eps ** 2) * sum(j * j for j in range(1, n + 1)))
    if not return_complex:
        out = out.real
    return out[0] if np.asarray(c).ndim == 1 else out


def quadrature_marginal(inst, t, reg, trunc=None, halfwidth=None, nodes=64):
    """Ordered density of ``c_1`` at ``t`` from a quadrature inversion.

    Integrates the unordered regularised density over ``c_2`` in a window
    around the constraint value ``sum(a) + b - t`` and multiplies by ``n!``.
    """
    eps = _eps(reg)
    if inst.n != 2:
        raise UnsupportedDimension("quadrature inversions are implemented for n = 2")
    centre = inst.total - t
    hw = halfwidth if halfwidth is not None else 20.0 * eps
    c2, w = _gl(int(nodes), centre - hw, centre + hw)
    C = np.column_stack([np.full_like(c2, t), c2])
    if inst.case is HornCase.ADDITIVE:
        vals = inverse_hermitian_quadrature(inst, C, eps, trunc)
    elif inst.case is HornCase.POSITIVE:
        vals = inverse_pos_quadrature(inst, C, eps, trunc)
    else:
        raise InvalidInstance("quadrature marginals cover the additive and positive cases")
    return float(2.0 * np.sum(w * vals))


# --- forward transforms of the regularisers ---------------------------------


@dataclass(frozen=True)
class TransformReport:
    quadrature_value: complex
    closed_form: complex
    rel_err: float


def _tensor_grid(n, lo, hi, q):
    x, w = _gl(int(q), float(lo), float(hi))
    grids = np.meshgrid(*([x] * n), indexing="ij")
    X = np.stack(grids, axis=-1).reshape(-1, n)
    W = np.ones(X.shape[0])
    for g in np.meshgrid(*([w] * n), indexing="ij"):
        W = W * g.ravel()
    return X, W


def _gue_weight(X, eps):
    return vandermonde(X) ** 2 * np.exp(-np.sum(X ** 2, axis=-1) / (4 * eps ** 2))


def _mb_weight(X, eps):
    # density in x = log(lambda), including the Jacobian e^{sum x}
    return (vandermonde(X) * vandermonde(np.exp(X))
            * np.exp(-np.sum(X ** 2, axis=-1) / (4 * eps ** 2) + np.sum(X, axis=-1)))


def _mb_centre_width(n, eps):
    # the log-eigenvalues concentrate around (n-1) eps^2 * 2 with spread ~ eps
    return 2.0 * (n - 1) * eps ** 2 + n * eps ** 2, eps


def forward_transform_check(which, reg, s, quad_pts=256, halfwidth=None):
    """Forward spherical transform of a regulariser by quadrature.

    Parameters
    ----------
    which : {"gue", "muttalib_borodin"}
    reg : float or RegularizerEps
    s : (n,) array_like of complex
        ``n = len(s)`` in ``{1, 2, 3}``.
    quad_pts : int, default 256
    halfwidth : float, optional
        Half-width of the eigenvalue box, default ``12 eps``.

    Returns
    -------
    TransformReport
        GUE target ``prod e^{-eps^2 s_j^2}``; Muttalib-Borodin target
        ``prod_j e^{eps^2 (s_j - n + 1)^2 - eps^2 j^2}``.
    """
    eps = _eps(reg)
    s = np.asarray(s, dtype=complex).reshape(-1)
    n = s.shape[0]
    if n > 3:
        raise UnsupportedDimension("forward checks are implemented for n <= 3")
    hw = halfwidth if halfwidth is not None else 12.0 * eps
    key = str(which).lower()
    if key == "gue":
        X, W = _tensor_grid(n, -hw, hw, quad_pts)
        dens = _gue_weight(X, eps)
        phi = hciz(-1j * X, s)
        target = np.prod(np.exp(-(eps ** 2) * s ** 2))
    elif key in ("muttalib_borodin", "mb"):
        centre, _ = _mb_centre_width(n, eps)
        X, W = _tensor_grid(n, centre - hw, centre + hw, quad_pts)
        dens = _mb_weight(X, eps)
        phi = np.exp(-n * np.sum(X, axis=-1)) * gn_spherical(X, s)
        j = np.arange(1, n + 1)
        target = np.prod(np.exp(eps ** 2 * (s - n + 1) ** 2 - eps ** 2 * j ** 2))
    else:
        raise ValueError(f"unknown regulariser {which!r}")
    Z = np.sum(W * dens)
    if not np.isfinite(Z) or Z <= 0:
        raise QuadratureNotConverged("normalisation integral is not positive")
    val = np.sum(W * dens * phi) / Z
    _check_box_edge(X, dens, hw, quad_pts)
    rel = abs(val - target) / abs(target)
    return TransformReport(complex(val), complex(target), float(rel))


def _check_box_edge(X, dens, hw, q):
    # the weight on the outermost nodes must be negligible
    shape = (int(q),) * X.shape[-1]
    D = np.abs(dens).reshape(shape)
    edge = 0.0
    for ax in range(D.ndim):
        edge = max(edge, float(np.take(D, [0, -1], axis=ax).max()))
    if edge > 1e-5 * float(D.max()):
        raise QuadratureNotConverged("integration box truncates the density; widen halfwidth")


def mb_normalization(eps, n=2, quad_pts=128):
    """Numerical normalisation of the Muttalib-Borodin eigenvalue density.

    Integrates ``Delta(e^x) det[(-d/dx_k)^{j-1} e^{-x_k^2/4eps^2}/(2 sqrt(pi) eps)]``
    against ``prod_k e^{x_k} dx_k``; compare with ``n! prod_j j! e^{(j+1)^2 eps^2}``.
    """
    eps = _eps(eps)
    centre, _ = _mb_centre_width(n, eps)
    X, W = _tensor_grid(n, centre - 14 * eps, centre + 14 * eps, quad_pts)
    M = np.empty(X.shape + (n,))
    for j in range(n):
        # (-d/dx)^j of the Gaussian = (1/(2 eps))^j H_j(x/(2 eps)) e^{-x^2/4eps^2}
        u = X / (2 * eps)
        M[..., j, :] = ((1 / (2 * eps)) ** j * eval_hermite(j, u) * np.exp(-(u ** 2))
                        / (2 * math.sqrt(math.pi) * eps))
    vals = vandermonde(np.exp(X)) * np.linalg.det(M) * np.exp(np.sum(X, axis=-1))
    return float(np.sum(W * vals))


# --- regulariser densities ---------------------------------------------------


def _uheat_weight(X, eps):
    n = X.shape[-1]
    M = np.empty(X.shape + (n,))
    for j in range(n):
        M[..., j, :] = (-1.0) ** j * theta_kernel(X, eps, n, derivative=j)
    det = np.linalg.det(M) if n > 1 else M[..., 0, 0]
    sines = np.ones(X.shape[0])
    for k in range(n):
        for l in range(k + 1, n):
            sines = sines * 2 * np.sin((X[:, l] - X[:, k]) / 2)
    # (1/prod 2 sin) * det times the Haar weight |Delta(e^{ix})|^2 = prod (2 sin)^2
    return sines * det


@lru_cache(maxsize=64)
def _regularizer_norm(key, n, eps, q):
    if key == "gue_eigen":
        X, W = _tensor_grid(n, -14 * eps, 14 * eps, q)
        return float(np.sum(W * _gue_weight(X, eps)))
    if key == "mb_eigen":
        centre, _ = _mb_centre_width(n, eps)
        X, W = _tensor_grid(n, centre - 14 * eps, centre + 14 * eps, q)
        return float(np.sum(W * _mb_weight(X, eps)))
    X, W = _tensor_grid(n, -np.pi, np.pi, q)
    return float(np.sum(W * _uheat_weight(X, eps)))


def pdf_regularizer(which, point, reg, quad_pts=96):
    """Normalised unordered eigenvalue density of a regulariser.

    Parameters
    ----------
    which : {"gue_eigen", "mb_eigen", "uheat_eigen"}
        GUE eigenvalues; Muttalib-Borodin log-eigenvalues (density in
        ``x = log(lambda)``); heat-kernel eigenphases on ``(-pi, pi]^n``.
    point : (n,) or (m, n) array_like
    reg : float or RegularizerEps
    quad_pts : int, default 96
        Nodes per axis for the cached normalisation.
    """
    eps = _eps(reg)
    key = str(which).lower()
    if key not in ("gue_eigen", "mb_eigen", "uheat_eigen"):
        raise ValueError(f"unknown regulariser {which!r}")
    X = np.asarray(point, dtype=float)
    single = X.ndim <= 1
    X = np.atleast_2d(X.reshape(1, -1) if X.ndim == 0 else X)
    n = X.shape[-1]
    if n > 3:
        raise UnsupportedDimension("regulariser densities are implemented for n <= 3")
    Z = _regularizer_norm(key, n, float(eps), int(quad_pts))
    if key == "gue_eigen":
        vals = _gue_weight(X, eps)
    elif key == "mb_eigen":
        vals = _mb_weight(X, eps)
    else:
        vals = _uheat_weight(X, eps)
    out = vals / Z
    return float(out[0]) if single else out
