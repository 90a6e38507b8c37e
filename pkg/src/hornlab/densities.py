"""Closed-form eigenvalue densities of the rank-1 Horn models.

The constraint ``sum(c) = sum(a) + b`` (a phase sum for the unitary case)
is resolved by eliminating ``c_n``. Densities are therefore functions of
the free coordinates ``(c_1, ..., c_{n-1})`` with respect to Lebesgue
measure on them; the coefficient of ``c_n`` in the constraint is 1, so no
Jacobian appears.

With ``c`` on the ordered chamber the three densities are

* additive: ``(n-1)!/b^(n-1) * Delta(c)/Delta(a)``
* positive (log-eigenvalues): ``(n-1)!/(e^b-1)^(n-1) * Delta(e^c)/Delta(e^a)``
* unitary (phases): ``(n-1)!/(2 sin(b/2))^(n-1) * prod_{j<k} sin((c_j-c_k)/2)/sin((a_j-a_k)/2)``

where unitary phases are unwrapped into ``(a_n, a_n + 2 pi]`` and ``b`` is
taken mod ``2 pi`` in ``(0, 2 pi)``.

The support is a convex polytope in the free coordinates, so marginal
CDFs at ``n = 2, 3`` come from exact clipping plus Gauss-Legendre
quadrature on triangles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.interpolate import PchipInterpolator

from .exceptions import DegenerateSpectrum, LengthMismatch, UnsupportedDimension
from .instance import HornCase, HornInstance
from .matrix_core import PhaseSpectrum, Spectrum, vandermonde

__all__ = [
    "BOUNDARY_TOL",
    "SupportCheck",
    "ConstrainedPoint",
    "interlaces",
    "circular_interlaces",
    "unwrap_phases",
    "resolve_constraint",
    "pdf_additive",
    "pdf_mult_pos",
    "pdf_mult_unitary",
    "pdf_instance",
    "pdf_on_grid",
    "pdf_symmetric",
    "support_polytope",
    "marginal_support",
    "cdf_marginal",
    "marginal_cdf_function",
    "integrate_pdf",
]

BOUNDARY_TOL = 1e-9
TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class SupportCheck:
    """Outcome of a support test; ``margin`` is the smallest slack."""

    ok: bool
    margin: float

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class ConstrainedPoint:
    """Free coordinates plus the eliminated ``c_n``."""

    free: np.ndarray
    resolved: float
    case: HornCase

    @property
    def full(self):
        return np.append(self.free, self.resolved)


def _values(x):
    if isinstance(x, Spectrum):
        return x.values
    if isinstance(x, PhaseSpectrum):
        return x.angles
    return np.asarray(x, dtype=float).reshape(-1)


def _chain_gaps(a, c):
    # c_1 - a_1, a_1 - c_2, c_2 - a_2, ..., c_n - a_n along the last axis
    n = a.shape[-1]
    gaps = [c[..., 0] - a[..., 0]]
    for j in range(1, n):
        gaps.append(a[..., j - 1] - c[..., j])
        gaps.append(c[..., j] - a[..., j])
    return np.stack(gaps, axis=-1)


def interlaces(a, c):
    """Strict interlacing ``c_1 > a_1 > c_2 > ... > c_n > a_n``."""
    a, c = _values(a), _values(c)
    if a.shape != c.shape:
        raise LengthMismatch(f"a has length {a.size}, c has length {c.size}")
    margin = float(np.min(_chain_gaps(a, c)))
    return SupportCheck(margin > 0, margin)


def unwrap_phases(c, a_n):
    """Shift phases by multiples of ``2 pi`` into the window ``(a_n, a_n + 2 pi]``."""
    c = np.asarray(c, dtype=float)
    return a_n + TWO_PI - np.mod(a_n + TWO_PI - c, TWO_PI)


def circular_interlaces(a, c, b):
    """Circular interlacing ``2 pi + a_n >= c_1 > a_1 > ... > c_n > a_n``.

    ``c`` is unwrapped into ``(a_n, a_n + 2 pi]`` and re-sorted first. The
    top gap ``2 pi + a_n - c_1`` also enters the margin, so a ``c`` entry
    equal to an ``a`` entry modulo ``2 pi`` is rejected.
    """
    a, c = _values(a), _values(c)
    if a.shape != c.shape:
        raise LengthMismatch(f"a has length {a.size}, c has length {c.size}")
    if float(b) == 0.0 or not np.isfinite(b):
        raise ValueError("b must be a finite non-zero phase")
    cu = np.sort(unwrap_phases(c, a[-1]))[::-1]
    gaps = np.append(_chain_gaps(a, cu), TWO_PI + a[-1] - cu[0])
    margin = float(np.min(gaps))
    return SupportCheck(margin > 0, margin)


def _unwrap_free(free, inst):
    if inst.case is HornCase.UNITARY:
        return unwrap_phases(free, inst.a[-1])
    return free


def _resolve(free, inst):
    """Full coordinates for a batch of free points, shape (m, n)."""
    free = _unwrap_free(free, inst)
    last = inst.total - free.sum(axis=-1)
    if inst.case is HornCase.UNITARY:
        last = unwrap_phases(last, inst.a[-1])
    return np.concatenate([free, last[..., None]], axis=-1)


def resolve_constraint(free, inst):
    """Eliminate ``c_n`` with the trace, determinant or phase-sum constraint.

    Examples
    --------
    >>> inst = HornInstance("additive", [1.0, 0.0], 0.5)
    >>> resolve_constraint([1.25], inst).resolved
    0.25
    """
    free = np.asarray(free, dtype=float).reshape(-1)
    if free.shape[0] != inst.n - 1:
        raise LengthMismatch(f"expected {inst.n - 1} free coordinates, got {free.shape[0]}")
    full = _resolve(free[None, :], inst)[0]
    return ConstrainedPoint(full[:-1].copy(), float(full[-1]), inst.case)


def _log_prefactor_free(inst):
    n, b = inst.n, inst.effective_b
    lf = math.lgamma(n)
    if inst.case is HornCase.ADDITIVE:
        return lf - (n - 1) * math.log(b)
    if inst.case is HornCase.POSITIVE:
        return lf - (n - 1) * math.log(math.expm1(b))
    return lf - (n - 1) * math.log(2 * math.sin(b / 2))


def _pair_product(x, fn):
    # prod_{j<k} fn(x_j - x_k)
    n = x.shape[-1]
    out = np.ones(x.shape[:-1])
    for j in range(n):
        for k in range(j + 1, n):
            out = out * fn(x[..., j], x[..., k])
    return out


def _shape_factor(C, inst):
    a = inst.a
    if inst.case is HornCase.ADDITIVE:
        return vandermonde(C) / vandermonde(a)
    if inst.case is HornCase.POSITIVE:
        # e^{x_j} - e^{x_k} = e^{x_k} expm1(x_j - x_k)
        f = lambda u, v: np.exp(v) * np.expm1(u - v)  # noqa: E731
        return _pair_product(C, f) / _pair_product(a, f)
    f = lambda u, v: np.sin((u - v) / 2)  # noqa: E731
    return _pair_product(C, f) / _pair_product(a, f)


def _support_mask(C, inst):
    a = inst.a
    gaps = _chain_gaps(np.broadcast_to(a, C.shape), C)
    if inst.case is HornCase.UNITARY:
        top = TWO_PI + a[-1] - C[..., 0]
        gaps = np.concatenate([gaps, top[..., None]], axis=-1)
    return np.all(gaps > 0, axis=-1)


def _min_distance(C, inst):
    d = np.abs(C[:, :, None] - inst.a[None, None, :])
    if inst.case is HornCase.UNITARY:
        d = np.mod(d, TWO_PI)
        d = np.minimum(d, TWO_PI - d)
    return d.reshape(d.shape[0], -1).min(axis=-1)


def _density_full(C, inst):
    """Ordered density at full (unwrapped) points ``C`` of shape (m, n); no checks."""
    val = np.exp(_log_prefactor_free(inst)) * _shape_factor(C, inst)
    return np.where(_support_mask(C, inst), val, 0.0)


def _density_free(F, inst):
    return _density_full(_resolve(F, inst), inst)


def _evaluate(free, inst, case):
    if inst.case is not case:
        raise ValueError(f"instance is {inst.case.value}, expected {case.value}")
    if inst.n < 2:
        raise UnsupportedDimension("closed-form densities need n >= 2")
    free = np.asarray(free, dtype=float)
    single = free.ndim <= 1
    F = free.reshape(1, -1) if single else free
    if F.shape[-1] != inst.n - 1:
        raise LengthMismatch(f"expected {inst.n - 1} free coordinates, got {F.shape[-1]}")
    C = _resolve(F, inst)
    if np.any(_min_distance(C, inst) < BOUNDARY_TOL):
        raise DegenerateSpectrum("a point of c lies within 1e-9 of an entry of a")
    out = _density_full(C, inst)
    return float(out[0]) if single else out


def pdf_on_grid(free, inst):
    """Density at rows of ``free`` with no degeneracy check.

    Points where some ``c_j`` meets an entry of ``a`` get the continuous
    extension of the closed form, which suits regular grids that may hit
    the boundary of the support.
    """
    if inst.n < 2:
        raise UnsupportedDimension("closed-form densities need n >= 2")
    F = np.atleast_2d(np.asarray(free, dtype=float))
    if F.shape[-1] != inst.n - 1:
        raise LengthMismatch(f"expected {inst.n - 1} free coordinates, got {F.shape[-1]}")
    return _density_free(F, inst)


def pdf_additive(free, inst):
    """Density of ``(c_1, ..., c_{n-1})`` for ``C = A + b w w^dagger``.

    Parameters
    ----------
    free : (n-1,) or (m, n-1) array_like
        Leading eigenvalues; ``c_n`` follows from the trace.
    inst : HornInstance
        Additive instance.

    Returns
    -------
    float or (m,) ndarray
        Zero off the interlacing region.

    Examples
    --------
    >>> pdf_additive([1.25], HornInstance("additive", [1.0, 0.0], 0.5))
    2.0
    """
    return _evaluate(free, inst, HornCase.ADDITIVE)


def pdf_mult_pos(free, inst):
    """Density of the leading log-eigenvalues of ``A^{1/2} B A^{1/2}``.

    The reference measure is ``dc_1 ... dc_{n-1}`` in log coordinates.
    """
    return _evaluate(free, inst, HornCase.POSITIVE)


def pdf_mult_unitary(free, inst):
    """Density of the leading eigenphases of ``A (I + (e^{ib}-1) w w^dagger)``.

    Phases are unwrapped into ``(a_n, a_n + 2 pi]`` before evaluation; the
    density is real and non-negative by construction.
    """
    return _evaluate(free, inst, HornCase.UNITARY)


def pdf_instance(free, inst):
    """Dispatch to the density of ``inst.case``."""
    return _evaluate(free, inst, inst.case)


def pdf_symmetric(c, inst):
    """Permutation-invariant density at a full point ``c`` on the constraint.

    Uses the bordered determinant with Heaviside entries (additive and
    positive) or ``mod_2pi(a_j - c_k) / 2pi`` entries (unitary). On the
    ordered chamber it equals the ordered density divided by ``n!``.
    """
    c = np.asarray(c, dtype=float).reshape(-1)
    n = inst.n
    if c.shape[0] != n:
        raise LengthMismatch(f"expected {n} coordinates, got {c.shape[0]}")
    a, b = inst.a, inst.b
    border = np.zeros((n + 1, n + 1), dtype=complex)
    border[0, 1:] = 1.0
    border[1:, 0] = 1.0
    if inst.case is HornCase.UNITARY:
        # entry (j, k) uses a_j and c_k
        border[1:, 1:] = np.mod(a[:, None] - c[None, :], TWO_PI) / TWO_PI
        z = np.exp(1j * c)
        pref = -(1j ** (n - 1)) / (n * (np.exp(1j * b) - 1) ** (n - 1))
        val = pref * vandermonde(z) / vandermonde(np.exp(1j * a)) * np.linalg.det(border)
        return float(val.real)
    border[1:, 1:] = (c[:, None] - a[None, :] > 0).astype(float)
    det = np.linalg.det(border).real
    if inst.case is HornCase.ADDITIVE:
        ratio = vandermonde(c) / vandermonde(a)
        scale = b ** (n - 1)
    else:
        ratio = vandermonde(np.exp(c)) / vandermonde(np.exp(a))
        scale = math.expm1(b) ** (n - 1)
    return float(-ratio * det / (n * scale))


# --- support geometry -------------------------------------------------------


def _halfplanes(inst):
    """Inequalities ``G @ free + h > 0`` describing the support.

    Returns ``(G, h)`` with ``G`` of shape (k, n-1).
    """
    n, a, T = inst.n, inst.a, inst.total
    m = n - 1

    def coord(j):
        # c_j as (coefficients on free, constant)
        if j < m:
            g = np.zeros(m)
            g[j] = 1.0
            return g, 0.0
        return -np.ones(m), T

    rows = []
    g, h = coord(0)
    rows.append((g, h - a[0]))
    for j in range(1, n):
        g, h = coord(j)
        rows.append((-g, a[j - 1] - h))
        rows.append((g, h - a[j]))
    if inst.case is HornCase.UNITARY:
        g, h = coord(0)
        rows.append((-g, TWO_PI + a[-1] - h))
    G = np.array([r[0] for r in rows])
    hh = np.array([r[1] for r in rows])
    return G, hh


def _clip(poly, g, h):
    """Sutherland-Hodgman: keep the part of ``poly`` with ``g.x + h >= 0``."""
    out = []
    k = len(poly)
    for i in range(k):
        p, q = poly[i], poly[(i + 1) % k]
        fp, fq = g @ p + h, g @ q + h
        if fp >= 0:
            out.append(p)
        if (fp >= 0) != (fq >= 0):
            t = fp / (fp - fq)
            out.append(p + t * (q - p))
    return out


def _interval(G, h, lo=-np.inf, hi=np.inf):
    for g, c in zip(G[:, 0], h):
        if g > 0:
            lo = max(lo, -c / g)
        elif g < 0:
            hi = min(hi, -c / g)
        elif c < 0:
            return None
    return (lo, hi) if hi > lo else None


def support_polytope(inst):
    """Support in free coordinates: an interval (n=2) or polygon vertices (n=3)."""
    G, h = _halfplanes(inst)
    if inst.n == 2:
        return _interval(G, h)
    if inst.n == 3:
        big = 10.0 * (np.max(np.abs(inst.a)) + abs(inst.effective_b) + TWO_PI)
        poly = [np.array(v, dtype=float) for v in
                [(-big, -big), (big, -big), (big, big), (-big, big)]]
        for g, c in zip(G, h):
            poly = _clip(poly, g, c)
            if not poly:
                return []
        return poly
    raise UnsupportedDimension("support geometry is implemented for n = 2 and 3")


def _coordinate_functional(k, inst):
    """``c_k`` (1-based) as ``g @ free + h``."""
    m = inst.n - 1
    if not 1 <= k <= inst.n:
        raise LengthMismatch(f"coordinate index {k} outside 1..{inst.n}")
    if k <= m:
        g = np.zeros(m)
        g[k - 1] = 1.0
        return g, 0.0
    return -np.ones(m), inst.total


def marginal_support(k, inst):
    """Range ``(lo, hi)`` of ``c_k`` over the support."""
    g, h = _coordinate_functional(k, inst)
    if inst.n == 2:
        lo, hi = support_polytope(inst)
        vals = [g[0] * lo + h, g[0] * hi + h]
    else:
        vals = [g @ v + h for v in support_polytope(inst)]
    return float(min(vals)), float(max(vals))


@lru_cache(maxsize=32)
def _gauss_legendre(q):
    x, w = np.polynomial.legendre.leggauss(q)
    return 0.5 * (x + 1.0), 0.5 * w


def _integrate_interval(inst, lo, hi, q):
    if hi <= lo:
        return 0.0
    x, w = _gauss_legendre(q)
    pts = lo + (hi - lo) * x
    return float((hi - lo) * np.sum(w * _density_free(pts[:, None], inst)))


def _integrate_polygon(inst, poly, q):
    if len(poly) < 3:
        return 0.0
    x, w = _gauss_legendre(q)
    U, V = np.meshgrid(x, x, indexing="ij")
    W = np.outer(w, w)
    total = 0.0
    v0 = poly[0]
    for v1, v2 in zip(poly[1:-1], poly[2:]):
        area2 = abs((v1[0] - v0[0]) * (v2[1] - v0[1]) - (v1[1] - v0[1]) * (v2[0] - v0[0]))
        if area2 == 0:
            continue
        # collapsed square: (u, v) -> v0 + u (v1 - v0) + u v (v2 - v1)
        P = (v0[None, None, :] + U[..., None] * (v1 - v0)
             + (U * V)[..., None] * (v2 - v1))
        vals = _density_free(P.reshape(-1, 2), inst).reshape(U.shape)
        total += area2 * float(np.sum(W * U * vals))
    return total


def integrate_pdf(inst, quad_pts=64):
    """Integral of the density over its support (should be 1)."""
    return cdf_marginal(1, np.inf, inst, quad_pts)


def cdf_marginal(k, t, inst, quad_pts=64):
    """CDF of the ``k``-th largest eigenvalue (1-based) at ``t``.

    Unitary phases are measured in the unwrapped window ``(a_n, a_n + 2 pi]``.

    Parameters
    ----------
    k : int
    t : float
    inst : HornInstance
        ``n`` must be 2 or 3.
    quad_pts : int, default 64
        Gauss-Legendre points per direction.

    Examples
    --------
    >>> round(cdf_marginal(1, 1.25, HornInstance("additive", [1.0, 0.0], 0.5)), 12)
    0.375
    """
    if inst.n not in (2, 3):
        raise UnsupportedDimension("marginal CDFs are implemented for n = 2 and 3")
    if quad_pts < 64:
        raise ValueError("quad_pts must be at least 64")
    lo, hi = marginal_support(k, inst)
    if t <= lo:
        return 0.0
    g, h = _coordinate_functional(k, inst)
    G, hh = _halfplanes(inst)
    if t < hi:
        G = np.vstack([G, -g])
        hh = np.append(hh, t - h)
    if inst.n == 2:
        iv = _interval(G, hh)
        val = 0.0 if iv is None else _integrate_interval(inst, iv[0], iv[1], quad_pts)
    else:
        poly = support_polytope(inst)
        if t < hi:
            poly = _clip(poly, -g, t - h)
        val = _integrate_polygon(inst, poly, quad_pts)
    return float(min(max(val, 0.0), 1.0))


def marginal_cdf_function(k, inst, grid_pts=401, quad_pts=64):
    """Vectorised CDF of ``c_k``: monotone interpolation of exact grid values.

    Nodes are Chebyshev-clustered toward the support endpoints where the
    CDF has its largest curvature.
    """
    lo, hi = marginal_support(k, inst)
    u = 0.5 * (1 - np.cos(np.linspace(0.0, np.pi, grid_pts)))
    ts = lo + (hi - lo) * u
    vals = np.array([cdf_marginal(k, t, inst, quad_pts) for t in ts])
    vals[0], vals[-1] = 0.0, 1.0
    vals = np.maximum.accumulate(vals)
    interp = PchipInterpolator(ts, vals, extrapolate=False)

    def cdf(t):
        t = np.asarray(t, dtype=float)
        out = interp(np.clip(t, lo, hi))
        out = np.where(t <= lo, 0.0, np.where(t >= hi, 1.0, out))
        return np.clip(out, 0.0, 1.0)

    cdf.support = (lo, hi)
    return cdf
