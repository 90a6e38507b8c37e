"""scikit-learn style wrappers.

``RankOneHorn`` bundles an instance with its sampler and density;
``EigenvalueTransformer`` and ``SphericalFunctionTransformer`` chain into a
:class:`sklearn.pipeline.Pipeline` that maps random matrices to spherical
function values, whose mean is a Monte Carlo spherical transform.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .densities import cdf_marginal, pdf_instance
from .exceptions import DegenerateSpectrum, LengthMismatch
from .instance import HornCase, HornInstance
from .sampling import sample_instance
from .validation import check_points, check_random_state

__all__ = ["RankOneHorn", "EigenvalueTransformer", "SphericalFunctionTransformer"]


class RankOneHorn(BaseEstimator):
    """Rank-1 randomised Horn model with sampling and exact density.

    Parameters
    ----------
    case : {"additive", "positive", "unitary"}
    a : array_like
        Strictly decreasing spectrum (log-eigenvalues or phases for the
        multiplicative cases).
    b : float
        Rank-1 strength.
    random_state : int, RngStream, Generator or None

    Attributes
    ----------
    instance_ : HornInstance
    n_features_in_ : int
        Matrix dimension ``n``.
    """

    def __init__(self, case="additive", a=(1.0, 0.0), b=0.5, random_state=None):
        self.case = case
        self.a = a
        self.b = b
        self.random_state = random_state

    def fit(self, X=None, y=None):
        self.instance_ = HornInstance(self.case, self.a, self.b)
        self.n_features_in_ = self.instance_.n
        self._rng = check_random_state(self.random_state)
        return self

    def sample(self, n_samples=1, random_state=None):
        """Draw ``n_samples`` spectra, shape ``(n_samples, n)``."""
        check_is_fitted(self, "instance_")
        rng = self._rng if random_state is None else check_random_state(random_state)
        return sample_instance(self.instance_, rng, size=int(n_samples))

    def _free(self, X):
        inst = self.instance_
        X = np.asarray(X, dtype=float)
        if X.ndim == 2 and X.shape[1] == inst.n:
            X = check_points(X, inst.n)
            F = X[:, :-1]
            resid = X.sum(axis=1) - inst.a.sum() - inst.b
            if inst.case is HornCase.UNITARY:
                resid = np.angle(np.exp(1j * resid))
            off = np.abs(resid) > 1e-8
            return F, off
        F = check_points(X, inst.n - 1)
        return F, np.zeros(F.shape[0], dtype=bool)

    def score_samples(self, X):
        """Log density of each row.

        Rows may hold the free coordinates ``(c_1..c_{n-1})`` or full
        spectra; full spectra off the constraint get ``-inf``.
        """
        check_is_fitted(self, "instance_")
        F, off = self._free(X)
        try:
            dens = pdf_instance(F, self.instance_)
        except DegenerateSpectrum:
            dens = np.array([self._safe_pdf(f) for f in F])
        with np.errstate(divide="ignore"):
            out = np.log(dens)
        out[off] = -np.inf
        return out

    def _safe_pdf(self, f):
        try:
            return pdf_instance(f, self.instance_)
        except DegenerateSpectrum:
            return 0.0

    def score(self, X, y=None):
        """Mean log density."""
        return float(np.mean(self.score_samples(X)))

    def cdf(self, t, k=1):
        """Marginal CDF of the ``k``-th largest eigenvalue (``n <= 3``)."""
        check_is_fitted(self, "instance_")
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.array([cdf_marginal(k, ti, self.instance_) for ti in t])


class EigenvalueTransformer(TransformerMixin, BaseEstimator):
    """Stack of matrices ``(m, n, n)`` to eigenvalue rows ``(m, n)``, descending.

    Parameters
    ----------
    kind : {"hermitian", "log", "phase"}
        Eigenvalues, log-eigenvalues of positive-definite matrices, or
        eigenphases of unitary matrices.
    """

    def __init__(self, kind="hermitian"):
        self.kind = kind

    def fit(self, X, y=None):
        X = self._check(X)
        if self.kind not in ("hermitian", "log", "phase"):
            raise ValueError(f"unknown kind {self.kind!r}")
        self.n_features_in_ = X.shape[-1]
        return self

    @staticmethod
    def _check(X):
        X = np.asarray(X)
        if X.ndim == 2:
            X = X[None]
        if X.ndim != 3 or X.shape[1] != X.shape[2]:
            raise ValueError(f"expected a stack of square matrices, got shape {X.shape}")
        if not np.all(np.isfinite(X)):
            raise ValueError("matrices contain non-finite entries")
        return X

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = self._check(X)
        if X.shape[-1] != self.n_features_in_:
            raise LengthMismatch(f"expected {self.n_features_in_}x{self.n_features_in_} matrices")
        if self.kind == "phase":
            ev = np.angle(np.linalg.eigvals(X))
        else:
            H = 0.5 * (X + np.conj(np.swapaxes(X, -1, -2)))
            ev = np.linalg.eigvalsh(H)
            if self.kind == "log":
                ev = np.log(ev)
        return np.sort(ev, axis=-1)[:, ::-1]


class SphericalFunctionTransformer(TransformerMixin, BaseEstimator):
    """Eigenvalue rows to spherical function values, shape ``(m, 1)`` complex.

    Parameters
    ----------
    space : {"additive", "positive", "unitary"}
        HCIZ at ``-i x``, Gelfand-Naimark at log-eigenvalues ``x`` times
        ``det^{-n}``, or the normalised
        character at phases ``x``. These are the kernels whose means give
        the spherical transforms of the three spaces.
    s : array_like
    """

    def __init__(self, space="additive", s=(1.0, 0.0)):
        self.space = space
        self.s = s

    def fit(self, X, y=None):
        X = np.atleast_2d(np.asarray(X))
        self.n_features_in_ = X.shape[1]
        if len(np.atleast_1d(self.s)) != self.n_features_in_:
            raise LengthMismatch("s must have one entry per eigenvalue")
        self.space_ = HornCase.parse(self.space)
        return self

    def transform(self, X):
        from . import spherical as sph

        check_is_fitted(self, "space_")
        X = np.atleast_2d(np.asarray(X))
        if X.shape[1] != self.n_features_in_:
            raise LengthMismatch(f"expected {self.n_features_in_} columns")
        s = np.asarray(self.s)
        if self.space_ is HornCase.ADDITIVE:
            out = sph.hciz(-1j * X, s)
        elif self.space_ is HornCase.POSITIVE:
            X = X.real
            out = np.exp(-X.shape[1] * X.sum(axis=1)) * sph.gn_spherical(X, s)
        else:
            out = sph.char_spherical(X.real, s.real)
        return np.asarray(out).reshape(-1, 1)
