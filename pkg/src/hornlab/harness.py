"""Monte Carlo verification of the closed-form densities.

:func:`run_verify` samples a rank-1 Horn model, checks the exact
identities sample by sample (trace or determinant, phase sum, interlacing)
and runs one-sample Kolmogorov-Smirnov tests of the leading marginals
against the quadrature CDFs of :mod:`hornlab.densities`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import ks_2samp

from .densities import marginal_cdf_function, marginal_support, unwrap_phases
from .exceptions import EmptySample, InvalidInstance, UnderpoweredTest
from .instance import HornCase, HornInstance
from .matrix_core import wrap_phase
from .rng import RngStream
from .sampling import sample_instance, sample_mult_pos, sample_singular_rank1

__all__ = [
    "KS_CRITICAL_001",
    "MIN_SAMPLES",
    "Histogram",
    "VerificationReport",
    "histogram",
    "ks_statistic",
    "ks_threshold",
    "prepare_samples",
    "identity_violations",
    "run_verify",
    "SingularValueReport",
    "singular_value_check",
]

KS_CRITICAL_001 = 1.628
KS2_CRITICAL_0001 = 1.92
MIN_SAMPLES = 10
CHUNK = 50_000
TRACE_TOL = 1e-9
PHASE_TOL = 1e-8
INTERLACE_SLACK = 1e-9


@dataclass(frozen=True)
class Histogram:
    """Bin counts over ``edges``; samples outside the edges are counted apart."""

    edges: np.ndarray
    counts: np.ndarray
    total: int
    out_of_range: int = 0

    def __post_init__(self):
        if np.any(np.diff(self.edges) <= 0):
            raise ValueError("histogram edges must be strictly increasing")
        if int(np.sum(self.counts)) != self.total:
            raise ValueError("counts must sum to total")


def histogram(samples, edges):
    samples = np.asarray(samples, dtype=float).ravel()
    edges = np.asarray(edges, dtype=float)
    inside = (samples >= edges[0]) & (samples <= edges[-1])
    counts, _ = np.histogram(samples[inside], bins=edges)
    return Histogram(edges, counts, int(counts.sum()), int(np.count_nonzero(~inside)))


def ks_statistic(samples, cdf):
    """One-sample Kolmogorov-Smirnov statistic ``sup |F_N - F|``.

    Parameters
    ----------
    samples : array_like
        Sorted internally, so any order is accepted.
    cdf : callable
        Vectorised CDF.

    Examples
    --------
    >>> ks_statistic([0.0], lambda t: 0.5 + 0 * t)
    0.5
    """
    x = np.sort(np.asarray(samples, dtype=float).ravel())
    N = x.shape[0]
    if N == 0:
        raise EmptySample("no samples")
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, N + 1)
    d_plus = np.max(i / N - F)
    d_minus = np.max(F - (i - 1) / N)
    return float(min(max(d_plus, d_minus, 0.0), 1.0))


def ks_threshold(n_samples, critical=KS_CRITICAL_001):
    return critical / np.sqrt(n_samples)


def prepare_samples(inst, C):
    """Spectra in the coordinates the densities use.

    Unitary phases are unwrapped into ``(a_n, a_n + 2 pi]`` and re-sorted.
    """
    C = np.asarray(C, dtype=float)
    if inst.case is HornCase.UNITARY:
        C = np.sort(unwrap_phases(C, inst.a[-1]), axis=-1)[..., ::-1]
    return C


def identity_violations(inst, C):
    """Count samples breaking the exact identities.

    Returns
    -------
    dict
        ``{"trace": k}`` (additive), ``{"determinant": k}`` (positive) or
        ``{"phase_sum": k}`` (unitary), plus ``"interlacing"``, and the
        largest identity residual under ``"max_residual"``.
    """
    C = np.asarray(C, dtype=float)
    a = inst.a
    if inst.case is HornCase.UNITARY:
        resid = np.abs(wrap_phase(C.sum(axis=-1) - a.sum() - inst.b))
        key, tol = "phase_sum", PHASE_TOL
        Cu = prepare_samples(inst, C)
        gaps = [Cu[:, 0] - a[0], 2 * np.pi + a[-1] - Cu[:, 0]]
    else:
        resid = np.abs(C.sum(axis=-1) - a.sum() - inst.b)
        key = "trace" if inst.case is HornCase.ADDITIVE else "determinant"
        tol = TRACE_TOL
        Cu = C
        gaps = [Cu[:, 0] - a[0]]
    for j in range(1, inst.n):
        gaps.append(a[j - 1] - Cu[:, j])
        gaps.append(Cu[:, j] - a[j])
    chain = np.min(np.stack(gaps, axis=-1), axis=-1)
    return {
        key: int(np.count_nonzero(resid >= tol)),
        "interlacing": int(np.count_nonzero(chain < -INTERLACE_SLACK)),
        "max_residual": float(np.max(resid)) if resid.size else 0.0,
    }


@dataclass
class VerificationReport:
    """Outcome of :func:`run_verify`; ``to_json`` is byte-stable."""

    instance: HornInstance
    n_samples: int
    marginals: list
    ks_per_marginal: list
    ks_threshold: float
    tv_per_marginal: list
    mean_per_marginal: list
    identity_violations: dict
    out_of_range: int
    bins: int
    seed: RngStream
    reference: HornInstance | None = None
    verdict: str = field(init=False)

    def __post_init__(self):
        ks_ok = all(d < self.ks_threshold for d in self.ks_per_marginal)
        ids_ok = all(v == 0 for k, v in self.identity_violations.items() if k != "max_residual")
        self.verdict = "pass" if ks_ok and ids_ok else "fail"

    @property
    def passed(self):
        return self.verdict == "pass"

    def to_dict(self):
        inst = self.instance.to_dict()
        return {
            "case": inst["case"],
            "a": inst["a"],
            "b": inst["b"],
            "n": self.instance.n,
            "n_samples": self.n_samples,
            "seed": self.seed.seed,
            "stream": self.seed.stream_id,
            "bins": self.bins,
            "marginals": list(self.marginals),
            "ks_per_marginal": [float(v) for v in self.ks_per_marginal],
            "ks_threshold": float(self.ks_threshold),
            "tv_per_marginal": [float(v) for v in self.tv_per_marginal],
            "mean_per_marginal": [float(v) for v in self.mean_per_marginal],
            "identity_violations": {k: self.identity_violations[k]
                                    for k in sorted(self.identity_violations)},
            "out_of_range": self.out_of_range,
            "reference": None if self.reference is None else self.reference.to_dict(),
            "verdict": self.verdict,
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent)


def _as_stream(seed):
    if isinstance(seed, RngStream):
        return seed
    return RngStream(0 if seed is None else int(seed))


def _draw(inst, n_samples, stream):
    """Samples in fixed-size shards, shard ``i`` drawn from ``stream.shard(i)``."""
    parts = []
    done, i = 0, 0
    while done < n_samples:
        m = min(CHUNK, n_samples - done)
        parts.append(sample_instance(inst, stream.shard(i), size=m))
        done += m
        i += 1
    return np.concatenate(parts, axis=0)


def run_verify(inst, n_samples, seed=None, bins=50, reference=None):
    """Sample ``inst`` and test it against the closed-form density.

    Parameters
    ----------
    inst : HornInstance
        ``n <= 4``; KS tests need ``n`` in ``{2, 3}``.
    n_samples : int
        At least 10.
    seed : RngStream or int, optional
    bins : int, default 50
        Histogram bins for the total-variation estimate.
    reference : HornInstance, optional
        Instance whose CDFs serve as the null hypothesis; defaults to
        ``inst``. Used for power checks with a deliberately wrong reference.

    Returns
    -------
    VerificationReport
    """
    if not isinstance(inst, HornInstance):
        raise InvalidInstance("run_verify needs a HornInstance")
    if inst.n > 4:
        raise InvalidInstance("verification covers n <= 4")
    n_samples = int(n_samples)
    if n_samples < MIN_SAMPLES:
        raise UnderpoweredTest(f"need at least {MIN_SAMPLES} samples, got {n_samples}")
    bins = int(bins)
    if bins < 1:
        raise ValueError("bins must be positive")
    stream = _as_stream(seed)
    ref = inst if reference is None else reference
    if ref.case is not inst.case or ref.n != inst.n:
        raise InvalidInstance("reference must share case and dimension with the instance")

    C = _draw(inst, n_samples, stream)
    ids = identity_violations(inst, C)
    Cu = prepare_samples(inst, C)

    marginals = [1] if inst.n == 2 else [1, 2] if inst.n == 3 else []
    ks, tv, means = [], [], []
    out_of_range = 0
    for k in marginals:
        x = Cu[:, k - 1]
        cdf = marginal_cdf_function(k, ref)
        ks.append(ks_statistic(x, cdf))
        lo, hi = marginal_support(k, ref)
        edges = np.linspace(lo, hi, bins + 1)
        h = histogram(x, edges)
        p = np.diff(cdf(edges))
        tv.append(0.5 * float(np.sum(np.abs(h.counts / n_samples - p))))
        out_of_range += h.out_of_range
        means.append(float(np.mean(x)))
    return VerificationReport(
        instance=inst,
        n_samples=n_samples,
        marginals=marginals,
        ks_per_marginal=ks,
        ks_threshold=float(ks_threshold(n_samples)),
        tv_per_marginal=tv,
        mean_per_marginal=means,
        identity_violations=ids,
        out_of_range=out_of_range,
        bins=bins,
        seed=stream,
        reference=reference,
    )


@dataclass(frozen=True)
class SingularValueReport:
    ks_per_coordinate: list
    threshold: float

    @property
    def passed(self):
        return all(d < self.threshold for d in self.ks_per_coordinate)


def singular_value_check(x, y_scalar, n_samples, seed=None):
    """Two-sample KS between log squared singular values and the Herm+ model.

    Compares every coordinate of ``log sv^2(U X U^dagger V Y V^dagger)``
    with samples of the positive model at ``a = 2 log x``,
    ``b = 2 log y_scalar``; threshold ``1.92 / sqrt(N/2)``.
    """
    stream = _as_stream(seed)
    x = np.asarray(x, dtype=float)
    inst = HornInstance(HornCase.POSITIVE, 2 * np.log(x), 2 * np.log(float(y_scalar)))
    n_samples = int(n_samples)
    if n_samples < MIN_SAMPLES:
        raise UnderpoweredTest(f"need at least {MIN_SAMPLES} samples, got {n_samples}")
    sv = np.log(sample_singular_rank1(x, y_scalar, stream.shard(0), size=n_samples))
    pos = sample_mult_pos(inst, stream.shard(1), size=n_samples)
    stats = [float(ks_2samp(sv[:, k], pos[:, k]).statistic) for k in range(inst.n)]
    return SingularValueReport(stats, float(KS2_CRITICAL_0001 / np.sqrt(n_samples / 2)))
