"""End-to-end acceptance criteria at their stated tolerances.

Each test prints one ``PASS criterion k`` or ``FAIL criterion k`` line; the
lines are repeated in the terminal summary.
"""

import time
from fractions import Fraction

import numpy as np
import pytest

import conftest
import oracles
from hornlab.densities import integrate_pdf, pdf_mult_unitary
from hornlab.harness import ks_threshold, run_verify, singular_value_check
from hornlab.instance import HornInstance
from hornlab.rng import RngStream
from hornlab.spherical import (
    char_rank1,
    char_spherical,
    gn_rank1,
    gn_spherical,
    hciz,
    hciz_rank1,
    mc_factorization_check,
)
from hornlab.transforms import (
    TruncationSpec,
    forward_transform_check,
    hermitian_integrand,
    inverse_unitary_series,
    positive_integrand,
    quadrature_marginal,
    theta_kernel,
)

N_MC = 200_000
SEED = 42
A3 = [2.0, 0.5, -1.0]
ADD2 = HornInstance("additive", [1.0, 0.0], 0.5)
POS2 = HornInstance("positive", [1.0, 0.0], 0.5)
UNI2 = HornInstance("unitary", [1.0, -1.0], 0.8)


def report(k, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {k}: {detail}"
    print(line)
    conftest.ACCEPTANCE_LINES.append(line)
    return ok


def timed_verify(inst, **kw):
    t0 = time.perf_counter()
    rep = run_verify(inst, N_MC, RngStream(SEED), **kw)
    return rep, time.perf_counter() - t0


def ks_summary(rep):
    return ", ".join(f"KS={d:.5f}" for d in rep.ks_per_marginal) + f" < {rep.ks_threshold:.5f}"


def test_criterion_01_additive():
    rep2, t2 = timed_verify(ADD2)
    rep3, t3 = timed_verify(HornInstance("additive", A3, 1.0))
    mean_target = float(Fraction(31, 24))
    mean_err = abs(rep2.mean_per_marginal[0] - mean_target)
    ok = True
    for rep, t in ((rep2, t2), (rep3, t3)):
        ids = rep.identity_violations
        ok &= rep.passed and ids["trace"] == 0 and ids["interlacing"] == 0 and t < 30
        ok &= len(rep.ks_per_marginal) == rep.instance.n - 1
    ok &= mean_err < 0.005
    assert report(1, ok, f"n=2 {ks_summary(rep2)}, |E[c1]-31/24|={mean_err:.2e}, {t2:.1f}s; "
                         f"n=3 {ks_summary(rep3)}, {t3:.1f}s")


def test_criterion_02_positive():
    rep2, t2 = timed_verify(POS2)
    rep3, t3 = timed_verify(HornInstance("positive", A3, 1.0))
    ok = True
    for rep, t in ((rep2, t2), (rep3, t3)):
        ids = rep.identity_violations
        ok &= rep.passed and ids["determinant"] == 0 and ids["interlacing"] == 0 and t < 60
        ok &= ids["max_residual"] < 1e-9
    assert report(2, ok, f"n=2 {ks_summary(rep2)}, {t2:.1f}s; n=3 {ks_summary(rep3)}, {t3:.1f}s")


def test_criterion_03_unitary():
    rep, t = timed_verify(UNI2)
    ids = rep.identity_violations
    ok = (rep.passed and ids["phase_sum"] == 0 and ids["interlacing"] == 0
          and ids["max_residual"] < 1e-8 and t < 60)
    assert report(3, ok, f"{ks_summary(rep)}, max phase residual {ids['max_residual']:.1e}, {t:.1f}s")


def test_criterion_04_normalisation():
    insts = [HornInstance(case, a, b) for case, a, b in [
        ("additive", [1.0, 0.0], 0.5), ("additive", A3, 1.0),
        ("positive", [1.0, 0.0], 0.5), ("positive", A3, 1.0),
        ("unitary", [1.0, -1.0], 0.8), ("unitary", A3, 2.5),
    ]]
    errs = [abs(integrate_pdf(i) - 1) for i in insts]
    assert report(4, max(errs) < 1e-6, f"max |mass - 1| = {max(errs):.1e} over 6 instances")


def test_criterion_05_rank_one_consistency():
    gen = RngStream(5).generator()
    worst = 0.0
    for n in (2, 3, 4):
        zeros = [0.0] * (n - 1)
        for _ in range(100):
            b = gen.uniform(-2.5, 2.5)
            s = np.sort(gen.uniform(-3, 3, n))[::-1]
            k = np.sort(gen.choice(np.arange(-10, 11), size=n, replace=False))[::-1]
            pairs = [
                (hciz_rank1(b, s), hciz([-1j * b] + zeros, s)),
                (gn_rank1(b, s), gn_spherical([b] + zeros, s)),
                (char_rank1(b, k), char_spherical([b] + zeros, k)),
            ]
            for r1, full in pairs:
                worst = max(worst, abs(r1 - full) / abs(full))
    assert report(5, worst < 1e-8, f"max relative gap {worst:.1e} over 900 evaluations")


FACTORISATION = [
    ("additive", np.diag([1.0, 0.0]), np.diag([0.5, 0.0]), [0.8j, -0.3j]),
    ("additive", np.diag([0.7, -0.4, 0.1]), np.diag([1.0, 0.2, 0.0]), [0.5j, 0.1, -0.6j]),
    ("additive", np.diag([1.2, -1.0]), np.array([[0.3, 0.2j], [-0.2j, -0.1]]), [1.0j, 0.0]),
    ("positive", np.diag(np.exp([1.0, 0.0])), np.diag(np.exp([0.5, 0.0])), [1.3 + 0.2j, 0.1]),
    ("positive", np.diag(np.exp([0.4, 0.0, -0.3])), np.diag(np.exp([0.6, 0.1, 0.0])), [0.5j, 0.4, -0.2]),
    ("positive", np.diag(np.exp([0.2, -0.2])), np.diag(np.exp([0.9, 0.3])), [0.7j, -0.5j]),
    ("unitary", np.diag(np.exp([1j, -1j])), np.diag(np.exp([0.5j, 0.0])), [2, 0]),
    ("unitary", np.diag(np.exp([2j, 0.3j, -1j])), np.diag(np.exp([0.8j, 0, 0])), [3, 1, -1]),
    ("unitary", np.diag(np.exp([0.4j, -2.5j])), np.diag(np.exp([1.5j, 0.7j])), [1, -2]),
]


def test_criterion_06_factorisation():
    z = []
    for i, (case, X1, X2, s) in enumerate(FACTORISATION):
        z.append(abs(mc_factorization_check(case, X1, X2, s, N=100_000, rng=RngStream(60 + i)).zscore))
    exact = []
    for case, X1, _, s in FACTORISATION[::3]:
        rep = mc_factorization_check(case, X1, np.eye(X1.shape[0]), s, N=1000, rng=0)
        exact.append(rep.zscore == 0 and abs(rep.mean - rep.reference) <= 1e-12 * abs(rep.reference))
    ok = max(z) < 4 and all(exact)
    assert report(6, ok, f"max |z| = {max(z):.2f} over 9 instances; identity case exact: {all(exact)}")


def test_criterion_07_unitary_series():
    t0 = time.perf_counter()
    eps_edge = 0.05
    lo, hi = 1.0 + 5 * eps_edge, 1.8 - 5 * eps_edge
    t = np.linspace(lo, hi, 20)[:, None]
    exact = pdf_mult_unitary(t, UNI2)
    errs = []
    for eps, S in [(0.2, None), (0.1, None), (0.05, 250)]:
        rec = inverse_unitary_series(UNI2, t, eps, TruncationSpec(S=S))
        errs.append(float(np.max(np.abs(rec / exact - 1))))
    elapsed = time.perf_counter() - t0
    ok = errs[2] < 0.02 and errs[0] > errs[1] > errs[2] and elapsed < 300
    assert report(7, ok, "max rel err " + " > ".join(f"{e:.2%}" for e in errs)
                  + f" at eps 0.2, 0.1, 0.05; {elapsed:.1f}s")


def test_criterion_08_quadrature_inversions():
    pts = [1.15, 1.25, 1.35]
    herm = max(abs(quadrature_marginal(ADD2, t, 0.05) / oracles.additive_marginal_n2(t) - 1) for t in pts)
    pos = max(abs(quadrature_marginal(POS2, t, 0.05) / oracles.positive_marginal_n2_mp(t) - 1)
              for t in pts)
    eps = 0.1
    j = np.array([1.0, 2.0])
    c = np.array([1.3, 0.2])
    additive = HornInstance("additive", POS2.a, POS2.b)
    gap = 0.0
    for y in RngStream(8).generator().uniform(-20, 20, (200, 2)):
        lhs = positive_integrand(-y + 1j * j, c, POS2, eps)
        factor = (np.exp(-POS2.b) * 1j * np.exp(c.sum() - POS2.a.sum())
                  * np.exp(-(eps**2) * np.sum(j**2)))
        rhs = factor * hermitian_integrand(y, c, additive, eps)
        gap = max(gap, abs(lhs - rhs) / abs(rhs))
    ok = herm < 0.03 and pos < 0.03 and gap < 1e-12
    assert report(8, ok, f"max rel err Herm {herm:.2%}, Herm+ {pos:.2%}; integrand gap {gap:.1e}")


def test_criterion_09_transform_pairs():
    reps = [
        forward_transform_check("gue", 0.5, [1.0, 0.0], quad_pts=256, halfwidth=4.0),
        forward_transform_check("gue", 0.3, [0.7 + 0.5j, -0.3]),
        forward_transform_check("muttalib_borodin", 0.3, [2.0, 3.0]),
        forward_transform_check("muttalib_borodin", 0.3, [1.2 + 0.4j, 0.5]),
    ]
    worst = max(r.rel_err for r in reps)
    at_s0 = abs(reps[2].quadrature_value - 1)
    ok = worst < 1e-6 and at_s0 < 1e-6
    assert report(9, ok, f"max rel err {worst:.1e}; MB value at s0 off by {at_s0:.1e}")


@pytest.mark.xfail(strict=True, reason="the stated 0.282134 is not the theta value; "
                                       "both representations and mpmath give 0.2821240")
def test_criterion_10_theta_duality():
    x = np.linspace(-np.pi, np.pi, 256)
    gap = max(
        float(np.max(np.abs(theta_kernel(x, e, n, "fourier") - theta_kernel(x, e, n, "gaussian"))))
        for e in (0.1, 1.0)
        for n in (1, 2, 3)
    )
    value = float(theta_kernel(0.0, 1.0, 1))
    independent = abs(value - oracles.theta_jacobi(0.0, 1.0))
    literal = abs(value - 0.282134)
    ok = gap < 1e-12 and independent < 1e-14 and literal < 1e-6
    report(10, ok, f"duality gap {gap:.1e}; g(0)={value:.10f} matches mpmath to {independent:.0e} "
                   f"but differs from 0.282134 by {literal:.1e}")
    assert gap < 1e-12 and independent < 1e-14
    assert literal < 1e-6


def test_criterion_11_singular_values():
    reps = [singular_value_check([2.0, 1.0], 3.0, 100_000, RngStream(11)),
            singular_value_check([2.5, 1.2, 0.6], 1.7, 100_000, RngStream(12))]
    stats = [d for r in reps for d in r.ks_per_coordinate]
    ok = all(r.passed for r in reps)
    assert report(11, ok, f"max two-sample KS {max(stats):.5f} < {reps[0].threshold:.5f}")


def test_criterion_12_power():
    rep = run_verify(ADD2, N_MC, RngStream(SEED), reference=ADD2.replace(b=0.55))
    ok = not rep.passed
    assert report(12, ok, f"wrong-b reference rejected: KS={max(rep.ks_per_marginal):.4f} "
                          f"vs threshold {ks_threshold(N_MC):.5f}")
