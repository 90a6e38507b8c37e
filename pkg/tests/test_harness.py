import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import kstest

from hornlab.exceptions import EmptySample, InvalidInstance, UnderpoweredTest
from hornlab.harness import (
    KS_CRITICAL_001,
    histogram,
    identity_violations,
    ks_statistic,
    ks_threshold,
    run_verify,
    singular_value_check,
)
from hornlab.instance import HornInstance
from hornlab.rng import RngStream

import oracles

ADD = HornInstance("additive", [1.0, 0.0], 0.5)
UNI = HornInstance("unitary", [1.0, -1.0], 0.8)


def uniform_cdf(t):
    return np.clip(t, 0.0, 1.0)


class TestKs:
    def test_critical_value(self):
        assert KS_CRITICAL_001 == pytest.approx(oracles.ks_critical(0.01), abs=1e-3)

    def test_single_sample_at_median(self):
        assert ks_statistic([0.5], uniform_cdf) == 0.5

    def test_total_mismatch(self):
        assert ks_statistic(np.linspace(0.1, 0.9, 50), lambda t: 0 * t) == 1.0

    def test_empty(self):
        with pytest.raises(EmptySample):
            ks_statistic([], uniform_cdf)

    def test_null_below_threshold(self):
        x = RngStream(11).generator().random(100_000)
        assert ks_statistic(x, uniform_cdf) < 1.63 / np.sqrt(x.size)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(-2, 3), min_size=1, max_size=60))
    def test_matches_scipy(self, xs):
        ours = ks_statistic(xs, uniform_cdf)
        assert 0 <= ours <= 1
        assert ours == pytest.approx(kstest(xs, uniform_cdf).statistic, abs=1e-12)

    def test_order_independent(self):
        x = RngStream(3).generator().random(200)
        assert ks_statistic(x, uniform_cdf) == ks_statistic(np.sort(x), uniform_cdf)


class TestHistogram:
    def test_counts(self):
        h = histogram([0.1, 0.2, 0.7, 1.5, -1.0], [0.0, 0.5, 1.0])
        assert list(h.counts) == [2, 1]
        assert h.total == 3 and h.out_of_range == 2

    def test_edges_must_increase(self):
        with pytest.raises(ValueError):
            histogram([0.1], [0.0, 0.0, 1.0])

    @settings(max_examples=30, deadline=None)
    @given(st.lists(st.floats(-5, 5), max_size=100), st.integers(1, 20))
    def test_total_plus_out_of_range(self, xs, m):
        h = histogram(xs, np.linspace(-2, 2, m + 1))
        assert h.total + h.out_of_range == len(xs)
        assert h.counts.sum() == h.total


class TestIdentities:
    def test_detects_trace_violation(self):
        C = np.array([[1.3, 0.2], [1.3, 0.3]])
        ids = identity_violations(ADD, C)
        assert ids["trace"] == 1 and ids["interlacing"] == 0

    def test_detects_interlacing_violation(self):
        ids = identity_violations(ADD, np.array([[0.9, 0.6]]))
        assert ids["trace"] == 0 and ids["interlacing"] == 1

    def test_unitary_wraps(self):
        # c_2 = -0.7 written as 2 pi - 0.7 is the same sample
        C = np.array([[1.5, -0.7 + 2 * np.pi]])
        ids = identity_violations(UNI, C)
        assert ids["phase_sum"] == 0 and ids["interlacing"] == 0


class TestRunVerify:
    def test_additive_pass(self):
        rep = run_verify(ADD, 200_000, RngStream(42))
        assert rep.passed
        assert rep.identity_violations["trace"] == 0
        assert rep.identity_violations["interlacing"] == 0
        assert rep.out_of_range == 0

    def test_unitary_pass(self):
        rep = run_verify(UNI, 200_000, RngStream(42))
        assert rep.passed and rep.identity_violations["phase_sum"] == 0

    def test_n4_identities_only(self):
        inst = HornInstance("positive", [1.5, 0.5, -0.5, -1.5], 0.7)
        rep = run_verify(inst, 5000, 1)
        assert rep.ks_per_marginal == [] and rep.passed
        assert rep.identity_violations["determinant"] == 0

    def test_underpowered(self):
        with pytest.raises(UnderpoweredTest):
            run_verify(ADD, 5, 0)

    def test_too_large(self):
        with pytest.raises(InvalidInstance):
            run_verify(HornInstance("additive", np.arange(5.0)[::-1], 1.0), 100, 0)

    def test_reference_mismatch(self):
        with pytest.raises(InvalidInstance):
            run_verify(ADD, 100, 0, reference=UNI)

    def test_deterministic_json(self):
        a = run_verify(ADD, 3000, RngStream(5, 2)).to_json()
        b = run_verify(ADD, 3000, RngStream(5, 2)).to_json()
        assert a == b
        d = json.loads(a)
        assert d["seed"] == 5 and d["stream"] == 2 and d["verdict"] in ("pass", "fail")

    def test_null_pass_rate(self):
        passes = sum(run_verify(ADD, 2000, RngStream(s)).passed for s in range(50))
        assert passes >= 48

    def test_power_against_wrong_b(self):
        rep = run_verify(ADD, 200_000, RngStream(42), reference=ADD.replace(b=0.55))
        assert not rep.passed
        assert max(rep.ks_per_marginal) > rep.ks_threshold

    def test_threshold(self):
        assert ks_threshold(10_000) == pytest.approx(0.01628)


def test_singular_values_match_positive_model():
    rep = singular_value_check([2.0, 1.0], 3.0, 20_000, RngStream(8))
    assert rep.passed
