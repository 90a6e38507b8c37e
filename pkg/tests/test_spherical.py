import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.testing import assert_allclose

from hornlab.exceptions import DegenerateIndex, InvalidCase
from hornlab.rng import RngStream
from hornlab.spherical import (
    char_rank1,
    char_spherical,
    divided_difference_exp,
    gn_rank1,
    gn_spherical,
    hciz,
    hciz_rank1,
    mc_factorization_check,
    spherical_function,
)

from oracles import character_schur, gn_mp, hciz_mp

# frozen from oracles.hciz_mp / gn_mp / character_schur
HCIZ_10_10 = 1.7182818284590453
HCIZ_R1_B1 = 0.8414709848078965 - 0.4596976941318603j
CHAR_R1_090_420 = 0.5040044604620603 + 0.6351253625332903j


def distinct(values, n, gap=0.05):
    v = np.sort(np.asarray(values[:n]))[::-1]
    return v if n < 2 or np.min(-np.diff(v)) > gap else None


class TestHciz:
    def test_zero_argument(self):
        assert_allclose(hciz([0.0, 0.0, 0.0], [2.0, 1.0, -3.0]), 1)

    def test_scalar(self):
        assert_allclose(hciz([0.7], [1.3]), math.exp(0.7 * 1.3))

    def test_two_by_two(self):
        assert_allclose(hciz([1.0, 0.0], [1.0, 0.0]), HCIZ_10_10, rtol=1e-14)

    def test_haar_average(self):
        # frozen from oracles.hciz_haar_mc([1, 0], [1, 0], N=200000, seed=0)
        mean, se = 1.7202119545154149, 0.0011020102734887432
        assert abs(hciz([1.0, 0.0], [1.0, 0.0]) - mean) < 3 * se

    def test_batch(self):
        X = np.array([[1.0, 0.0], [0.5, -0.5]])
        out = hciz(X, [1.0, 0.0])
        assert out.shape == (2,)
        assert_allclose(out[1], hciz(X[1], [1.0, 0.0]))

    def test_symmetric_in_arguments(self):
        x, s = [1.2, 0.3, -0.4], [0.9, -0.1, -1.5]
        assert_allclose(hciz(x, s), hciz(s, x), rtol=1e-12)
        assert_allclose(hciz(x, s), hciz(x[::-1], s), rtol=1e-12)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 4),
           st.lists(st.floats(-2, 2), min_size=4, max_size=4),
           st.lists(st.floats(-2, 2), min_size=4, max_size=4))
    def test_matches_mpmath(self, n, x, s):
        x, s = distinct(x, n), distinct(s, n)
        if x is None or s is None:
            return
        assert_allclose(hciz(x, s), hciz_mp(x, s), rtol=1e-9)

    @pytest.mark.parametrize("d", [1e-3, 1e-5, 1e-7, 1e-9])
    def test_confluent_continuity(self, d):
        s = [1.0, 0.2, -0.5]
        near = hciz([0.4 + d, 0.4, -0.3], s)
        limit = hciz([0.4, 0.4, -0.3], s)
        assert abs(near - limit) < 10 * d * abs(limit)


class TestRank1:
    def test_hciz_rank1_value(self):
        assert_allclose(hciz_rank1(1.0, [1.0, 0.0]), HCIZ_R1_B1, rtol=1e-14)
        assert_allclose(HCIZ_R1_B1, -1j * (1 - np.exp(-1j)), rtol=1e-14)

    @pytest.mark.parametrize("b", [0.1, 1.0, 3.0])
    def test_hciz_rank1_consistency(self, b):
        s = np.array([1.7, 0.4, -0.2, -1.1])
        assert abs(hciz_rank1(b, s) - hciz([-1j * b, 0, 0, 0], s)) < 1e-8

    def test_scalars(self):
        assert_allclose(hciz_rank1(0.6, [1.5]), np.exp(-1j * 0.9))
        assert_allclose(gn_rank1(0.6, [1.5]), np.exp(0.9))
        assert_allclose(char_rank1(0.6, [3]), np.exp(1.8j))

    def test_gn_values(self):
        assert_allclose(gn_rank1(math.log(2), [1.0, 0.0]), 1, rtol=1e-14)
        assert_allclose(gn_spherical([math.log(2), 0.0], [1.0, 0.0]), 1, rtol=1e-14)

    def test_gn_consistency(self):
        s = [2.3 + 0.4j, 0.5, -1.1j]
        assert_allclose(gn_rank1(0.7, s), gn_spherical([0.7, 0, 0], s), rtol=1e-8)
        assert_allclose(gn_spherical([0.7, 0.2, -0.4], s), gn_mp([0.7, 0.2, -0.4], s), rtol=1e-10)

    def test_char_consistency(self):
        assert_allclose(char_rank1(0.9, [4, 2, 0]), char_spherical([0.9, 0, 0], [4, 2, 0]),
                        rtol=1e-10)
        assert_allclose(char_rank1(0.9, [4, 2, 0]), CHAR_R1_090_420, rtol=1e-12)

    def test_char_at_minus_identity_direction(self):
        assert abs(char_rank1(np.pi, [2, 0])) < 1e-14

    def test_degenerate(self):
        with pytest.raises(DegenerateIndex):
            hciz_rank1(0.0, [1.0, 0.0])
        with pytest.raises(DegenerateIndex):
            char_rank1(2 * np.pi, [1, 0])

    @settings(max_examples=30, deadline=None)
    @given(st.integers(2, 4), st.floats(0.05, 3.0),
           st.lists(st.floats(-3, 3), min_size=4, max_size=4))
    def test_rank1_equals_full(self, n, b, s):
        s = distinct(s, n)
        if s is None:
            return
        full = hciz([-1j * b] + [0] * (n - 1), s)
        assert abs(hciz_rank1(b, s) - full) <= 1e-8 * abs(full)
        full = gn_spherical([b] + [0] * (n - 1), s)
        assert abs(gn_rank1(b, s) - full) <= 1e-8 * abs(full)


class TestCharacter:
    def test_trivial_representation(self):
        assert_allclose(char_spherical([0.4, -1.2, 2.0], [2, 1, 0]), 1)
        assert_allclose(gn_spherical([0.4, -1.2, 2.0], [2, 1, 0]), 1)

    def test_identity_matrix(self):
        assert_allclose(char_spherical([0.0, 0.0, 0.0], [7, 3, -2]), 1)

    def test_fundamental(self):
        th = np.array([0.3, -0.4])
        assert_allclose(char_spherical(th, [2, 0]), np.exp(1j * th).mean(), rtol=1e-14)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(2, 3), st.lists(st.integers(-4, 6), min_size=3, max_size=3, unique=True),
           st.lists(st.floats(-3, 3), min_size=3, max_size=3))
    def test_matches_schur(self, n, s, th):
        s = sorted(s[:n], reverse=True)
        th = th[:n]
        assert_allclose(char_spherical(th, s), character_schur(th, s), rtol=1e-9, atol=1e-12)

    def test_rejects_non_integer_index(self):
        with pytest.raises(DegenerateIndex):
            char_spherical([0.1, 0.0], [1.5, 0])


def test_dispatch():
    x, s = [0.5, -0.2], [1.0, 0.0]
    assert spherical_function("additive", x, s) == hciz(x, s)
    assert spherical_function("positive", x, s) == gn_spherical(x, s)
    assert spherical_function("unitary", x, [2, 0]) == char_spherical(x, [2, 0])


def test_divided_difference_exp():
    # [z0, z1] e^{lam z} = (e^{lam z1} - e^{lam z0}) / (z1 - z0)
    assert_allclose(divided_difference_exp(0.7, [0.3, 1.1]),
                    (np.exp(0.77) - np.exp(0.21)) / 0.8, rtol=1e-13)
    assert_allclose(divided_difference_exp(0.7, [0.3, 0.3, 0.3]), 0.7**2 / 2 * np.exp(0.21),
                    rtol=1e-12)


class TestFactorization:
    def test_unitary(self):
        X1 = np.diag(np.exp([1j, -1j]))
        X2 = np.diag(np.exp([0.5j, 0.0]))
        rep = mc_factorization_check("unitary", X1, X2, [2, 0], N=100_000, rng=RngStream(3))
        assert abs(rep.zscore) < 4

    def test_positive(self):
        X1 = np.diag(np.exp([1.0, 0.0]))
        X2 = np.diag(np.exp([0.5, 0.0]))
        rep = mc_factorization_check("positive", X1, X2, [1.3 + 0.2j, 0.1], N=100_000,
                                     rng=RngStream(4))
        assert abs(rep.zscore) < 4

    def test_identity_exact(self):
        X1 = np.diag([0.8, -0.3])
        rep = mc_factorization_check("additive", X1, np.eye(2), [0.4j, -0.2], N=1000, rng=0)
        assert rep.zscore == 0
        assert_allclose(rep.mean, rep.reference, rtol=1e-12)

    def test_invalid(self):
        with pytest.raises(InvalidCase):
            mc_factorization_check("positive", -np.eye(2), np.eye(2), [1, 0], N=1000)
        with pytest.raises(ValueError):
            mc_factorization_check("unitary", np.eye(2), np.eye(2), [1, 0], N=10)
