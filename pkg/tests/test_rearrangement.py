import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ripoincare.rearrangement import (
    decreasing_rearrangement,
    distribution,
    layer_cake,
    localized_rearrangement,
    step_distribution,
)
from ripoincare.space import Ball, MetricMeasureSpace, ball_members, measure_of


def _space(weights):
    return MetricMeasureSpace.from_line(np.arange(len(weights), dtype=float), weights)


def test_distribution_indicator():
    space = _space([0.4, 0.6])
    d = distribution(space, [1.0, 0.0])
    assert d(0.0) == pytest.approx(0.4)
    assert d(0.999) == pytest.approx(0.4)
    assert d(1.0) == 0.0


def test_distribution_zero_function():
    space = _space([1.0, 1.0])
    d = distribution(space, [0.0, 0.0])
    assert d(0.0) == 0.0 and d(5.0) == 0.0


def test_distribution_count_oracle():
    space = _space([1.0, 1.0, 1.0])
    d = distribution(space, [3.0, 1.0, 2.0])
    assert d.to_rows() == [(0.0, 3.0), (1.0, 2.0), (2.0, 1.0), (3.0, 0.0)]


def test_rearrangement_indicator():
    space = _space([0.4, 0.6])
    u = decreasing_rearrangement(space, [1.0, 0.0])
    assert u(0.0) == 1.0
    assert u(0.399) == 1.0
    assert u(0.4) == 0.0
    assert u.domain_end == pytest.approx(1.0)


def test_rearrangement_sorted_simple():
    space = _space([1.0, 1.0, 1.0])
    u = decreasing_rearrangement(space, [3.0, 1.0, 2.0])
    assert u.to_rows() == [(0.0, 3.0), (1.0, 2.0), (2.0, 1.0)]


def test_ties_merge_into_single_step():
    space = _space([1.0, 1.0, 1.0])
    u = decreasing_rearrangement(space, [2.0, 2.0, 1.0])
    assert u.to_rows() == [(0.0, 2.0), (2.0, 1.0)]


@given(
    vals=st.lists(st.integers(min_value=-5, max_value=5), min_size=1, max_size=24),
    seed=st.integers(min_value=0, max_value=2**31 - 1),
)
@settings(max_examples=120, deadline=None)
def test_equimeasurability_property(vals, seed):
    rng = np.random.default_rng(seed)
    f = np.array(vals, dtype=float)
    w = rng.uniform(0.1, 2.0, f.size)
    space = _space(w)
    mu_f = distribution(space, f)
    mu_star = step_distribution(decreasing_rearrangement(space, f))
    checkpoints = np.concatenate([mu_f.breakpoints, mu_star.breakpoints, [0.5, 1.7]])
    tol = 1e-12 * max(1.0, float(np.sum(w)))
    for t in checkpoints:
        assert abs(mu_f(t) - mu_star(t)) <= tol


@given(seed=st.integers(min_value=0, max_value=2**31 - 1))
@settings(max_examples=60, deadline=None)
def test_rearrangement_invariant_under_weight_preserving_permutation(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 20))
    f = rng.integers(-4, 5, n).astype(float)
    w = np.full(n, 0.7)
    perm = rng.permutation(n)
    u1 = decreasing_rearrangement(_space(w), f)
    u2 = decreasing_rearrangement(_space(w), f[perm])
    np.testing.assert_array_equal(u1.breakpoints, u2.breakpoints)
    np.testing.assert_array_equal(u1.values, u2.values)


def test_rearrangement_integral_identity():
    rng = np.random.default_rng(11)
    for _ in range(25):
        n = int(rng.integers(1, 40))
        f = rng.normal(size=n)
        w = rng.uniform(0.1, 3.0, n)
        space = _space(w)
        u = decreasing_rearrangement(space, f)
        lhs = u.integral()
        rhs = float(np.dot(np.abs(f), w))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(rhs))


def test_localized_rearrangement_constant():
    space = _space([1.0, 2.0, 3.0])
    ball = Ball(1, 1.5)
    u = localized_rearrangement(space, [4.0, 4.0, 4.0], ball)
    assert u.domain_end == 1.0
    assert u(0.0) == 4.0 and u(0.99) == 4.0


def test_localized_rearrangement_half_indicator():
    space = _space([1.0, 1.0, 1.0, 1.0])
    ball = Ball(1, 1.5)  # members {0,1,2}, mass 3
    f = np.array([1.0, 1.0, 0.0, 1.0])  # mass inside ball: 2 of 3
    u = localized_rearrangement(space, f, ball)
    assert u(0.0) == 1.0
    assert u(2.0 / 3.0 - 1e-9) == 1.0
    assert u(2.0 / 3.0) == 0.0


def test_localized_mean_identity():
    rng = np.random.default_rng(5)
    for _ in range(20):
        n = int(rng.integers(3, 30))
        coords = np.sort(rng.uniform(0, 4, n))
        w = rng.uniform(0.1, 2.0, n)
        space = MetricMeasureSpace.from_line(coords, w)
        f = rng.normal(size=n)
        ball = Ball(int(rng.integers(0, n)), float(rng.uniform(0.3, 4.0)))
        u = localized_rearrangement(space, f, ball)
        members = ball_members(space, ball)
        direct = float(np.dot(np.abs(f[members]), w[members])) / measure_of(space, ball)
        assert u.integral() == pytest.approx(direct, rel=1e-12, abs=1e-14)


def test_layer_cake_identity_examples():
    space = _space([1.0, 1.0, 1.0])
    assert layer_cake(space, [3.0, 1.0, 2.0], lambda v: v) == (6.0, 6.0)
    lhs, rhs = layer_cake(space, [3.0, 1.0, 2.0], lambda v: v**2)
    assert (lhs, rhs) == (14.0, 14.0)


def test_layer_cake_random():
    rng = np.random.default_rng(8)
    for _ in range(50):
        n = int(rng.integers(1, 35))
        f = rng.normal(size=n) * 3
        w = rng.uniform(0.05, 2.0, n)
        lhs, rhs = layer_cake(_space(w), f, lambda v: np.abs(v) ** 3.5)
        assert lhs == pytest.approx(rhs, rel=1e-9)
