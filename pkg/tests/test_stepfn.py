import math

import numpy as np
import pytest

from ripoincare.stepfn import StepFunction, indicator_step


def test_construction_and_eval():
    u = StepFunction([0.0, 1.0, 2.0], [3.0, 2.0, 1.0], 3.0)
    assert u(0.0) == 3.0
    assert u(0.999) == 3.0
    assert u(1.0) == 2.0  # right continuity
    assert u(2.5) == 1.0
    assert u(3.0) == 0.0  # outside the domain
    assert u(-0.1) == 0.0
    np.testing.assert_allclose(u(np.array([0.5, 1.5, 2.5])), [3.0, 2.0, 1.0])


def test_construction_rejects_bad_breakpoints():
    with pytest.raises(ValueError):
        StepFunction([0.5, 1.0], [1.0, 0.0], 2.0)
    with pytest.raises(ValueError):
        StepFunction([0.0, 1.0, 1.0], [1.0, 2.0, 0.0], 2.0)
    with pytest.raises(ValueError):
        StepFunction([0.0, 1.0], [1.0, 2.0], 0.5)
    with pytest.raises(ValueError):
        StepFunction([0.0], [1.0], math.inf)  # infinite tail must vanish


def test_exact_integrals():
    u = StepFunction([0.0, 1.0, 2.0], [3.0, 2.0, 1.0], 3.0)
    assert u.integral() == 6.0
    assert u.integral_of(lambda v: v**2) == 9.0 + 4.0 + 1.0
    assert u.prefix_integral(1.5) == 3.0 + 1.0
    assert u.prefix_integral(10.0) == 6.0
    np.testing.assert_allclose(u.prefix_integrals_at_breakpoints(), [0.0, 3.0, 5.0])


def test_zero_tail_integration():
    u = StepFunction([0.0, 2.0], [1.5, 0.0], math.inf)
    assert u.integral() == 3.0
    assert u.integral_of(lambda v: v**2) == 4.5
    with pytest.raises(ValueError):
        u.integral_of(lambda v: v + 1.0)  # does not vanish on the tail


def test_measure_above():
    u = StepFunction([0.0, 1.0, 2.0], [3.0, 2.0, 1.0], 3.0)
    assert u.measure_above(0.0) == 3.0
    assert u.measure_above(1.0) == 2.0
    assert u.measure_above(2.5) == 1.0
    assert u.measure_above(3.0) == 0.0


def test_canonical_merges_ties():
    u = StepFunction([0.0, 1.0, 2.0], [2.0, 2.0, 1.0], 3.0)
    c = u.canonical()
    np.testing.assert_array_equal(c.breakpoints, [0.0, 2.0])
    np.testing.assert_array_equal(c.values, [2.0, 1.0])
    assert c.integral() == u.integral()


def test_monotonicity_checks():
    assert StepFunction([0.0, 1.0], [2.0, 1.0], 2.0).is_nonincreasing()
    assert not StepFunction([0.0, 1.0], [1.0, 2.0], 2.0).is_nonincreasing()


def test_indicator_and_scaling():
    u = indicator_step(0.4, 1.0)
    assert u(0.39) == 1.0 and u(0.4) == 0.0
    v = u.scale_domain(2.0)
    assert v.domain_end == 2.0 and v(0.79) == 1.0
    w = u.scale_values(3.0)
    assert w.integral() == pytest.approx(1.2)


def test_rows_roundtrip():
    u = StepFunction([0.0, 0.5], [1.0, 0.25], 2.0)
    assert u.to_rows() == [(0.0, 1.0), (0.5, 0.25)]
