import numpy as np
import pytest

from ripoincare.space import (
    Ball,
    MetricMeasureSpace,
    ball_members,
    canonical_radii,
    dilate,
    doubling_constant,
    doubling_sweep,
    measure_of,
)


@pytest.fixture
def line3():
    return MetricMeasureSpace.from_line([0.0, 1.0, 2.0], [1.0, 1.0, 1.0])


def test_ball_members_conventions(line3):
    assert list(ball_members(line3, Ball(1, 1.5))) == [0, 1, 2]
    assert list(ball_members(line3, Ball(1, 1.0))) == [1]
    assert list(ball_members(line3, Ball(1, 1.0, closed=True))) == [0, 1, 2]


def test_ball_center_out_of_range(line3):
    with pytest.raises(IndexError):
        ball_members(line3, Ball(7, 1.0))


def test_measure_of():
    uniform = MetricMeasureSpace.from_line([0.0, 1.0, 2.0], [1 / 3, 1 / 3, 1 / 3])
    assert measure_of(uniform, Ball(1, 1.5)) == pytest.approx(1.0)
    weighted = MetricMeasureSpace.from_line([0.0, 1.0, 2.0], [1.0, 2.0, 4.0])
    assert measure_of(weighted, Ball(0, 1.0, closed=True)) == 3.0


def test_measure_of_matches_bruteforce_oracle():
    rng = np.random.default_rng(42)
    for _ in range(20):
        n = rng.integers(2, 30)
        coords = np.sort(rng.uniform(0, 5, n))
        w = rng.uniform(0.1, 2.0, n)
        space = MetricMeasureSpace.from_line(coords, w)
        center = int(rng.integers(0, n))
        radius = float(rng.uniform(0.05, 5.0))
        for closed in (False, True):
            ball = Ball(center, radius, closed)
            if closed:
                expected = sum(
                    wi for wi, d in zip(w, space.dist[center]) if d <= radius
                )
            else:
                expected = sum(wi for wi, d in zip(w, space.dist[center]) if d < radius)
            assert measure_of(space, ball) == pytest.approx(expected, rel=1e-14)


def test_every_ball_contains_its_center():
    space = MetricMeasureSpace.from_line([0.0, 10.0], [0.5, 0.5])
    assert measure_of(space, Ball(0, 1e-9)) >= 0.5


def test_dilate():
    b = Ball(0, 1.0)
    assert dilate(b, 2.0) == Ball(0, 2.0)
    assert dilate(Ball(3, 0.5), 1.0) == Ball(3, 0.5)
    composed = dilate(dilate(Ball(1, 0.7), 1.5), 2.0)
    assert composed.radius == pytest.approx(dilate(Ball(1, 0.7), 3.0).radius)
    with pytest.raises(ValueError):
        dilate(b, 0.5)


def test_triangle_validation_rejects_nonmetric():
    d = np.array([[0.0, 1.0, 5.0], [1.0, 0.0, 1.0], [5.0, 1.0, 0.0]])
    with pytest.raises(ValueError, match="triangle"):
        MetricMeasureSpace(d, np.ones(3))


def test_weight_validation():
    with pytest.raises(ValueError):
        MetricMeasureSpace.from_line([0.0, 1.0], [1.0, 0.0])
    with pytest.raises(ValueError):
        MetricMeasureSpace.line_grid(0.0, 1.0, 5, weight="pow(x,2)")  # x=0 point
    space = MetricMeasureSpace.line_grid(1.0, 2.0, 5, weight="pow(x,2)")
    assert space.weight[0] == pytest.approx(1.0)
    with pytest.raises(ValueError, match="weight expression"):
        MetricMeasureSpace.line_grid(0.0, 1.0, 5, weight="cos(x)")


def test_ball_measure_monotone_in_radius():
    space = MetricMeasureSpace.line_grid(0.0, 1.0, 31, "exp(x)")
    for center in (0, 15, 30):
        for closed in (False, True):
            values = [
                measure_of(space, Ball(center, r, closed))
                for r in np.linspace(0.01, 1.2, 40)
            ]
            assert all(a <= b + 1e-15 for a, b in zip(values, values[1:]))


def test_single_point_doubling_constant():
    space = MetricMeasureSpace.from_line([0.0], [2.5])
    assert doubling_constant(space) == 1.0


def test_uniform_grid_doubling_bounded():
    space = MetricMeasureSpace.line_grid(0.0, 1.0, 101, "uniform")
    assert doubling_constant(space) <= 3.0


def test_doubling_matches_exhaustive_oracle():
    rng = np.random.default_rng(3)
    coords = np.sort(rng.uniform(0, 2, 12))
    w = rng.uniform(0.2, 1.5, 12)
    space = MetricMeasureSpace.from_line(coords, w)
    radii = canonical_radii(space)
    best = 0.0
    for x in range(space.n):
        for r in radii:
            best = max(
                best,
                measure_of(space, Ball(x, 2 * r)) / measure_of(space, Ball(x, r)),
            )
    assert doubling_constant(space) == pytest.approx(best, rel=1e-14)


def test_doubling_stable_under_radii_refinement():
    space = MetricMeasureSpace.line_grid(0.0, 1.0, 21, "exp(x)")
    base = canonical_radii(space)
    finer = np.unique(np.concatenate([base, (base[:-1] + base[1:]) / 3.0, base * 0.99]))
    assert doubling_constant(space, finer) <= doubling_constant(space) + 1e-12


def test_doubling_sweep_rows():
    space = MetricMeasureSpace.from_line([0.0, 1.0], [1.0, 1.0])
    rows = doubling_sweep(space)
    assert all(len(r) == 5 for r in rows)
    assert max(r[4] for r in rows) == doubling_constant(space)
    with pytest.raises(ValueError):
        doubling_constant(space, [])


def test_exponential_grid_constant_grows():
    space = MetricMeasureSpace.line_grid(0.0, 10.0, 101, "exp(x)")
    assert doubling_constant(space) > 100.0
