"""Finite metric measure spaces: balls, dilations, doubling constants.

A space is a finite point set with a symmetric distance matrix satisfying
the triangle inequality and a strictly positive weight (mass) per point.
Balls are open by default; the doubling certificate uses closed balls for
its shrinking family, so both conventions are supported via a flag.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "MetricMeasureSpace",
    "Ball",
    "ball_members",
    "measure_of",
    "dilate",
    "canonical_radii",
    "doubling_constant",
    "doubling_sweep",
    "WEIGHT_EXPRESSIONS",
]

WEIGHT_EXPRESSIONS = ("uniform", "exp(x)", "pow(x,a)")


class MetricMeasureSpace:
    """Finite metric space with positive point weights.

    Parameters
    ----------
    dist : (n, n) array
        Symmetric matrix of nonnegative distances with zero diagonal,
        satisfying the triangle inequality.
    weight : (n,) array
        Strictly positive mass per point.
    validate : bool
        Run the O(n^3) triangle-inequality check.  Constructors that build
        the matrix from points on a line skip it (valid by construction).
    """

    __slots__ = ("dist", "weight", "coords")

    def __init__(
        self,
        dist: np.ndarray,
        weight: np.ndarray,
        validate: bool = True,
        coords: np.ndarray | None = None,
    ) -> None:
        dist = np.asarray(dist, dtype=float)
        weight = np.asarray(weight, dtype=float)
        n = weight.size
        if dist.shape != (n, n):
            raise ValueError("distance matrix shape does not match weight vector")
        if np.any(weight <= 0) or not np.all(np.isfinite(weight)):
            raise ValueError("weights must be positive and finite")
        if np.any(dist < 0) or not np.all(np.isfinite(dist)):
            raise ValueError("distances must be nonnegative and finite")
        if np.any(np.diag(dist) != 0):
            raise ValueError("distance matrix must have zero diagonal")
        if not np.array_equal(dist, dist.T):
            raise ValueError("distance matrix must be symmetric")
        if validate:
            tol = 1e-12 * max(1.0, float(dist.max(initial=0.0)))
            for k in range(n):
                if np.any(dist > dist[:, k][:, None] + dist[k, :][None, :] + tol):
                    raise ValueError("triangle inequality violated")
        dist.setflags(write=False)
        weight.setflags(write=False)
        self.dist = dist
        self.weight = weight
        self.coords = coords

    @property
    def n(self) -> int:
        return self.weight.size

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weight))

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_line(cls, coords: Sequence[float], weight: Sequence[float]) -> "MetricMeasureSpace":
        """Points on the real line; |x_i - x_j| is a metric by construction."""
        x = np.asarray(coords, dtype=float)
        d = np.abs(x[:, None] - x[None, :])
        return cls(d, np.asarray(weight, dtype=float), validate=False, coords=x)

    @classmethod
    def line_grid(
        cls, start: float, stop: float, count: int, weight: str = "uniform"
    ) -> "MetricMeasureSpace":
        """Uniform grid on [start, stop] with a whitelisted weight expression.

        Supported expressions: ``uniform``, ``exp(x)``, ``pow(x,a)``.
        """
        if count < 1:
            raise ValueError("grid needs at least one point")
        if stop <= start:
            raise ValueError("grid endpoints must satisfy start < stop")
        x = np.linspace(start, stop, count)
        w = _weight_from_expression(weight, x)
        if count == 1:
            return cls.from_line(x, w)
        # distances from index differences: equal spacings are exactly equal
        # floats, so ball membership is immune to coordinate rounding dust
        step = (stop - start) / (count - 1)
        idx = np.arange(count)
        d = np.abs(idx[:, None] - idx[None, :]) * step
        return cls(d, w, validate=False, coords=x)

    @classmethod
    def from_shortest_paths(cls, raw: np.ndarray, weight: np.ndarray) -> "MetricMeasureSpace":
        """Metric repair of a symmetric nonnegative matrix via shortest paths."""
        from scipy.sparse.csgraph import shortest_path

        raw = np.asarray(raw, dtype=float)
        sym = (raw + raw.T) / 2.0
        np.fill_diagonal(sym, 0.0)
        d = shortest_path(sym, method="FW", directed=False)
        d = (d + d.T) / 2.0
        return cls(d, np.asarray(weight, dtype=float), validate=False)


def _weight_from_expression(expr: str, x: np.ndarray) -> np.ndarray:
    expr = expr.strip()
    if expr == "uniform":
        return np.full(x.size, 1.0 / x.size)
    if expr == "exp(x)":
        return np.exp(x)
    if expr.startswith("pow(x,") and expr.endswith(")"):
        a = float(expr[len("pow(x,"):-1])
        w = np.power(x, a)
        if np.any(w <= 0) or not np.all(np.isfinite(w)):
            raise ValueError("pow(x,a) weights must be positive; shift the grid off x<=0")
        return w
    raise ValueError(
        f"unknown weight expression {expr!r}; allowed: {', '.join(WEIGHT_EXPRESSIONS)}"
    )


@dataclass(frozen=True)
class Ball:
    """Ball given by a center index and a radius; open unless ``closed``."""

    center: int
    radius: float
    closed: bool = False

    def __post_init__(self) -> None:
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")


def ball_members(space: MetricMeasureSpace, ball: Ball) -> np.ndarray:
    """Indices inside the ball (strict inequality when open)."""
    if not 0 <= ball.center < space.n:
        raise IndexError(f"ball center {ball.center} out of range for n={space.n}")
    row = space.dist[ball.center]
    mask = row <= ball.radius if ball.closed else row < ball.radius
    return np.flatnonzero(mask)


def measure_of(space: MetricMeasureSpace, ball: Ball) -> float:
    """Total weight of the ball's members (the center always belongs)."""
    return float(np.sum(space.weight[ball_members(space, ball)]))


def dilate(ball: Ball, sigma: float) -> Ball:
    """Scale the radius by sigma >= 1, preserving center and closure."""
    if sigma < 1:
        raise ValueError("dilation factor must be >= 1")
    return replace(ball, radius=ball.radius * sigma)


def canonical_radii(space: MetricMeasureSpace) -> np.ndarray:
    """Distinct positive pairwise distances plus midpoints between
    consecutive distinct values.

    On a finite space, open-ball membership is piecewise constant in the
    radius with breakpoints at the pairwise distances, so this set is an
    exhaustive sweep.
    """
    iu = np.triu_indices(space.n, k=1)
    d = np.unique(space.dist[iu])
    d = d[d > 0]
    if d.size == 0:
        return np.array([1.0])
    mids = (d[:-1] + d[1:]) / 2.0
    return np.unique(np.concatenate([d, mids]))


def _ratio_table(
    space: MetricMeasureSpace, radii: np.ndarray
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """mu(B(x, r)), mu(B(x, 2r)) for all centers x and r in radii.

    Returns (mu_r, mu_2r, ratio), each of shape (n_centers, n_radii);
    all balls are open so every denominator is at least the center weight.
    """
    radii = np.asarray(radii, dtype=float)
    n = space.n
    mu_r = np.empty((n, radii.size))
    mu_2r = np.empty((n, radii.size))
    for x in range(n):
        row = space.dist[x]
        mu_r[x] = (row[None, :] < radii[:, None]) @ space.weight
        mu_2r[x] = (row[None, :] < 2.0 * radii[:, None]) @ space.weight
    return mu_r, mu_2r, mu_2r / mu_r


def doubling_constant(space: MetricMeasureSpace, radii: Iterable[float] | None = None) -> float:
    """sup over centers and radii of mu(B(x, 2r)) / mu(B(x, r)), open balls."""
    radii = canonical_radii(space) if radii is None else np.asarray(list(radii), dtype=float)
    if radii.size == 0:
        raise ValueError("radii set must be nonempty")
    _, _, ratio = _ratio_table(space, radii)
    return float(np.max(ratio))


def doubling_sweep(
    space: MetricMeasureSpace, radii: Iterable[float] | None = None
) -> list[tuple[int, float, float, float, float]]:
    """Per-(center, radius) rows: (center, r, mu_B, mu_2B, ratio)."""
    radii = canonical_radii(space) if radii is None else np.asarray(list(radii), dtype=float)
    if radii.size == 0:
        raise ValueError("radii set must be nonempty")
    mu_r, mu_2r, ratio = _ratio_table(space, radii)
    rows = []
    for x in range(space.n):
        for j, r in enumerate(radii):
            rows.append((x, float(r), float(mu_r[x, j]), float(mu_2r[x, j]), float(ratio[x, j])))
    return rows
