"""Poincare ratios on balls and empirical constant estimation.

The inequality under study bounds the local oscillation norm by the
gradient norm on a dilated ball:

    || f - f_B ||_{X(B, mu_B)}  <=  C_S * r * || g ||_{Y(sigma B, mu_{sigma B})}

with f_B the mu-average of f over B and g the discrete upper gradient.
The estimator sweeps a family of test functions over a family of balls and
reports the supremum of the two-sided ratio: always a LOWER bound on the
true constant.  A safety factor (default x2) turns it into the working
hypothesis the doubling certificate consumes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .graphs import GraphStructure, discrete_upper_gradient
from .rearrangement import localized_rearrangement
from .rispaces import RISpace, LpSpace, local_norm
from .space import Ball, MetricMeasureSpace, ball_members, dilate, measure_of

__all__ = [
    "PoincareSpec",
    "ball_average",
    "poincare_ratio",
    "classical_equivalence_check",
    "make_test_family",
    "default_ball_sweep",
    "estimate_poincare_constant",
    "PoincareEstimate",
    "FAMILY_NAMES",
]

FAMILY_NAMES = ("cutoffs", "distance", "random_lipschitz", "indicator")


@dataclass(frozen=True)
class PoincareSpec:
    """The pair of spaces, the dilation, and an optional claimed constant."""

    x: RISpace
    y: RISpace
    sigma: float = 1.0
    c_s: float | None = None

    def __post_init__(self) -> None:
        if self.sigma < 1:
            raise ValueError("dilation sigma must be >= 1")


def ball_average(space: MetricMeasureSpace, f, ball: Ball) -> float:
    members = ball_members(space, ball)
    w = space.weight[members]
    return float(np.dot(np.asarray(f, dtype=float)[members], w) / np.sum(w))


def poincare_ratio(
    space: MetricMeasureSpace,
    graph: GraphStructure,
    f,
    ball: Ball,
    spec: PoincareSpec,
) -> float:
    """||f - f_B||_{X(B)} / (r ||g||_{Y(sigma B)}); 0 when the oscillation
    vanishes, inf when only the gradient side vanishes."""
    f = np.asarray(f, dtype=float)
    fb = ball_average(space, f, ball)
    numerator = local_norm(space, f - fb, ball, spec.x)
    grad = discrete_upper_gradient(graph, f)
    denominator = ball.radius * local_norm(space, grad, dilate(ball, spec.sigma), spec.y)
    if numerator == 0.0:
        return 0.0
    if denominator == 0.0:
        return math.inf
    return numerator / denominator


def classical_equivalence_check(
    space: MetricMeasureSpace, f, ball: Ball, q: float
) -> tuple[float, float]:
    """||f - f_B|| on the ball computed two independent ways: through the
    rescaled rearrangement on (0,1) and as the direct normalized integral
    (1/mu(B) * integral_B |f - f_B|^q dmu)^(1/q)."""
    f = np.asarray(f, dtype=float)
    fb = ball_average(space, f, ball)
    rearranged_path = local_norm(space, f - fb, ball, LpSpace(q))
    members = ball_members(space, ball)
    w = space.weight[members]
    direct = float(np.dot(np.abs(f[members] - fb) ** q, w) / np.sum(w)) ** (1.0 / q)
    return rearranged_path, direct


# ---------------------------------------------------------------------------
# test-function families
# ---------------------------------------------------------------------------

def _cutoff_profiles(space: MetricMeasureSpace, ball: Ball) -> list[tuple[str, np.ndarray]]:
    """Ramp cutoffs between nested radii of the ball (the certificate shape,

    built here with the quadratic-denominator radii so the family needs no
    gain context)."""
    from .certificate import radii_between

    out = []
    for j in (1, 2, 3):
        r_out, r_in = radii_between(ball.radius, j)
        d = space.dist[ball.center]
        vals = np.clip((r_out - d) / (r_out - r_in), 0.0, 1.0)
        out.append((f"cutoff_{j}", vals))
    return out


def _lipschitz_from_seed(graph: GraphStructure, rng: np.random.Generator, scale: float) -> np.ndarray:
    """Random values projected to a 1-Lipschitz function of the path metric."""
    raw = rng.uniform(0.0, scale, size=graph.n)
    dpath = graph.path_metric()
    return np.min(raw[None, :] + dpath, axis=1)


def make_test_family(
    space: MetricMeasureSpace,
    graph: GraphStructure,
    ball: Ball,
    names: Sequence[str],
    rng: np.random.Generator,
    zero_boundary: bool = False,
) -> list[tuple[str, np.ndarray]]:
    """Named test functions for one ball; deterministic given the rng state.

    ``zero_boundary`` restricts to functions supported inside the ball that
    vanish toward its boundary (the cutoff shapes qualify; the others are
    multiplied by the widest cutoff).
    """
    out: list[tuple[str, np.ndarray]] = []
    cutoffs = _cutoff_profiles(space, ball)
    members = ball_members(space, ball)
    for name in names:
        if name == "cutoffs":
            out.extend(cutoffs)
        elif name == "distance":
            for tag, origin in (("center", ball.center), ("edge", int(members[-1]))):
                out.append((f"distance_{tag}", space.dist[origin].copy()))
        elif name == "random_lipschitz":
            for i in range(3):
                out.append(
                    (f"lipschitz_{i}", _lipschitz_from_seed(graph, rng, 4.0 * ball.radius))
                )
        elif name == "indicator":
            half = Ball(ball.center, ball.radius / 2.0, ball.closed)
            d_to_half = np.min(space.dist[:, ball_members(space, half)], axis=1)
            width = max(ball.radius / 4.0, 1e-12)
            out.append(("indicator_smoothed", np.clip(1.0 - d_to_half / width, 0.0, 1.0)))
        else:
            raise KeyError(f"unknown test family {name!r}; allowed: {', '.join(FAMILY_NAMES)}")
    if zero_boundary:
        envelope = cutoffs[0][1]
        out = [(f"{tag}*cutoff", vals * envelope) for tag, vals in out]
    return out


def default_ball_sweep(
    space: MetricMeasureSpace, count: int, rng: np.random.Generator
) -> list[Ball]:
    """Deterministic sweep: sampled centers crossed with radius quantiles."""
    diam = float(np.max(space.dist))
    if diam <= 0:
        return [Ball(0, 1.0)]
    centers = sorted(rng.choice(space.n, size=min(space.n, max(1, count)), replace=False).tolist())
    radii = [diam * q for q in (0.1, 0.25, 0.5)]
    return [Ball(int(c), r) for c in centers for r in radii]


@dataclass
class PoincareEstimate:
    supremum: float
    rows: list[tuple[str, int, float, float]]  # (family member, center, radius, ratio)
    safety_factor: float

    @property
    def constant_hypothesis(self) -> float:
        """The estimate promoted to a working constant via the safety factor."""
        return self.supremum * self.safety_factor


def estimate_poincare_constant(
    space: MetricMeasureSpace,
    graph: GraphStructure,
    spec: PoincareSpec,
    families: Sequence[str],
    balls: Iterable[Ball],
    rng: np.random.Generator | None = None,
    zero_boundary: bool = False,
    safety_factor: float = 2.0,
) -> PoincareEstimate:
    """Supremum of the Poincare ratio over families x balls (a lower bound
    on the true constant; never a proof)."""
    rng = np.random.default_rng(0) if rng is None else rng
    rows = []
    sup = 0.0
    for ball in balls:
        for tag, f in make_test_family(space, graph, ball, families, rng, zero_boundary):
            if np.ptp(f[ball_members(space, ball)]) == 0.0:
                continue
            ratio = poincare_ratio(space, graph, f, ball, spec)
            rows.append((tag, ball.center, ball.radius, ratio))
            if math.isfinite(ratio):
                sup = max(sup, ratio)
    return PoincareEstimate(sup, rows, safety_factor)
