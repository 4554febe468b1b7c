"""Distribution functions, decreasing rearrangements, and localization.

The distribution function of f is t -> mu{|f| > t}; the decreasing
rearrangement f* is the nonincreasing right-continuous step function on
(0, mu) equimeasurable with |f|.  The localized rearrangement of f on a
ball B rescales (f.chi_B)* to the unit interval, which is the object the
local norms are evaluated on.

Ties in |f| merge into a single step: the rearrangement is defined through
the distribution function, which cannot see them.
"""
from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .space import Ball, MetricMeasureSpace, ball_members
from .stepfn import StepFunction

__all__ = [
    "distribution",
    "decreasing_rearrangement",
    "localized_rearrangement",
    "layer_cake",
    "step_distribution",
    "step_rearrangement",
]


def _restricted(space: MetricMeasureSpace, f: np.ndarray, restrict_to) -> tuple[np.ndarray, np.ndarray]:
    f = np.asarray(f, dtype=float)
    if f.shape != (space.n,):
        raise ValueError("function vector must assign a value to every point")
    if restrict_to is None:
        return np.abs(f), space.weight
    idx = np.asarray(restrict_to, dtype=int)
    if idx.size and (idx.min() < 0 or idx.max() >= space.n):
        raise IndexError("restriction set contains out-of-range indices")
    return np.abs(f[idx]), space.weight[idx]


def _distribution_from(vals: np.ndarray, masses: np.ndarray) -> StepFunction:
    """mu{v > t} as a step function with an infinite zero tail."""
    if vals.size == 0 or float(np.sum(masses)) == 0.0:
        return StepFunction([0.0], [0.0], math.inf)
    order = np.argsort(vals, kind="stable")
    v_sorted = vals[order]
    m_sorted = masses[order]
    uniq, start = np.unique(v_sorted, return_index=True)
    # mass strictly above each distinct value; the total comes from the same
    # cumulative sum so the top level is exactly zero
    cum = np.cumsum(m_sorted)
    total = float(cum[-1])
    above = total - cum[np.append(start[1:], v_sorted.size) - 1]
    if uniq[0] == 0.0:
        bp = np.concatenate(([0.0], uniq[1:]))
        values = above
    else:
        bp = np.concatenate(([0.0], uniq))
        values = np.concatenate(([total], above))
    return StepFunction(bp, values, math.inf)


def _rearrangement_from(vals: np.ndarray, masses: np.ndarray) -> StepFunction:
    """Nonincreasing step function on (0, sum(masses)) equimeasurable with vals."""
    total = float(np.sum(masses))
    if vals.size == 0 or total <= 0.0:
        raise ValueError("rearrangement needs a set of positive measure")
    order = np.argsort(-vals, kind="stable")
    v_sorted = vals[order]
    m_sorted = masses[order]
    uniq_desc, start = np.unique(-v_sorted, return_index=True)
    uniq_desc = -uniq_desc
    level_mass = np.add.reduceat(m_sorted, start)
    cum = np.cumsum(level_mass)
    bp = np.concatenate(([0.0], cum[:-1]))
    return StepFunction(bp, uniq_desc, float(cum[-1]))


def distribution(
    space: MetricMeasureSpace, f: Sequence[float] | np.ndarray, restrict_to=None
) -> StepFunction:
    """t -> mu{x in the restriction : |f(x)| > t}."""
    vals, masses = _restricted(space, f, restrict_to)
    return _distribution_from(vals, masses)


def decreasing_rearrangement(
    space: MetricMeasureSpace, f: Sequence[float] | np.ndarray, restrict_to=None
) -> StepFunction:
    """f* on (0, mu(restriction)): nonincreasing, right-continuous,
    equimeasurable with |f| on the restriction."""
    vals, masses = _restricted(space, f, restrict_to)
    return _rearrangement_from(vals, masses)


def localized_rearrangement(
    space: MetricMeasureSpace, f: Sequence[float] | np.ndarray, ball: Ball
) -> StepFunction:
    """s -> (f.chi_B)*(s mu(B)) on (0, 1)."""
    members = ball_members(space, ball)
    if members.size == 0:
        raise ValueError("ball has no members; open balls always contain their center")
    u = decreasing_rearrangement(space, f, restrict_to=members)
    return u.scale_domain(1.0 / u.domain_end)


def layer_cake(
    space: MetricMeasureSpace,
    f: Sequence[float] | np.ndarray,
    psi: Callable[[np.ndarray], np.ndarray],
) -> tuple[float, float]:
    """Both sides of  integral psi(|f|) dmu  ==  integral_0^mu psi(f*(s)) ds,
    computed independently (weighted point sum vs exact step integral)."""
    vals, masses = _restricted(space, f, None)
    lhs = float(np.dot(np.asarray(psi(vals), dtype=float), masses))
    rhs = decreasing_rearrangement(space, f).integral_of(psi)
    return lhs, rhs


def step_distribution(u: StepFunction) -> StepFunction:
    """Distribution function of a step function with respect to Lebesgue
    measure on its domain; independent recomputation used as the
    equimeasurability oracle."""
    lengths = u.piece_lengths()
    finite = np.isfinite(lengths)
    if not np.all(finite) and np.any(np.abs(u.values[~finite]) > 0):
        raise ValueError("cannot take the distribution of a non-vanishing infinite tail")
    return _distribution_from(np.abs(u.values[finite]), lengths[finite])


def step_rearrangement(u: StepFunction) -> StepFunction:
    """Decreasing rearrangement of a finite-domain step function."""
    if math.isinf(u.domain_end):
        raise ValueError("rearrangement needs a finite domain")
    return _rearrangement_from(np.abs(u.values), u.piece_lengths())
