"""Dilation (Zippin) indices, the claim inequality, and gain criteria.

The dilation function of a fundamental function phi is
M(s) = sup_t phi(t s) / phi(t) over the pairs with t and t s in (0, 1];
the upper index is inf_{s>1} ln M(s)/ln s and the lower index is
sup_{s<1} ln M(s)/ln s.  Both are estimated on log-spaced grids and carry
their grid metadata: the per-s values are lower estimates of a supremum,
so the upper index estimate can only decrease and the lower one only
increase under s-grid refinement.

The claim inequality phi_X^{-1}(t) <= phi_Y^{-1}(t / g(1/t)) is the
executable core of the doubling proof: whenever the hypothesis
Psi(1/t) >= g(t) holds together with the concavity surrogate
t <= phi_X(t), the conclusion must hold on the same grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .gain import GainFunction
from .rispaces import RISpace
from .young import YoungFunction

__all__ = [
    "psi_gain",
    "ClaimReport",
    "claim_check",
    "YoungGainReport",
    "young_gain_check",
    "zippin_dilation",
    "ZippinEstimate",
    "zippin_indices",
    "GapReport",
    "index_gap_doubling_criterion",
]

_LN_T_FLOOR = -660.0  # phi evaluations stay well clear of double underflow
_LN_S_MAX = 330.0
_REL_TOL = 1e-9


def psi_gain(x_spec: RISpace, y_spec: RISpace, t: float) -> float:
    """Psi(t) = phi_X(t) / phi_Y(t)."""
    return float(x_spec.fundamental(t)) / float(y_spec.fundamental(t))


# ---------------------------------------------------------------------------
# the claim inequality
# ---------------------------------------------------------------------------

@dataclass
class ClaimReport:
    grid_size: int
    hypothesis_violations: list[tuple[float, float, float]] = field(default_factory=list)
    concavity_violations: list[tuple[float, float]] = field(default_factory=list)
    conclusion_violations: list[tuple[float, float, float]] = field(default_factory=list)

    @property
    def hypothesis_ok(self) -> bool:
        return not self.hypothesis_violations and not self.concavity_violations

    @property
    def conclusion_ok(self) -> bool:
        return not self.conclusion_violations


def claim_check(
    x_spec: RISpace,
    y_spec: RISpace,
    gain: GainFunction,
    grid: Sequence[float] | np.ndarray,
) -> ClaimReport:
    """Check phi_X^{-1}(t) <= phi_Y^{-1}(t / g(1/t)) on a grid in (0, 1).

    The hypothesis Psi(1/t) >= g(t) and the concavity surrogate
    t <= phi_X(t) are verified first and reported separately from
    conclusion violations (a failed hypothesis does not invalidate the
    conclusion check; some valid gain criteria bypass the Psi route).
    """
    grid = np.asarray(grid, dtype=float)
    if np.any(grid <= 0) or np.any(grid >= 1):
        raise ValueError("claim grid must lie in (0, 1)")
    report = ClaimReport(grid_size=grid.size)
    for t in grid:
        g_val = float(gain(1.0 / t))
        psi = psi_gain(x_spec, y_spec, t)
        if psi < g_val * (1.0 - _REL_TOL):
            report.hypothesis_violations.append((float(t), psi, g_val))
        phi_x = float(x_spec.fundamental(t))
        if t > phi_x * (1.0 + _REL_TOL):
            report.concavity_violations.append((float(t), phi_x))
        lhs = x_spec.fundamental_inverse(float(t))
        rhs = y_spec.fundamental_inverse(float(t) / g_val)
        if lhs > rhs * (1.0 + _REL_TOL):
            report.conclusion_violations.append((float(t), lhs, rhs))
    return report


# ---------------------------------------------------------------------------
# Orlicz gain criterion
# ---------------------------------------------------------------------------

@dataclass
class YoungGainReport:
    grid_size: int
    violations: list[tuple[float, float, float]] = field(default_factory=list)
    consequence_violations: list[tuple[float, float, float]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.consequence_violations


def young_gain_check(
    A: YoungFunction,
    A_hat: YoungFunction,
    gain: GainFunction,
    grid: Sequence[float] | np.ndarray,
) -> YoungGainReport:
    """Check A(t g(t)) <= A_hat(t) on a grid of t > 1, plus the derived
    inverse-fundamental consequence on the reciprocal grid."""
    grid = np.asarray(grid, dtype=float)
    if np.any(grid <= 1):
        raise ValueError("the Young gain criterion applies for t > 1")
    report = YoungGainReport(grid_size=grid.size)
    for t in grid:
        lhs = float(A(t * float(gain(t))))
        rhs = float(A_hat(t))
        if lhs > rhs * (1.0 + _REL_TOL):
            report.violations.append((float(t), lhs, rhs))
        # consequence: phi_{L^Ahat}^{-1}(s) <= phi_{L^A}^{-1}(s / g(1/s)), s = 1/t
        s = 1.0 / t
        cons_lhs = 1.0 / float(A_hat(t))
        cons_rhs = 1.0 / float(A(float(gain(t)) * t))
        if cons_lhs > cons_rhs * (1.0 + _REL_TOL):
            report.consequence_violations.append((float(s), cons_lhs, cons_rhs))
    return report


# ---------------------------------------------------------------------------
# dilation indices
# ---------------------------------------------------------------------------

def _phi_vec(phi) -> Callable[[np.ndarray], np.ndarray]:
    fn = phi.fundamental if isinstance(phi, RISpace) else phi

    def wrapped(t: np.ndarray) -> np.ndarray:
        try:
            out = np.asarray(fn(t), dtype=float)
            if out.shape == t.shape:
                return out
        except (TypeError, ValueError):
            pass
        return np.array([float(fn(float(x))) for x in t])

    return wrapped


def zippin_dilation(phi, s: float, t_grid: Sequence[float] | np.ndarray) -> float:
    """Grid supremum of phi(t s)/phi(t) over t with t, t s in (0, 1]:
    a lower estimate of the true dilation value M(s)."""
    if s <= 0:
        raise ValueError("dilation argument must be positive")
    fn = _phi_vec(phi)
    t = np.asarray(t_grid, dtype=float)
    t = t[(t > 0) & (t <= 1.0) & (t * s > 0) & (t * s <= 1.0)]
    if t.size == 0:
        raise ValueError("no admissible grid points: both t and t*s must lie in (0, 1]")
    num = fn(t * s)
    den = fn(t)
    mask = (den > 0) & (num > 0) & np.isfinite(num) & np.isfinite(den)
    if not np.any(mask):
        raise ValueError("fundamental function vanished on the whole admissible grid")
    return float(np.max(num[mask] / den[mask]))


@dataclass
class ZippinEstimate:
    lower: float
    upper: float
    s_lower: np.ndarray
    ratio_lower: np.ndarray  # ln M(s) / ln s per s < 1
    s_upper: np.ndarray
    ratio_upper: np.ndarray  # ln M(s) / ln s per s > 1
    metadata: dict

    def sandwich_check(self, tol: float = 1e-9) -> bool:
        """Definitional sandwich on the estimates: M(s) >= s^(index estimate)
        on the corresponding side (the epsilon-side slack is reported in the
        metadata rather than asserted)."""
        ok_low = np.all(self.ratio_lower <= self.lower + tol)
        ok_up = np.all(self.ratio_upper >= self.upper - tol)
        return bool(ok_low and ok_up)


def zippin_indices(phi, resolution: int = 1) -> ZippinEstimate:
    """Grid estimates of the lower and upper dilation indices of phi.

    ``resolution`` scales both grid densities.  The estimates satisfy
    0 <= lower <= upper <= 1 up to the grid slack for any quasi-concave
    fundamental function; the sup estimates only increase under t-grid
    refinement and the inf/sup over s tightens under s-grid refinement.
    """
    if resolution < 1:
        raise ValueError("resolution must be a positive integer")
    n_t = 160 * resolution + 1
    n_s = 120 * resolution
    fn = _phi_vec(phi)
    ln_t = np.linspace(_LN_T_FLOOR, 0.0, n_t)
    t = np.exp(ln_t)
    phi_t = fn(t)

    def ratios(ln_s_grid: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        out_s, out_ratio = [], []
        for ln_s in ln_s_grid:
            mask = (ln_t + ln_s <= 0.0) & (ln_t + ln_s >= _LN_T_FLOOR)
            if not np.any(mask):
                continue
            ts = np.exp(ln_t[mask] + ln_s)
            num = fn(ts)
            den = phi_t[mask]
            good = (num > 0) & (den > 0) & np.isfinite(num) & np.isfinite(den)
            if not np.any(good):
                continue
            m_est = np.max(num[good] / den[good])
            out_s.append(math.exp(ln_s))
            out_ratio.append(math.log(m_est) / ln_s)
        return np.asarray(out_s), np.asarray(out_ratio)

    # s > 1 needs t <= 1/s above the floor, so it caps at half the floor;
    # s < 1 pairs with t = 1 and can descend to the floor itself
    s_up, ratio_up = ratios(np.linspace(math.log(1.02), _LN_S_MAX, n_s))
    s_lo, ratio_lo = ratios(np.linspace(_LN_T_FLOOR + 1.0, -math.log(1.02), n_s))
    if s_up.size == 0 or s_lo.size == 0:
        raise ValueError("empty admissible dilation grid")
    upper = float(np.min(ratio_up))
    lower = float(np.max(ratio_lo))
    metadata = {
        "n_t": int(n_t),
        "n_s": int(n_s),
        "ln_t_floor": _LN_T_FLOOR,
        "ln_s_max": _LN_S_MAX,
        "resolution": int(resolution),
        "eps_slack_small_s": float(lower - ratio_lo[0]),
        "eps_slack_large_s": float(ratio_up[-1] - upper),
    }
    return ZippinEstimate(lower, upper, s_lo, ratio_lo, s_up, ratio_up, metadata)


# ---------------------------------------------------------------------------
# index-gap doubling criterion
# ---------------------------------------------------------------------------

@dataclass
class GapReport:
    satisfied: bool
    lower_y: float
    upper_x: float
    slack: float
    psi_bound_violations: list[tuple[float, float, float]]
    metadata: dict


def index_gap_doubling_criterion(
    x_spec: RISpace, y_spec: RISpace, resolution: int = 1, slack: float = 5e-3
) -> GapReport:
    """Satisfied when the lower index of Y exceeds the upper index of X by
    more than the resolution slack: the ratio of fundamental functions then
    dominates a positive power, so the gap supplies a power gain and the
    doubling conclusion applies whenever the Poincare inequality holds.

    The derived bound Psi(t) >= t^(lower_Y - upper_X) is checked on a grid.
    """
    est_x = zippin_indices(x_spec.fundamental, resolution)
    est_y = zippin_indices(y_spec.fundamental, resolution)
    gap = est_y.lower - est_x.upper
    violations = []
    exponent = gap
    for t in np.logspace(-6, -0.05, 60):
        psi = psi_gain(x_spec, y_spec, float(t))
        bound = float(t) ** exponent
        if psi < bound * (1.0 - 1e-6):
            violations.append((float(t), psi, bound))
    return GapReport(
        satisfied=gap > slack,
        lower_y=est_y.lower,
        upper_x=est_x.upper,
        slack=slack,
        psi_bound_violations=violations,
        metadata={"x": est_x.metadata, "y": est_y.metadata},
    )
