"""The iterative doubling certificate, executed numerically.

Given a gain g passing the growth test, the certificate machinery builds,
inside a ball B of radius r, the shrinking closed balls B_j of radii

    r_1 = r,   r_j - r_{j+1} = r / (2 c1 h(j)),   h(t) = t g(t),

(so r_j decreases to r/2, with c1 the sum of 1/h(j)), the ramp cutoffs
f_j between B_{j+1} and B_j with gradient bound 2 c1 h(j) / r, and the
quantities

    P_j(B) = 1 / ( C h(j) phi_Y( mu(B_j) / mu(2B) ) ),      C = 8 c c1,

where c is the Poincare-constant hypothesis.  The key inequality per step
is phi_X( mu(B_{j+1}) / mu(2B) ) <= 1 / P_j(B); if some ball had
P_1(B) > e^2 D (D chosen so that g(D e^t) > e C t g(t) on the test range),
the chain would force P_j >= P_1 e^{j-1}, contradicting the decay of the
actual P_j.  A uniform bound on P_1(B) over all balls therefore bounds
mu(2B)/mu(B), which is the doubling property.

Everything that can blow past double range (P_1 e^j, g at huge arguments)
is handled in the log domain.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .gain import GainFunction, ermakoff_test, series_c1
from .rispaces import RISpace
from .space import Ball, MetricMeasureSpace, measure_of

__all__ = [
    "GainTooWeakError",
    "CertificateConfig",
    "find_d",
    "radii_sequence",
    "radii_between",
    "cutoff_function",
    "cutoff_gradient_bound",
    "pj_value",
    "key_inequality_check",
    "KeyInequalityRow",
    "minimal_chain",
    "induction_step_check",
    "InductionReport",
    "certificate_run",
    "CertificateBallReport",
    "doubling_verdict",
    "DoublingVerdictReport",
]

_QUAD_C1 = math.pi ** 2 / 6.0  # sum 1/j^2, the h(j) = j^2 special case


class GainTooWeakError(ArithmeticError):
    pass


def find_d(gain: GainFunction, big_c: float, t_max: float = 50.0) -> float:
    """Smallest D in {1, 2, 4, ...} with g(D e^t) > e C t g(t) on [1, t_max].

    Existence follows from the growth test but there is no constructor, so
    we scan doublings; absence within 2^60 raises :class:`GainTooWeakError`.
    """
    ts = np.linspace(1.0, t_max, 512)
    log_needed = 1.0 + math.log(big_c)
    for k in range(61):
        log_d = k * math.log(2.0)
        ok = all(
            gain.lng_at_exp(t + log_d) - math.log(t) - gain.lng_at_exp(math.log(t)) > log_needed
            for t in ts
        )
        if ok:
            return float(2.0 ** k)
    raise GainTooWeakError(
        f"gain {gain.name!r} too weak: no D <= 2^60 dominates e*C*t*g(t) with C={big_c:g}"
    )


@dataclass(frozen=True)
class CertificateConfig:
    """Constants of one certificate run; C = 8 c c1 by construction."""

    gain: GainFunction
    c1: float
    c: float
    big_c: float
    d: float
    j_max: int = 30

    @classmethod
    def build(
        cls,
        gain: GainFunction,
        c: float,
        j_max: int = 30,
        c1_tol: float = 1e-9,
        d_t_max: float | None = None,
    ) -> "CertificateConfig":
        if c <= 0:
            raise ValueError("the Poincare-constant hypothesis c must be positive")
        report = ermakoff_test(gain)
        if report.verdict != "pass":
            raise ValueError(
                f"gain {gain.name!r} does not pass the growth test (verdict {report.verdict})"
            )
        c1 = series_c1(gain, tol=c1_tol)
        big_c = 8.0 * c * c1
        t_max = d_t_max if d_t_max is not None else max(50.0, float(j_max) + 1.0)
        d = find_d(gain, big_c, t_max=t_max)
        return cls(gain=gain, c1=c1, c=c, big_c=big_c, d=d, j_max=j_max)

    def h(self, t: float) -> float:
        return t * float(self.gain(t))

    def log_h(self, t: float) -> float:
        return math.log(t) + self.gain.lng_at_exp(math.log(t))


def radii_sequence(r: float, cfg: CertificateConfig, j_count: int) -> list[float]:
    """[r_1, ..., r_J]; all above r/2 since the partial sums stay below c1."""
    if r <= 0:
        raise ValueError("radius must be positive")
    if j_count > cfg.j_max:
        raise ValueError(f"requested {j_count} radii beyond the configured cap {cfg.j_max}")
    out = [float(r)]
    for j in range(1, j_count):
        out.append(out[-1] - r / (2.0 * cfg.c1 * cfg.h(float(j))))
    return out


def radii_between(r: float, j: int) -> tuple[float, float]:
    """(r_j, r_{j+1}) for the gain-free quadratic profile h(j) = j^2,
    used by test-function families that need no gain context."""
    partial = sum(1.0 / i ** 2 for i in range(1, j))
    r_j = r - r / (2.0 * _QUAD_C1) * partial
    r_next = r_j - r / (2.0 * _QUAD_C1 * j ** 2)
    return r_j, r_next


def cutoff_function(
    space: MetricMeasureSpace, center: int, j: int, radii: Sequence[float]
) -> np.ndarray:
    """1 on closed B_{j+1}, 0 outside closed B_j, linear ramp in between."""
    if not 1 <= j <= len(radii) - 1:
        raise ValueError("cutoff index j needs radii r_j and r_{j+1}")
    r_j, r_next = radii[j - 1], radii[j]
    if not r_next < r_j:
        raise ValueError("radii must be strictly decreasing")
    d = space.dist[center]
    return np.clip((r_j - d) / (r_j - r_next), 0.0, 1.0)


def cutoff_gradient_bound(r: float, cfg: CertificateConfig, j: int) -> float:
    """The constant 2 c1 h(j) / r = 1 / (r_j - r_{j+1}) scaling chi_{B_j}."""
    return 2.0 * cfg.c1 * cfg.h(float(j)) / r


def _mu_ratio_sequence(
    space: MetricMeasureSpace, ball: Ball, cfg: CertificateConfig, j_count: int
) -> tuple[list[float], list[float], float]:
    radii = radii_sequence(ball.radius, cfg, j_count)
    mu_2b = measure_of(space, Ball(ball.center, 2.0 * ball.radius, closed=False))
    mus = [measure_of(space, Ball(ball.center, rj, closed=True)) for rj in radii]
    return radii, mus, mu_2b


def pj_value(
    space: MetricMeasureSpace,
    ball: Ball,
    j: int,
    cfg: CertificateConfig,
    y_spec: RISpace,
) -> float:
    """P_j(B) = 1 / (C h(j) phi_Y(mu(B_j)/mu(2B))), B_j the closed ball of
    radius r_j about the center of B."""
    radii, mus, mu_2b = _mu_ratio_sequence(space, ball, cfg, j)
    phi = float(y_spec.fundamental(mus[j - 1] / mu_2b))
    return 1.0 / (cfg.big_c * cfg.h(float(j)) * phi)


@dataclass
class KeyInequalityRow:
    j: int
    r_j: float
    mu_bj: float
    p_j: float
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def violated(self) -> bool:
        return self.lhs > self.rhs * (1.0 + 1e-12) + 1e-300


def key_inequality_check(
    space: MetricMeasureSpace,
    ball: Ball,
    cfg: CertificateConfig,
    x_spec: RISpace,
    y_spec: RISpace,
    j_count: int,
) -> list[KeyInequalityRow]:
    """Per-step check of phi_X(mu(B_{j+1})/mu(2B)) <= 1/P_j(B) from actual
    ball measures.  Violations mean the supplied Poincare constant is too
    small for this space, never a library defect."""
    radii, mus, mu_2b = _mu_ratio_sequence(space, ball, cfg, j_count + 1)
    rows = []
    for j in range(1, j_count + 1):
        phi_y = float(y_spec.fundamental(mus[j - 1] / mu_2b))
        p_j = 1.0 / (cfg.big_c * cfg.h(float(j)) * phi_y)
        lhs = float(x_spec.fundamental(mus[j] / mu_2b))
        rows.append(
            KeyInequalityRow(j=j, r_j=radii[j - 1], mu_bj=mus[j - 1], p_j=p_j,
                             lhs=lhs, rhs=1.0 / p_j)
        )
    return rows


# ---------------------------------------------------------------------------
# induction chain (log domain)
# ---------------------------------------------------------------------------

def minimal_chain(log_p1: float, j_count: int) -> list[float]:
    """The minimal admissible sequence ln P_j = ln P_1 + (j - 1)."""
    return [log_p1 + (j - 1) for j in range(1, j_count + 1)]


@dataclass
class InductionStep:
    j: int
    log_bound_next: float
    log_required_next: float

    @property
    def slack(self) -> float:
        return self.log_bound_next - self.log_required_next

    @property
    def certified(self) -> bool:
        return self.slack >= -1e-9


@dataclass
class InductionReport:
    hypothesis_met: bool
    log_threshold: float
    steps: list[InductionStep] = field(default_factory=list)

    @property
    def all_certified(self) -> bool:
        return self.hypothesis_met and all(s.certified for s in self.steps)


def induction_step_check(log_p_sequence: Sequence[float], cfg: CertificateConfig) -> InductionReport:
    """Replay the growth chain on a sequence of ln P_j values.

    Under the hypothesis ln P_1 > 2 + ln D, each step certifies that the
    recursion lower bound  P_j g(P_j) / (C h(j+1))  stays above P_1 e^j,
    provided the sequence itself respects the inductive floor
    P_j >= P_1 e^{j-1}.  All arithmetic is in the log domain; a sequence
    below the hypothesis threshold yields "hypothesis not met" rather than
    a failure.
    """
    log_p = [float(v) for v in log_p_sequence]
    if not log_p:
        raise ValueError("empty sequence")
    threshold = 2.0 + math.log(cfg.d)
    report = InductionReport(hypothesis_met=log_p[0] > threshold, log_threshold=threshold)
    if not report.hypothesis_met:
        return report
    for j in range(1, len(log_p)):
        floor_ok = log_p[j - 1] >= log_p[0] + (j - 1) - 1e-9
        bound = (
            log_p[j - 1]
            + cfg.gain.lng_at_exp(log_p[j - 1])
            - math.log(cfg.big_c)
            - cfg.log_h(float(j + 1))
        )
        required = log_p[0] + j
        if not floor_ok:
            bound = -math.inf
        report.steps.append(InductionStep(j=j, log_bound_next=bound, log_required_next=required))
    return report


# ---------------------------------------------------------------------------
# full runs and the doubling verdict
# ---------------------------------------------------------------------------

@dataclass
class CertificateBallReport:
    ball: Ball
    verdict: str  # doubling-consistent | blow-up-detected | cap-reached
    p1: float
    blow_up_j: int | None
    rows: list[tuple[int, float, float, float, float]]  # (j, r_j, mu_Bj, P_j, slack)


def certificate_run(
    space: MetricMeasureSpace,
    x_spec: RISpace,
    y_spec: RISpace,
    cfg: CertificateConfig,
    ball: Ball,
) -> CertificateBallReport:
    """One ball's certificate: the P_j trajectory, the key-inequality slack,
    and the verdict.

    doubling-consistent: P_1 <= e^2 D, the uniform-bound branch.
    blow-up-detected:    P_1 > e^2 D and the induction floor P_1 e^{j-1}
                         overtakes the measured P_j by step j (the
                         contradiction made quantitative).
    cap-reached:         P_1 > e^2 D but no crossing within j_max.
    """
    key_rows = key_inequality_check(space, ball, cfg, x_spec, y_spec, cfg.j_max - 1)
    p1 = key_rows[0].p_j
    rows = [
        (row.j, row.r_j, row.mu_bj, row.p_j, row.slack)
        for row in key_rows
    ]
    threshold = math.exp(2.0) * cfg.d
    if p1 <= threshold:
        return CertificateBallReport(ball, "doubling-consistent", p1, None, rows)
    log_p1 = math.log(p1)
    for row in key_rows:
        floor = log_p1 + (row.j - 1)
        if math.log(row.p_j) < floor - 1e-12:
            return CertificateBallReport(ball, "blow-up-detected", p1, row.j, rows)
    return CertificateBallReport(ball, "cap-reached", p1, None, rows)


@dataclass
class DoublingVerdictReport:
    sup_p1: float
    threshold: float  # e^2 D
    all_below_threshold: bool
    implied_doubling_bound: float
    measured_doubling_constant: float
    ball_count: int


def doubling_verdict(
    space: MetricMeasureSpace,
    x_spec: RISpace,
    y_spec: RISpace,
    cfg: CertificateConfig,
    balls: Iterable[Ball],
) -> DoublingVerdictReport:
    """Sweep sup of P_1(B) and the quantitative doubling bound it implies:
    mu(B)/mu(2B) >= phi_Y^{-1}(1 / (C sup P_1)), reported next to the
    directly computed doubling constant for comparison.  The verdict is a
    quantitative bound for the supplied constants, not a proof."""
    from .space import doubling_constant

    sup_p1 = 0.0
    count = 0
    for ball in balls:
        count += 1
        sup_p1 = max(sup_p1, pj_value(space, ball, 1, cfg, y_spec))
    ratio_floor = y_spec.fundamental_inverse(1.0 / (cfg.big_c * sup_p1))
    return DoublingVerdictReport(
        sup_p1=sup_p1,
        threshold=math.exp(2.0) * cfg.d,
        all_below_threshold=sup_p1 <= math.exp(2.0) * cfg.d,
        implied_doubling_bound=1.0 / ratio_floor,
        measured_doubling_constant=doubling_constant(space),
        ball_count=count,
    )
