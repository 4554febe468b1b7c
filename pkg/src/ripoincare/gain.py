"""Gain functions g : [1, inf) -> [1, inf) with g(1) = 1.

The gain measures how much stronger the left-hand space of the Poincare
inequality is than the right-hand one.  The decisive growth test is
Ermakoff's condition  lim t g(t) / g(e^t) = 0 : the ratio must be driven to
zero by the doubly-exponential argument.  Because g(e^t) overflows doubles
for any interesting t, every gain carries a log-domain evaluator
``lng_at_exp(t) = ln g(e^t)`` and all asymptotics run in the log domain.

The slowly-varying example library (iterated logarithms and products and
powers of them) converts to gains via g(t) = E(1/t) normalized to g(1)=1.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad

__all__ = [
    "GainFunction",
    "gain_log_alpha",
    "gain_pow",
    "gain_one",
    "gain_from_psi",
    "parse_gain",
    "ErmakoffReport",
    "ermakoff_test",
    "SeriesDivergenceError",
    "series_c1",
    "iterated_log",
    "SlowlyVaryingExample",
    "ermakoff_for_example",
    "GAIN_REGISTRY_HELP",
]

_PASS_FINAL = 1e-3
_FAIL_LEVEL = 0.1
_TAIL = 8
_DEEP_CAP_K = 990  # 2^990 stays representable as a double


class GainFunction:
    """Continuous increasing g with g(1) = 1, with a log-domain evaluator."""

    def __init__(self, name: str, value: Callable, lng_at_exp: Callable[[float], float],
                 validate: bool = True) -> None:
        self.name = name
        self._value = value
        self._lng_at_exp = lng_at_exp
        if validate:
            self._validate()

    def __call__(self, t):
        """g(t) for moderate t >= 1 (may overflow for huge t; use the log path)."""
        return self._value(t)

    def lng_at_exp(self, t: float) -> float:
        """ln g(e^t) for t >= 0, overflow-safe."""
        return float(self._lng_at_exp(t))

    def log_value(self, t: float) -> float:
        """ln g(t) for t >= 1 via the log-domain path."""
        if t < 1:
            raise ValueError("gain functions are defined on [1, inf)")
        return self.lng_at_exp(math.log(t))

    def _validate(self) -> None:
        at_one = self.lng_at_exp(0.0)
        if abs(at_one) > 1e-9:
            raise ValueError(f"gain {self.name!r} must satisfy g(1) = 1; ln g(1) = {at_one:g}")
        grid = np.concatenate(([0.0], np.logspace(-3, 2, 40)))
        vals = np.array([self.lng_at_exp(float(t)) for t in grid])
        if np.any(np.diff(vals) < -1e-9):
            raise ValueError(f"gain {self.name!r} is not nondecreasing")
        if np.any(vals < -1e-9):
            raise ValueError(f"gain {self.name!r} drops below 1")

    def __repr__(self) -> str:  # pragma: no cover
        return f"GainFunction({self.name!r})"


# ---------------------------------------------------------------------------
# registry gains
# ---------------------------------------------------------------------------

def gain_log_alpha(alpha: float) -> GainFunction:
    """g(t) = (1 + ln t)^alpha."""
    if alpha < 0:
        raise ValueError("log_alpha needs alpha >= 0")
    return GainFunction(
        f"log_alpha({alpha:g})",
        lambda t: np.power(1.0 + np.log(t), alpha),
        lambda t: alpha * math.log1p(t),
    )


def gain_pow(eps: float) -> GainFunction:
    """g(t) = t^eps."""
    if eps < 0:
        raise ValueError("pow needs eps >= 0")
    return GainFunction(
        f"pow({eps:g})",
        lambda t: np.power(t, eps),
        lambda t: eps * t,
    )


def gain_one() -> GainFunction:
    return GainFunction("one", lambda t: np.ones_like(np.asarray(t, dtype=float)), lambda t: 0.0)


def gain_from_psi(x_spec, y_spec) -> GainFunction:
    """g(t) = Psi(1/t) / Psi(1) where Psi(t) = phi_X(t) / phi_Y(t).

    Requires both fundamental functions to vanish at 0+ and the ratio to be
    a genuine gain (nondecreasing, >= 1 after normalization).
    """
    for spec in (x_spec, y_spec):
        if not getattr(spec, "vanishing_fundamental", True):
            raise ValueError(f"{spec.label} has phi(0+) != 0; cannot build a gain from it")
    log_norm = x_spec.log_fundamental(0.0) - y_spec.log_fundamental(0.0)

    def value(t):
        t_arr = np.asarray(t, dtype=float)
        out = (
            np.asarray(x_spec.fundamental(1.0 / t_arr), dtype=float)
            / np.asarray(y_spec.fundamental(1.0 / t_arr), dtype=float)
            / math.exp(log_norm)
        )
        return float(out) if out.ndim == 0 else out

    def lng(t: float) -> float:
        return x_spec.log_fundamental(-t) - y_spec.log_fundamental(-t) - log_norm

    suffix = "" if abs(log_norm) <= 1e-12 else ", normalized"
    return GainFunction(f"psi_of({x_spec.label},{y_spec.label}{suffix})", value, lng)


# ---------------------------------------------------------------------------
# slowly varying examples
# ---------------------------------------------------------------------------

def iterated_log(n: int, t):
    """L_1(t) = 1 + ln(1/t); L_{j+1}(t) = 1 + ln(L_j(t)), on (0, 1)."""
    if n < 1:
        raise ValueError("iterated log order must be >= 1")
    val = 1.0 + np.log(1.0 / np.asarray(t, dtype=float))
    for _ in range(n - 1):
        val = 1.0 + np.log(val)
    return val


def _iterated_logs_at_exp_neg(u: float, n: int) -> list[float]:
    """[L_1, ..., L_n] evaluated at t = e^{-u}, computed without forming t."""
    vals = [1.0 + u]
    for _ in range(n - 1):
        vals.append(1.0 + math.log(vals[-1]))
    return vals


@dataclass(frozen=True)
class SlowlyVaryingExample:
    """Decreasing slowly varying function on (0, 1) from the example library.

    family 'c' (params k, m; k < m):      exp(L_k / L_m)
    family 'd' (params alpha_1..alpha_k): exp(prod L_j^alpha_j), 0 < alpha_j < 1
    family 'b' (params m, alpha):         (prod_{j<m} L_j) * L_m^alpha, alpha > 0
    family 'L' (param n):                 the iterated logarithm itself
    """

    family: str
    params: tuple[float, ...]

    def __post_init__(self) -> None:
        if self.family == "c":
            k, m = self.params
            if not (k == int(k) and m == int(m) and 1 <= k < m):
                raise ValueError("family c needs integers 1 <= k < m")
        elif self.family == "d":
            if len(self.params) < 1 or not all(0.0 < a < 1.0 for a in self.params):
                raise ValueError("family d needs exponents with 0 < alpha_j < 1")
        elif self.family == "b":
            m, alpha = self.params
            if not (m == int(m) and m >= 1 and alpha > 0):
                raise ValueError("family b needs an integer m >= 1 and alpha > 0")
        elif self.family == "L":
            (n,) = self.params
            if not (n == int(n) and n >= 1):
                raise ValueError("family L needs an integer order n >= 1")
        else:
            raise ValueError(f"unknown slowly varying family {self.family!r}")

    @property
    def name(self) -> str:
        args = ",".join(f"{p:g}" for p in self.params)
        return f"example:{self.family}({args})"

    def value(self, t):
        """Evaluate on (0, 1)."""
        t_arr = np.asarray(t, dtype=float)
        if np.any(t_arr <= 0) or np.any(t_arr >= 1):
            raise ValueError("slowly varying examples are defined on (0, 1)")
        if self.family == "c":
            k, m = (int(p) for p in self.params)
            return np.exp(iterated_log(k, t_arr) / iterated_log(m, t_arr))
        if self.family == "d":
            prod = np.ones_like(t_arr)
            for j, a in enumerate(self.params, start=1):
                prod = prod * np.power(iterated_log(j, t_arr), a)
            return np.exp(prod)
        if self.family == "b":
            m, alpha = int(self.params[0]), self.params[1]
            prod = np.ones_like(t_arr)
            for j in range(1, m):
                prod = prod * iterated_log(j, t_arr)
            return prod * np.power(iterated_log(m, t_arr), alpha)
        (n,) = self.params
        return iterated_log(int(n), t_arr)

    def log_value_at_exp_neg(self, u: float) -> float:
        """ln E(e^{-u}) for u >= 0, overflow-safe."""
        if self.family == "c":
            k, m = (int(p) for p in self.params)
            logs = _iterated_logs_at_exp_neg(u, m)
            return logs[k - 1] / logs[m - 1]
        if self.family == "d":
            logs = _iterated_logs_at_exp_neg(u, len(self.params))
            prod = 1.0
            for lv, a in zip(logs, self.params):
                prod *= lv ** a
            return prod
        if self.family == "b":
            m, alpha = int(self.params[0]), self.params[1]
            logs = _iterated_logs_at_exp_neg(u, m)
            return sum(math.log(lv) for lv in logs[: m - 1]) + alpha * math.log(logs[m - 1])
        (n,) = self.params
        return math.log(_iterated_logs_at_exp_neg(u, int(n))[-1])

    def to_gain(self) -> GainFunction:
        """g(t) = E(1/t) / E(1) on t >= 1 (normalization recorded in the name)."""
        log_at_one = self.log_value_at_exp_neg(0.0)
        suffix = "" if abs(log_at_one) <= 1e-12 else ", normalized"

        def value(t):
            t_arr = np.asarray(t, dtype=float)
            out = np.exp(
                np.array(
                    [self.log_value_at_exp_neg(lt) for lt in np.atleast_1d(np.log(t_arr))]
                )
                - log_at_one
            )
            return float(out[0]) if t_arr.ndim == 0 else out

        return GainFunction(
            f"{self.name}{suffix}",
            value,
            lambda t: self.log_value_at_exp_neg(t) - log_at_one,
        )


# ---------------------------------------------------------------------------
# Ermakoff classifier
# ---------------------------------------------------------------------------

@dataclass
class ErmakoffReport:
    estimated_limit: float
    verdict: str  # pass | fail | inconclusive
    trace: list[tuple[float, float]]
    metadata: dict = field(default_factory=dict)


def _log_ratio(g: GainFunction, log_t: float) -> float:
    """ln [ t g(t) / g(e^t) ] at t = e^log_t."""
    t = math.exp(log_t)
    return log_t + g.lng_at_exp(log_t) - g.lng_at_exp(t)


def _safe_exp(x: float) -> float:
    if x > 700.0:
        return math.inf
    if x < -745.0:
        return 0.0
    return math.exp(x)


def ermakoff_test(g: GainFunction, k_max: int = 40) -> ErmakoffReport:
    """Classify  lim t g(t) / g(e^t)  against 0 on the dyadic grid t = 2^k.

    The reported trace covers k = 0..k_max.  The verdict follows the trace
    when it has already decayed (pass: tail decreasing and final < 1e-3);
    otherwise a deeper dyadic ladder, evaluated purely in the log domain,
    separates slow decay to 0 from stabilization or growth (fail when the
    ratio settles at or above 0.1).

    ``estimated_limit`` is the final trace value when the trace has decayed
    (an estimate of the limit itself, ~0); otherwise it is the stabilized
    step-to-step ratio of consecutive trace values, whose proximity to 1
    signals the boundary regime where the ratio has stopped shrinking.
    """
    ks = np.arange(k_max + 1)
    log_rhos = np.array([_log_ratio(g, k * math.log(2.0)) for k in ks])
    rhos = np.array([_safe_exp(s) for s in log_rhos])
    trace = [(float(2.0 ** k), float(r)) for k, r in zip(ks, rhos)]

    tail = rhos[-(_TAIL + 1):]
    tail_decreasing = bool(
        np.all(np.diff(tail) <= 1e-12 * np.maximum(tail[:-1], 1e-300))
    )

    finite_tail = log_rhos[-(_TAIL + 1):]
    diffs = np.diff(finite_tail)
    diffs = diffs[np.isfinite(diffs)]
    step_ratio = _safe_exp(float(np.mean(diffs))) if diffs.size else 0.0

    ladder_ks = [k_max]
    while ladder_ks[-1] * 2 <= _DEEP_CAP_K:
        ladder_ks.append(ladder_ks[-1] * 2)
    if ladder_ks[-1] < _DEEP_CAP_K:
        ladder_ks.append(_DEEP_CAP_K)
    ladder = np.array([_log_ratio(g, k * math.log(2.0)) for k in ladder_ks])

    metadata = {
        "k_max": int(k_max),
        "deep_ladder_k": [int(k) for k in ladder_ks],
        "pass_threshold": _PASS_FINAL,
        "fail_level": _FAIL_LEVEL,
    }

    if tail_decreasing and rhos[-1] < _PASS_FINAL:
        return ErmakoffReport(float(rhos[-1]), "pass", trace, metadata)

    ladder_decreasing = bool(np.all(np.diff(ladder) < 0))
    deep_val = _safe_exp(float(ladder[-1]))
    if ladder_decreasing and (
        ladder[-1] < math.log(_PASS_FINAL)
        or (ladder[-1] - ladder[0] <= -1.0 and deep_val < _FAIL_LEVEL)
    ):
        return ErmakoffReport(float(deep_val), "pass", trace, metadata)

    # stabilized = the deep ladder is no longer shrinking (a still-decreasing
    # ladder that has not resolved stays inconclusive: the remaining decay is
    # slower than the probing range can certify)
    stabilized_deep = deep_val >= _FAIL_LEVEL and ladder[-1] >= ladder[0] - 0.05
    stabilized_trace = (not tail_decreasing) and rhos[-1] >= _FAIL_LEVEL
    if stabilized_deep or stabilized_trace:
        return ErmakoffReport(float(step_ratio), "fail", trace, metadata)
    return ErmakoffReport(float(step_ratio), "inconclusive", trace, metadata)


def ermakoff_for_example(example: SlowlyVaryingExample, k_max: int = 40) -> ErmakoffReport:
    return ermakoff_test(example.to_gain(), k_max=k_max)


# ---------------------------------------------------------------------------
# the series  c1 = sum_j 1 / (j g(j))
# ---------------------------------------------------------------------------

class SeriesDivergenceError(ArithmeticError):
    pass


def series_c1(g: GainFunction, tol: float = 1e-9) -> float:
    """Sum of 1 / h(j), h(t) = t g(t), within ``tol`` relative.

    Convergence guard: the series converges exactly when the gain passes
    the growth test, so a non-pass verdict raises
    :class:`SeriesDivergenceError` before any summation.  Partial sums are
    completed with the integral-test bracket
    [S_N + I_{N+1}, S_N + I_N], I_N = integral_N^inf dt / h(t); the
    midpoint is returned once the bracket width 1 / h(N) is below
    tol * S_N.
    """
    report = ermakoff_test(g)
    if report.verdict != "pass":
        raise SeriesDivergenceError(
            f"series sum 1/(j g(j)) for {g.name!r} cannot be certified convergent "
            f"(growth-test verdict: {report.verdict})"
        )

    total = 0.0
    start = 1
    block = 1 << 12
    n_end = None
    for _ in range(40):
        js = np.arange(start, start + block, dtype=float)
        gvals = np.asarray(g(js), dtype=float)
        total += float(np.sum(1.0 / (js * gvals)))
        start += block
        if total > 1e12:
            raise SeriesDivergenceError(
                f"partial sums of 1/(j g(j)) for {g.name!r} exceeded the cap"
            )
        tail_term = 1.0 / (start * float(g(float(start))))
        if tail_term <= tol * total:
            n_end = start - 1
            break
        block *= 2
    if n_end is None:
        raise SeriesDivergenceError(
            f"series for {g.name!r} did not reach tolerance within the term cap"
        )

    # tail integral in log coordinates: with t = e^x the integrand is
    # 1 / g(e^x), which the log-domain evaluator handles and which decays
    # fast enough for the infinite-interval quadrature to behave
    def integrand(x: float) -> float:
        return math.exp(-g.lng_at_exp(x))

    i_hi, _ = quad(integrand, math.log(n_end), np.inf, limit=400)
    i_lo, _ = quad(integrand, math.log(n_end + 1.0), np.inf, limit=400)
    return total + (i_hi + i_lo) / 2.0


# ---------------------------------------------------------------------------
# registry parsing
# ---------------------------------------------------------------------------

GAIN_REGISTRY_HELP = (
    "log_alpha(a), pow(e), one, psi_of(X,Y), "
    "example:c(k,m), example:d(a1,...), example:b(m,a), example:L(n)"
)


def parse_gain(text: str, x_spec=None, y_spec=None) -> GainFunction:
    """Resolve a gain registry name; psi_of(X,Y) uses the provided specs."""
    text = text.strip()
    if text == "one":
        return gain_one()
    if text.startswith("log_alpha(") and text.endswith(")"):
        return gain_log_alpha(float(text[len("log_alpha("):-1]))
    if text.startswith("pow(") and text.endswith(")"):
        return gain_pow(float(text[len("pow("):-1]))
    if text.startswith("psi_of(") and text.endswith(")"):
        if x_spec is None or y_spec is None:
            raise KeyError("psi_of(X,Y) needs X and Y space specs in context")
        return gain_from_psi(x_spec, y_spec)
    if text.startswith("example:"):
        body = text[len("example:"):]
        fam, sep, rest = body.partition("(")
        if not sep or not rest.endswith(")"):
            raise KeyError(f"unparseable example gain {text!r}")
        params = tuple(float(x) for x in rest[:-1].split(","))
        return SlowlyVaryingExample(fam.strip(), params).to_gain()
    raise KeyError(f"unknown gain {text!r}; expected one of: {GAIN_REGISTRY_HELP}")
