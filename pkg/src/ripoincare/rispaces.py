"""Norm functionals of rearrangement-invariant spaces on (0, T).

Each space spec exposes the norm of a nonincreasing step function (the
rearrangement of the object under study), a fundamental function
phi(t) = norm of the indicator of [0, t), its inverse, and where possible a
log-domain fundamental for deep asymptotics.

Computation notes
-----------------
* Lp and Orlicz norms of step functions are exact (finite sums, bisection
  for the Luxemburg functional).
* Lorentz and Lorentz-Zygmund integrals of power-log weights against
  constant pieces use closed-form antiderivatives (incomplete-gamma form),
  with adaptive quadrature as a fallback for exponent combinations the
  closed form does not cover.
* The Marcinkiewicz supremum is evaluated on breakpoints plus a 64-point
  refinement per piece (the expression is piecewise smooth).
* The Lambda norm is an exact Stieltjes sum against phi increments.
"""
from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaincc, gammaln

from .space import Ball, MetricMeasureSpace, ball_members, dilate
from .rearrangement import localized_rearrangement
from .stepfn import StepFunction, indicator_step
from .young import YoungFunction, young_function

__all__ = [
    "RISpace",
    "LpSpace",
    "LorentzSpace",
    "LorentzZygmundSpace",
    "OrliczSpace",
    "MarcinkiewiczSpace",
    "LambdaSpace",
    "norm",
    "luxemburg_norm",
    "local_norm",
    "fundamental_function",
    "fundamental_inverse",
    "parse_ri_spec",
    "SPEC_REGISTRY_HELP",
]


# ---------------------------------------------------------------------------
# shared numerics
# ---------------------------------------------------------------------------

def _luxemburg(values: np.ndarray, masses: np.ndarray, A: YoungFunction,
               rel_tol: float = 1e-12) -> float:
    """inf{lam > 0 : sum A(values/lam) * masses <= 1} by bisection.

    The constraint is nonincreasing in lam, so any bracket with
    G(lo) >= 1 >= G(hi) is valid; the seed bracket comes from bounding the
    sum by its largest term and by the total mass.
    """
    values = np.abs(np.asarray(values, dtype=float))
    masses = np.asarray(masses, dtype=float)
    maxv = float(np.max(values, initial=0.0))
    if maxv == 0.0:
        return 0.0

    def constraint(lam: float) -> float:
        return float(np.dot(np.asarray(A(values / lam), dtype=float), masses))

    total = float(np.sum(masses))
    w_hat = float(np.max(masses[values == maxv]))
    hi = 2.0 * maxv / A.inverse(1.0 / total)
    lo = 0.5 * maxv / A.inverse(1.0 / w_hat)
    for _ in range(200):
        if constraint(hi) <= 1.0:
            break
        hi *= 2.0
    else:
        raise ArithmeticError(f"Luxemburg bracket failure (upper) for {A.name}")
    for _ in range(1200):
        if constraint(lo) >= 1.0:
            break
        lo /= 2.0
        if lo < 1e-300:
            # constraint < 1 for every lam: the norm is below any bracket
            return lo
    while hi - lo > rel_tol * hi:
        mid = (lo + hi) / 2.0
        if constraint(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
    return (lo + hi) / 2.0


def _monotone_inverse_on_unit(phi: Callable[[float], float], s: float,
                              rel_tol: float = 1e-12) -> float:
    """Solve phi(t) = s for nondecreasing phi on (0, 1]."""
    top = phi(1.0)
    if not 0 < s <= top * (1.0 + 1e-12):
        raise ValueError(f"value {s!r} outside the range of phi on (0, 1]")
    lo, hi = 0.0, 1.0
    for _ in range(200):
        mid = (lo + hi) / 2.0
        if phi(mid) >= s:
            hi = mid
        else:
            lo = mid
        if hi - lo <= rel_tol * max(hi, 1e-300):
            break
    return (lo + hi) / 2.0


def _power_log_integral(a: float, b: float, c: float, m: float) -> float:
    """integral_a^b t^(c-1) (1 + ln^+(1/t))^m dt, 0 <= a < b.

    Closed form below t=1 via the upper incomplete gamma function when
    c > 0 and m > -1; plain power rule above t=1; adaptive quadrature
    otherwise (tolerance 1e-9 absolute or better).
    """
    if b <= a:
        return 0.0
    total = 0.0
    lo, hi = a, min(b, 1.0)
    if lo < hi:
        if c > 0 and m > -1.0:
            total += _f01(hi, c, m) - _f01(lo, c, m)
        elif c == 0.0 and m < -1.0:
            # integral of (1+ln(1/t))^m dt/t = [(1+ln(1/t))^(m+1) / (-(m+1))]
            u_lo = math.inf if lo == 0.0 else 1.0 + math.log(1.0 / lo)
            u_hi = 1.0 + math.log(1.0 / hi)
            total += (u_hi ** (m + 1) - (0.0 if lo == 0.0 else u_lo ** (m + 1))) / (-(m + 1))
        else:
            total += _quad_power_log(lo, hi, c, m)
    lo, hi = max(a, 1.0), b
    if lo < hi:
        if c > 0:
            total += (hi ** c - lo ** c) / c
        else:
            total += math.log(hi / lo)
    return total


def _f01(x, c: float, m: float):
    """integral_0^x t^(c-1) (1+ln(1/t))^m dt for x <= 1 (c > 0, m > -1)."""
    x = np.asarray(x, dtype=float)
    arg = np.where(x > 0, c * (1.0 + np.log(1.0 / np.where(x > 0, x, 1.0))), np.inf)
    scale = math.exp(c + gammaln(m + 1.0) - (m + 1.0) * math.log(c))
    out = scale * gammaincc(m + 1.0, arg)
    return float(out) if out.ndim == 0 else out


def _quad_power_log(a: float, b: float, c: float, m: float) -> float:
    def integrand(t: float) -> float:
        return t ** (c - 1.0) * (1.0 + max(0.0, math.log(1.0 / t))) ** m

    val, _ = quad(integrand, a, b, epsabs=1e-12, epsrel=1e-10, limit=200)
    return float(val)


def _piece_sup_weight(t0: float, t1: float, inv_p: float, alpha: float) -> float:
    """sup over [t0, t1) of t^inv_p (1+ln^+(1/t))^alpha."""
    candidates = [t1]
    if t0 > 0:
        candidates.append(t0)
    if alpha > 0 and inv_p > 0:
        t_star = math.exp(1.0 - alpha / inv_p)
        if t0 < t_star < t1:
            candidates.append(t_star)

    def w(t: float) -> float:
        if t <= 0:
            return 0.0
        return t ** inv_p * (1.0 + max(0.0, math.log(1.0 / t))) ** alpha

    return max(w(t) for t in candidates)


# ---------------------------------------------------------------------------
# space specs
# ---------------------------------------------------------------------------

class RISpace:
    """Base class; subclasses define norm_step / fundamental / inverse."""

    label: str = "ri"
    #: phi(0+) = 0; false only for sup-type limit spaces such as L^inf
    vanishing_fundamental: bool = True
    #: triangle inequality holds with constant 1 (quasi-norms set False)
    triangle_exact: bool = True

    def norm_step(self, u: StepFunction) -> float:
        raise NotImplementedError

    def fundamental(self, t):
        raise NotImplementedError

    def fundamental_inverse(self, s: float) -> float:
        return _monotone_inverse_on_unit(lambda t: float(self.fundamental(t)), s)

    def log_fundamental(self, log_t: float) -> float:
        """ln phi(e^log_t); overflow-safe path for deep asymptotics."""
        t = math.exp(log_t)
        if t == 0.0:
            raise OverflowError(f"{self.label}: no log-domain fundamental for e^{log_t:g}")
        val = float(self.fundamental(t))
        if val <= 0.0:
            raise OverflowError(f"{self.label}: fundamental underflows at e^{log_t:g}")
        return math.log(val)

    def __repr__(self) -> str:  # pragma: no cover
        return self.label


class LpSpace(RISpace):
    def __init__(self, p: float) -> None:
        if not (p >= 1):
            raise ValueError("Lp needs p >= 1")
        self.p = float(p)
        self.label = "Lp(inf)" if math.isinf(p) else f"Lp({p:g})"
        self.vanishing_fundamental = not math.isinf(p)

    def norm_step(self, u: StepFunction) -> float:
        if math.isinf(self.p):
            return u.max_value()
        return u.integral_of(lambda v: np.power(np.abs(v), self.p)) ** (1.0 / self.p)

    def fundamental(self, t):
        if math.isinf(self.p):
            return np.where(np.asarray(t) > 0, 1.0, 0.0) if np.ndim(t) else (1.0 if t > 0 else 0.0)
        return np.power(t, 1.0 / self.p)

    def fundamental_inverse(self, s: float) -> float:
        if math.isinf(self.p):
            raise ValueError("L^inf has no invertible fundamental function")
        return s ** self.p

    def log_fundamental(self, log_t: float) -> float:
        if math.isinf(self.p):
            return 0.0
        return log_t / self.p


def _lorentz_admissible(p: float, q: float) -> None:
    if (1 < p < math.inf and 1 <= q):
        return
    if p == q == 1 or (math.isinf(p) and math.isinf(q)):
        return
    raise ValueError(f"inadmissible Lorentz parameters (p={p:g}, q={q:g})")


class LorentzSpace(RISpace):
    """||t^(1/p-1/q) u(t)||_{L^q}; a quasi-norm when q > p."""

    def __init__(self, p: float, q: float) -> None:
        _lorentz_admissible(p, q)
        self.p = float(p)
        self.q = float(q)
        self.label = f"Lorentz({p:g},{q:g})"
        self.triangle_exact = q <= p
        self.vanishing_fundamental = not math.isinf(p)

    def norm_step(self, u: StepFunction) -> float:
        inv_p = 0.0 if math.isinf(self.p) else 1.0 / self.p
        if math.isinf(self.q):
            ends = np.append(u.breakpoints[1:], u.domain_end)
            sups = [
                abs(v) * _piece_sup_weight(t0, t1, inv_p, 0.0)
                for t0, t1, v in zip(u.breakpoints, ends, u.values)
                if v != 0.0
            ]
            return max(sups, default=0.0)
        c = self.q * inv_p
        ends = np.append(u.breakpoints[1:], u.domain_end)
        if c == 0.0:
            weights = np.log(ends) - np.log(np.maximum(u.breakpoints, 1e-300))
        else:
            weights = (np.power(ends, c) - np.power(u.breakpoints, c)) / c
        mask = u.values != 0.0
        return float(np.dot(np.power(np.abs(u.values[mask]), self.q), weights[mask])) ** (
            1.0 / self.q
        )

    def fundamental(self, t):
        inv_p = 0.0 if math.isinf(self.p) else 1.0 / self.p
        if math.isinf(self.q):
            return np.power(t, inv_p)
        return (self.p / self.q) ** (1.0 / self.q) * np.power(t, inv_p)

    def fundamental_inverse(self, s: float) -> float:
        if math.isinf(self.p):
            raise ValueError("Lorentz with p=inf has no invertible fundamental")
        scale = 1.0 if math.isinf(self.q) else (self.p / self.q) ** (1.0 / self.q)
        return (s / scale) ** self.p

    def log_fundamental(self, log_t: float) -> float:
        if math.isinf(self.p):
            return math.log(float(self.fundamental(1.0)))
        scale = 1.0 if math.isinf(self.q) else (self.p / self.q) ** (1.0 / self.q)
        return math.log(scale) + log_t / self.p


def _lz_admissible(p: float, q: float, alpha: float) -> None:
    if 1 < p < math.inf and 1 <= q:
        return
    if p == 1 and q == 1 and alpha >= 0:
        return
    if math.isinf(p) and math.isinf(q) and alpha <= 0:
        return
    if math.isinf(p) and 1 <= q < math.inf and alpha + 1.0 / q < 0:
        return
    raise ValueError(f"inadmissible Lorentz-Zygmund parameters (p={p:g}, q={q:g}, alpha={alpha:g})")


class LorentzZygmundSpace(RISpace):
    """||t^(1/p-1/q) (1+ln^+(1/t))^alpha u(t)||_{L^q}."""

    def __init__(self, p: float, q: float, alpha: float) -> None:
        _lz_admissible(p, q, alpha)
        self.p = float(p)
        self.q = float(q)
        self.alpha = float(alpha)
        self.label = f"LZ({p:g},{q:g},{alpha:g})"
        self.triangle_exact = False
        self.vanishing_fundamental = not math.isinf(p)

    def norm_step(self, u: StepFunction) -> float:
        inv_p = 0.0 if math.isinf(self.p) else 1.0 / self.p
        ends = np.append(u.breakpoints[1:], u.domain_end)
        if math.isinf(self.q):
            sups = [
                abs(v) * _piece_sup_weight(t0, t1, inv_p, self.alpha)
                for t0, t1, v in zip(u.breakpoints, ends, u.values)
                if v != 0.0
            ]
            return max(sups, default=0.0)
        c = self.q * inv_p
        m = self.q * self.alpha
        acc = 0.0
        for t0, t1, v in zip(u.breakpoints, ends, u.values):
            if v == 0.0:
                continue
            acc += abs(v) ** self.q * _power_log_integral(t0, t1, c, m)
        return acc ** (1.0 / self.q)

    def fundamental(self, t):
        if math.isinf(self.q):
            scalar = np.ndim(t) == 0
            ts = np.atleast_1d(np.asarray(t, dtype=float))
            out = np.array([self.norm_step(indicator_step(x, max(x, 1.0) * 2)) for x in ts])
            return float(out[0]) if scalar else out
        c = self.q * (0.0 if math.isinf(self.p) else 1.0 / self.p)
        m = self.q * self.alpha
        scalar = np.ndim(t) == 0
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        if c > 0 and m > -1.0:
            below = _f01(np.minimum(ts, 1.0), c, m)
            above = np.where(ts > 1.0, (np.power(ts, c) - 1.0) / c, 0.0)
            out = np.power(below + above, 1.0 / self.q)
        else:
            out = np.array(
                [_power_log_integral(0.0, x, c, m) ** (1.0 / self.q) for x in ts]
            )
        return float(out[0]) if scalar else out


class OrliczSpace(RISpace):
    """Orlicz space with the Luxemburg norm; phi(t) = 1 / A^{-1}(1/t)."""

    def __init__(self, A: YoungFunction) -> None:
        self.A = A
        self.label = f"Orlicz({A.name})"

    def norm_step(self, u: StepFunction) -> float:
        lengths = u.piece_lengths()
        mask = u.values != 0.0
        if not np.any(mask):
            return 0.0
        if np.any(~np.isfinite(lengths[mask])):
            raise ValueError("Orlicz norm needs a finite-measure support")
        return _luxemburg(u.values[mask], lengths[mask], self.A)

    def fundamental(self, t):
        scalar = np.ndim(t) == 0
        ts = np.atleast_1d(np.asarray(t, dtype=float))
        out = np.array([1.0 / self.A.inverse(1.0 / x) for x in ts])
        return float(out[0]) if scalar else out

    def fundamental_inverse(self, s: float) -> float:
        if s <= 0:
            raise ValueError("fundamental inverse needs s > 0")
        return 1.0 / float(self.A(1.0 / s))

    def log_fundamental(self, log_t: float) -> float:
        return -self.A.log_inverse(-log_t)


class MarcinkiewiczSpace(RISpace):
    """sup_t (1/t) integral_0^t u(s) ds * phi(t) built on a fundamental phi."""

    _REFINE = 64

    def __init__(self, phi: Callable, label: str = "M(phi)",
                 phi_inverse: Callable[[float], float] | None = None,
                 log_phi: Callable[[float], float] | None = None) -> None:
        self.phi = phi
        self.label = label
        self._phi_inverse = phi_inverse
        self._log_phi = log_phi

    @classmethod
    def of(cls, inner: RISpace) -> "MarcinkiewiczSpace":
        if not inner.vanishing_fundamental:
            raise ValueError(f"{inner.label} has phi(0+) != 0; Marcinkiewicz hull undefined")
        return cls(
            inner.fundamental,
            label=f"M(of={inner.label})",
            phi_inverse=inner.fundamental_inverse,
            log_phi=inner.log_fundamental,
        )

    def norm_step(self, u: StepFunction) -> float:
        if math.isinf(u.domain_end):
            raise ValueError("Marcinkiewicz norm needs a finite domain")
        prefix = u.prefix_integrals_at_breakpoints()
        ends = np.append(u.breakpoints[1:], u.domain_end)
        best = 0.0
        for t0, t1, v, acc in zip(u.breakpoints, ends, u.values, prefix):
            ts = np.linspace(t0, t1, self._REFINE + 2)[1:]
            avg = (acc + np.abs(v) * (ts - t0)) / ts
            best = max(best, float(np.max(avg * np.asarray(self.phi(ts), dtype=float))))
        return best

    def fundamental(self, t):
        return self.phi(t)

    def fundamental_inverse(self, s: float) -> float:
        if self._phi_inverse is not None:
            return float(self._phi_inverse(s))
        return super().fundamental_inverse(s)

    def log_fundamental(self, log_t: float) -> float:
        if self._log_phi is not None:
            return float(self._log_phi(log_t))
        return super().log_fundamental(log_t)


class LambdaSpace(RISpace):
    """integral_0^T u(t) d phi(t), an exact Stieltjes sum for step u."""

    def __init__(self, phi: Callable, label: str = "Lambda(phi)",
                 phi_inverse: Callable[[float], float] | None = None,
                 log_phi: Callable[[float], float] | None = None) -> None:
        self.phi = phi
        self.label = label
        self._phi_inverse = phi_inverse
        self._log_phi = log_phi

    @classmethod
    def of(cls, inner: RISpace) -> "LambdaSpace":
        if not inner.vanishing_fundamental:
            raise ValueError(f"{inner.label} has phi(0+) != 0; Lambda space undefined")
        return cls(
            inner.fundamental,
            label=f"Lambda(of={inner.label})",
            phi_inverse=inner.fundamental_inverse,
            log_phi=inner.log_fundamental,
        )

    def norm_step(self, u: StepFunction) -> float:
        if math.isinf(u.domain_end):
            raise ValueError("Lambda norm needs a finite domain")
        grid = np.append(u.breakpoints, u.domain_end)
        phis = np.asarray(self.phi(grid), dtype=float)
        return float(np.dot(np.abs(u.values), np.diff(phis)))

    def fundamental(self, t):
        return self.phi(t)

    def fundamental_inverse(self, s: float) -> float:
        if self._phi_inverse is not None:
            return float(self._phi_inverse(s))
        return super().fundamental_inverse(s)

    def log_fundamental(self, log_t: float) -> float:
        if self._log_phi is not None:
            return float(self._log_phi(log_t))
        return super().log_fundamental(log_t)


# ---------------------------------------------------------------------------
# module-level operations
# ---------------------------------------------------------------------------

def norm(spec: RISpace, u: StepFunction) -> float:
    """Norm of a valid rearrangement (nonincreasing, nonnegative step)."""
    if not u.is_nonincreasing(tol=1e-12):
        raise ValueError("norm expects a nonincreasing rearrangement")
    if not u.is_nonnegative(tol=1e-12 * max(1.0, u.max_value())):
        raise ValueError("norm expects a nonnegative rearrangement")
    return spec.norm_step(u)


def luxemburg_norm(
    A: YoungFunction,
    space: MetricMeasureSpace,
    f: Sequence[float] | np.ndarray,
    measure_normalization: float | None = None,
) -> float:
    """Luxemburg norm of f on the space, optionally under mu / normalization."""
    f = np.asarray(f, dtype=float)
    masses = space.weight
    if measure_normalization is not None:
        if measure_normalization <= 0:
            raise ValueError("measure normalization must be positive")
        masses = masses / measure_normalization
    return _luxemburg(f, masses, A)


def local_norm(
    space: MetricMeasureSpace,
    f: Sequence[float] | np.ndarray,
    ball: Ball,
    spec: RISpace,
    sigma_context: float | None = None,
) -> float:
    """|| f ||_{X(B, mu_B)} via the rescaled rearrangement on (0, 1)."""
    if sigma_context is not None:
        ball = dilate(ball, sigma_context)
    return spec.norm_step(localized_rearrangement(space, f, ball))


def fundamental_function(spec: RISpace, t: float) -> float:
    if np.ndim(t) == 0 and t <= 0:
        raise ValueError("fundamental function needs t > 0")
    return spec.fundamental(t)


def fundamental_inverse(spec: RISpace, s: float) -> float:
    return spec.fundamental_inverse(s)


# ---------------------------------------------------------------------------
# registry parsing
# ---------------------------------------------------------------------------

SPEC_REGISTRY_HELP = (
    "Lp(p), Lorentz(p,q), LZ(p,q,alpha), Orlicz(<young>), M(of=<spec>), Lambda(of=<spec>)"
)


def _num(token: str) -> float:
    token = token.strip()
    if token in ("inf", "Inf", "infinity"):
        return math.inf
    return float(token)


def parse_ri_spec(text: str) -> RISpace:
    """Parse a spec string such as 'Lp(2)', 'LZ(2,2,1)', 'Orlicz(power(2))',
    'M(of=Lp(2))' or 'Lambda(of=Orlicz(t_log_alpha(1)))'."""
    text = text.strip()
    head, sep, rest = text.partition("(")
    if not sep or not text.endswith(")"):
        raise KeyError(f"unparseable space spec {text!r}; expected {SPEC_REGISTRY_HELP}")
    body = rest[:-1].strip()
    head = head.strip()
    if head == "Lp":
        return LpSpace(_num(body))
    if head == "Lorentz":
        p, q = (_num(x) for x in body.split(","))
        return LorentzSpace(p, q)
    if head == "LZ":
        p, q, alpha = (_num(x) for x in body.split(","))
        return LorentzZygmundSpace(p, q, alpha)
    if head == "Orlicz":
        return OrliczSpace(young_function(body))
    if head in ("M", "Lambda"):
        inner_text = body[3:].strip() if body.startswith("of=") else body
        inner = parse_ri_spec(inner_text)
        return MarcinkiewiczSpace.of(inner) if head == "M" else LambdaSpace.of(inner)
    raise KeyError(f"unknown space spec {head!r}; expected {SPEC_REGISTRY_HELP}")
