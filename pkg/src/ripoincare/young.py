"""Young functions: convex increasing A with A(0)=0, plus inverses.

Each instance carries a forward evaluator, an inverse (closed form where
available, monotone bisection otherwise) and, when the function grows fast
enough to overflow doubles, a log-domain inverse ``log_inverse(v)``
returning ln A^{-1}(e^v).  Convexity and the inverse round trip are checked
numerically at construction on a log-spaced grid.
"""
from __future__ import annotations

import math
from typing import Callable

import numpy as np

__all__ = ["YoungFunction", "young_function", "YOUNG_REGISTRY_HELP"]

_CHECK_GRID = np.logspace(-6, 6, 41)


def _monotone_inverse(fn: Callable[[float], float], u: float) -> float:
    """Solve fn(t) = u for nondecreasing fn with fn(0)=0, u > 0."""
    hi = 1.0
    for _ in range(2400):
        if fn(hi) >= u:
            break
        hi *= 2.0
    else:
        raise ValueError("could not bracket the inverse from above")
    lo = 0.0
    for _ in range(200):
        mid = (lo + hi) / 2.0
        if fn(mid) >= u:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-14 * max(hi, 1e-300):
            break
    return (lo + hi) / 2.0


class YoungFunction:
    """Convex nondecreasing A with A(0) = 0."""

    def __init__(
        self,
        name: str,
        fn: Callable,
        inverse: Callable | None = None,
        log_inverse: Callable[[float], float] | None = None,
        validate: bool = True,
    ) -> None:
        self.name = name
        self._fn = fn
        self._inverse = inverse
        self._log_inverse = log_inverse
        if validate:
            self._validate()

    def __call__(self, t):
        return self._fn(t)

    def inverse(self, u: float) -> float:
        if u < 0:
            raise ValueError("Young-function inverse needs a nonnegative argument")
        if u == 0.0:
            return 0.0
        if self._inverse is not None:
            return float(self._inverse(u))
        return _monotone_inverse(lambda t: float(self._fn(t)), float(u))

    def log_inverse(self, v: float) -> float:
        """ln A^{-1}(e^v); explicit error when no overflow-safe path exists."""
        if self._log_inverse is not None:
            return float(self._log_inverse(v))
        if v > 600.0:
            raise OverflowError(
                f"Young function {self.name!r} has no log-domain inverse; "
                f"argument e^{v:.3g} overflows"
            )
        return math.log(self.inverse(math.exp(v)))

    def _validate(self) -> None:
        if abs(float(self._fn(0.0))) > 1e-300:
            raise ValueError(f"{self.name}: A(0) must be 0")
        with np.errstate(over="ignore", invalid="ignore"):
            vals = np.array([float(self._fn(t)) for t in _CHECK_GRID])
            finite = np.isfinite(vals)
            fin = vals[finite]
            if np.any(np.diff(fin) < -1e-12 * np.maximum(fin[:-1], 1.0)):
                raise ValueError(f"{self.name}: not nondecreasing")
            a, b = _CHECK_GRID[:-1], _CHECK_GRID[1:]
            mid = np.array([float(self._fn(t)) for t in (a + b) / 2.0])
            chord = (vals[:-1] + vals[1:]) / 2.0
            ok = np.isfinite(mid) & np.isfinite(chord)
            if np.any(mid[ok] > chord[ok] + 1e-9 * np.maximum(vals[1:][ok], 1.0)):
                raise ValueError(f"{self.name}: midpoint convexity fails")
        for t in _CHECK_GRID[::4]:
            u = float(self._fn(t))
            if u <= 0 or not math.isfinite(u):
                continue
            rt = self.inverse(u)
            if abs(rt - t) > 1e-10 * max(t, 1.0):
                raise ValueError(f"{self.name}: inverse round trip off at t={t:g}")

    def __repr__(self) -> str:  # pragma: no cover
        return f"YoungFunction({self.name!r})"


# -- registry ---------------------------------------------------------------

def _power(p: float) -> YoungFunction:
    if p < 1:
        raise ValueError("power(p) needs p >= 1")

    def fn(t):
        return np.power(np.abs(t), p)

    return YoungFunction(
        f"power({p:g})",
        fn,
        inverse=lambda u: u ** (1.0 / p),
        log_inverse=lambda v: v / p,
    )


def _exp_minus_one() -> YoungFunction:
    def log_inv(v: float) -> float:
        # ln ln(1 + e^v), stable for large v
        if v > 40.0:
            return math.log(v + math.exp(-v))
        return math.log(math.log1p(math.exp(v)))

    return YoungFunction(
        "exp_minus_one",
        lambda t: np.expm1(t),
        inverse=lambda u: math.log1p(u),
        log_inverse=log_inv,
    )


def _t_log_alpha(alpha: float) -> YoungFunction:
    if alpha < 0:
        raise ValueError("t_log_alpha(alpha) needs alpha >= 0")

    def fn(t):
        t = np.asarray(t, dtype=float)
        out = np.abs(t) * np.power(1.0 + np.log(np.maximum(np.abs(t), 1.0)), alpha)
        return out if out.ndim else float(out)

    def log_inv(v: float) -> float:
        # solve x + alpha*ln(1+x) = v for x = ln t  (t > 1 branch)
        if v <= 0.0:
            return v
        x = max(v - alpha * math.log1p(v), 1e-12)
        for _ in range(100):
            fx = x + alpha * math.log1p(x) - v
            dfx = 1.0 + alpha / (1.0 + x)
            step = fx / dfx
            x -= step
            if abs(step) <= 1e-14 * max(abs(x), 1.0):
                break
        return x

    def inverse(u: float) -> float:
        if u <= 1.0:
            return float(u)
        return math.exp(log_inv(math.log(u)))

    return YoungFunction(f"t_log_alpha({alpha:g})", fn, inverse=inverse, log_inverse=log_inv)


def young_function(name: str) -> YoungFunction:
    """Resolve a registry name: power(p), exp_minus_one, t_log_alpha(alpha)."""
    name = name.strip()
    if name == "exp_minus_one":
        return _exp_minus_one()
    for prefix, builder in (("power(", _power), ("t_log_alpha(", _t_log_alpha)):
        if name.startswith(prefix) and name.endswith(")"):
            return builder(float(name[len(prefix):-1]))
    raise KeyError(f"unknown Young function {name!r}")


YOUNG_REGISTRY_HELP = "power(p), exp_minus_one, t_log_alpha(alpha)"
