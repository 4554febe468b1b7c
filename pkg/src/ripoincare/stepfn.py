"""Right-continuous step functions on (0, T) with exact piecewise integration.

A :class:`StepFunction` holds the value ``values[i]`` on the half-open
interval ``[breakpoints[i], breakpoints[i+1])``, with the convention
``breakpoints[0] == 0`` and the final interval ending at ``domain_end``.
``domain_end`` may be ``inf`` only when the last value is 0 (a zero tail),
which is how distribution functions are represented.

All integrals of step functions are exact finite sums; no quadrature.
"""
from __future__ import annotations

import math
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = ["StepFunction", "indicator_step"]


class StepFunction:
    """Piecewise-constant, right-continuous function on [0, domain_end)."""

    __slots__ = ("breakpoints", "values", "domain_end")

    def __init__(
        self,
        breakpoints: Sequence[float] | np.ndarray,
        values: Sequence[float] | np.ndarray,
        domain_end: float,
    ) -> None:
        bp = np.asarray(breakpoints, dtype=float)
        vals = np.asarray(values, dtype=float)
        if bp.ndim != 1 or vals.ndim != 1 or bp.size != vals.size or bp.size == 0:
            raise ValueError("breakpoints and values must be 1-d arrays of equal positive length")
        if bp[0] != 0.0:
            raise ValueError("first breakpoint must be 0")
        if bp.size > 1 and not np.all(np.diff(bp) > 0):
            raise ValueError("breakpoints must be strictly increasing")
        if not math.isinf(domain_end):
            if domain_end <= bp[-1]:
                raise ValueError("domain_end must exceed the last breakpoint")
        elif vals[-1] != 0.0:
            raise ValueError("an infinite domain requires a zero tail value")
        bp.setflags(write=False)
        vals.setflags(write=False)
        self.breakpoints = bp
        self.values = vals
        self.domain_end = float(domain_end)

    # -- basic queries ---------------------------------------------------

    def __call__(self, s):
        """Evaluate at ``s`` (scalar or array); 0 outside [0, domain_end)."""
        s_arr = np.asarray(s, dtype=float)
        idx = np.searchsorted(self.breakpoints, s_arr, side="right") - 1
        idx_clipped = np.clip(idx, 0, self.values.size - 1)
        out = self.values[idx_clipped]
        out = np.where((idx < 0) | (s_arr >= self.domain_end), 0.0, out)
        return float(out) if np.isscalar(s) or s_arr.ndim == 0 else out

    def piece_lengths(self) -> np.ndarray:
        ends = np.append(self.breakpoints[1:], self.domain_end)
        return ends - self.breakpoints

    @property
    def total_length(self) -> float:
        return self.domain_end

    def max_value(self) -> float:
        return float(np.max(np.abs(self.values)))

    def is_nonincreasing(self, tol: float = 0.0) -> bool:
        if self.values.size < 2:
            return True
        scale = max(1.0, float(np.max(np.abs(self.values))))
        return bool(np.all(np.diff(self.values) <= tol * scale))

    def is_nonnegative(self, tol: float = 0.0) -> bool:
        return bool(np.all(self.values >= -tol))

    # -- exact integration -----------------------------------------------

    def integral(self) -> float:
        """Exact integral over the domain (zero-value pieces contribute 0)."""
        lengths = self.piece_lengths()
        mask = self.values != 0.0
        return float(np.dot(self.values[mask], lengths[mask]))

    def integral_of(self, psi: Callable[[np.ndarray], np.ndarray]) -> float:
        """Exact integral of ``psi(values)``; requires psi(v)=0 wherever a piece
        has infinite length (zero tail)."""
        lengths = self.piece_lengths()
        fv = np.asarray(psi(self.values), dtype=float)
        mask = fv != 0.0
        contrib = fv[mask] * lengths[mask]
        if np.any(~np.isfinite(contrib)):
            raise ValueError("integrand does not vanish on the infinite tail")
        return float(np.sum(contrib))

    def prefix_integral(self, t: float) -> float:
        """Exact integral over (0, t)."""
        if t <= 0:
            return 0.0
        t = min(t, self.domain_end)
        ends = np.minimum(np.append(self.breakpoints[1:], self.domain_end), t)
        starts = np.minimum(self.breakpoints, t)
        return float(np.dot(self.values, np.maximum(ends - starts, 0.0)))

    def prefix_integrals_at_breakpoints(self) -> np.ndarray:
        """Cumulative integral evaluated at each breakpoint (starts at 0)."""
        lengths = self.piece_lengths()
        acc = np.concatenate(([0.0], np.cumsum(self.values[:-1] * lengths[:-1])))
        return acc

    def measure_above(self, y: float) -> float:
        """Lebesgue measure of {s in (0, domain_end): value(s) > y}, y >= 0."""
        if y < 0:
            raise ValueError("threshold must be nonnegative")
        lengths = self.piece_lengths()
        mask = np.abs(self.values) > y
        return float(np.sum(lengths[mask]))

    # -- transforms --------------------------------------------------------

    def canonical(self) -> "StepFunction":
        """Merge adjacent pieces holding equal values."""
        if self.values.size < 2:
            return self
        keep = np.concatenate(([True], np.diff(self.values) != 0))
        return StepFunction(self.breakpoints[keep], self.values[keep], self.domain_end)

    def scale_domain(self, factor: float) -> "StepFunction":
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        end = self.domain_end * factor if not math.isinf(self.domain_end) else math.inf
        return StepFunction(self.breakpoints * factor, self.values, end)

    def scale_values(self, factor: float) -> "StepFunction":
        return StepFunction(self.breakpoints, self.values * factor, self.domain_end)

    def shift_values(self, offset: float) -> "StepFunction":
        return StepFunction(self.breakpoints, self.values + offset, self.domain_end)

    # -- serialization -----------------------------------------------------

    def to_rows(self) -> list[tuple[float, float]]:
        """(breakpoint, value) rows for CSV output."""
        return [(float(t), float(v)) for t, v in zip(self.breakpoints, self.values)]

    def __repr__(self) -> str:  # pragma: no cover
        return (
            f"StepFunction(k={self.values.size}, domain_end={self.domain_end!r}, "
            f"max={self.max_value():.6g})"
        )


def indicator_step(a: float, domain_end: float) -> StepFunction:
    """The indicator of [0, a) as a step function on (0, domain_end)."""
    if not 0 < a:
        raise ValueError("indicator length must be positive")
    if a >= domain_end:
        return StepFunction([0.0], [1.0], domain_end)
    return StepFunction([0.0, a], [1.0, 0.0], domain_end)
