"""Open intervals and the two curve types everything else consumes.

A curve is an open interval plus a vectorised evaluator returning a tuple of
derivative arrays. ``PotentialCurve`` holds a potential and its first four
derivatives; ``MetricCurve`` holds a positive metric coefficient and its first
three derivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError

# 5-point central stencil for the first derivative, error O(step^4).
_STENCIL = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_OFFSETS = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])


@dataclass(frozen=True)
class Interval:
    """Open interval ``(lo, hi)``; either end may be infinite."""

    lo: float = -math.inf
    hi: float = math.inf

    def __post_init__(self):
        if not self.lo < self.hi:
            raise DomainError(f"empty interval ({self.lo}, {self.hi})")

    def contains(self, x) -> np.ndarray | bool:
        x = np.asarray(x, dtype=float)
        inside = (x > self.lo) & (x < self.hi)
        return bool(inside) if inside.ndim == 0 else inside

    def check(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if not np.all(self.contains(x)):
            raise DomainError(f"point(s) outside domain ({self.lo}, {self.hi})")
        return x

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.lo) and math.isfinite(self.hi)

    def grid(self, lo: float = -10.0, hi: float = 10.0, count: int = 101,
             margin: float = 0.1) -> np.ndarray:
        """Evenly spaced points of ``[lo, hi]`` intersected with the interval.

        Finite interval ends are pulled inwards by ``margin`` (capped at 5% of
        the width) so that singular metrics are never sampled at the boundary.
        """
        a, b = self.lo, self.hi
        if math.isfinite(a) and math.isfinite(b):
            margin = min(margin, 0.05 * (b - a))
        left = max(lo, a + margin) if math.isfinite(a) else lo
        right = min(hi, b - margin) if math.isfinite(b) else hi
        if not left < right:
            raise DomainError(
                f"grid [{lo}, {hi}] does not meet the interior of ({a}, {b})")
        return np.linspace(left, right, count)

    def midpoint(self) -> float:
        if self.bounded:
            return 0.5 * (self.lo + self.hi)
        if math.isfinite(self.lo):
            return math.inf
        if math.isfinite(self.hi):
            return -math.inf
        return 0.0


REALS = Interval()


def central_difference(fn: Callable, x, step: float = 1e-4):
    """First derivative of a vectorised scalar function by the 5-point rule."""
    x = np.asarray(x, dtype=float)
    pts = x[..., None] + step * _OFFSETS
    return np.asarray(fn(pts)) @ _STENCIL / step


@dataclass(frozen=True)
class PotentialCurve:
    """Potential psi on ``domain`` with derivatives of order 0..4.

    ``evaluator(x)`` returns ``(psi, psi', psi'', psi''', psi'''')``.
    ``fifth`` optionally gives the fifth derivative in closed form.
    """

    domain: Interval
    evaluator: Callable[[np.ndarray], tuple]
    fifth: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __call__(self, x):
        x = self.domain.check(x)
        return tuple(np.asarray(v, dtype=float) for v in self.evaluator(x))

    def fifth_derivative(self, x, step: float = 1e-4):
        x = self.domain.check(x)
        if self.fifth is not None:
            return np.asarray(self.fifth(x), dtype=float)
        return central_difference(lambda t: self.evaluator(t)[4], x, step)


@dataclass(frozen=True)
class MetricCurve:
    """Metric coefficient h on ``domain`` with derivatives of order 0..3.

    ``evaluator(x)`` returns ``(h, h', h'', h''')``. When ``christoffel`` is
    given it returns ``(Gamma, Gamma', Gamma'')`` directly and is preferred
    over the quotient formulas (closed forms, or cancellation-free sums).
    """

    domain: Interval
    evaluator: Callable[[np.ndarray], tuple]
    christoffel: Optional[Callable[[np.ndarray], tuple]] = None
    label: str = ""

    def __call__(self, x):
        x = self.domain.check(x)
        return tuple(np.asarray(v, dtype=float) for v in self.evaluator(x))

    def h(self, x):
        return self(x)[0]


def metric_from_log_derivatives(domain: Interval, log_h: Callable,
                                gammas: Callable, label: str = "") -> MetricCurve:
    """Build a MetricCurve from ``ln h`` and the exact Christoffel triple.

    With L1 = 2 Gamma, L2 = 2 Gamma', L3 = 2 Gamma'' the derivatives of
    h = exp(L) follow from Faa di Bruno.
    """

    def evaluator(x):
        h = np.exp(log_h(x))
        g0, g1, g2 = gammas(x)
        l1, l2, l3 = 2.0 * g0, 2.0 * g1, 2.0 * g2
        return (h, h * l1, h * (l2 + l1 * l1), h * (l3 + 3.0 * l1 * l2 + l1 ** 3))

    return MetricCurve(domain, evaluator, christoffel=gammas, label=label)
