"""Fisher/Hessian metric, Christoffel symbol and Hessian sectional curvature.

In one affine coordinate the flat connection leaves a single Christoffel
symbol ``Gamma = h' / (2h)`` of the Levi-Civita connection, and the Hessian
sectional curvature is ``S = Gamma' / h``. ``K = Gamma^2 - Gamma'`` is constant
exactly when the curvature is.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .curves import (Interval, MetricCurve, PotentialCurve, central_difference)
from .errors import NonPositiveMetric

DEFAULT_GRID = (-10.0, 10.0, 101)


@dataclass(frozen=True)
class CurvatureSample:
    x: float
    h: float
    gamma: float
    dgamma: float
    S: float
    K: float


def metric_from_potential(p: PotentialCurve, check_grid=None) -> MetricCurve:
    """h = psi'' with h', h'' from the potential and h''' from ``p.fifth``.

    Without a closed-form fifth derivative h''' falls back to a 5-point
    difference of psi'''' (error O(step^4), only used for diagnostics).
    Raises NonPositiveMetric if psi'' <= 0 anywhere on ``check_grid``.
    """

    def evaluator(x):
        _, _, h, h1, h2 = p.evaluator(x)
        return h, h1, h2, p.fifth_derivative(x)

    m = MetricCurve(p.domain, evaluator)
    grid = p.domain.grid(*DEFAULT_GRID) if check_grid is None else check_grid
    if np.any(m.h(grid) <= 0):
        raise NonPositiveMetric("psi'' is not positive on the sampled grid")
    return m


def christoffel(m: MetricCurve, x):
    """Return ``(Gamma, Gamma', Gamma'')`` at ``x`` (scalar or array)."""
    x = m.domain.check(x)
    if m.christoffel is not None:
        g = m.christoffel(x)
        return tuple(np.broadcast_to(np.asarray(v, dtype=float), x.shape).copy() for v in g)
    h, h1, h2, h3 = m(x)
    gamma = h1 / (2.0 * h)
    dgamma = (h2 * h - h1 * h1) / (2.0 * h * h)
    ddgamma = 0.5 * (h3 / h - 3.0 * h1 * h2 / h ** 2 + 2.0 * (h1 / h) ** 3)
    return gamma, dgamma, ddgamma


def curvature_arrays(m: MetricCurve, x):
    """Vectorised ``(h, Gamma, Gamma', S, K)`` over an array of points."""
    x = m.domain.check(x)
    h = m.h(x)
    gamma, dgamma, _ = christoffel(m, x)
    return h, gamma, dgamma, dgamma / h, gamma * gamma - dgamma


def curvature(m: MetricCurve, x: float) -> CurvatureSample:
    h, g, dg, S, K = (float(v) for v in curvature_arrays(m, x))
    return CurvatureSample(float(x), h, g, dg, S, K)


def gamma_by_difference(m: MetricCurve, x, eps: float = 1e-4):
    """Gamma from a central difference of ln h, for cross-checking."""
    x = np.asarray(x, dtype=float)
    return 0.25 * (np.log(m.h(x + eps)) - np.log(m.h(x - eps))) / eps


def hprime_by_difference(m: MetricCurve, x, step: float = 1e-4):
    return central_difference(m.h, x, step)


def default_grid(domain: Interval, lo: float = DEFAULT_GRID[0],
                 hi: float = DEFAULT_GRID[1], count: int = DEFAULT_GRID[2]):
    return domain.grid(lo, hi, count)
