"""Curvature classification of one-dimensional dually flat manifolds.

Pipeline: metric -> constancy of S -> invariant K = Gamma^2 - Gamma' ->
canonical form -> affine model map phi onto the model M_c with c = -lam.

K separates the shapes once lam is known: positive for EXP, SINH_SQ and
COSH_SQ, zero for CONST and INV_SQ, negative for COS_SQ. When lam = 0, EXP
and CONST are told apart by Gamma instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from . import forms
from .curves import Interval, MetricCurve
from .errors import (DomainError, FitMismatch, NonConstantInvariant,
                     NotConstantCurvature, NotToric)
from .expfam import AnalyticFamily, FiniteExpFam, fisher_metric
from .forms import CanonicalForm, model_domain, model_metric
from .hessian import DEFAULT_GRID, christoffel, curvature_arrays, metric_from_potential

CONSTANCY_TOL = 1e-7
FIT_TOL = 1e-6
ZERO_K_TOL = 1e-9


@dataclass(frozen=True)
class Classification:
    constant: bool
    lam: float
    max_S_deviation: float
    form: Optional[CanonicalForm] = None
    toric: bool = False
    c: Optional[float] = None
    phi: Optional[tuple[float, float]] = None
    model_domain: Optional[Interval] = None
    K: Optional[float] = None
    pullback_error: Optional[float] = None
    grid: np.ndarray = field(default=None, repr=False, compare=False)

    def phi_at(self, x):
        alpha, beta = self.phi
        return alpha * np.asarray(x, dtype=float) + beta


def metric_of(obj) -> MetricCurve:
    """MetricCurve for a finite family, built-in analytic family or metric."""
    if isinstance(obj, MetricCurve):
        return obj
    if isinstance(obj, FiniteExpFam):
        return fisher_metric(obj)
    if isinstance(obj, AnalyticFamily):
        if obj.metric is not None:
            return obj.metric
        return metric_from_potential(obj.potential)
    if isinstance(obj, CanonicalForm):
        return obj.metric()
    raise TypeError(f"cannot build a metric from {type(obj).__name__}")


def _grid_for(m: MetricCurve, grid):
    if grid is None:
        return m.domain.grid(*DEFAULT_GRID)
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise DomainError("empty grid")
    return m.domain.check(grid)


def constancy_test(m: MetricCurve, grid=None, tol: float = CONSTANCY_TOL):
    """Return ``(constant, lam, max_deviation)`` with lam the median of S."""
    grid = _grid_for(m, grid)
    S = curvature_arrays(m, grid)[3]
    lam = float(np.median(S))
    dev = float(np.max(np.abs(S - lam)))
    return dev < tol, lam, dev


def toricity_invariant(m: MetricCurve, grid=None, tol: float = CONSTANCY_TOL) -> float:
    """Median of K over the grid; raises if K is not constant.

    The tolerance is relative to max(1, Gamma^2) since K is a difference of
    two terms of that size.
    """
    grid = _grid_for(m, grid)
    _, gamma, _, _, K = curvature_arrays(m, grid)
    k0 = float(np.median(K))
    scale = np.maximum(1.0, gamma * gamma)
    dev = float(np.max(np.abs(K - k0) / scale))
    if dev >= tol:
        raise NonConstantInvariant(f"K varies by {dev:.3e} (relative) over the grid")
    return k0


def base_point(grid) -> float:
    """Grid midpoint clamped to [-1, 1] and to the grid span."""
    lo, hi = float(np.min(grid)), float(np.max(grid))
    mid = 0.5 * (lo + hi)
    left, right = max(-1.0, lo), min(1.0, hi)
    return min(max(mid, left), right) if left <= right else mid


def _arccoth(y: float) -> float:
    return math.atanh(1.0 / y)


def fit_form(m: MetricCurve, lam: float, base_x: Optional[float] = None, grid=None,
             tol: float = FIT_TOL, constancy_tol: float = CONSTANCY_TOL) -> CanonicalForm:
    """Recover the canonical form of a constant-curvature metric.

    Parameters come from h, Gamma and K at ``base_x``; the reconstructed
    metric must then match ``m`` on the grid within ``tol`` relative error.
    """
    grid = _grid_for(m, grid)
    x0 = base_point(grid) if base_x is None else float(base_x)
    h0 = float(m.h(x0))
    g0 = float(christoffel(m, x0)[0])

    if abs(lam) < constancy_tol:
        if abs(g0) < ZERO_K_TOL:
            form = CanonicalForm(forms.CONST, 0.0, 0.0, math.log(h0))
        else:
            a = 2.0 * g0
            form = CanonicalForm(forms.EXP, 0.0, a, math.log(h0) - a * x0)
    else:
        K = toricity_invariant(m, grid, constancy_tol)
        if abs(K) < ZERO_K_TOL * max(1.0, g0 * g0):
            if lam < 0:
                raise FitMismatch("K = 0 is impossible with negative curvature")
            form = CanonicalForm(forms.INV_SQ, lam, 0.0, -x0 - 1.0 / g0)
        elif K > 0:
            k = math.sqrt(K)
            y = -g0 / k
            if lam > 0:
                if not abs(y) > 1:
                    raise FitMismatch(f"|Gamma|/sqrt(K) = {abs(y):.6g} <= 1 for SINH_SQ")
                u0 = _arccoth(y)
                form = CanonicalForm(forms.SINH_SQ, lam, K, u0 - k * x0, 1 if u0 < 0 else -1)
            else:
                if not abs(y) < 1:
                    raise FitMismatch(f"|Gamma|/sqrt(K) = {abs(y):.6g} >= 1 for COSH_SQ")
                form = CanonicalForm(forms.COSH_SQ, lam, K, math.atanh(y) - k * x0)
        else:
            if lam < 0:
                raise FitMismatch("K < 0 is impossible with negative curvature")
            k = math.sqrt(-K)
            form = CanonicalForm(forms.COS_SQ, lam, -K, math.atan(g0 / k) - k * x0)

    err = _relative_error(m.h(grid), form.h(grid))
    if not err < tol:
        raise FitMismatch(f"{form.describe()} misses the metric by {err:.3e}", err)
    return form


def _relative_error(h, h_fit) -> float:
    return float(np.max(np.abs(h - h_fit) / np.abs(h)))


def model_map(form: CanonicalForm) -> tuple[float, float]:
    """Coefficients (alpha, beta) of the affine isometry phi(x) = alpha x + beta."""
    if form.tag == forms.EXP:
        return form.a, form.b - math.log(form.a ** 2) + 0.0
    if form.tag == forms.SINH_SQ:
        return form.eps * form.root_a, form.eps * form.b + 0.0
    if form.tag == forms.COSH_SQ:
        return form.root_a, form.b
    raise NotToric(f"{form.tag} has no model map")


def pullback_error(m: MetricCurve, c: float, phi: tuple[float, float], grid) -> float:
    """max |h(x) - h_c(phi(x)) phi'^2| / h(x) over ``grid``."""
    alpha, beta = phi
    t = alpha * np.asarray(grid) + beta
    dom = model_domain(c)
    if not np.all(dom.contains(t)):
        raise FitMismatch(f"phi sends the grid outside M_c = ({dom.lo}, {dom.hi})")
    return _relative_error(m.h(grid), model_metric(c).h(t) * alpha ** 2)


def classify(obj: Union[FiniteExpFam, AnalyticFamily, MetricCurve], grid=None,
             constancy_tol: float = CONSTANCY_TOL, fit_tol: float = FIT_TOL,
             strict: bool = False) -> Classification:
    """Run the full pipeline.

    A non-constant curvature yields ``constant=False`` (or raises
    NotConstantCurvature when ``strict``). Toric results are validated by the
    pullback identity h = (h_c o phi) phi'^2 on the grid.
    """
    m = metric_of(obj)
    grid = _grid_for(m, grid)
    constant, lam, dev = constancy_test(m, grid, constancy_tol)
    if not constant:
        if strict:
            raise NotConstantCurvature(f"S deviates by {dev:.3e} from its median", dev)
        return Classification(False, lam, dev, grid=grid)
    if abs(lam) < constancy_tol:
        lam = 0.0
    form = fit_form(m, lam, grid=grid, tol=fit_tol, constancy_tol=constancy_tol)
    K = toricity_invariant(m, grid, constancy_tol)
    c = -lam + 0.0
    if not form.toric:
        return Classification(True, lam, dev, form, False, c, K=K, grid=grid)
    phi = model_map(form)
    err = pullback_error(m, c, phi, grid)
    if not err < fit_tol:
        raise FitMismatch(f"pullback of h_c misses the metric by {err:.3e}", err)
    return Classification(True, lam, dev, form, True, c, phi, model_domain(c), K, err, grid)
