"""Reduction, affine equivalence and the built-in family catalog.

The reparametrisation group acts on value tables by::

    (a, b, c, d) . (C, F) = (C + b F + d, a F + c),   a != 0

and equivalent families satisfy psi(theta) = psi'(a theta + b) + c theta + d.
Families are compared atom by atom in index order; relabelled sample spaces
are not matched up.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb
from typing import Optional, Sequence

import numpy as np

from .curves import Interval
from .errors import DegenerateFamily, ParameterError
from .expfam import (AnalyticFamily, FiniteExpFam, FiniteSampleSpace, log_partition,
                     negative_binomial_potential, poisson_potential)
from .forms import model_metric

GROUP_TOL = 1e-10
EQUIV_TOL = 1e-9


@dataclass(frozen=True)
class GroupElement:
    a: float = 1.0
    b: float = 0.0
    c: float = 0.0
    d: float = 0.0

    def __post_init__(self):
        if not abs(self.a) > 1e-12:
            raise ParameterError("group element needs a != 0")

    @classmethod
    def identity(cls) -> "GroupElement":
        return cls()

    def matrix(self) -> np.ndarray:
        return np.array([[1.0, self.b, self.d], [0.0, self.a, self.c], [0.0, 0.0, 1.0]])

    @classmethod
    def from_matrix(cls, M) -> "GroupElement":
        return cls(a=M[1, 1], b=M[0, 1], c=M[1, 2], d=M[0, 2])

    def __matmul__(self, other: "GroupElement") -> "GroupElement":
        return GroupElement.from_matrix(self.matrix() @ other.matrix())

    def inverse(self) -> "GroupElement":
        return GroupElement.from_matrix(np.linalg.inv(self.matrix()))

    def apply(self, fam: FiniteExpFam) -> FiniteExpFam:
        return FiniteExpFam(fam.space, fam.C + self.b * fam.F + self.d,
                            self.a * fam.F + self.c)

    def as_tuple(self):
        return (self.a, self.b, self.c, self.d)


@dataclass(frozen=True)
class ReducedFamily:
    base: FiniteExpFam
    alpha: np.ndarray
    omega: np.ndarray

    @property
    def p(self) -> int:
        return len(self.alpha) - 1


def reduce(fam: FiniteExpFam, tol: float = GROUP_TOL) -> ReducedFamily:
    """Merge atoms sharing an F value; weights combine by log-sum-exp."""
    order = np.argsort(fam.F, kind="stable")
    F, C = fam.F[order], fam.C[order]
    breaks = np.flatnonzero(np.diff(F) > tol) + 1
    groups = np.split(np.arange(F.size), breaks)
    if len(groups) < 2:
        raise DegenerateFamily("all F values fall in one group")
    alpha = np.array([F[g].mean() for g in groups])
    omega = np.array([_logsumexp(C[g]) for g in groups])
    base = FiniteExpFam(FiniteSampleSpace.indexed(len(groups)), omega, alpha)
    return ReducedFamily(base, alpha, omega)


def _logsumexp(v):
    top = v.max()
    return float(top + np.log(np.exp(v - top).sum()))


def _affine_fit(y, x):
    """Least-squares slope/intercept of y ~ s x + t and the inf-norm residual."""
    A = np.column_stack([x, np.ones_like(x)])
    (s, t), *_ = np.linalg.lstsq(A, y, rcond=None)
    return s, t, float(np.max(np.abs(A @ (s, t) - y)))


def equivalent(f1: FiniteExpFam, f2: FiniteExpFam,
               tol: float = EQUIV_TOL) -> Optional[GroupElement]:
    """Witness g with f1 = g . f2, or None."""
    if len(f1) != len(f2):
        return None
    a, c, res_f = _affine_fit(f1.F, f2.F)
    if res_f > tol or not abs(a) > 1e-12:
        return None
    b, d, res_c = _affine_fit(f1.C - f2.C, f2.F)
    if res_c > tol:
        return None
    return GroupElement(float(a), float(b), float(c), float(d))


def check_psi_identity(f1: FiniteExpFam, f2: FiniteExpFam, g: GroupElement,
                       grid: Sequence[float]) -> float:
    """max |psi1(t) - psi2(a t + b) - c t - d| over ``grid``."""
    t = np.asarray(grid, dtype=float)
    lhs = log_partition(f1, t)
    rhs = log_partition(f2, g.a * t + g.b) + g.c * t + g.d
    return float(np.max(np.abs(lhs - rhs)))


def binomial_equiv(fam: FiniteExpFam) -> Optional[tuple[int, GroupElement]]:
    """Return (p, g) with reduce(fam) = g . B(p), or None."""
    red = reduce(fam)
    g = equivalent(red.base, binomial(red.p))
    return None if g is None else (red.p, g)


# -- catalog -----------------------------------------------------------------

def _positive_int(value, name):
    if isinstance(value, bool) or int(value) != value or value < 1:
        raise ParameterError(f"{name} must be an integer >= 1 (got {value!r})")
    return int(value)


def binomial(n: int) -> FiniteExpFam:
    n = _positive_int(n, "n")
    C = [math.log(comb(n, k)) for k in range(n + 1)]
    return FiniteExpFam(FiniteSampleSpace.indexed(n + 1), np.array(C), np.arange(n + 1.0))


def categorical2() -> FiniteExpFam:
    return FiniteExpFam(FiniteSampleSpace(("x1", "x2")), np.zeros(2), np.array([1.0, 0.0]))


def poisson() -> AnalyticFamily:
    return AnalyticFamily("poisson", None, poisson_potential())


def negative_binomial(r: int) -> AnalyticFamily:
    r = _positive_int(r, "r")
    return AnalyticFamily("negative_binomial", r, negative_binomial_potential(r))


def model(c: float) -> AnalyticFamily:
    c = float(c)
    if not math.isfinite(c):
        raise ParameterError("c must be finite")
    return AnalyticFamily("model", c, None, model_metric(c))


def family_domain(fam) -> Interval:
    if isinstance(fam, FiniteExpFam):
        return Interval()
    return fam.potential.domain if fam.potential is not None else fam.metric.domain
