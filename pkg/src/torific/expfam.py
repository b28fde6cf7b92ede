"""One-parameter exponential families.

Finite families are given by value tables ``C`` and ``F`` over a labelled
sample space::

    p(x; theta) = exp(C(x) + theta * F(x) - psi(theta))

All exponentials are evaluated after subtracting the row maximum, so theta*F
may exceed the float exponent range without overflow. Derivatives of psi are
probability-weighted central moments (cumulants), never differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .curves import REALS, Interval, MetricCurve, PotentialCurve
from .errors import ParameterError

CONSTANT_F_TOL = 1e-12


@dataclass(frozen=True)
class FiniteSampleSpace:
    labels: tuple

    def __post_init__(self):
        labels = tuple(str(s) for s in self.labels)
        object.__setattr__(self, "labels", labels)
        if len(labels) < 2:
            raise ParameterError("sample space needs at least 2 atoms")
        if len(set(labels)) != len(labels):
            raise ParameterError("sample space labels must be distinct")

    def __len__(self):
        return len(self.labels)

    @classmethod
    def indexed(cls, size: int) -> "FiniteSampleSpace":
        return cls(tuple(str(k) for k in range(size)))


@dataclass(frozen=True, eq=False)
class FiniteExpFam:
    """Exponential family over a finite sample space."""

    space: FiniteSampleSpace
    C: np.ndarray
    F: np.ndarray

    def __post_init__(self):
        C = np.array(self.C, dtype=float).reshape(-1)
        F = np.array(self.F, dtype=float).reshape(-1)
        n = len(self.space)
        if C.size != n or F.size != n:
            raise ParameterError(
                f"C and F must have {n} entries (got {C.size} and {F.size})")
        if not (np.all(np.isfinite(C)) and np.all(np.isfinite(F))):
            raise ParameterError("C and F entries must be finite")
        if F.max() - F.min() <= CONSTANT_F_TOL:
            raise ParameterError("F is constant; {1, F} must be linearly independent")
        C.setflags(write=False)
        F.setflags(write=False)
        object.__setattr__(self, "C", C)
        object.__setattr__(self, "F", F)

    @classmethod
    def from_tables(cls, C: Sequence[float], F: Sequence[float],
                    labels: Optional[Sequence[str]] = None) -> "FiniteExpFam":
        space = (FiniteSampleSpace(tuple(labels)) if labels is not None
                 else FiniteSampleSpace.indexed(len(F)))
        return cls(space, np.asarray(C, dtype=float), np.asarray(F, dtype=float))

    def __len__(self):
        return len(self.space)

    def __repr__(self):
        return f"FiniteExpFam(C={self.C.tolist()}, F={self.F.tolist()})"

    def log_partition(self, theta):
        return log_partition(self, theta)

    def density(self, theta):
        return density(self, theta)

    def cumulants(self, theta):
        return cumulants(self, theta)


def _exponents(fam: FiniteExpFam, theta):
    theta = np.asarray(theta, dtype=float)
    return fam.C + theta[..., None] * fam.F


def log_partition(fam: FiniteExpFam, theta):
    """psi(theta) = ln sum_k exp(C_k + theta F_k), overflow-safe."""
    e = _exponents(fam, theta)
    top = e.max(axis=-1)
    return top + np.log(np.exp(e - top[..., None]).sum(axis=-1))


def density(fam: FiniteExpFam, theta):
    """Probability vector p(.; theta) (last axis indexes atoms)."""
    e = _exponents(fam, theta)
    w = np.exp(e - e.max(axis=-1, keepdims=True))
    return w / w.sum(axis=-1, keepdims=True)


def _centred(fam: FiniteExpFam, p):
    # d_i = sum_j p_j (F_i - F_j); avoids subtracting a rounded mean from F_i.
    diff = fam.F[:, None] - fam.F[None, :]
    return p @ diff.T


def central_moments(fam: FiniteExpFam, theta, orders=(2, 3, 4, 5)):
    p = density(fam, theta)
    d = _centred(fam, p)
    return p, d, {k: (p * d ** k).sum(axis=-1) for k in orders}


def cumulants(fam: FiniteExpFam, theta):
    """Return ``(psi, psi', psi'', psi''', psi'''')`` at ``theta``.

    psi' is the mean of F, psi'' its variance, psi''' the third central
    moment and psi'''' = mu4 - 3 mu2^2.
    """
    p, d, mu = central_moments(fam, theta, (2, 3, 4))
    mean = p @ fam.F
    return (log_partition(fam, theta), mean, mu[2], mu[3], mu[4] - 3.0 * mu[2] ** 2)


def fifth_cumulant(fam: FiniteExpFam, theta):
    _, _, mu = central_moments(fam, theta, (2, 3, 5))
    return mu[5] - 10.0 * mu[3] * mu[2]


def fisher_christoffel(fam: FiniteExpFam, theta):
    """Exact ``(Gamma, Gamma', Gamma'')`` of the Fisher metric h = psi''.

    Gamma' = (k4 k2 - k3^2) / (2 k2^2). The numerator is evaluated as
    1/2 sum_ij p_i p_j d_i^2 d_j^2 (d_i - d_j)^2 - 3 k2^3, which keeps its
    relative accuracy when one atom carries almost all the mass.
    """
    p, d, mu = central_moments(fam, theta, (2, 3, 4, 5))
    k2, k3 = mu[2], mu[3]
    k4 = mu[4] - 3.0 * k2 ** 2
    k5 = mu[5] - 10.0 * k3 * k2
    pd2 = p * d ** 2
    gap2 = (d[..., :, None] - d[..., None, :]) ** 2
    pair = 0.5 * np.einsum("...i,...j,...ij->...", pd2, pd2, gap2)
    num = pair - 3.0 * k2 ** 3
    l1 = k3 / k2
    l2 = num / k2 ** 2
    l3 = k5 / k2 - 3.0 * k3 * k4 / k2 ** 2 + 2.0 * l1 ** 3
    return 0.5 * l1, 0.5 * l2, 0.5 * l3


def as_potential(fam: FiniteExpFam) -> PotentialCurve:
    return PotentialCurve(REALS, lambda x: cumulants(fam, x),
                          fifth=lambda x: fifth_cumulant(fam, x))


def fisher_metric(fam: FiniteExpFam) -> MetricCurve:
    """Fisher metric of a finite family with cancellation-free Christoffel data."""

    def evaluator(x):
        c = cumulants(fam, x)
        return c[2], c[3], c[4], fifth_cumulant(fam, x)

    return MetricCurve(REALS, evaluator, christoffel=lambda x: fisher_christoffel(fam, x),
                       label=repr(fam))


@dataclass(frozen=True)
class AnalyticFamily:
    """Built-in family whose potential (or metric) is known in closed form.

    ``tag`` is ``"poisson"``, ``"negative_binomial"`` or ``"model"``; ``param``
    holds r or c. Model families have no potential; they carry their metric.
    """

    tag: str
    param: Optional[float]
    potential: Optional[PotentialCurve] = None
    metric: Optional[MetricCurve] = field(default=None, compare=False)

    @property
    def name(self) -> str:
        return self.tag if self.param is None else f"{self.tag}({self.param:g})"


def poisson_potential() -> PotentialCurve:
    def evaluator(x):
        e = np.exp(x)
        return e, e, e, e, e

    return PotentialCurve(REALS, evaluator, fifth=np.exp)


def _nb_derivatives(x):
    # s = e^x / (1 - e^x) and its derivatives; psi^(k+1) = r s^(k).
    s = 1.0 / np.expm1(-x)
    s1 = s + s * s
    s2 = s1 * (1.0 + 2.0 * s)
    s3 = s2 * (1.0 + 2.0 * s) + 2.0 * s1 * s1
    s4 = s3 * (1.0 + 2.0 * s) + 6.0 * s1 * s2
    return s, s1, s2, s3, s4


def negative_binomial_potential(r: int) -> PotentialCurve:
    """psi(theta) = -r ln(1 - e^theta) on (-inf, 0)."""

    def evaluator(x):
        s, s1, s2, s3, _ = _nb_derivatives(x)
        psi = -r * np.log(-np.expm1(x))
        return psi, r * s, r * s1, r * s2, r * s3

    return PotentialCurve(Interval(-math.inf, 0.0), evaluator,
                          fifth=lambda x: r * _nb_derivatives(x)[4])
