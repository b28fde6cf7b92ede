"""The six constant-curvature metric shapes in one affine coordinate.

With ``u = sqrt(a) x + b`` and curvature constant ``lam``::

    EXP      e^(a x + b)                 lam = 0
    CONST    e^b                         lam = 0
    COS_SQ   a / (lam cos^2 u)           lam > 0
    SINH_SQ  a / (lam sinh^2 u)          lam > 0, side of u = 0 chosen by eps
    INV_SQ   1 / (lam (x + b)^2)         lam > 0
    COSH_SQ  -a / (lam cosh^2 u)         lam < 0

The model metrics h_c are COSH_SQ(1, 0) for c > 0, EXP(1, 0) for c = 0 and
SINH_SQ(1, 0, eps=+1) on (-inf, 0) for c < 0, each with lam = -c.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .curves import REALS, Interval, MetricCurve, metric_from_log_derivatives
from .errors import ParameterError, UnknownForm

EXP, CONST, COS_SQ, SINH_SQ, INV_SQ, COSH_SQ = (
    "EXP", "CONST", "COS_SQ", "SINH_SQ", "INV_SQ", "COSH_SQ")
TAGS = (EXP, CONST, COS_SQ, SINH_SQ, INV_SQ, COSH_SQ)
TORIC_TAGS = frozenset({EXP, SINH_SQ, COSH_SQ})


def lattice_factor(c: float) -> int:
    """2 on the flat model, 1 otherwise."""
    return 2 if c == 0 else 1


@dataclass(frozen=True)
class CanonicalForm:
    tag: str
    lam: float
    a: float = 0.0
    b: float = 0.0
    eps: int = 0

    def __post_init__(self):
        for name in ("lam", "a", "b"):
            object.__setattr__(self, name, float(getattr(self, name)) + 0.0)
        tag, lam, a = self.tag, self.lam, self.a
        if tag not in TAGS:
            raise UnknownForm(f"unknown canonical form {tag!r}")
        if tag in (EXP, CONST) and lam != 0:
            raise ParameterError(f"{tag} requires lam = 0")
        if tag in (COS_SQ, SINH_SQ, INV_SQ) and not lam > 0:
            raise ParameterError(f"{tag} requires lam > 0")
        if tag == COSH_SQ and not lam < 0:
            raise ParameterError("COSH_SQ requires lam < 0")
        if tag in (COS_SQ, SINH_SQ, COSH_SQ) and not a > 0:
            raise ParameterError(f"{tag} requires a > 0")
        if tag == EXP and a == 0:
            raise ParameterError("EXP requires a != 0")
        if tag == SINH_SQ and self.eps not in (1, -1):
            raise ParameterError("SINH_SQ requires eps in {+1, -1}")
        if tag != SINH_SQ and self.eps != 0:
            raise ParameterError("eps is only meaningful for SINH_SQ")

    @property
    def toric(self) -> bool:
        return self.tag in TORIC_TAGS

    @property
    def root_a(self) -> float:
        return math.sqrt(self.a)

    @property
    def K(self) -> float:
        """Value of Gamma^2 - Gamma' for this shape."""
        return {EXP: self.a ** 2 / 4, CONST: 0.0, COS_SQ: -self.a,
                SINH_SQ: self.a, INV_SQ: 0.0, COSH_SQ: self.a}[self.tag]

    def params(self) -> dict:
        return {"tag": self.tag, "lam": self.lam, "a": self.a, "b": self.b, "eps": self.eps}

    # -- domains -----------------------------------------------------------

    def _x_of_u(self, u: float) -> float:
        if self.tag == INV_SQ:
            return u - self.b
        return (u - self.b) / self.root_a

    def natural_domain(self) -> Interval:
        """Largest interval on which the local expression is smooth and positive.

        INV_SQ uses the side x > -b.
        """
        tag = self.tag
        if tag in (EXP, CONST, COSH_SQ):
            return REALS
        if tag == COS_SQ:
            return Interval(self._x_of_u(-math.pi / 2), self._x_of_u(math.pi / 2))
        if tag == SINH_SQ:
            edge = self._x_of_u(0.0)
            return Interval(-math.inf, edge) if self.eps == 1 else Interval(edge, math.inf)
        return Interval(-self.b, math.inf)

    def sample_interval(self) -> Interval:
        """Interior window where h and its basis functions stay O(1)-O(100)."""
        tag = self.tag
        if tag in (EXP, CONST):
            return Interval(-1.0, 1.0)
        if tag == COSH_SQ:
            lo, hi = -2.0, 2.0
        elif tag == COS_SQ:
            lo, hi = -1.3, 1.3
        elif tag == SINH_SQ:
            lo, hi = (-2.0, -0.3) if self.eps == 1 else (0.3, 2.0)
        else:
            lo, hi = 0.3, 3.0
        return Interval(self._x_of_u(lo), self._x_of_u(hi))

    # -- metric ------------------------------------------------------------

    def u(self, x):
        return self.root_a * np.asarray(x, dtype=float) + self.b

    def log_h(self, x):
        x = np.asarray(x, dtype=float)
        tag, lam, a = self.tag, self.lam, self.a
        if tag == EXP:
            return a * x + self.b
        if tag == CONST:
            return np.full_like(x, self.b)
        if tag == COS_SQ:
            return math.log(a / lam) - 2.0 * np.log(np.abs(np.cos(self.u(x))))
        if tag == SINH_SQ:
            return math.log(a / lam) - 2.0 * np.log(np.abs(np.sinh(self.u(x))))
        if tag == COSH_SQ:
            return math.log(-a / lam) - 2.0 * np.log(np.cosh(self.u(x)))
        return -math.log(lam) - 2.0 * np.log(np.abs(x + self.b))

    def h(self, x):
        return np.exp(self.log_h(x))

    def gammas(self, x):
        """Exact ``(Gamma, Gamma', Gamma'')``."""
        x = np.asarray(x, dtype=float)
        tag, a = self.tag, self.a
        zero = np.zeros_like(x)
        if tag == EXP:
            return zero + a / 2, zero, zero
        if tag == CONST:
            return zero, zero, zero
        if tag == INV_SQ:
            s = x + self.b
            return -1.0 / s, 1.0 / s ** 2, -2.0 / s ** 3
        k, u = self.root_a, self.u(x)
        if tag == COS_SQ:
            t, sec2 = np.tan(u), 1.0 / np.cos(u) ** 2
            return k * t, a * sec2, 2.0 * a * k * sec2 * t
        if tag == SINH_SQ:
            ct, csch2 = 1.0 / np.tanh(u), 1.0 / np.sinh(u) ** 2
            return -k * ct, a * csch2, -2.0 * a * k * csch2 * ct
        th, sech2 = np.tanh(u), 1.0 / np.cosh(u) ** 2
        return -k * th, -a * sech2, 2.0 * a * k * sech2 * th

    def metric(self, domain: Interval | None = None) -> MetricCurve:
        domain = self.natural_domain() if domain is None else domain
        return metric_from_log_derivatives(domain, self.log_h, self.gammas,
                                           label=self.describe())

    def describe(self) -> str:
        body = f"a={self.a:.12g}, b={self.b:.12g}"
        if self.tag == SINH_SQ:
            body += f", eps={self.eps:+d}"
        if self.tag == CONST:
            body = f"b={self.b:.12g}"
        if self.tag == INV_SQ:
            body = f"b={self.b:.12g}"
        return f"{self.tag}({body}; lam={self.lam:.12g})"


def model_form(c: float) -> CanonicalForm:
    """Canonical form of the model metric h_c (curvature -c)."""
    if c > 0:
        return CanonicalForm(COSH_SQ, -c, 1.0, 0.0)
    if c == 0:
        return CanonicalForm(EXP, 0.0, 1.0, 0.0)
    return CanonicalForm(SINH_SQ, -c, 1.0, 0.0, 1)


def model_domain(c: float) -> Interval:
    return REALS if c >= 0 else Interval(-math.inf, 0.0)


def model_metric(c: float) -> MetricCurve:
    """h_c(t) = 1/(c cosh^2 t), e^t, or -1/(c sinh^2 t) on (-inf, 0)."""
    m = model_form(c).metric(model_domain(c))
    return MetricCurve(m.domain, m.evaluator, m.christoffel, label=f"model(c={c:g})")
