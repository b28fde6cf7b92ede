"""Kaehler functions on the tangent bundle of a one-dimensional Hessian manifold.

A smooth f(x, xdot) is a Kaehler function iff

    f_xx - f_xdot,xdot = 2 Gamma f_x    and    f_x,xdot = Gamma f_xdot.

For every constant-curvature shape a 4-dimensional space of solutions is
known in closed form; these bases drive the separation and periodicity
tests behind the toricity verdict.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from . import forms
from .curves import MetricCurve
from .errors import DegenerateSampling, UnknownForm
from .forms import CanonicalForm
from .hessian import christoffel

FD_STEP = 1e-4
SEPARATION_TOL = 1e-9

# 5-point stencils for first and second derivatives.
_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0
_OFF = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])


@dataclass(frozen=True)
class KahlerCandidate:
    """f on TM with ``evaluator(x, xd) -> (f, f_x, f_xd, f_xx, f_xxd, f_xdxd)``."""

    evaluator: Callable
    name: str = ""

    def __call__(self, x, xd):
        x, xd = np.broadcast_arrays(np.asarray(x, float), np.asarray(xd, float))
        return tuple(np.broadcast_to(np.asarray(v, float), x.shape) for v in self.evaluator(x, xd))

    def value(self, x, xd):
        return self(x, xd)[0]

    @classmethod
    def from_function(cls, f: Callable, name: str = "", step: float = FD_STEP):
        """Wrap a bare function; derivatives by 5-point central differences."""

        def g(s, t):
            return np.broadcast_to(f(s, t), np.broadcast_shapes(np.shape(s), np.shape(t)))

        def evaluator(x, xd):
            x = np.asarray(x, float)[..., None]
            xd = np.asarray(xd, float)[..., None]
            along_x = g(x + step * _OFF, xd)
            along_xd = g(x, xd + step * _OFF)
            fx = along_x @ _D1 / step
            fxd = along_xd @ _D1 / step
            fxx = along_x @ _D2 / step ** 2
            fxdxd = along_xd @ _D2 / step ** 2
            # mixed partial: first difference in x of the xd-derivative
            cols = [g(x + step * o, xd + step * _OFF) @ _D1 / step for o in _OFF]
            fxxd = np.stack(cols, axis=-1) @ _D1 / step
            return g(x, xd)[..., 0], fx, fxd, fxx, fxxd, fxdxd

        return cls(evaluator, name)


def _const(x, xd):
    z = np.zeros_like(x)
    return 1.0 + z, z, z, z, z, z


@dataclass(frozen=True)
class KahlerBasis:
    form: CanonicalForm
    functions: tuple
    fiber_period: Optional[float]

    def values(self, x, xd) -> np.ndarray:
        return np.stack([f.value(x, xd) for f in self.functions])


def _exp_row(a):
    w = a / 2.0

    def e_ax(x, xd):
        E = np.exp(a * x)
        z = np.zeros_like(x)
        return E, a * E, z, a * a * E, z, z

    def cos_row(x, xd):
        P, c, s = np.exp(w * x), np.cos(w * xd), np.sin(w * xd)
        return c * P, w * c * P, -w * s * P, w * w * c * P, -w * w * s * P, -w * w * c * P

    def sin_row(x, xd):
        P, c, s = np.exp(w * x), np.cos(w * xd), np.sin(w * xd)
        return s * P, w * s * P, w * c * P, w * w * s * P, w * w * c * P, -w * w * s * P

    return [("e^(ax)", e_ax), ("cos(a xd/2) e^(ax/2)", cos_row),
            ("sin(a xd/2) e^(ax/2)", sin_row)]


def _const_row():
    def x_fn(x, xd):
        z = np.zeros_like(x)
        return x, 1.0 + z, z, z, z, z

    def xd_fn(x, xd):
        z = np.zeros_like(x)
        return xd, z, 1.0 + z, z, z, z

    def quad(x, xd):
        z = np.zeros_like(x)
        return (x * x + xd * xd) / 2, x, xd, 1.0 + z, z, 1.0 + z

    return [("x", x_fn), ("xd", xd_fn), ("(x^2+xd^2)/2", quad)]


def _cos_sq_row(k, b):
    def tan_fn(x, xd):
        u = k * x + b
        t, sec2 = np.tan(u), 1.0 / np.cos(u) ** 2
        z = np.zeros_like(x)
        return t, k * sec2, z, 2 * k * k * sec2 * t, z, z

    def make(even):
        def fn(x, xd):
            u = k * x + b
            sec, t = 1.0 / np.cos(u), np.tan(u)
            ch, sh = np.cosh(k * xd), np.sinh(k * xd)
            p, q = (ch, sh) if even else (sh, ch)
            return (p * sec, k * p * sec * t, k * q * sec,
                    k * k * p * sec * (t * t + sec * sec), k * k * q * sec * t, k * k * p * sec)
        return fn

    return [("tan(u)", tan_fn), ("cosh(k xd)/cos(u)", make(True)),
            ("sinh(k xd)/cos(u)", make(False))]


def _sinh_sq_row(k, b, phase):
    def coth_fn(x, xd):
        u = k * x + b
        ct, csch2 = 1.0 / np.tanh(u), 1.0 / np.sinh(u) ** 2
        z = np.zeros_like(x)
        return ct, -k * csch2, z, 2 * k * k * csch2 * ct, z, z

    def cos_fn(x, xd):
        u = k * x + b
        cs, ct = 1.0 / np.sinh(u), 1.0 / np.tanh(u)
        c, s = np.cos(k * xd + phase), np.sin(k * xd + phase)
        return (c * cs, -k * c * cs * ct, -k * s * cs,
                k * k * c * cs * (ct * ct + cs * cs), k * k * s * cs * ct, -k * k * c * cs)

    def sin_fn(x, xd):
        u = k * x + b
        cs, ct = 1.0 / np.sinh(u), 1.0 / np.tanh(u)
        c, s = np.cos(k * xd + phase), np.sin(k * xd + phase)
        return (s * cs, -k * s * cs * ct, k * c * cs,
                k * k * s * cs * (ct * ct + cs * cs), -k * k * c * cs * ct, -k * k * s * cs)

    return [("coth(u)", coth_fn), ("cos(k xd)/sinh(u)", cos_fn), ("sin(k xd)/sinh(u)", sin_fn)]


def _inv_sq_row(b):
    def inv(x, xd):
        s = x + b
        z = np.zeros_like(x)
        return 1 / s, -1 / s ** 2, z, 2 / s ** 3, z, z

    def lin(x, xd):
        s = x + b
        z = np.zeros_like(x)
        return xd / s, -xd / s ** 2, 1 / s, 2 * xd / s ** 3, -1 / s ** 2, z

    def quad(x, xd):
        s = x + b
        Q = x * x + xd * xd
        return (Q / s, 2 * x / s - Q / s ** 2, 2 * xd / s,
                2 / s - 4 * x / s ** 2 + 2 * Q / s ** 3, -2 * xd / s ** 2, 2 / s)

    return [("1/(x+b)", inv), ("xd/(x+b)", lin), ("(x^2+xd^2)/(x+b)", quad)]


def _cosh_sq_row(k, b, phase):
    def tanh_fn(x, xd):
        u = k * x + b
        th, sech2 = np.tanh(u), 1.0 / np.cosh(u) ** 2
        z = np.zeros_like(x)
        return th, k * sech2, z, -2 * k * k * sech2 * th, z, z

    def cos_fn(x, xd):
        u = k * x + b
        se, th = 1.0 / np.cosh(u), np.tanh(u)
        c, s = np.cos(k * xd + phase), np.sin(k * xd + phase)
        return (c * se, -k * c * se * th, -k * s * se,
                k * k * c * se * (th * th - se * se), k * k * s * se * th, -k * k * c * se)

    def sin_fn(x, xd):
        u = k * x + b
        se, th = 1.0 / np.cosh(u), np.tanh(u)
        c, s = np.cos(k * xd + phase), np.sin(k * xd + phase)
        return (s * se, -k * s * se * th, k * c * se,
                k * k * s * se * (th * th - se * se), -k * k * c * se * th, -k * k * s * se)

    return [("tanh(u)", tanh_fn), ("cos(k xd)/cosh(u)", cos_fn), ("sin(k xd)/cosh(u)", sin_fn)]


def basis_for(form: CanonicalForm, literal: bool = False) -> KahlerBasis:
    """Closed-form basis of K(TM) for a canonical form.

    The SINH_SQ and COSH_SQ rows use fibre phase 0; ``literal=True`` puts the
    form's b inside the fibre arguments as well, which spans the same space.
    """
    tag = form.tag
    if tag not in forms.TAGS:
        raise UnknownForm(tag)
    if tag == forms.EXP:
        rows, period = _exp_row(form.a), 4 * math.pi / abs(form.a)
    elif tag == forms.CONST:
        rows, period = _const_row(), None
    elif tag == forms.COS_SQ:
        rows, period = _cos_sq_row(form.root_a, form.b), None
    elif tag == forms.SINH_SQ:
        phase = form.b if literal else 0.0
        rows, period = _sinh_sq_row(form.root_a, form.b, phase), 2 * math.pi / form.root_a
    elif tag == forms.INV_SQ:
        rows, period = _inv_sq_row(form.b), None
    else:
        phase = form.b if literal else 0.0
        rows, period = _cosh_sq_row(form.root_a, form.b, phase), 2 * math.pi / form.root_a
    functions = (KahlerCandidate(_const, "1"),) + tuple(KahlerCandidate(fn, name) for name, fn in rows)
    return KahlerBasis(form, functions, period)


def pde_residual(f: KahlerCandidate, m: MetricCurve, x, xd):
    """``(r1, r2)`` of the Kaehler PDE system at (x, xd)."""
    x = m.domain.check(x)
    gamma = christoffel(m, x)[0]
    _, fx, fxd, fxx, fxxd, fxdxd = f(x, xd)
    return fxx - fxdxd - 2.0 * gamma * fx, fxxd - gamma * fxd


def verify_basis(basis: KahlerBasis, m: MetricCurve, samples) -> float:
    """Max |r1|, |r2| over all basis functions and ``samples`` (pairs (x, xd))."""
    samples = np.asarray(samples, dtype=float)
    x, xd = samples[:, 0], samples[:, 1]
    worst = 0.0
    for f in basis.functions:
        r1, r2 = pde_residual(f, m, x, xd)
        worst = max(worst, float(np.max(np.abs(r1))), float(np.max(np.abs(r2))))
    return worst


def residual_table(basis: KahlerBasis, m: MetricCurve, samples):
    """Per-function ``(index, name, max |r1|, max |r2|)`` rows."""
    samples = np.asarray(samples, dtype=float)
    rows = []
    for i, f in enumerate(basis.functions):
        r1, r2 = pde_residual(f, m, samples[:, 0], samples[:, 1])
        rows.append((i, f.name, float(np.max(np.abs(r1))), float(np.max(np.abs(r2)))))
    return rows


def gram_rank(functions: Sequence[KahlerCandidate] | KahlerBasis, samples,
              rel_tol: float = 1e-8) -> int:
    """Rank of the Gram matrix of the sampled function vectors.

    Rows are scaled to unit norm first; scaling does not change the rank and
    keeps fast-growing functions from masking the others.
    """
    if isinstance(functions, KahlerBasis):
        functions = functions.functions
    samples = np.asarray(samples, dtype=float)
    if len(samples) < 16:
        raise DegenerateSampling("gram_rank needs at least 16 samples")
    V = np.stack([f.value(samples[:, 0], samples[:, 1]) for f in functions])
    norms = np.linalg.norm(V, axis=1)
    V = V / np.where(norms > 0, norms, 1.0)[:, None]
    sv = np.linalg.svd(V @ V.T, compute_uv=False)
    return int(np.sum(sv > rel_tol * sv[0]))


def separates_points(basis: KahlerBasis, point_pairs, tol: float = SEPARATION_TOL) -> bool:
    """True iff every pair is told apart by some basis function."""
    pairs = np.asarray(point_pairs, dtype=float)
    p, q = pairs[:, 0, :], pairs[:, 1, :]
    vp = basis.values(p[:, 0], p[:, 1])
    vq = basis.values(q[:, 0], q[:, 1])
    return bool(np.all(np.max(np.abs(vp - vq), axis=0) > tol))


def lattice_invariance_residual(basis: KahlerBasis, T: float, samples) -> float:
    """max |f(x, xd + T) - f(x, xd)| over the basis and ``samples``."""
    samples = np.asarray(samples, dtype=float)
    x, xd = samples[:, 0], samples[:, 1]
    return float(np.max(np.abs(basis.values(x, xd + T) - basis.values(x, xd))))


def interior_samples(form: CanonicalForm, n: int, rng: np.random.Generator,
                     fibre=(-3.0, 3.0)) -> np.ndarray:
    """n random (x, xd) points in the form's safe sampling window."""
    win = form.sample_interval()
    x = rng.uniform(win.lo, win.hi, n)
    xd = rng.uniform(fibre[0], fibre[1], n)
    return np.column_stack([x, xd])


def sample_pairs(form: CanonicalForm, n: int, rng: np.random.Generator,
                 periods: Sequence[float] = ()) -> np.ndarray:
    """Random distinct pairs plus fibre translates (x, xd) ~ (x, xd + T)."""
    a = interior_samples(form, n, rng)
    b = interior_samples(form, n, rng)
    pairs = [np.stack([a, b], axis=1)]
    for T in periods:
        pairs.append(np.stack([a, a + np.array([0.0, T])], axis=1))
    return np.concatenate(pairs)


def candidate_periods(basis: KahlerBasis) -> list[float]:
    """Fibre translates worth testing: the basis period, or a few generic ones."""
    if basis.fiber_period is not None:
        return [basis.fiber_period]
    return [2 * math.pi, 4 * math.pi, 1.0]
