"""Model space forms F(c), the covering maps tau_c and the torification checks.

Tangent vectors of the model line are complex numbers z = x + i xdot. For
c > 0 the projective line is handled in the affine chart w = z0 / z1, where
tau_c is w = e^z and the target metric is the Fubini-Study metric of
holomorphic sectional curvature c, (4/c) |dw|^2 / (1 + |w|^2)^2.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .curves import MetricCurve
from .errors import DomainError
from .forms import lattice_factor


@dataclass(frozen=True)
class Disk:
    w: complex

    def __post_init__(self):
        if not abs(self.w) < 1:
            raise DomainError(f"|w| = {abs(self.w)} is not < 1")


@dataclass(frozen=True)
class Plane:
    w: complex


@dataclass(frozen=True)
class ProjLine:
    """Point [z0, z1] of P1 stored with |z0|^2 + |z1|^2 = 1."""

    z0: complex
    z1: complex

    def __post_init__(self):
        n = math.hypot(abs(self.z0), abs(self.z1))
        if n == 0:
            raise DomainError("[0, 0] is not a projective point")
        object.__setattr__(self, "z0", complex(self.z0) / n)
        object.__setattr__(self, "z1", complex(self.z1) / n)

    def chart(self) -> complex:
        if self.z1 == 0:
            raise DomainError("point at infinity has no affine coordinate")
        return self.z0 / self.z1


SpaceFormPoint = Disk | Plane | ProjLine


@dataclass(frozen=True)
class Lattice:
    c: float

    @property
    def step(self) -> float:
        return 2.0 * math.pi * lattice_factor(self.c)


def distance(p: SpaceFormPoint, q: SpaceFormPoint) -> float:
    """Modulus distance, or chordal distance on P1.

    For unit representatives sqrt(1 - |<p, q>|^2) = |p0 q1 - p1 q0|; the
    wedge form keeps full precision for nearby points.
    """
    if isinstance(p, ProjLine) and isinstance(q, ProjLine):
        return abs(p.z0 * q.z1 - p.z1 * q.z0)
    if type(p) is not type(q):
        raise TypeError("points live in different space forms")
    return abs(p.w - q.w)


def tau(c: float, z: complex) -> SpaceFormPoint:
    z = complex(z)
    if c < 0:
        if not z.real < 0:
            raise DomainError("tau_c needs Re z < 0 when c < 0")
        return Disk(cmath.exp(z))
    if c == 0:
        return Plane(2.0 * cmath.exp(z / 2))
    return ProjLine(cmath.exp(z), 1.0)


def tau_derivative(c: float, z):
    """Complex derivative of tau_c in the disk, plane or affine chart."""
    z = np.asarray(z, dtype=complex)
    return np.exp(z / 2) if c == 0 else np.exp(z)


def torus_act(c: float, t: float, p: SpaceFormPoint) -> SpaceFormPoint:
    rot = cmath.exp(2j * math.pi * t)
    if isinstance(p, ProjLine):
        return ProjLine(rot * p.z0, p.z1)
    return type(p)(rot * p.w)


def deck(c: float, k: int, z: complex) -> complex:
    return complex(z) + 1j * k * Lattice(c).step


def dombrowski_metric(h: MetricCurve, z: complex) -> np.ndarray:
    """diag(h(x), h(x)) at z = x + i xdot; independent of the fibre value."""
    hx = float(h.h(complex(z).real))
    return np.array([[hx, 0.0], [0.0, hx]])


def chart_coordinate(p: SpaceFormPoint) -> complex:
    return p.chart() if isinstance(p, ProjLine) else p.w


def conformal_factor(c: float, w):
    """Factor rho with target metric rho(w) Re(conj(u) v) in the chart."""
    w2 = np.abs(np.asarray(w, dtype=complex)) ** 2
    if c < 0:
        if np.any(w2 >= 1):
            raise DomainError("disk coordinate with |w| >= 1")
        return (-4.0 / c) / (1.0 - w2) ** 2
    if c == 0:
        return np.ones_like(w2)
    return (4.0 / c) / (1.0 + w2) ** 2


def target_metric(c: float, p, u: complex, v: complex) -> float:
    """Metric of F(c) on chart vectors u, v at ``p`` (a point or chart coordinate)."""
    w = chart_coordinate(p) if isinstance(p, (Disk, Plane, ProjLine)) else complex(p)
    return float(conformal_factor(c, w) * (np.conj(u) * v).real)


_BASIS = (1.0 + 0j, 1j)


def pullback_residual(c: float, h: MetricCurve, grid, phi=(1.0, 0.0)) -> float:
    """Max deviation between tau_c pulled back and the Dombrowski metric of h.

    ``grid`` holds tangent points z = x + i xdot of the manifold carrying h;
    ``phi = (alpha, beta)`` is an affine model map, lifted to the tangent
    bundle as z -> alpha z + beta, composed before tau_c.
    """
    z = np.asarray(grid, dtype=complex).ravel()
    alpha, beta = phi
    zc = alpha * z + beta
    if c < 0 and np.any(zc.real >= 0):
        raise DomainError("grid leaves M_c (Re z < 0 required for c < 0)")
    w = np.exp(zc / 2) * 2.0 if c == 0 else np.exp(zc)
    jac = tau_derivative(c, zc) * alpha
    rho = conformal_factor(c, w) * np.abs(jac) ** 2
    hx = h.h(z.real)
    worst = 0.0
    for u in _BASIS:
        for v in _BASIS:
            target = rho * (np.conj(u) * v).real
            source = hx * (np.conj(u) * v).real
            worst = max(worst, float(np.max(np.abs(target - source))))
    return worst


def hopf_lift(z: complex) -> np.ndarray:
    """f(z) = (1 + e^{2 Re z})^{-1/2} (e^z, 1) on the unit 3-sphere."""
    z = complex(z)
    return np.array([cmath.exp(z), 1.0]) / math.sqrt(1.0 + math.exp(2.0 * z.real))


def hopf_pushforward(z: complex, u: complex) -> np.ndarray:
    z = complex(z)
    q = math.exp(2.0 * z.real)
    ez = cmath.exp(z)
    return (np.array([u * ez, 0.0]) / math.sqrt(1.0 + q)
            - q * u.real / (1.0 + q) ** 1.5 * np.array([ez, 1.0]))


def hopf_pullback(z: complex, u: complex, v: complex) -> float:
    """Im <F_* u, F_* v> with the Hermitian product conjugate-linear in the first slot."""
    Fu = hopf_pushforward(z, complex(u))
    Fv = hopf_pushforward(z, complex(v))
    return float(np.vdot(Fu, Fv).imag)


def hopf_closed_form(z: complex, u: complex, v: complex) -> float:
    z, u, v = complex(z), complex(u), complex(v)
    return (u.real * v.imag - u.imag * v.real) / (4.0 * math.cosh(z.real) ** 2)


def equivariance_residual(c: float, t: float, z: complex) -> float:
    """distance(tau(z + i t L), Phi_t(tau(z))) with L the lattice step."""
    shifted = tau(c, complex(z) + 1j * Lattice(c).step * t)
    return distance(shifted, torus_act(c, t, tau(c, z)))


def deck_residual(c: float, ks, grid) -> float:
    worst = 0.0
    for z in np.asarray(grid, dtype=complex).ravel():
        base = tau(c, z)
        for k in ks:
            worst = max(worst, distance(tau(c, deck(c, k, z)), base))
    return worst


def tangent_grid(c: float, n: int = 20, fibre=(-math.pi, math.pi), base=None) -> np.ndarray:
    """n x n grid of tangent points inside M_c, 0.1 away from any boundary."""
    if base is None:
        base = (-5.0, -0.1) if c < 0 else (-5.0, 5.0)
    xs = np.linspace(base[0], base[1], n)
    ys = np.linspace(fibre[0], fibre[1], n)
    return (xs[:, None] + 1j * ys[None, :]).ravel()


def injective_on_fundamental_domain(c: float, zs, tol: float = 1e-9) -> bool:
    """True if no two sampled points with Im z in [0, L) share an image."""
    step = Lattice(c).step
    zs = [complex(z) for z in zs]
    if any(not 0 <= z.imag < step for z in zs):
        raise DomainError("samples must have Im z in [0, lattice step)")
    images = [tau(c, z) for z in zs]
    for i in range(len(zs)):
        for j in range(i + 1, len(zs)):
            if abs(zs[i] - zs[j]) > tol and distance(images[i], images[j]) < tol:
                return False
    return True
