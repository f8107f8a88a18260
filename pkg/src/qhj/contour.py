"""Closed-contour quadrature in the complex plane.

Integrals run over a counter-clockwise ellipse
``z(t) = c + rx cos t + i ry sin t`` with the trapezoid rule, doubling the
sample count until two successive estimates agree.  For integrands analytic
in a neighbourhood of the curve this converges geometrically, so every
residue computation below is just a quadrature.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from .systems import MomentumFunction

__all__ = [
    "Contour",
    "ActionResult",
    "NodeReport",
    "WindingCount",
    "ContourError",
    "ConvergenceError",
    "QuantizationError",
    "integrate_closed",
    "integrate_with_info",
    "residue_at",
    "auto_contour",
    "action_variable",
    "count_zeros_and_poles",
    "nodes_and_antinodes",
    "MIN_POLE_DISTANCE",
]

MIN_POLE_DISTANCE = 0.05
QUAD_TOL = 1e-11
MAX_SAMPLES = 2**16
SNAP_LIMIT = 0.2


class ContourError(ValueError):
    """The contour passes too close to a declared pole."""


class ConvergenceError(RuntimeError):
    """Sample doubling hit the limit without meeting the tolerance."""

    def __init__(self, message, value=None, samples=None, delta=None):
        super().__init__(message)
        self.value = value
        self.samples = samples
        self.delta = delta


class QuantizationError(RuntimeError):
    """A quantized result lies farther than 0.2 from every integer."""


@dataclass(frozen=True)
class Contour:
    center: complex = 0j
    radius_x: float = 1.0
    radius_y: float = 1.0
    samples: int = 32

    def __post_init__(self):
        if self.radius_x <= 0 or self.radius_y <= 0:
            raise ValueError("ellipse semi-axes must be positive")
        s = self.samples
        if s < 16 or s & (s - 1):
            raise ValueError(f"samples must be a power of two >= 16, got {s}")

    @classmethod
    def circle(cls, center=0j, radius=1.0, samples=32):
        return cls(complex(center), radius, radius, samples)

    def scaled(self, factor: float) -> "Contour":
        return replace(self, radius_x=self.radius_x * factor, radius_y=self.radius_y * factor)

    def point(self, t):
        return self.center + self.radius_x * np.cos(t) + 1j * self.radius_y * np.sin(t)

    def tangent(self, t):
        return -self.radius_x * np.sin(t) + 1j * self.radius_y * np.cos(t)

    def encloses(self, z) -> bool:
        d = complex(z) - self.center
        return (d.real / self.radius_x) ** 2 + (d.imag / self.radius_y) ** 2 < 1.0

    def distance_to(self, z) -> float:
        """Distance from ``z`` to the curve."""
        z = complex(z)
        t = np.linspace(0.0, 2 * math.pi, 2048, endpoint=False)
        d = np.abs(self.point(t) - z)
        k = int(np.argmin(d))
        h = 2 * math.pi / 2048
        res = minimize_scalar(
            lambda s: abs(self.point(s) - z), bounds=(t[k] - h, t[k] + h), method="bounded",
            options={"xatol": 1e-12},
        )
        return float(min(res.fun, d[k]))

    def check_poles(self, poles: Sequence[complex], min_distance: float = MIN_POLE_DISTANCE):
        for p in poles:
            d = self.distance_to(p)
            if d < min_distance:
                raise ContourError(
                    f"contour (center={self.center}, radii=({self.radius_x}, {self.radius_y})) "
                    f"passes within {d:.3g} of the pole at {complex(p)}"
                )


@dataclass(frozen=True)
class QuadratureInfo:
    value: complex
    samples: int
    converged: bool
    delta: float


def _fsum_complex(values) -> complex:
    return complex(math.fsum(values.real), math.fsum(values.imag))


def integrate_with_info(f: Callable, c: Contour, tol: float = QUAD_TOL,
                        max_samples: int = MAX_SAMPLES) -> QuadratureInfo:
    """Trapezoid rule with sample doubling; reports convergence instead of raising."""
    n = c.samples
    t = 2 * math.pi * np.arange(n) / n
    total = _fsum_complex(np.asarray(f(c.point(t)) * c.tangent(t), dtype=complex))
    value = total * (2 * math.pi / n)
    delta = math.inf
    while n < max_samples:
        # the new nodes are the midpoints of the current ones
        t = 2 * math.pi * (np.arange(n) + 0.5) / n
        total += _fsum_complex(np.asarray(f(c.point(t)) * c.tangent(t), dtype=complex))
        n *= 2
        new = total * (2 * math.pi / n)
        if not (cmath.isfinite(new) and cmath.isfinite(value)):
            return QuadratureInfo(new, n, False, math.inf)
        delta = abs(new - value)
        value = new
        if delta < tol:
            return QuadratureInfo(value, n, True, delta)
    return QuadratureInfo(value, n, False, delta)


def integrate_closed(f: Callable, c: Contour, poles: Sequence[complex] = (),
                     tol: float = QUAD_TOL, max_samples: int = MAX_SAMPLES) -> complex:
    """Closed integral of ``f`` over ``c`` (no 1/(2 pi) factor)."""
    c.check_poles(poles)
    info = integrate_with_info(f, c, tol, max_samples)
    if not info.converged:
        raise ConvergenceError(
            f"quadrature did not converge after {info.samples} samples (last change {info.delta:.3g})",
            info.value, info.samples, info.delta,
        )
    return info.value


def residue_at(f: Callable, pole: complex, radius: float,
               other_poles: Sequence[complex] = ()) -> complex:
    """(1 / 2 pi i) times the integral of ``f`` around a small circle at ``pole``."""
    for q in other_poles:
        if abs(complex(q) - complex(pole)) <= radius:
            raise ContourError(f"circle of radius {radius} around {pole} contains the pole at {q}")
    c = Contour.circle(pole, radius, 64)
    return integrate_closed(f, c) / (2j * math.pi)


def _circle_around(points: Sequence[complex], samples: int = 32) -> Contour:
    pts = np.asarray(points, dtype=complex)
    if pts.size == 0:
        return Contour.circle(0j, 1.0, samples)
    center = complex(pts.mean())
    radius = 1.5 * float(np.max(np.abs(pts - center))) + 1.0
    return Contour.circle(center, radius, samples)


X_ELLIPSE = (2.0, 0.75)
PHI_CIRCLE = Contour.circle(0j, 1.0)


def auto_contour(p: MomentumFunction, extra: Sequence[complex] = ()) -> Contour:
    """Default contour enclosing every declared pole of ``p`` (plus ``extra``)."""
    if p.periodic:
        return PHI_CIRCLE
    if p.coordinate == "x":
        pts = [q.location for q in p.poles] + list(extra)
        rx, ry = X_ELLIPSE
        c = Contour(0j, rx, ry)
        if all(c.encloses(z) for z in pts):
            return c
        return _circle_around(pts)
    pts = [q.location for q in p.poles] + list(p.enclose) + list(extra)
    return _circle_around(pts)


def action_integrand(p: MomentumFunction):
    """Integrand whose closed integral over the action contour equals 2 pi J/hbar.

    Periodic coordinates are mapped to the unit circle with z = exp(i phi).
    """
    if p.periodic:
        return lambda z: p.evaluate(-1j * np.log(z)) / (1j * z), (0j,)
    sign = p.action_sign
    return (lambda z: sign * p.evaluate(z)), tuple(q.location for q in p.poles)


@dataclass(frozen=True)
class ActionResult:
    label: str
    J_over_hbar: complex
    target: int
    deviation: float
    samples_used: int
    converged: bool
    quantized: int
    contour: Contour


def action_variable(p: MomentumFunction, contour: Optional[Contour] = None,
                    tol: float = 1e-8) -> ActionResult:
    """J / hbar = (sign / 2 pi) times the closed integral of p."""
    f, poles = action_integrand(p)
    if contour is None:
        c = auto_contour(p)
        try:
            c.check_poles(poles)
        except ContourError:
            c = c.scaled(1.5)
            c.check_poles(poles)
    else:
        c = contour
        c.check_poles(poles)
    info = integrate_with_info(f, c)
    j = info.value / (2 * math.pi)
    snapped = int(round(j.real))
    if abs(j - snapped) > SNAP_LIMIT:
        raise QuantizationError(f"{p.label}: J/hbar = {j} is not within {SNAP_LIMIT} of an integer")
    deviation = abs(j - p.action_target)
    converged = info.converged and deviation < tol and abs(j.imag) < tol
    return ActionResult(p.label, j, p.action_target, float(deviation), info.samples, converged, snapped, c)


@dataclass(frozen=True)
class WindingCount:
    net: int
    raw: complex
    zeros: int
    poles: int


def count_zeros_and_poles(f: Callable, f_derivative: Callable, c: Contour,
                          declared_poles: int = 0) -> WindingCount:
    """Argument principle: (1 / 2 pi i) times the integral of f'/f = Z - P.

    ``declared_poles`` is the known pole count inside ``c``; the zero count
    follows from it.
    """
    raw = integrate_closed(lambda z: f_derivative(z) / f(z), c) / (2j * math.pi)
    net = int(round(raw.real))
    if abs(raw - net) > SNAP_LIMIT:
        raise ContourError(f"argument-principle value {raw} is not near an integer; contour ill-conditioned")
    return WindingCount(net, raw, net + declared_poles, declared_poles)


@dataclass(frozen=True)
class NodeReport:
    label: str
    nodes: Tuple[float, ...]
    antinodes: Tuple[float, ...]
    winding: Optional[int]
    expected_winding: Optional[int]

    @property
    def node_count(self) -> int:
        return len(self.nodes)

    @property
    def antinode_count(self) -> int:
        return len(self.antinodes)

    @property
    def consistent(self) -> bool:
        return self.winding == self.expected_winding

    @property
    def interleaved(self) -> bool:
        """Sorted nodes and anti-nodes alternate strictly."""
        merged = sorted([(x, 0) for x in self.nodes] + [(x, 1) for x in self.antinodes])
        kinds = [k for _, k in merged]
        xs = [x for x, _ in merged]
        if any(b <= a for a, b in zip(xs[:-1], xs[1:])):
            return False
        return all(a != b for a, b in zip(kinds[:-1], kinds[1:]))


def _vanishes(p: MomentumFunction) -> bool:
    probe = np.array([0.13, 0.37, 0.71]) + 0.21j
    return bool(np.all(np.asarray(p.evaluate(probe)) == 0))


def nodes_and_antinodes(p: MomentumFunction) -> NodeReport:
    """Nodes (real node poles) and anti-nodes (real zeros of p) on the physical domain."""
    nodes = tuple(float(x) for x in p.nodes)
    lo, hi = p.domain
    antinodes = tuple(float(x) for x in p.numerator_zeros if lo < x < hi)
    if p.periodic or _vanishes(p):
        # constant p_phi and the l = 0 polar function carry no zero/pole structure
        return NodeReport(p.label, nodes, antinodes, None, None)
    genuine = [q for q in p.poles if abs(q.residue) > 0]
    c = auto_contour(p, extra=antinodes)
    c.check_poles([q.location for q in genuine] + list(antinodes))
    count = count_zeros_and_poles(p.evaluate, p.derivative, c, declared_poles=len(genuine))
    return NodeReport(p.label, nodes, antinodes, count.net, len(antinodes) - len(genuine))
