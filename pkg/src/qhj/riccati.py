"""Complex Riccati equation dp/dq = P + Q p + R p**2 and its linear form.

With p = -(1/R) u'/u the Riccati equation becomes

    u'' - T u' + S u = 0,    S = P R,    T = Q + R'/R.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Tuple

import numpy as np

__all__ = [
    "RiccatiCoefficients",
    "LinearForm",
    "ResidualReport",
    "NodeEvaluationError",
    "derive_linear_form",
    "riccati_residual",
    "log_derivative_oracle",
    "linear_form_residual",
    "POLE_CUTOFF",
    "NODE_CUTOFF",
]

POLE_CUTOFF = 1e-3
NODE_CUTOFF = 1e-13

ComplexFn = Callable[[np.ndarray], np.ndarray]


class NodeEvaluationError(ValueError):
    """Raised when a log-derivative is requested at (or next to) a node of u."""


def _const(c: complex) -> ComplexFn:
    def f(q):
        return np.full(np.shape(q), c, dtype=complex)[()]

    return f


@dataclass(frozen=True)
class RiccatiCoefficients:
    """Coefficient functions of dp/dq = P + Q p + R p^2 on an open interval."""

    P: ComplexFn
    Q: ComplexFn
    R: ComplexFn
    R_derivative: ComplexFn
    domain: Tuple[float, float]
    name: str = ""

    def __post_init__(self):
        lo, hi = self.domain
        if not lo < hi:
            raise ValueError(f"empty domain {self.domain}")
        a = lo if np.isfinite(lo) else -10.0
        b = hi if np.isfinite(hi) else a + 20.0
        probe = np.linspace(a, b, 19)[1:-1]
        if np.any(np.abs(np.asarray(self.R(probe))) == 0.0):
            raise ValueError("R vanishes inside the domain")

    @classmethod
    def constant_R(cls, P, Q, R: complex, domain, name=""):
        """Coefficients with constant R (every system in this package)."""
        return cls(P, Q if callable(Q) else _const(Q), _const(R), _const(0.0), domain, name)

    def rhs(self, q, p):
        return self.P(q) + self.Q(q) * p + self.R(q) * p * p

    def shifted(self, dP: ComplexFn) -> "RiccatiCoefficients":
        """Same equation with ``dP`` added to P (used for negative controls)."""
        P = self.P
        return RiccatiCoefficients(
            lambda q: P(q) + dP(q), self.Q, self.R, self.R_derivative, self.domain, self.name
        )


@dataclass(frozen=True)
class LinearForm:
    S: ComplexFn
    T: ComplexFn


@dataclass(frozen=True)
class ResidualReport:
    grid: np.ndarray
    residuals: np.ndarray
    sup_norm: float


def derive_linear_form(coeffs: RiccatiCoefficients) -> LinearForm:
    P, Q, R, dR = coeffs.P, coeffs.Q, coeffs.R, coeffs.R_derivative

    def S(q):
        return P(q) * R(q)

    def T(q):
        return Q(q) + dR(q) / R(q)

    return LinearForm(S, T)


def _check_grid(coeffs: RiccatiCoefficients, poles: Sequence[complex], grid: np.ndarray):
    lo, hi = coeffs.domain
    outside = grid[(grid <= lo) | (grid >= hi)]
    if outside.size:
        raise ValueError(f"grid point {outside[0]!r} lies outside the domain {coeffs.domain}")
    for pole in poles:
        close = grid[np.abs(grid - pole) < POLE_CUTOFF]
        if close.size:
            raise ValueError(
                f"grid point {close[0]!r} is within {POLE_CUTOFF} of the pole at {pole!r}"
            )


def riccati_residual(coeffs: RiccatiCoefficients, p, grid) -> ResidualReport:
    """Residual dp/dq - (P + Q p + R p^2) of a momentum function on a real grid.

    ``p`` must provide ``evaluate``, ``derivative`` and ``poles`` (see
    :class:`qhj.systems.MomentumFunction`); the derivative is the analytic one.
    """
    grid = np.asarray(grid, dtype=float)
    _check_grid(coeffs, [pole.location for pole in p.poles], grid)
    pv = p.evaluate(grid)
    res = np.asarray(p.derivative(grid) - coeffs.rhs(grid, pv), dtype=complex)
    return ResidualReport(grid, res, float(np.max(np.abs(res))) if res.size else 0.0)


def log_derivative_oracle(u, u_derivative, R, q):
    """Momentum function rebuilt from a wave function: -(1/R) u'/u."""
    uq = np.asarray(u(q))
    if np.any(np.abs(uq) < NODE_CUTOFF):
        bad = np.atleast_1d(q)[np.atleast_1d(np.abs(uq) < NODE_CUTOFF)][0]
        raise NodeEvaluationError(f"|u| below {NODE_CUTOFF} at q={bad!r}")
    return -(1.0 / R(q)) * (u_derivative(q) / uq)


def linear_form_residual(form: LinearForm, u, du, d2u, grid) -> float:
    """Sup-norm of u'' - T u' + S u on ``grid`` after scaling u to max|u| = 1."""
    grid = np.asarray(grid, dtype=float)
    uv = u(grid)
    scale = np.max(np.abs(uv))
    res = (d2u(grid) - form.T(grid) * du(grid) + form.S(grid) * uv) / scale
    return float(np.max(np.abs(res)))
