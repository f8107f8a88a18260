"""Harmonic oscillator and hydrogen atom in quantum Hamilton-Jacobi form.

Every momentum function is built in adimensional variables with hbar = 1:

    xi   harmonic oscillator axis,     xi = s * sqrt(m omega / hbar)
    phi  azimuthal angle
    x    cos(theta)
    rho  2 alpha r, alpha^2 = -2 m E / hbar^2

Physical constants (mass, k, omega, hbar) enter only through the spectra.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from scipy.optimize import brentq

from . import orthopoly as op
from .riccati import RiccatiCoefficients

__all__ = [
    "Pole",
    "Eigenfunction",
    "MomentumFunction",
    "HOQuantumNumbers",
    "HydrogenQuantumNumbers",
    "Spectrum",
    "ho_momentum",
    "hydrogen_p_phi",
    "hydrogen_p_x",
    "hydrogen_p_rho",
    "hydrogen_momenta",
    "p_theta",
    "ho_energy",
    "ho_spectrum",
    "hydrogen_energy",
    "hydrogen_angle_variable",
    "hydrogen_spectrum",
    "angle_variable_fd_check",
    "hydrogen_states",
]

NODE, BOUNDARY, ORIGIN = "node", "boundary", "origin"


@dataclass(frozen=True)
class Pole:
    location: complex
    residue: complex
    kind: str


@dataclass(frozen=True)
class Eigenfunction:
    """u = w(q) * poly(q) with a known weight log-derivative a = w'/w."""

    family: op.PolyFamily
    weight: Callable
    log_weight_d1: Callable
    log_weight_d2: Callable

    def u(self, q):
        return self.weight(q) * self.family(q)

    def du(self, q):
        a = self.log_weight_d1(q)
        return self.weight(q) * (op.eval_derivative(self.family, q) + a * self.family(q))

    def d2u(self, q):
        a = self.log_weight_d1(q)
        da = self.log_weight_d2(q)
        f0 = self.family(q)
        f1 = op.eval_derivative(self.family, q)
        f2 = op.eval_derivative(self.family, q, order=2)
        return self.weight(q) * (f2 + 2 * a * f1 + (da + a * a) * f0)


@dataclass(frozen=True)
class MomentumFunction:
    """Complex momentum function of one separated coordinate.

    ``action_sign`` is the factor relating (1/2 pi) * closed integral of
    ``evaluate`` to J / hbar (-1 for x = cos(theta)); ``action_target`` is the
    quantized value J / hbar must take.  ``kappa_direction`` is dP/d(kappa)
    of the Riccati coefficient for the quantized separation constant.
    """

    label: str
    coordinate: str
    evaluate: Callable
    derivative: Callable
    poles: Tuple[Pole, ...]
    riccati: RiccatiCoefficients
    numerator_zeros: op.RootSet
    eigenfunction: Eigenfunction
    domain: Tuple[float, float]
    action_sign: int
    action_target: int
    kappa_direction: Callable
    numerator: Optional[Callable] = None
    enclose: Tuple[complex, ...] = ()
    quantum_numbers: Dict[str, int] = field(default_factory=dict)

    def __call__(self, z):
        return self.evaluate(z)

    @property
    def periodic(self) -> bool:
        return self.coordinate == "phi"

    @property
    def node_poles(self) -> Tuple[Pole, ...]:
        return tuple(p for p in self.poles if p.kind == NODE)

    @property
    def nodes(self) -> np.ndarray:
        return np.sort(np.array([p.location.real for p in self.node_poles], dtype=float))


def _bracket_zeros(g, edges) -> op.RootSet:
    """Zeros of a real function g with at most one sign change per bracket."""
    found = []
    for a, b in zip(edges[:-1], edges[1:]):
        ga, gb = g(a), g(b)
        if ga == 0.0:
            found.append(a)
            continue
        if ga * gb < 0:
            found.append(brentq(g, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200))
    found = sorted(set(found))
    resid = float(max((abs(g(r)) for r in found), default=0.0))
    return op.RootSet(tuple(found), resid)


# --------------------------------------------------------------------------
# harmonic oscillator
# --------------------------------------------------------------------------


def ho_momentum(n: int) -> MomentumFunction:
    """p(xi) = -i [xi - H_{n+1}(xi) / H_n(xi)] for one oscillator axis."""
    if n < 0 or n > op.MAX_DEGREE - 1:
        raise ValueError(f"oscillator quantum number must be in [0, {op.MAX_DEGREE - 1}], got {n}")
    hn, hn1 = op.hermite(n), op.hermite(n + 1)
    kappa = 2 * n + 1

    def evaluate(z):
        return -1j * (z - hn1(z) / hn(z))

    def derivative(z):
        a, b = hn1(z), hn(z)
        da, db = op.eval_derivative(hn1, z), op.eval_derivative(hn, z)
        return -1j * (1.0 - (da * b - a * db) / (b * b))

    def numerator(z):
        # u' e^{xi^2/2} = H_n' - xi H_n
        return op.eval_derivative(hn, z) - z * hn(z)

    node_roots = op.roots(hn)
    poles = tuple(Pole(complex(r), -1j, NODE) for r in node_roots)
    riccati = RiccatiCoefficients.constant_R(
        lambda q: 1j * (kappa - q * q), 0.0, -1j, (-np.inf, np.inf), name="xi"
    )
    bound = math.sqrt(2 * n + 1) + 0.5
    zeros = _bracket_zeros(numerator, [-bound, *node_roots.roots, bound])
    eig = Eigenfunction(
        hn,
        lambda q: np.exp(-0.5 * np.asarray(q) ** 2),
        lambda q: -np.asarray(q),
        lambda q: -np.ones_like(np.asarray(q, dtype=float)),
    )
    return MomentumFunction(
        label="xi",
        coordinate="xi",
        evaluate=evaluate,
        derivative=derivative,
        poles=poles,
        riccati=riccati,
        numerator_zeros=zeros,
        eigenfunction=eig,
        domain=(-np.inf, np.inf),
        action_sign=1,
        action_target=n,
        kappa_direction=lambda q: 1j * np.ones_like(np.asarray(q, dtype=float)),
        numerator=numerator,
        quantum_numbers={"n": n},
    )


@dataclass(frozen=True)
class HOQuantumNumbers:
    n_x: int
    n_y: int = 0
    n_z: int = 0
    omega: Tuple[float, float, float] = (1.0, 1.0, 1.0)

    def __post_init__(self):
        for name, v in zip(("n_x", "n_y", "n_z"), self.ns):
            if int(v) != v or v < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {v}")
        if len(self.omega) != 3 or any(w <= 0 for w in self.omega):
            raise ValueError(f"omega must be three positive frequencies, got {self.omega}")

    @property
    def ns(self) -> Tuple[int, int, int]:
        return (self.n_x, self.n_y, self.n_z)

    @property
    def kappa_bar(self) -> Tuple[int, int, int]:
        return tuple(2 * n + 1 for n in self.ns)


@dataclass(frozen=True)
class Spectrum:
    energy: float
    action_values: Dict[str, float]
    angle_values: Dict[str, float]
    node_counts: Dict[str, int] = field(default_factory=dict)


def ho_energy(actions, omega=(1.0, 1.0, 1.0), hbar: float = 1.0) -> float:
    """E = sum_s omega_s (J_s + hbar/2)."""
    return float(sum(w * (j + 0.5 * hbar) for w, j in zip(omega, actions)))


def ho_spectrum(q: HOQuantumNumbers, hbar: float = 1.0) -> Spectrum:
    actions = [n * hbar for n in q.ns]
    axes = ("x", "y", "z")
    return Spectrum(
        energy=ho_energy(actions, q.omega, hbar),
        action_values={f"J_{a}": float(n) for a, n in zip(axes, q.ns)},
        angle_values={f"w_{a}": float(w) for a, w in zip(axes, q.omega)},
        node_counts={a: n for a, n in zip(axes, q.ns)},
    )


# --------------------------------------------------------------------------
# hydrogen atom
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class HydrogenQuantumNumbers:
    n: int
    ell: int = 0
    m: int = 0
    mass: float = 1.0
    k: float = 1.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not 0 <= self.ell <= self.n - 1:
            raise ValueError(f"ell must satisfy 0 <= ell <= n-1 = {self.n - 1}, got {self.ell}")
        if abs(self.m) > self.ell:
            raise ValueError(f"m must satisfy |m| <= ell = {self.ell}, got {self.m}")
        if self.mass <= 0 or self.k <= 0:
            raise ValueError("mass and k must be positive")

    @property
    def kappa_theta(self) -> int:
        return self.ell * (self.ell + 1)

    @property
    def kappa_phi(self) -> int:
        return self.m * self.m

    @property
    def radial_eigenvalue(self) -> int:
        return self.n


def hydrogen_states(n_max: int):
    """All (n, ell, m) with 1 <= n <= n_max."""
    for n in range(1, n_max + 1):
        for ell in range(n):
            for m in range(-ell, ell + 1):
                yield n, ell, m


def hydrogen_p_phi(m: int) -> MomentumFunction:
    """p_phi = m, a constant of motion."""
    m = int(m)

    def evaluate(z):
        return np.full(np.shape(z), complex(m))[()]

    def derivative(z):
        return np.zeros(np.shape(z), dtype=complex)[()]

    riccati = RiccatiCoefficients.constant_R(
        lambda q: np.full(np.shape(q), 1j * m * m)[()], 0.0, -1j, (-np.inf, np.inf), name="phi"
    )
    eig = Eigenfunction(
        op.hermite(0),
        lambda q: np.exp(1j * m * np.asarray(q)),
        lambda q: np.full(np.shape(q), 1j * m)[()],
        lambda q: np.zeros(np.shape(q), dtype=complex)[()],
    )
    return MomentumFunction(
        label="phi",
        coordinate="phi",
        evaluate=evaluate,
        derivative=derivative,
        poles=(),
        riccati=riccati,
        numerator_zeros=op.RootSet(),
        eigenfunction=eig,
        domain=(0.0, 2 * math.pi),
        action_sign=1,
        action_target=m,
        kappa_direction=lambda q: 1j * np.ones_like(np.asarray(q, dtype=float)),
        quantum_numbers={"m": m},
    )


def hydrogen_p_x(ell: int, m: int) -> MomentumFunction:
    """p_x(x) = i[-l x/(1-x^2) + (l+|m|)/(1-x^2) Q_{l-1,|m|}/Q_{l,|m|}], x = cos(theta)."""
    ma = abs(m)
    if ell < 0 or ma > ell:
        raise ValueError(f"invalid quantum numbers: need 0 <= |m| <= ell, got ell={ell}, m={m}")
    q_l = op.reduced_legendre(ell, ma)
    q_lm1 = op.PolyFamily(op.LEGENDRE, ell=ell - 1, m_abs=ma) if ell >= 1 else None
    kappa = ell * (ell + 1)

    def ratio(z):
        if q_lm1 is None or q_lm1.is_zero:
            return np.zeros_like(np.asarray(z), dtype=complex)[()]
        return q_lm1(z) / q_l(z)

    def ratio_d(z):
        if q_lm1 is None or q_lm1.is_zero:
            return np.zeros_like(np.asarray(z), dtype=complex)[()]
        a, b = q_lm1(z), q_l(z)
        return (op.eval_derivative(q_lm1, z) * b - a * op.eval_derivative(q_l, z)) / (b * b)

    def evaluate(z):
        w = 1.0 - z * z
        return 1j * (-ell * z / w + (ell + ma) / w * ratio(z))

    def derivative(z):
        w = 1.0 - z * z
        return 1j * (
            -ell * (1.0 + z * z) / (w * w)
            + (ell + ma) * (2.0 * z / (w * w) * ratio(z) + ratio_d(z) / w)
        )

    def numerator(z):
        # (1 - x^2)^{1 - |m|/2} u' for |m| > 0; plain Q' when m = 0
        if ma == 0:
            return op.eval_derivative(q_l, z)
        return (1.0 - z * z) * op.eval_derivative(q_l, z) - ma * z * q_l(z)

    node_roots = op.roots(q_l)
    poles = [Pole(complex(r), 1j, NODE) for r in node_roots]
    # u'/u = -|m| x/(1-x^2) + Q'/Q: residue of p_x at x = +-1 is i|m|/2
    poles += [Pole(complex(s), 0.5j * ma, BOUNDARY) for s in (-1.0, 1.0)]

    def P(q):
        w = 1.0 - q * q
        return -1j / w * (kappa - ma * ma / w)

    riccati = RiccatiCoefficients.constant_R(P, lambda q: 2.0 * q / (1.0 - q * q), 1j, (-1.0, 1.0), name="x")
    if ell == 0:
        zeros = op.RootSet()  # p_x vanishes identically
    else:
        zeros = _bracket_zeros(numerator, [-1.0, *node_roots.roots, 1.0])
    eig = Eigenfunction(
        q_l,
        lambda q: (1.0 - np.asarray(q) ** 2) ** (0.5 * ma),
        lambda q: -ma * np.asarray(q) / (1.0 - np.asarray(q) ** 2),
        lambda q: -ma * (1.0 + np.asarray(q) ** 2) / (1.0 - np.asarray(q) ** 2) ** 2,
    )
    return MomentumFunction(
        label="x",
        coordinate="x",
        evaluate=evaluate,
        derivative=derivative,
        poles=tuple(poles),
        riccati=riccati,
        numerator_zeros=zeros,
        eigenfunction=eig,
        domain=(-1.0, 1.0),
        action_sign=-1,
        action_target=ell,
        kappa_direction=lambda q: -1j / (1.0 - q * q),
        numerator=numerator,
        enclose=(-1.0, 1.0),
        quantum_numbers={"ell": ell, "m": m},
    )


def p_theta(p_x: MomentumFunction, theta):
    """p_theta / hbar = sin(theta) * p_x(cos(theta))."""
    theta = np.asarray(theta)
    return np.sin(theta) * p_x.evaluate(np.cos(theta))


def hydrogen_p_rho(n: int, ell: int) -> MomentumFunction:
    """p_rho = i[1/2 - l/rho + L_{n-l-2}^{2l+2}(rho) / L_{n-l-1}^{2l+1}(rho)]."""
    if n < 1 or ell < 0 or ell >= n:
        raise ValueError(f"invalid quantum numbers: need 0 <= ell <= n-1, got n={n}, ell={ell}")
    big_n = n - ell - 1
    alpha = 2 * ell + 1
    lag = op.laguerre(big_n, alpha)
    lag_num = op.laguerre(big_n - 1, alpha + 1)
    kappa = ell * (ell + 1)

    def ratio(z):
        return lag_num(z) / lag(z)

    def evaluate(z):
        return 1j * (0.5 - ell / z + ratio(z))

    def derivative(z):
        a, b = lag_num(z), lag(z)
        dr = (op.eval_derivative(lag_num, z) * b - a * op.eval_derivative(lag, z)) / (b * b)
        return 1j * (ell / (z * z) + dr)

    def numerator(z):
        # e^{rho/2} rho^{1-l} u' for l >= 1; e^{rho/2} u' for l = 0
        d = op.eval_derivative(lag, z)
        if ell == 0:
            return d - 0.5 * lag(z)
        return (ell - 0.5 * z) * lag(z) + z * d

    node_roots = op.roots(lag)
    poles = [Pole(complex(r), -1j, NODE) for r in node_roots]
    if ell >= 1:
        poles.append(Pole(0j, -1j * ell, ORIGIN))

    def P(q):
        return 1j * (-0.25 + n / q - kappa / (q * q))

    riccati = RiccatiCoefficients.constant_R(P, lambda q: -2.0 / q, -1j, (0.0, np.inf), name="rho")
    outer = 2.0 * (n + math.sqrt(n * n - kappa)) + 1.0
    zeros = _bracket_zeros(numerator, [0.0, *node_roots.roots, outer])
    eig = Eigenfunction(
        lag,
        lambda q: np.exp(-0.5 * np.asarray(q)) * np.asarray(q) ** ell,
        lambda q: -0.5 + ell / np.asarray(q),
        lambda q: -ell / np.asarray(q) ** 2,
    )
    return MomentumFunction(
        label="rho",
        coordinate="rho",
        evaluate=evaluate,
        derivative=derivative,
        poles=tuple(poles),
        riccati=riccati,
        numerator_zeros=zeros,
        eigenfunction=eig,
        domain=(0.0, np.inf),
        action_sign=1,
        action_target=n - 1,
        kappa_direction=lambda q: 1j / q,
        numerator=numerator,
        enclose=(0.0,),
        quantum_numbers={"n": n, "ell": ell},
    )


def hydrogen_momenta(q: HydrogenQuantumNumbers) -> Dict[str, MomentumFunction]:
    return {
        "phi": hydrogen_p_phi(q.m),
        "theta": hydrogen_p_x(q.ell, q.m),
        "r": hydrogen_p_rho(q.n, q.ell),
    }


def hydrogen_energy(j_r: float, mass: float = 1.0, k: float = 1.0, hbar: float = 1.0) -> float:
    """E = -m k^2 / (2 (J_r + hbar)^2)."""
    return -mass * k * k / (2.0 * (j_r + hbar) ** 2)


def hydrogen_angle_variable(j_r: float, mass: float = 1.0, k: float = 1.0, hbar: float = 1.0) -> float:
    """w_r = dE/dJ_r = m k^2 / (J_r + hbar)^3."""
    return mass * k * k / (j_r + hbar) ** 3


def hydrogen_spectrum(q: HydrogenQuantumNumbers, hbar: float = 1.0) -> Spectrum:
    j_r = (q.n - 1) * hbar
    return Spectrum(
        energy=hydrogen_energy(j_r, q.mass, q.k, hbar),
        action_values={"J_phi": float(q.m), "J_theta": float(q.ell), "J_r": float(q.n - 1)},
        angle_values={"w_r": hydrogen_angle_variable(j_r, q.mass, q.k, hbar)},
        node_counts={"phi": 0, "theta": q.ell - abs(q.m), "r": q.n - q.ell - 1},
    )


def _exact_step(x: float, delta: float) -> float:
    # a step that is exactly representable relative to x
    return (x + delta) - x


def angle_variable_fd_check(system: str, quantum_numbers, delta: float = 1e-5, hbar: float = 1.0) -> float:
    """|central difference of E(J) - analytic angle variable|, worst over coordinates."""
    if not 0.0 < delta <= hbar / 10:
        raise ValueError(f"delta must lie in (0, hbar/10], got {delta}")
    if system == "ho":
        q = quantum_numbers
        base = [n * hbar for n in q.ns]
        worst = 0.0
        for s in range(3):
            up = list(base)
            dn = list(base)
            h = _exact_step(base[s], delta)
            up[s] += h
            dn[s] -= h
            fd = (ho_energy(up, q.omega, hbar) - ho_energy(dn, q.omega, hbar)) / (2 * h)
            worst = max(worst, abs(fd - q.omega[s]))
        return worst
    if system == "hydrogen":
        q = quantum_numbers
        j = (q.n - 1) * hbar
        h = _exact_step(j, delta)
        fd = (
            hydrogen_energy(j + h, q.mass, q.k, hbar) - hydrogen_energy(j - h, q.mass, q.k, hbar)
        ) / (2 * h)
        return abs(fd - hydrogen_angle_variable(j, q.mass, q.k, hbar))
    raise ValueError(f"unknown system {system!r}")
