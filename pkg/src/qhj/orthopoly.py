"""Hermite, reduced associated Legendre and associated Laguerre polynomials.

All evaluation goes through forward three-term recurrences and accepts
scalars or numpy arrays (real or complex).  Derivatives are taken from the
closed derivative identity of each family, which maps a member onto another
member of the same family:

    H_n'        = 2n H_{n-1}
    Q_{l,m}'    = Q_{l,m+1}          (Q_{l,m} = d^m P_l / dx^m)
    L_n^a'      = -L_{n-1}^{a+1}

Q_{l,m} is the Ferrers function P_l^m(x) / (1 - x^2)^{m/2} without the
Condon-Shortley phase, a polynomial of degree l - m.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple

import numpy as np
from scipy.linalg import eigvalsh_tridiagonal

__all__ = [
    "PolyFamily",
    "RootSet",
    "hermite",
    "reduced_legendre",
    "laguerre",
    "eval_poly",
    "eval_derivative",
    "derivative_family",
    "roots",
    "MAX_DEGREE",
]

MAX_DEGREE = 100
_NEWTON_STEPS = 5

HERMITE = "hermite"
LEGENDRE = "reduced_legendre"
LAGUERRE = "laguerre"


@dataclass(frozen=True)
class PolyFamily:
    """One member of a polynomial family.

    Use the :func:`hermite`, :func:`reduced_legendre` and :func:`laguerre`
    constructors rather than building this directly.
    """

    tag: str
    n: int = 0
    ell: int = 0
    m_abs: int = 0
    alpha: int = 0

    def __post_init__(self):
        if self.tag == HERMITE:
            if self.n < -1:
                raise ValueError(f"Hermite degree must be >= 0, got {self.n}")
        elif self.tag == LEGENDRE:
            if self.ell < 0 or self.m_abs < 0:
                raise ValueError("reduced Legendre needs ell >= 0 and m_abs >= 0")
            if self.m_abs > self.ell + 1:
                raise ValueError(
                    f"reduced Legendre needs m_abs <= ell (or ell = m_abs - 1 for "
                    f"the zero polynomial), got ell={self.ell}, m_abs={self.m_abs}"
                )
        elif self.tag == LAGUERRE:
            if self.n < -1 or self.alpha < 0:
                raise ValueError(
                    f"Laguerre needs n >= -1 and alpha >= 0, got n={self.n}, alpha={self.alpha}"
                )
        else:
            raise ValueError(f"unknown polynomial family {self.tag!r}")
        if self.degree > MAX_DEGREE:
            raise ValueError(f"degree {self.degree} exceeds cap {MAX_DEGREE}")

    @property
    def degree(self) -> int:
        """Polynomial degree; -1 marks the identically-zero polynomial."""
        if self.tag == HERMITE:
            return self.n
        if self.tag == LEGENDRE:
            return self.ell - self.m_abs
        return self.n

    @property
    def is_zero(self) -> bool:
        return self.degree < 0

    def __call__(self, z):
        return eval_poly(self, z)


def hermite(n: int) -> PolyFamily:
    return PolyFamily(HERMITE, n=n)


def reduced_legendre(ell: int, m_abs: int) -> PolyFamily:
    return PolyFamily(LEGENDRE, ell=ell, m_abs=abs(m_abs))


def laguerre(n: int, alpha: int) -> PolyFamily:
    return PolyFamily(LAGUERRE, n=n, alpha=alpha)


@dataclass(frozen=True)
class RootSet:
    roots: Tuple[float, ...] = field(default_factory=tuple)
    refined_residual: float = 0.0

    def __len__(self):
        return len(self.roots)

    def __iter__(self):
        return iter(self.roots)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.roots, dtype=float)


def _double_factorial_odd(m: int) -> float:
    """(2m - 1)!!, with (-1)!! = 1."""
    out = 1.0
    for k in range(1, 2 * m, 2):
        out *= k
    return out


def eval_poly(family: PolyFamily, z):
    """Value of ``family`` at ``z`` by forward recurrence."""
    z = np.asarray(z)
    zero = np.zeros_like(z, dtype=np.result_type(z, float))
    if family.is_zero:
        return zero[()] if zero.ndim == 0 else zero

    if family.tag == HERMITE:
        prev, cur = zero, zero + 1.0
        for k in range(family.n):
            prev, cur = cur, 2.0 * z * cur - 2.0 * k * prev
    elif family.tag == LAGUERRE:
        a = family.alpha
        prev, cur = zero, zero + 1.0
        for k in range(family.n):
            prev, cur = cur, ((2 * k + 1 + a - z) * cur - (k + a) * prev) / (k + 1)
    else:
        m = family.m_abs
        # Q_{m,m} = (2m-1)!!, then (l - m) Q_l = (2l - 1) x Q_{l-1} - (l + m - 1) Q_{l-2}
        prev, cur = zero, zero + _double_factorial_odd(m)
        for ell in range(m + 1, family.ell + 1):
            prev, cur = cur, ((2 * ell - 1) * z * cur - (ell + m - 1) * prev) / (ell - m)
    return cur[()] if cur.ndim == 0 else cur


def derivative_family(family: PolyFamily) -> Tuple[float, PolyFamily]:
    """Return ``(c, g)`` such that ``d/dz family(z) == c * g(z)`` exactly."""
    if family.is_zero or family.degree == 0:
        return 0.0, family
    if family.tag == HERMITE:
        return 2.0 * family.n, hermite(family.n - 1)
    if family.tag == LAGUERRE:
        return -1.0, laguerre(family.n - 1, family.alpha + 1)
    return 1.0, reduced_legendre(family.ell, family.m_abs + 1)


def eval_derivative(family: PolyFamily, z, order: int = 1):
    """Exact ``order``-th derivative of ``family`` at ``z``."""
    scale = 1.0
    fam = family
    for _ in range(order):
        c, fam = derivative_family(fam)
        scale *= c
        if scale == 0.0:
            break
    return scale * eval_poly(fam, z)


def _jacobi_matrix(family: PolyFamily):
    """Diagonal and off-diagonal of the symmetric Jacobi matrix whose
    eigenvalues are the roots of ``family``."""
    d = family.degree
    k = np.arange(1, d, dtype=float)
    if family.tag == HERMITE:
        return np.zeros(d), np.sqrt(k / 2.0)
    if family.tag == LAGUERRE:
        a = family.alpha
        diag = 2.0 * np.arange(d) + a + 1.0
        return diag, np.sqrt(k * (k + a))
    # Q_{l,m} is proportional to the Gegenbauer polynomial C_{l-m}^{(m+1/2)}
    lam = family.m_abs + 0.5
    beta = k * (k + 2 * lam - 1) / (4.0 * (k + lam) * (k + lam - 1))
    return np.zeros(d), np.sqrt(beta)


def roots(family: PolyFamily) -> RootSet:
    """All (real, simple) roots of ``family``.

    Eigenvalues of the Jacobi matrix, polished with at most five Newton steps.
    The zero polynomial and constants have no roots.
    """
    if family.degree <= 0:
        return RootSet()
    diag, off = _jacobi_matrix(family)
    if family.degree == 1:
        x = np.array(diag, dtype=float)
    else:
        x = eigvalsh_tridiagonal(diag, off)
    for _ in range(_NEWTON_STEPS):
        fx = eval_poly(family, x)
        dfx = eval_derivative(family, x)
        step = fx / dfx
        x = x - step
        if np.all(np.abs(step) <= 4 * np.finfo(float).eps * np.maximum(1.0, np.abs(x))):
            break
    x = np.sort(x)
    residual = float(np.max(np.abs(eval_poly(family, x))))
    return RootSet(tuple(float(v) for v in x), residual)
