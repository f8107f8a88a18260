"""Invariant suites run by ``qhj verify``.

Each suite sweeps a set of quantum numbers and returns a :class:`CheckResult`
holding the worst-case number against its threshold.  The reference wave
functions and polynomial roots come from :mod:`scipy.special`, so they are
independent of the recurrences in :mod:`qhj.orthopoly`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional

import numpy as np
from scipy import special

from . import contour as ct
from . import systems as sy
from .riccati import derive_linear_form, linear_form_residual, log_derivative_oracle, riccati_residual

RESIDUAL_TOL = 1e-7
NEGATIVE_CONTROL_MIN = 1e-3
ORACLE_RTOL = 1e-9
RESIDUE_TOL = 1e-9
NODE_TOL = 1e-10
FD_TOL = 1e-6
ORACLE_POINTS = 200
ORACLE_MARGIN = 0.05


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    worst: float
    threshold: float
    cases: int
    detail: str = ""


# ---------------------------------------------------------------- case lists


def ho_cases(n_max: int) -> List[sy.MomentumFunction]:
    return [sy.ho_momentum(n) for n in range(n_max + 1)]


def hydrogen_cases(n_max: int) -> List[sy.MomentumFunction]:
    """Distinct phi, x and rho momentum functions for every (n, l, m) with n <= n_max."""
    out = []
    for m in range(-(n_max - 1), n_max):
        out.append(sy.hydrogen_p_phi(m))
    for ell in range(n_max):
        for m in range(-ell, ell + 1):
            out.append(sy.hydrogen_p_x(ell, m))
    for n in range(1, n_max + 1):
        for ell in range(n):
            out.append(sy.hydrogen_p_rho(n, ell))
    return out


def cases_for(system: Optional[str], ho_max: int, h_max: int) -> List[sy.MomentumFunction]:
    out = []
    if system in (None, "ho"):
        out += ho_cases(ho_max)
    if system in (None, "hydrogen"):
        out += hydrogen_cases(h_max)
    return out


def _tag(p: sy.MomentumFunction) -> str:
    qn = ",".join(f"{k}={v}" for k, v in p.quantum_numbers.items())
    return f"{p.label}({qn})"


# ---------------------------------------------------------------- sampling


def sample_interval(p: sy.MomentumFunction):
    """A finite real interval covering the interesting part of p's domain."""
    if p.coordinate == "xi":
        b = math.sqrt(2 * p.quantum_numbers["n"] + 1) + 3.0
        return -b, b
    if p.coordinate == "x":
        return -0.999, 0.999
    if p.coordinate == "rho":
        return 0.05, 4.0 * p.quantum_numbers["n"] + 8.0
    return 0.0, 2 * math.pi


def pole_free_grid(p: sy.MomentumFunction, points: int = 401, margin: float = 0.01) -> np.ndarray:
    lo, hi = sample_interval(p)
    grid = np.linspace(lo, hi, points)
    for pole in p.poles:
        grid = grid[np.abs(grid - pole.location.real) >= margin]
    return grid


def random_points(p: sy.MomentumFunction, count: int, rng: np.random.Generator,
                  margin: float = ORACLE_MARGIN) -> np.ndarray:
    """Uniform points at distance >= margin from every pole of p and zero of u."""
    lo, hi = sample_interval(p)
    if p.coordinate == "xi":
        # keep the Gaussian tail above the oracle's |u| cutoff
        b = math.sqrt(2 * p.quantum_numbers["n"] + 1) + 2.0
        lo, hi = -b, b
    elif p.coordinate == "rho":
        lo = max(lo, 0.1)
    avoid = np.array([q.location.real for q in p.poles] + list(np.real(p.enclose)), dtype=float)
    picked = np.empty(0)
    while picked.size < count:
        cand = rng.uniform(lo, hi, 4 * count)
        if avoid.size:
            ok = np.min(np.abs(cand[:, None] - avoid[None, :]), axis=1) >= margin
            cand = cand[ok]
        picked = np.concatenate([picked, cand])
    return picked[:count]


# ---------------------------------------------------------------- references


def reference_wavefunction(p: sy.MomentumFunction):
    """(u, u') from scipy.special for the eigenfunction behind ``p``."""
    qn = p.quantum_numbers
    if p.coordinate == "xi":
        n = qn["n"]

        def u(q):
            return special.eval_hermite(n, q) * np.exp(-0.5 * q * q)

        def du(q):
            h1 = 2 * n * special.eval_hermite(n - 1, q) if n > 0 else 0.0
            return (h1 - q * special.eval_hermite(n, q)) * np.exp(-0.5 * q * q)

        return u, du
    if p.coordinate == "phi":
        m = qn["m"]
        return (lambda q: np.exp(1j * m * q)), (lambda q: 1j * m * np.exp(1j * m * q))
    if p.coordinate == "x":
        ell, ma = qn["ell"], abs(qn["m"])
        return (
            lambda q: special.assoc_legendre_p(ell, ma, q, diff_n=1)[0],
            lambda q: special.assoc_legendre_p(ell, ma, q, diff_n=1)[1],
        )
    n, ell = qn["n"], qn["ell"]
    big_n, alpha = n - ell - 1, 2 * ell + 1

    def lag_d(q):
        if big_n == 0:
            return np.zeros_like(q)
        return -special.eval_genlaguerre(big_n - 1, alpha + 1, q)

    def u(q):
        return np.exp(-0.5 * q) * q**ell * special.eval_genlaguerre(big_n, alpha, q)

    def du(q):
        lag = special.eval_genlaguerre(big_n, alpha, q)
        return np.exp(-0.5 * q) * q**ell * ((ell / q - 0.5) * lag + lag_d(q))

    return u, du


def reference_roots(p: sy.MomentumFunction) -> np.ndarray:
    """Roots of the wave-function polynomial factor from scipy's Gauss rules."""
    qn = p.quantum_numbers
    if p.coordinate == "xi":
        deg = qn["n"]
        return np.sort(special.roots_hermite(deg)[0]) if deg else np.empty(0)
    if p.coordinate == "x":
        ma = abs(qn["m"])
        deg = qn["ell"] - ma
        # Q_{l,m} is proportional to the Jacobi polynomial P_{l-m}^{(m,m)}
        return np.sort(special.roots_jacobi(deg, ma, ma)[0]) if deg else np.empty(0)
    if p.coordinate == "rho":
        deg = qn["n"] - qn["ell"] - 1
        return np.sort(special.roots_genlaguerre(deg, 2 * qn["ell"] + 1)[0]) if deg else np.empty(0)
    return np.empty(0)


# ---------------------------------------------------------------- suites


def _result(name, values: Iterable[float], threshold, cases, *, above=False, detail=""):
    values = list(values)
    if above:
        worst = min(values) if values else math.inf
        passed = worst > threshold
    else:
        worst = max(values) if values else 0.0
        passed = worst < threshold
    return CheckResult(name, bool(passed), float(worst), threshold, cases, detail)


def check_riccati(cases, kappa_shift: float = 0.0) -> CheckResult:
    worst, where = [], ""
    for p in cases:
        coeffs = p.riccati
        if kappa_shift:
            d = p.kappa_direction
            coeffs = coeffs.shifted(lambda q, d=d: kappa_shift * d(q))
        r = riccati_residual(coeffs, p, pole_free_grid(p)).sup_norm
        if not worst or r > max(worst):
            where = _tag(p)
        worst.append(r)
    return _result("riccati_residual", worst, RESIDUAL_TOL, len(cases), detail=f"worst at {where}")


def check_negative_control(cases, shift: float = 0.01) -> CheckResult:
    vals = []
    for p in cases:
        d = p.kappa_direction
        coeffs = p.riccati.shifted(lambda q, d=d: shift * d(q))
        vals.append(riccati_residual(coeffs, p, pole_free_grid(p)).sup_norm)
    return _result("negative_control", vals, NEGATIVE_CONTROL_MIN, len(cases), above=True,
                   detail=f"kappa shifted by {shift}; residual must exceed threshold")


def check_oracle(cases, seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    vals = []
    for p in cases:
        q = random_points(p, ORACLE_POINTS, rng)
        u, du = reference_wavefunction(p)
        ref = log_derivative_oracle(u, du, p.riccati.R, q)
        got = p.evaluate(q)
        vals.append(float(np.max(np.abs(got - ref) / np.abs(ref))) if np.all(ref != 0) else
                    float(np.max(np.abs(got - ref))))
    return _result("oracle_equivalence", vals, ORACLE_RTOL, len(cases))


def check_linear_form(cases) -> CheckResult:
    vals = []
    for p in cases:
        e = p.eigenfunction
        form = derive_linear_form(p.riccati)
        vals.append(linear_form_residual(form, e.u, e.du, e.d2u, pole_free_grid(p)))
    return _result("linear_form", vals, RESIDUAL_TOL, len(cases))


def _residue_radius(pole, others) -> float:
    gaps = [abs(pole - o) for o in others]
    return min([0.1] + [0.4 * g for g in gaps])


def check_residues(cases) -> CheckResult:
    vals = []
    for p in cases:
        locs = [q.location for q in p.poles]
        for q in p.poles:
            others = [o for o in locs if o != q.location]
            r = residue_at(p, q, others)
            vals.append(abs(r - q.residue))
            if q.kind == sy.NODE:
                vals.append(abs(q.residue + 1.0 / p.riccati.R(q.location.real)))
    return _result("residue_law", vals, RESIDUE_TOL, len(cases))


def residue_at(p, pole, others):
    return ct.residue_at(p.evaluate, pole.location, _residue_radius(pole.location, others), others)


def check_node_coincidence(cases) -> CheckResult:
    vals = []
    for p in cases:
        ref = reference_roots(p)
        got = p.nodes
        if ref.size != got.size:
            vals.append(math.inf)
        elif ref.size:
            vals.append(float(np.max(np.abs(ref - got))))
    return _result("node_coincidence", vals, NODE_TOL, len(cases))


def check_quantization(cases, tol: float = 1e-8) -> CheckResult:
    vals, bad = [], []
    for p in cases:
        a = ct.action_variable(p, tol=tol)
        vals.append(max(a.deviation, abs(a.J_over_hbar.imag)))
        if not a.converged:
            bad.append(_tag(p))
    res = _result("quantization", vals, tol, len(cases))
    if bad:
        return CheckResult(res.name, False, res.worst, tol, res.cases, "not converged: " + ", ".join(bad))
    return res


def check_node_accounting(cases) -> CheckResult:
    failures = []
    for p in cases:
        if p.periodic:
            continue
        rep = ct.nodes_and_antinodes(p)
        qn = p.quantum_numbers
        expected = {
            "xi": lambda: qn["n"],
            "x": lambda: qn["ell"] - abs(qn["m"]),
            "rho": lambda: qn["n"] - qn["ell"] - 1,
        }[p.coordinate]()
        if rep.node_count != expected or not rep.interleaved or not rep.consistent:
            failures.append(_tag(p))
    return CheckResult("node_accounting", not failures, float(len(failures)), 1.0, len(cases),
                       "failed: " + ", ".join(failures) if failures else "")


def check_spectra(system: Optional[str], ho_max: int, h_max: int) -> CheckResult:
    vals = []
    if system in (None, "ho"):
        for n in range(ho_max + 1):
            q = sy.HOQuantumNumbers(n, 0, 0, (1.0, 2.0, 3.0))
            vals.append(sy.angle_variable_fd_check("ho", q, 1e-5))
    if system in (None, "hydrogen"):
        e1 = sy.hydrogen_spectrum(sy.HydrogenQuantumNumbers(1)).energy
        for n in range(1, h_max + 1):
            q = sy.HydrogenQuantumNumbers(n)
            vals.append(sy.angle_variable_fd_check("hydrogen", q, 1e-5))
            vals.append(abs(e1 / sy.hydrogen_spectrum(q).energy - n * n) / (n * n))
    return _result("spectra", vals, FD_TOL, len(vals))


def run_all(system: Optional[str] = None, ho_max: int = 10, h_max: int = 6,
            kappa_shift: float = 0.0, tol: float = 1e-8) -> List[CheckResult]:
    cases = cases_for(system, ho_max, h_max)
    return [
        check_riccati(cases, kappa_shift),
        check_negative_control(cases),
        check_oracle(cases),
        check_linear_form(cases),
        check_residues(cases),
        check_node_coincidence(cases),
        check_quantization(cases, tol),
        check_node_accounting(cases),
        check_spectra(system, ho_max, h_max),
    ]
