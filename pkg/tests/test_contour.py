import math

import numpy as np
import pytest

from qhj import checks
from qhj import orthopoly as op
from qhj import systems as sy
from qhj.contour import (
    Contour,
    ContourError,
    ConvergenceError,
    action_integrand,
    action_variable,
    auto_contour,
    count_zeros_and_poles,
    integrate_closed,
    integrate_with_info,
    nodes_and_antinodes,
    residue_at,
)

TWO_PI_I = 2j * math.pi


def test_integrate_simple_pole():
    assert integrate_closed(lambda z: 1 / z, Contour.circle(0j, 1.0)) == pytest.approx(TWO_PI_I, abs=1e-13)


def test_integrate_entire_function_vanishes():
    assert abs(integrate_closed(lambda z: z, Contour.circle(0j, 1.0))) < 1e-14


def test_integrate_hermite_ratio():
    h4, h3 = op.hermite(4), op.hermite(3)
    val = integrate_closed(lambda z: op.eval_poly(h4, z) / op.eval_poly(h3, z), Contour.circle(0j, 5.0))
    assert abs(val - (-6j * math.pi)) < 1e-10


@pytest.mark.parametrize("n", range(1, 11))
def test_hermite_ratio_residue_sum(n):
    # each root of H_n contributes -1 to H_{n+1}/H_n
    hi, lo = op.hermite(n + 1), op.hermite(n)
    r = math.sqrt(2 * n + 1) + 2
    val = integrate_closed(lambda z: op.eval_poly(hi, z) / op.eval_poly(lo, z), Contour.circle(0j, r))
    assert abs(val + TWO_PI_I * n) <= 1e-9 * abs(TWO_PI_I * n)


def test_ellipse_geometry():
    c = Contour(0j, 2.0, 0.75)
    assert c.encloses(1.9) and not c.encloses(0.8j)
    assert c.distance_to(3.0) == pytest.approx(1.0, abs=1e-9)
    assert c.distance_to(0.5j) == pytest.approx(0.25, abs=1e-9)
    assert c.scaled(2).radius_y == 1.5


@pytest.mark.parametrize("kw", [dict(radius_x=-1.0, radius_y=1.0), dict(radius_x=1.0, radius_y=1.0, samples=24),
                                dict(radius_x=1.0, radius_y=1.0, samples=8)])
def test_contour_validation(kw):
    with pytest.raises(ValueError):
        Contour(0j, **kw)


def test_contour_through_pole_rejected():
    with pytest.raises(ContourError, match="pole"):
        integrate_closed(lambda z: 1 / (z - 1), Contour.circle(0j, 1.0), poles=[1.0])
    with pytest.raises(ContourError):
        integrate_closed(lambda z: 1 / (z - 1.02), Contour.circle(0j, 1.0), poles=[1.02])


@pytest.mark.parametrize("f", [lambda z: 1 / (z - 1.0001), lambda z: np.exp(1 / (z - 1.001) ** 2)])
@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_nonconvergence_reported(f):
    info = integrate_with_info(f, Contour.circle(0j, 1.0), max_samples=256)
    assert not info.converged and info.samples <= 256
    with pytest.raises(ConvergenceError) as err:
        integrate_closed(f, Contour.circle(0j, 1.0), max_samples=256)
    assert err.value.samples == info.samples


def test_integration_is_deterministic():
    p = sy.hydrogen_p_rho(7, 2)
    f, _ = action_integrand(p)
    c = auto_contour(p)
    a = integrate_closed(f, c)
    b = integrate_closed(f, c)
    assert a == b


def test_residue_examples():
    p = sy.ho_momentum(3)
    others = [q.location for q in p.poles if q.location != 0]
    assert residue_at(p.evaluate, 0j, 0.1, others) == pytest.approx(-1j, abs=1e-12)
    px = sy.hydrogen_p_x(3, 0)
    assert residue_at(px.evaluate, math.sqrt(0.6), 0.1) == pytest.approx(1j, abs=1e-12)
    assert residue_at(lambda x: x / (1 - x * x), 1.0, 0.5) == pytest.approx(-0.5, abs=1e-12)


def test_residue_circle_must_isolate_pole():
    with pytest.raises(ContourError):
        residue_at(lambda z: 1 / z, 0j, 1.0, other_poles=[0.5])


@pytest.mark.parametrize("p", checks.ho_cases(6) + [c for c in checks.hydrogen_cases(5) if c.coordinate != "phi"],
                         ids=lambda p: p.label + str(p.quantum_numbers))
def test_residue_sum_matches_contour_integral(p):
    c = auto_contour(p)
    locs = [q.location for q in p.poles]
    whole = integrate_closed(p.evaluate, c, locs)
    gap = min([abs(a - b) for a in locs for b in locs if a != b] + [1.0])
    total = 0j
    for q in p.poles:
        res = residue_at(p.evaluate, q.location, 0.4 * gap, [z for z in locs if z != q.location])
        assert res == pytest.approx(q.residue, abs=1e-10)
        total += res
    assert abs(whole - TWO_PI_I * total) <= 1e-9 * max(1.0, abs(whole))


def test_boundary_residues_of_p_x():
    for ell, m in [(2, 1), (4, -3), (5, 0)]:
        p = sy.hydrogen_p_x(ell, m)
        b = [q for q in p.poles if q.kind == "boundary"]
        assert [q.location for q in b] == [-1.0, 1.0]
        for q in b:
            assert residue_at(p.evaluate, q.location, 0.01) == pytest.approx(1j * abs(m) / 2, abs=1e-10)


def test_argument_principle_examples():
    p = sy.ho_momentum(3)
    c = Contour.circle(0j, 4.0)
    w = count_zeros_and_poles(p.evaluate, p.derivative, c, declared_poles=3)
    assert w.net == 1 and w.zeros == 4
    h3 = op.hermite(3)
    w = count_zeros_and_poles(lambda z: op.eval_poly(h3, z), lambda z: op.eval_derivative(h3, z), c)
    assert w.net == 3
    w = count_zeros_and_poles(lambda z: np.exp(z), lambda z: np.exp(z), c)
    assert w.net == 0


def test_action_examples():
    assert action_variable(sy.ho_momentum(0)).J_over_hbar == pytest.approx(0, abs=1e-12)
    r = action_variable(sy.ho_momentum(3))
    assert r.quantized == 3 and r.deviation < 1e-8 and r.converged
    assert action_variable(sy.hydrogen_p_phi(-2)).quantized == -2
    assert action_variable(sy.hydrogen_p_x(3, 1)).quantized == 3
    assert action_variable(sy.hydrogen_p_rho(4, 1)).quantized == 3


def test_action_with_bad_contour():
    p = sy.ho_momentum(2)
    with pytest.raises(ContourError):
        action_variable(p, Contour.circle(0j, math.sqrt(0.5)))
    # a contour around one of the two nodes picks up one quantum only
    r = action_variable(p, Contour.circle(math.sqrt(0.5), 0.3))
    assert r.quantized == 1 and not r.converged


@pytest.mark.parametrize("n", range(21))
def test_ho_quantization_sweep(n):
    assert action_variable(sy.ho_momentum(n)).deviation < 1e-8


@pytest.mark.parametrize("p", [c for c in checks.hydrogen_cases(10)], ids=lambda p: p.label + str(p.quantum_numbers))
def test_hydrogen_quantization_sweep(p):
    r = action_variable(p)
    assert r.deviation < 1e-8 and r.quantized == p.action_target


@pytest.mark.parametrize("p", checks.ho_cases(8) + [c for c in checks.hydrogen_cases(6) if c.coordinate != "phi"],
                         ids=lambda p: p.label + str(p.quantum_numbers))
def test_contour_independence(p):
    base = action_variable(p)
    big = action_variable(p, base.contour.scaled(1.5))
    c = base.contour
    flat = Contour(c.center, c.radius_x * 1.2, c.radius_y * 0.6, c.samples)
    ell = action_variable(p, flat)
    assert abs(big.J_over_hbar - base.J_over_hbar) < 1e-10
    assert abs(ell.J_over_hbar - base.J_over_hbar) < 1e-10


def test_node_examples():
    r = nodes_and_antinodes(sy.ho_momentum(3))
    assert r.node_count == 3 and r.antinode_count == 4
    assert r.winding == 1 and r.consistent and r.interleaved
    r = nodes_and_antinodes(sy.hydrogen_p_rho(3, 0))
    assert r.node_count == 2 and r.antinode_count == 2 and r.interleaved
    r = nodes_and_antinodes(sy.hydrogen_p_x(0, 0))
    assert r.node_count == 0 and r.winding is None


@pytest.mark.parametrize("p", checks.ho_cases(10) + checks.hydrogen_cases(7), ids=lambda p: p.label + str(p.quantum_numbers))
def test_node_accounting(p):
    r = nodes_and_antinodes(p)
    assert r.node_count == len(p.node_poles)
    assert r.consistent
    if r.nodes and r.antinodes:
        assert r.interleaved
