import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from qhj import orthopoly as op
from qhj.orthopoly import hermite, laguerre, reduced_legendre


def test_hermite_values():
    assert op.eval_poly(hermite(0), 0.7) == 1.0
    # H_3 = 8x^3 - 12x
    assert op.eval_poly(hermite(3), 1.0) == pytest.approx(-4.0)
    assert op.eval_poly(hermite(3), 1.0 + 1j) == pytest.approx(8 * (1 + 1j) ** 3 - 12 * (1 + 1j))


def test_zero_polynomial_conventions():
    assert op.eval_poly(laguerre(-1, 5), 2.3) == 0.0
    assert op.eval_poly(op.PolyFamily("reduced_legendre", ell=2, m_abs=3), 0.4) == 0.0
    assert laguerre(-1, 5).is_zero
    assert op.roots(laguerre(-1, 5)).roots == ()


def test_invalid_families():
    with pytest.raises(ValueError):
        reduced_legendre(2, 4)
    with pytest.raises(ValueError):
        hermite(op.MAX_DEGREE + 1)
    with pytest.raises(ValueError):
        op.PolyFamily("chebyshev")


def test_derivative_examples():
    assert op.eval_derivative(hermite(3), 0.0) == pytest.approx(-12.0)
    for z in (-3.0, 0.0, 2.5 + 1j):
        assert op.eval_derivative(hermite(1), z) == pytest.approx(2.0)
    # L_1^1 = 2 - x
    assert op.eval_derivative(laguerre(1, 1), 0.0) == pytest.approx(-1.0)


def test_root_examples():
    r = op.roots(hermite(3)).as_array()
    np.testing.assert_allclose(r, [-math.sqrt(1.5), 0.0, math.sqrt(1.5)], atol=1e-14)
    r = op.roots(reduced_legendre(3, 0)).as_array()
    np.testing.assert_allclose(r, [-math.sqrt(0.6), 0.0, math.sqrt(0.6)], atol=1e-14)
    assert len(op.roots(hermite(0))) == 0


def test_laguerre_roots_against_high_precision():
    # L_5^1 roots from mpmath.polyroots at 40 digits
    frozen = [0.6170308532782704, 2.1129659585785242, 4.6108331510175324,
              8.3990669712048422, 14.260103065920831]
    np.testing.assert_allclose(op.roots(laguerre(5, 1)).as_array(), frozen, rtol=1e-14)


FAMILIES = (
    [hermite(d) for d in range(0, 51, 7)]
    + [laguerre(d, a) for d in range(0, 51, 10) for a in (1, 2, 7, 20)]
    + [reduced_legendre(m + d, m) for d in range(0, 51, 10) for m in (0, 1, 5, 12)]
)


@pytest.mark.parametrize("fam", FAMILIES, ids=repr)
def test_root_count_and_residual(fam):
    rs = op.roots(fam)
    assert len(rs) == fam.degree
    r = rs.as_array()
    assert np.all(np.isreal(r))
    assert np.all(np.diff(r) > 0)
    if fam.degree:
        scale = np.max(np.abs(op.eval_derivative(fam, r)))
        assert rs.refined_residual <= 1e-10 * scale


def _lower(fam):
    if fam.tag == "hermite":
        return hermite(fam.n - 1)
    if fam.tag == "laguerre":
        return laguerre(fam.n - 1, fam.alpha)
    return reduced_legendre(fam.ell - 1, fam.m_abs)


@pytest.mark.parametrize("fam", [f for f in FAMILIES if f.degree >= 2], ids=repr)
def test_interlacing(fam):
    hi = op.roots(fam).as_array()
    lo = op.roots(_lower(fam)).as_array()
    assert lo.size == hi.size - 1
    for a, b, c in zip(hi[:-1], lo, hi[1:]):
        assert a < b < c


@settings(max_examples=200, deadline=None)
@given(n=st.integers(1, 29), x=st.floats(-10, 10), y=st.floats(-10, 10))
def test_hermite_recurrence_consistency(n, x, y):
    z = complex(x, y)
    if abs(z) > 10:
        z = z / abs(z) * 10
    lhs = op.eval_poly(hermite(n + 1), z)
    rhs = 2 * z * op.eval_poly(hermite(n), z) - 2 * n * op.eval_poly(hermite(n - 1), z)
    scale = max(abs(2 * z * op.eval_poly(hermite(n), z)), abs(2 * n * op.eval_poly(hermite(n - 1), z)), 1e-300)
    assert abs(lhs - rhs) <= 1e-12 * scale


@pytest.mark.parametrize("fam", [hermite(5), hermite(12), laguerre(4, 3), laguerre(9, 1),
                                 reduced_legendre(6, 2), reduced_legendre(9, 0)], ids=repr)
def test_derivative_matches_central_differences(fam):
    lo, hi = {"hermite": (-3, 3), "laguerre": (0.1, 20), "reduced_legendre": (-0.95, 0.95)}[fam.tag]
    x = np.linspace(lo, hi, 97)
    r = op.roots(op.derivative_family(fam)[1]).as_array()
    if r.size:
        x = x[np.min(np.abs(x[:, None] - r[None, :]), axis=1) > 0.02]
    h = 1e-6
    fd = (op.eval_poly(fam, x + h) - op.eval_poly(fam, x - h)) / (2 * h)
    exact = op.eval_derivative(fam, x)
    np.testing.assert_allclose(exact, fd, rtol=1e-5)


def test_second_derivative_chain():
    # H_4'' = 4*4*3 H_2
    z = 0.37
    assert op.eval_derivative(hermite(4), z, order=2) == pytest.approx(48 * op.eval_poly(hermite(2), z))
    assert op.eval_derivative(reduced_legendre(3, 3), z, order=2) == 0.0


@pytest.mark.parametrize("ell,m", [(0, 0), (1, 1), (3, 0), (4, 2), (7, 3), (10, 10), (15, 4)])
def test_reduced_legendre_matches_ferrers(ell, m):
    x = np.linspace(-0.97, 0.97, 41)
    # scipy's lpmv carries the Condon-Shortley phase
    ref = (-1) ** m * special.lpmv(m, ell, x) / (1 - x * x) ** (m / 2)
    np.testing.assert_allclose(op.eval_poly(reduced_legendre(ell, m), x), ref, rtol=1e-10, atol=1e-12 * np.max(np.abs(ref)))


@pytest.mark.parametrize("ell,m", [(1, 0), (3, 0), (4, 2), (6, 1), (5, 5)])
def test_legendre_derivative_recurrence(ell, m):
    # (1 - x^2) Q' = (m - l) x Q_l + (l + m) Q_{l-1}, the reduced form of the
    # associated Legendre derivative recurrence
    x = np.linspace(-0.9, 0.9, 31)
    q = reduced_legendre(ell, m)
    qm1 = op.PolyFamily("reduced_legendre", ell=ell - 1, m_abs=m)
    lhs = (1 - x * x) * op.eval_derivative(q, x)
    rhs = (m - ell) * x * op.eval_poly(q, x) + (ell + m) * op.eval_poly(qm1, x)
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-12)


def test_array_and_scalar_shapes():
    assert np.ndim(op.eval_poly(hermite(3), 0.5)) == 0
    assert op.eval_poly(hermite(3), np.zeros((2, 3))).shape == (2, 3)
    assert op.eval_poly(laguerre(-1, 1), np.zeros(4)).shape == (4,)
