import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from innerfn.hyperbolic import (
    Arc, CarlesonBox, DiscPoint, DomainError, DyadicArc, HalfPlanePoint, box_contains,
    carleson_square_contains, cayley, cayley_inverse, dyadic_geometry, hyp_dist, mobius,
    one_minus_rho_sq, pseudo_dist, pseudo_dist_halfplane, reduce_angle, top_center,
)


def disc_points(max_r=0.99):
    return st.builds(lambda r, t: r * complex(math.cos(t), math.sin(t)),
                     st.floats(0.0, max_r), st.floats(-math.pi, math.pi))


# disc images stay at depth >= ~4e-3 here; closer to the circle the rounding of
# the Cayley image itself exceeds 1e-12 relative to 1 - |z|^2
upper_points = st.builds(complex, st.floats(-10, 10), st.floats(0.1, 10))


def test_points_validate():
    with pytest.raises(DomainError):
        DiscPoint(1.0, 0.0)
    with pytest.raises(DomainError):
        DiscPoint(float("nan"), 0.0)
    with pytest.raises(DomainError):
        HalfPlanePoint(0.0, 0.0)
    assert DiscPoint.from_complex(0.5j).z == 0.5j


def test_pseudo_dist_examples():
    assert pseudo_dist(0, 0.3 + 0.4j) == pytest.approx(0.5)
    assert pseudo_dist(0.5, 0.5) == 0.0
    z, w = cayley(1j), cayley(2j)
    assert pseudo_dist(z, w) == pytest.approx(1 / 3, abs=1e-15)
    assert pseudo_dist_halfplane(1j, 2j) == pytest.approx(1 / 3, abs=1e-15)
    with pytest.raises(DomainError):
        pseudo_dist(1.0, 0)


def test_hyp_dist_examples():
    assert hyp_dist(0, 0) == 0.0
    assert hyp_dist(0, 0.5) == pytest.approx(0.549306144334, abs=1e-12)
    assert hyp_dist(0, math.tanh(1.0)) == pytest.approx(1.0, abs=1e-12)


def test_mobius_examples():
    a = 0.3 - 0.2j
    assert mobius(a, 0).z == pytest.approx(a)
    assert abs(mobius(a, a).z) == 0.0
    assert isinstance(mobius(a, 0.1), DiscPoint)


def test_cayley_examples():
    assert abs(cayley(1j).z) < 1e-16
    back = cayley_inverse(cayley(3 + 2j))
    assert abs(back.z - (3 + 2j)) < 1e-14
    arr = cayley(np.array([1j, 2j]))
    assert isinstance(arr, np.ndarray)


def test_box_examples():
    assert box_contains(CarlesonBox(0.0, 0.1, 1.0), 0.95)
    assert not box_contains(CarlesonBox(0.0, 0.1, 0.1), 0.95)
    with pytest.raises(DomainError):
        CarlesonBox(0.0, 4.0, 1.0)
    with pytest.raises(DomainError):
        CarlesonBox(0.0, 0.1, 1.5)


def test_box_matches_carleson_square_off_the_edges():
    h = 0.2
    arc = Arc(0.3, h)
    r = np.linspace(0.5, 0.999, 97)
    t = 0.3 + np.linspace(-0.5, 0.5, 101)
    rr, tt = np.meshgrid(r, t)
    z = (rr * np.exp(1j * tt)).ravel()
    # Q(theta, h, 1) with |I| = 2h against Q(I): same angular window, depth < h vs <= 2h
    a = box_contains(CarlesonBox(0.3, h, 1.0), z)
    b = carleson_square_contains(arc, z) & (1 - np.abs(z) < h)
    on_edge = np.isclose(np.abs(reduce_angle(np.angle(z) - 0.3)), h)
    assert np.array_equal(a[~on_edge], b[~on_edge])


def test_dyadic_geometry_and_top_center():
    d = DyadicArc(3, 0)
    assert d.start_angle == 0.0
    assert dyadic_geometry(d).length == pytest.approx(2 * math.pi / 8)
    assert top_center(d) == pytest.approx((1 - math.pi / 4) * np.exp(1j * math.pi / 8))
    two = dyadic_geometry(d).doubled()
    assert two.center_angle == dyadic_geometry(d).center_angle
    assert two.length == pytest.approx(2 * dyadic_geometry(d).length)
    for m in (0, 1, 2):
        with pytest.raises(DomainError):
            top_center(DyadicArc(m, 0))
    with pytest.raises(DomainError):
        DyadicArc(2, 4)
    assert DyadicArc(2, 1).contains(DyadicArc(4, 7))
    assert not DyadicArc(2, 1).contains(DyadicArc(4, 8))
    assert DyadicArc(4, 7).parent().parent() == DyadicArc(2, 1)


@settings(max_examples=200, deadline=None)
@given(disc_points(), disc_points(), disc_points())
def test_mobius_invariance(a, z, w):
    lhs = pseudo_dist(mobius(a, z), mobius(a, w))
    assert abs(lhs - pseudo_dist(z, w)) < 1e-12


@settings(max_examples=200, deadline=None)
@given(disc_points(), disc_points())
def test_involution_and_symmetry(a, w):
    assert abs(mobius(a, mobius(a, w)).z - w) < 1e-12
    assert pseudo_dist(a, w) == pytest.approx(pseudo_dist(w, a), abs=1e-15)
    assert 0.0 <= pseudo_dist(a, w) < 1.0


@settings(max_examples=200, deadline=None)
@given(disc_points(0.95), disc_points(0.95), disc_points(0.95))
def test_hyp_triangle(x, y, z):
    assert hyp_dist(x, z) <= hyp_dist(x, y) + hyp_dist(y, z) + 1e-12


@settings(max_examples=200, deadline=None)
@given(upper_points, upper_points)
def test_halfplane_formula_matches_disc(z, w):
    a, b = cayley(z), cayley(w)
    hp = 4 * z.imag * w.imag / ((z.real - w.real) ** 2 + (z.imag + w.imag) ** 2)
    assert abs(hp - one_minus_rho_sq(a, b)) < 1e-12


@settings(max_examples=100, deadline=None)
@given(disc_points(), st.floats(0.01, 3.0), st.floats(0.01, 1.0), st.floats(0.01, 1.0))
def test_box_monotone_in_delta(z, h, d1, d2):
    lo, hi = sorted((d1, d2))
    if box_contains(CarlesonBox(0.2, h, lo), z):
        assert box_contains(CarlesonBox(0.2, h, hi), z)
