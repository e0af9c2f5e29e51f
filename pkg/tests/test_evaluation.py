import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from innerfn import zoo
from innerfn.evaluation import (
    InnerFunction, MultipleZeroError, QuadratureError, SingularMeasure, ZeroSet,
    ZeroValueError, blaschke_factor, eval_blaschke, eval_inner, eval_singular, jensen_mean,
    poisson, zero_derivative_product,
)
from innerfn.hyperbolic import DomainError, pseudo_dist


def random_zeros(rng, n, rmax=0.95):
    r = np.sqrt(rng.uniform(0, rmax ** 2, n))
    return r * np.exp(1j * rng.uniform(-np.pi, np.pi, n))


def random_disc(rng, rmax=0.95):
    return complex(random_zeros(rng, 1, rmax)[0])


def test_zeroset_validation():
    with pytest.raises(DomainError):
        ZeroSet.from_points([1.0])
    with pytest.raises(DomainError):
        ZeroSet.from_points([0.5], mult=[0])
    with pytest.raises(DomainError):
        ZeroSet.from_points([-1j], model="half-plane")
    with pytest.raises(DomainError):
        SingularMeasure.from_angles([0.0], [-1.0])
    with pytest.raises(DomainError):
        SingularMeasure.from_angles([0.0, 0.0], [1.0, 1.0])
    zs = ZeroSet.from_points([0.5, 0.25j], mult=[2, 1])
    assert zs.total_multiplicity == 3
    assert zs.blaschke_sum == pytest.approx(1.75)


def test_blaschke_factor():
    assert blaschke_factor(0.5, 0) == pytest.approx(0.5)
    assert blaschke_factor(0.5, 0.5) == 0
    assert blaschke_factor(0, 0.3j) == 0.3j
    rng = np.random.default_rng(1)
    for _ in range(200):
        a, z = random_disc(rng), random_disc(rng)
        assert abs(abs(blaschke_factor(a, z)) - pseudo_dist(z, a)) < 1e-14


def test_eval_blaschke_examples():
    cross = zoo.gen_finite_cross(0.1)
    assert abs(eval_blaschke(cross, 0).value - 1e-4) < 1e-16
    for z in (0.3, 0.2 + 0.5j, -0.7j):
        closed = (z ** 4 + 1e-4) / (1 + 1e-4 * z ** 4)
        assert abs(eval_blaschke(cross, z).value - closed) < 1e-12
    one = eval_blaschke(ZeroSet.empty(), 0.4)
    assert one.value == 1 and one.modulus_lower == 1 and one.modulus_upper == 1


def test_eval_at_zero():
    zs = ZeroSet.from_points([0.5])
    r = eval_blaschke(zs, 0.5)
    assert r.value == 0 and "at_zero" in r.flags
    with pytest.raises(ZeroValueError):
        eval_blaschke(zs, 0.5, require_nonzero=True)


def test_halfplane_points_are_read_through_cayley():
    zs = ZeroSet.from_points([1j], model="half-plane")
    assert abs(eval_blaschke(zs, 0).value) < 1e-15


def test_singular_examples():
    mu = SingularMeasure.from_angles([0.0], [1.0])
    assert eval_singular(mu, 0) == pytest.approx(math.exp(-1))
    assert eval_singular(mu, 0.5) == pytest.approx(math.exp(-3))
    assert poisson(mu, 0.9) == pytest.approx(19.0)
    mu2 = SingularMeasure.from_angles([0.3, 2.0, -1.0], [0.5, 0.2, 1.3])
    assert poisson(mu2, 0) == pytest.approx(2.0)
    assert abs(eval_singular(mu2, 0)) == pytest.approx(math.exp(-2.0))
    rng = np.random.default_rng(2)
    for _ in range(100):
        z = random_disc(rng, 0.99)
        assert abs(-math.log(abs(eval_singular(mu2, z))) - poisson(mu2, z)) < 1e-12


def test_eval_inner_parts():
    zs = ZeroSet.from_points([0.3, -0.5j])
    mu = SingularMeasure.from_angles([1.0], [0.7])
    z = 0.2 + 0.1j
    assert eval_inner(InnerFunction(zs), z).value == eval_blaschke(zs, z).value
    s = eval_inner(InnerFunction(singular=mu), z)
    assert s.value == pytest.approx(eval_singular(mu, z))
    assert s.modulus_lower == pytest.approx(abs(s.value), rel=1e-12)
    assert s.modulus_upper == pytest.approx(abs(s.value), rel=1e-12)
    both = eval_inner(InnerFunction(zs, mu), z)
    assert both.value == pytest.approx(eval_blaschke(zs, z).value * eval_singular(mu, z))


def test_modulus_below_one():
    rng = np.random.default_rng(3)
    f = InnerFunction(ZeroSet.from_points(random_zeros(rng, 7)),
                      SingularMeasure.from_angles([0.4], [0.3]))
    for _ in range(1000):
        assert abs(eval_inner(f, random_disc(rng, 0.999)).value) < 1


def test_derivative_product_examples():
    assert zero_derivative_product(ZeroSet.from_points([0.3]), 0) == 1.0
    assert zero_derivative_product(ZeroSet.from_points([0, 0.5]), 0) == pytest.approx(0.5)
    with pytest.raises(MultipleZeroError):
        zero_derivative_product(zoo.gen_stolz_mult(3), 2)


def test_derivative_product_matches_finite_differences():
    zs = zoo.gen_exponential(0.5, 20)
    for k in range(4, 16):
        a = float(zs.points[k].real)
        h = 1e-4 * (1 - a)
        deriv = (eval_blaschke(zs, a + h).value - eval_blaschke(zs, a - h).value) / (2 * h)
        fd = (1 - a * a) * abs(deriv)
        assert abs(fd - zero_derivative_product(zs, k)) < 1e-6


def test_jensen_examples():
    zs = ZeroSet.from_points([0])
    lhs, rhs = jensen_mean(zs, 0.5, 0.3, 4096)
    assert lhs == pytest.approx(math.log(2), abs=1e-12)
    assert rhs == pytest.approx(math.log(2), abs=1e-12)
    lhs, rhs = jensen_mean(zs, 0.5, 0.6, 4096)
    assert rhs == pytest.approx(math.log(2) - math.log(0.6 / 0.5), abs=1e-12)
    assert lhs == pytest.approx(rhs, abs=1e-10)
    assert jensen_mean(ZeroSet.empty(), 0.1, 0.5, 16) == (0.0, 0.0)
    with pytest.raises(QuadratureError):
        jensen_mean(zs, 0.5, 0.5, 64)
    with pytest.raises(ZeroValueError):
        jensen_mean(zs, 0.0, 0.5, 64)


def test_certified_bounds_with_tail():
    rng = np.random.default_rng(4)
    for _ in range(500):
        head = random_zeros(rng, rng.integers(1, 6), 0.8)
        tail_r = rng.uniform(0.97, 0.999, rng.integers(1, 8))
        tail = tail_r * np.exp(1j * rng.uniform(-np.pi, np.pi, tail_r.size))
        full = ZeroSet.from_points(np.concatenate([head, tail]))
        part = ZeroSet.from_points(head, tail_blaschke_sum_bound=float(np.sum(1 - tail_r)),
                                   tail_min_modulus=float(tail_r.min()))
        z = random_disc(rng, 0.9)
        true = abs(eval_blaschke(full, z).value)
        r = eval_blaschke(part, z)
        assert r.modulus_lower <= true * (1 + 1e-12)
        assert true <= r.modulus_upper * (1 + 1e-12)


def test_tail_without_modulus_is_uncertified():
    zs = ZeroSet.from_points([0.2], tail_blaschke_sum_bound=0.01)
    r = eval_blaschke(zs, 0.5)
    assert r.modulus_lower == 0.0 and "tail_uncertified" in r.flags


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10_000))
def test_schwarz_pick(seed):
    rng = np.random.default_rng(seed)
    zs = ZeroSet.from_points(random_zeros(rng, rng.integers(1, 8)))
    z, w = random_disc(rng), random_disc(rng)
    bz, bw = eval_blaschke(zs, z).value, eval_blaschke(zs, w).value
    assert pseudo_dist(bz, bw) <= pseudo_dist(z, w) + 1e-12


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10_000))
def test_log_accumulation(seed):
    rng = np.random.default_rng(seed)
    pts = random_zeros(rng, rng.integers(1, 30))
    zs = ZeroSet.from_points(pts)
    z = random_disc(rng)
    direct = sum(math.log(pseudo_dist(z, a)) for a in pts)
    assert abs(math.log(abs(eval_blaschke(zs, z).value)) - direct) < 1e-10
