import math
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from innerfn import zoo
from innerfn.entropy import (
    BoundarySet, build_sipification, b2_tail, claim_ratios, double_meets, entropy_integral,
    f_sum, family_F, family_L, family_L_count, g_entropy_sum, g_entropy_sum_log2, l_sum,
    whitney_families, whitney_G,
)
from innerfn.evaluation import SingularMeasure
from innerfn.hyperbolic import DomainError, DyadicArc

TWO_PI = 2 * math.pi
point = BoundarySet.points([0])


def quadrature_entropy(E, nodes=10 ** 6):
    # each half-gap is integrated with x = h s^4, which smooths the log singularity at
    # the endpoint; the distance itself comes from a brute-force scan over arc endpoints
    ends = np.array([[float(s), float(s + ln)] for s, ln in E.arcs]).ravel() * TWO_PI
    gaps = [(float(s + ln) * TWO_PI, float((s + ln + g) % 1) * TWO_PI, float(g) * TWO_PI)
            for (s, ln), g in zip(E.arcs, E.gaps_turns())]
    per = nodes // (2 * len(gaps))
    u = (np.arange(per) + 0.5) / per
    total = 0.0
    for start, end, g in gaps:
        h = g / 2
        x = h * u ** 4
        jac = 4 * h * u ** 3 / per
        # offsets are measured from the nearer gap end so that tiny x survives rounding
        for anchor, sign in ((start, 1.0), (end, -1.0)):
            diff = np.abs((anchor - ends)[None, :] + sign * x[:, None]) % TWO_PI
            dist = np.minimum(diff, TWO_PI - diff).min(axis=1)
            total += float(np.sum(-np.log(dist) * jac))
    return total


def test_boundary_set_validation():
    with pytest.raises(DomainError):
        BoundarySet(())
    with pytest.raises(DomainError):
        BoundarySet.from_intervals([(0, Fraction(1, 2)), (Fraction(1, 4), Fraction(3, 4))])
    E = BoundarySet.from_intervals([(Fraction(7, 8), Fraction(1, 8))])
    assert E.measure_turns == Fraction(1, 4)
    assert E.contains_point(Fraction(0)) and not E.contains_point(Fraction(1, 2))
    assert BoundarySet.from_intervals([["1/3", "1/2"]]).to_dict() == {"arcs": [["1/3", "1/2"]]}


def test_entropy_examples():
    assert entropy_integral(point) == pytest.approx(TWO_PI * (1 + math.log(2) - math.log(TWO_PI)))
    assert entropy_integral(point) == pytest.approx(-0.9093, abs=1e-4)
    two = BoundarySet.points([0, Fraction(1, 2)])
    assert entropy_integral(two) == pytest.approx(TWO_PI * (1 + math.log(2) - math.log(math.pi)))
    assert entropy_integral(two) == pytest.approx(3.445807488328475, abs=1e-12)
    with pytest.raises(DomainError):
        entropy_integral([])


def test_entropy_against_quadrature():
    rng = np.random.default_rng(11)
    for _ in range(3):
        cuts = np.sort(rng.choice(np.arange(1, 1000), 10, replace=False))
        pairs = [(Fraction(int(a), 1000), Fraction(int(b), 1000)) for a, b in cuts.reshape(5, 2)]
        E = BoundarySet.from_intervals(pairs)
        assert abs(entropy_integral(E) - quadrature_entropy(E)) < 1e-6


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(0, 10 ** 6 - 1), min_size=1, max_size=8, unique=True),
       st.integers(1, 10 ** 6 - 1))
def test_splitting_a_gap_increases_entropy(pts, extra):
    pts = [Fraction(p, 10 ** 6) for p in pts]
    x = Fraction(extra, 10 ** 6)
    if x in pts:
        return
    assert entropy_integral(BoundarySet.points(pts + [x])) > entropy_integral(BoundarySet.points(pts))


def test_whitney_point_set():
    fam = whitney_families(point, 6)
    g = Counter(d.level for d in fam.G)
    f = Counter(d.level for d in fam.F)
    assert max(g.values()) <= 4 and max(f.values()) <= 5
    for J in fam.G:
        lo, hi = J.index / 2 ** J.level, (J.index + 1) / 2 ** J.level
        dist = min(lo, 1 - hi)
        assert 2 ** -J.level / 2 <= dist <= 3 * 2 ** -J.level
    covered = sum(2.0 ** -d.level for d in fam.G)
    assert covered + sum(2.0 ** -d.level for d in fam.residual) == pytest.approx(1.0)
    assert covered >= 1 - 4 * 2.0 ** -6


def test_f_sum_bounded_for_a_point():
    s = [f_sum(family_F(point, L)) for L in (6, 10, 14)]
    assert all(v <= 2.5 for v in s)
    assert s[2] - s[1] < s[1] - s[0] < 2.0 ** -4


def check_family_invariants(E, fam):
    G = sorted(fam.G, key=lambda d: (d.index / 2 ** d.level))
    for a, b in zip(G, G[1:]):
        assert (a.index + 1) / 2 ** a.level <= b.index / 2 ** b.level
    for J in fam.G:
        assert not double_meets(E, J)
        if J.level > fam.min_level:
            assert double_meets(E, J.parent())
    fset = set(fam.F)
    for I in fam.F:
        assert double_meets(E, I)
        assert not any(J.contains(I) for J in fam.G)
        if I.level > fam.min_level:
            assert I.parent() in fset


def test_whitney_invariants():
    for E in (point, zoo.gen_cantor_like(3), BoundarySet.points([Fraction(1, 3), Fraction(5, 7)])):
        check_family_invariants(E, whitney_families(E, 9))


def test_family_L():
    J = DyadicArc(3, 5)
    L = family_L([J])
    assert len(L) == 15 == family_L_count([J])
    for a in L:
        assert J.contains(a) and J.level <= a.level <= 2 * J.level
    assert sum(2.0 ** -a.level for a in L) == pytest.approx(4 * 2.0 ** -3)
    assert l_sum([J]) == pytest.approx(4 * 2.0 ** -3)
    G, _ = whitney_G(zoo.gen_cantor_like(4), 10)
    assert 1.0 <= l_sum(G) / g_entropy_sum_log2(G) <= 2.0
    assert g_entropy_sum(G) == pytest.approx(math.log(2) * g_entropy_sum_log2(G))


def test_cantor_whitney_sums_increase_toward_a_limit():
    E = zoo.gen_cantor_like(8)
    s = [g_entropy_sum(whitney_G(E, L)[0]) for L in (8, 10, 12)]
    assert s[0] < s[1] < s[2]
    assert s[2] - s[1] < s[1] - s[0]


def test_fat_cantor_entropy_diverges():
    # removing the fraction 1/(k+2)^2 at stage k leaves positive measure; the entropy
    # increments then decay like 1/depth while the middle-third ones decay geometrically
    def fat(d):
        return [(1 - Fraction(1, (k + 2) ** 2)) / 2 for k in range(d)]

    thin_vals = [entropy_integral(zoo.gen_cantor_like(d)) for d in range(6, 12)]
    fat_vals = [entropy_integral(zoo.gen_cantor_like(d, fat(d))) for d in range(6, 12)]
    thin_steps, fat_steps = np.diff(thin_vals), np.diff(fat_vals)
    assert np.all(thin_steps[1:] / thin_steps[:-1] < 0.8)
    assert np.all(fat_steps[1:] / fat_steps[:-1] > 0.85)
    depth = np.arange(7, 12)
    assert np.all(fat_steps * depth > 0.8)
    assert zoo.gen_cantor_like(10, fat(10)).positive_measure
    assert not zoo.gen_cantor_like(0).measure_turns == 0


def test_b2_sums_grow_and_flag_positive_measure():
    fat = [(1 - Fraction(1, (k + 2) ** 2)) / 2 for k in range(6)]
    mu = SingularMeasure.from_angles([0.0], [1.0])
    sums = []
    for d in (3, 4, 5, 6):
        E = zoo.gen_cantor_like(d, fat[:d])
        s = build_sipification(mu, E, 2 * d + 4)
        assert s.metadata["positive_measure"]
        assert math.isfinite(s.B2.blaschke_sum)
        sums.append(s.B2.blaschke_sum)
    assert all(a < b for a, b in zip(sums, sums[1:]))


def test_build_sipification_counts():
    mu = SingularMeasure.from_angles([0.0], [1.0])
    s = build_sipification(mu, point, 8)
    assert len(s.B1) == len(s.families.F)
    assert len(s.B2) == family_L_count(s.families.G) == s.metadata["L_count"]
    with pytest.raises(DomainError):
        build_sipification(SingularMeasure.from_angles([1.0], [1.0]), point, 8)
    with pytest.raises(DomainError):
        build_sipification(mu, point, 8, min_level=2)


def test_claim_ratios_bounded_and_b2_tail_decreasing():
    mu = SingularMeasure.from_angles([0.0], [1.0])
    c = [claim_ratios(build_sipification(mu, point, L))["fitted_C"] for L in (6, 8, 10, 12)]
    assert max(c) < 1.1 * min(c)
    tail = b2_tail(build_sipification(mu, point, 10))
    assert tail[0.1] > tail[0.01] > tail[0.001] > 0
