import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from innerfn import zoo
from innerfn.diagnostics import cn_constant, separation_profile, thin_profile
from innerfn.entropy import entropy_integral
from innerfn.evaluation import ZeroSet, eval_blaschke
from innerfn.hyperbolic import cayley, cayley_inverse, pseudo_dist
from innerfn.zoo import GeneratorSpec, GeneratorSpecError, generate


def brute_cn(points, mult):
    # max_k sum_j m_j (1 - rho(a_j, a_k)^2), diagonal term m_k
    best = 0.0
    for k, a in enumerate(points):
        s = sum(m * (1 - pseudo_dist(b, a) ** 2) for b, m in zip(points, mult))
        best = max(best, s)
    return best


def test_exponential():
    zs = zoo.gen_exponential(0.5, 3)
    assert np.allclose(zs.points, [0.5, 0.75, 0.875])
    assert len(zoo.gen_exponential(0.5, 0)) == 0
    d = zoo.gen_exponential(0.3, 10).depth
    assert np.allclose(d[1:] / d[:-1], 0.3)
    with pytest.raises(GeneratorSpecError):
        zoo.gen_exponential(1.0, 3)


def test_exponential_cn_against_brute_force():
    zs = zoo.gen_exponential(0.5, 20)
    c = cn_constant(zs)
    assert c == pytest.approx(brute_cn(zs.points, zs.mult), rel=1e-10)
    assert c <= 1 + 2 * 4 * 0.5 / 0.5 ** 2
    assert cn_constant(zoo.gen_exponential(0.5, 40)) / c < 1.05


def test_treil_grid():
    zs = zoo.gen_treil_grid(1, 1)
    assert np.allclose(sorted(zs.hp, key=lambda w: w.real), [-1 + 1j, 1j, 1 + 1j])
    row2 = np.sort(zoo.gen_treil_grid(2, 2).hp[5:].real)
    assert np.allclose(np.diff(row2), 4.0)
    assert np.allclose(zoo.gen_treil_grid(2, 2).hp[5:].imag, 8.0)


def test_treil_row_sums_are_uniformly_bounded():
    # half-plane Blaschke weight y/(1 + |z|^2) summed along row n behaves like pi/n^2
    n_max = 8
    zs = zoo.gen_treil_grid(n_max, 400 * n_max)
    w = zs.hp
    per_row = len(w) // n_max
    for n in range(1, n_max + 1):
        row = w[(n - 1) * per_row:n * per_row]
        s = float(np.sum(row.imag / (1 + np.abs(row) ** 2)))
        assert n * n * s < math.pi + 1


def test_rect_grid():
    zs = zoo.gen_rect_grid([1.0], [2])
    assert np.allclose(zs.hp, [0.5j, 0.5 + 0.5j])
    xs = zoo.rect_grid_offsets([1.0, 0.5, 0.25])
    assert np.allclose(np.diff(xs), [2.0, 1.0])
    with pytest.raises(GeneratorSpecError):
        zoo.gen_rect_grid([1.0, 1.0], [2, 2])
    with pytest.raises(GeneratorSpecError):
        zoo.gen_rect_grid([1.0], [2, 3])


def test_rect_grid_center_top_probes():
    L = [4.0 ** -n for n in range(1, 7)]
    N = [2 ** n for n in range(1, 7)]
    zs = zoo.gen_rect_grid(L, N)
    xs = zs.metadata["row_offsets"]
    vals = [abs(eval_blaschke(zs, cayley(x + 1j * ln)).value) for x, ln in zip(xs, L)]
    assert max(vals) < 0.9


def test_intnotsipable_partial_sums_increase():
    L, N = zoo.intnotsipable_parameters(12)
    s = np.cumsum([ln * math.log(nn) for ln, nn in zip(L, N)])
    assert np.all(np.diff(s) > 0)
    assert max(N) == zoo.MAX_ROW_COUNT


def test_stolz_mult():
    zs = zoo.gen_stolz_mult(2)
    assert np.allclose(zs.points, [0.5, 0.75]) and list(zs.mult) == [1, 2]
    z = zoo.gen_stolz_mult(10).points
    assert np.all(np.abs(z - 1) <= 1 - np.abs(z) + 1e-15)
    c = [cn_constant(zoo.gen_stolz_mult(n)) for n in (4, 8, 16)]
    assert c[0] < c[1] < c[2]
    small = zoo.gen_stolz_mult(5)
    assert cn_constant(small) == pytest.approx(brute_cn(small.points, small.mult), rel=1e-10)


def test_finite_cross():
    zs = zoo.gen_finite_cross(0.1)
    assert np.allclose(np.abs(zs.points), 0.1)
    ang = np.sort(np.mod(np.angle(zs.points), 2 * math.pi))
    assert np.allclose(ang, math.pi * np.array([1, 3, 5, 7]) / 4)
    assert abs(abs(eval_blaschke(zs, 0).value) - 1e-4) < 1e-16


def test_thin():
    zs = zoo.gen_thin(3)
    assert np.allclose(zs.points, [1 - 2 ** -1, 1 - 2 ** -4, 1 - 2 ** -9])
    prof = thin_profile(zoo.gen_thin(12))
    tails = [t for _, _, t in prof]
    assert max(tails[6:]) < min(tails[:6])
    sep = [s for _, s in separation_profile(zoo.gen_thin(8))]
    assert all(a <= b for a, b in zip(sep, sep[1:]))
    spread = zoo.gen_thin(5, angles="spread", seed=3)
    assert np.array_equal(spread.angle, zoo.gen_thin(5, angles="spread", seed=3).angle)


def test_halfplane_outputs_roundtrip():
    for zs in (zoo.gen_treil_grid(3, 4), zoo.gen_rect_grid([1.0, 0.25], [2, 4])):
        back = cayley_inverse(cayley(zs.hp))
        assert np.max(np.abs(back - zs.hp) / np.abs(zs.hp)) < 1e-12


def test_transform_identities():
    zs = zoo.gen_exponential(0.5, 8)
    assert zoo.transform_zeros(zs, "remove_in_discs", centers=[0.5], R=0) is zs
    assert zoo.transform_zeros(zs, "perturb", max_rho=0.0, seed=1) is zs


def test_remove_in_discs():
    zs = zoo.gen_treil_grid(4, 6)
    out = zoo.remove_in_discs(zs, [8j], 1.0)
    kept = set(map(complex, out.hp))
    assert kept <= set(map(complex, zs.hp))
    for w in set(map(complex, zs.hp)) - kept:
        assert math.atanh(pseudo_dist(cayley(w), cayley(8j))) < 1.0


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2 ** 31), st.floats(0.01, 0.9))
def test_perturb_stays_in_disc(seed, rho):
    for zs in (zoo.gen_exponential(0.5, 10), zoo.gen_treil_grid(2, 3)):
        out = zoo.perturb(zs, rho, seed)
        old = zs.points if zs.model == "disc" else cayley(zs.hp)
        new = out.points if out.model == "disc" else cayley(out.hp)
        for a, b in zip(old, new):
            assert pseudo_dist(a, b) <= rho + 1e-9
        again = zoo.perturb(zs, rho, seed)
        assert np.array_equal(again.angle, out.angle)


def test_cantor_like():
    E0 = zoo.gen_cantor_like(0)
    assert len(E0.arcs) == 1
    E2 = zoo.gen_cantor_like(2)
    assert len(E2.arcs) == 4
    assert all(ln == Fraction(1, 4) / 9 for _, ln in E2.arcs)
    fat = zoo.gen_cantor_like(3, [Fraction(1, 3), Fraction(2, 5), Fraction(9, 20)])
    assert len(fat.arcs) == 8
    with pytest.raises(GeneratorSpecError):
        zoo.gen_cantor_like(2, Fraction(1, 2))


def test_cantor_entropy_is_finite_and_converging():
    # the increments keep shrinking in depth, though far slower than 1e-3 per two levels
    vals = [entropy_integral(zoo.gen_cantor_like(d)) for d in range(4, 11)]
    assert all(math.isfinite(v) for v in vals)
    steps = np.diff(vals)
    assert np.all(steps > 0) and np.all(np.diff(steps) < 0)


def test_generator_spec():
    spec = GeneratorSpec.from_dict({"kind": "exponential", "parameters": {"q": 0.5, "n": 3}})
    assert np.allclose(generate(spec).points, [0.5, 0.75, 0.875])
    assert generate(spec).metadata["truncation"] == {"n": 3}
    cases = [
        ({"kind": "nope"}, "kind"),
        ({"kind": "exponential", "parameters": {"n": 3}}, "parameters.q"),
        ({"kind": "exponential", "parameters": {"q": 0.5, "n": 3, "x": 1}}, "parameters.x"),
        ({"kind": "exponential", "parameters": {"q": 0.5, "n": "3"}}, "parameters.n"),
        ({"kind": "finite_cross", "parameters": {"r": 1.5}}, "parameters.r"),
        ({"kind": "thin", "parameters": {"n": 3}, "seed": -1}, "seed"),
        ({"kind": "cantor_like", "parameters": {"depth": 2, "ratio": "x"}}, "parameters.ratio"),
    ]
    for d, fieldname in cases:
        with pytest.raises(GeneratorSpecError) as e:
            generate(GeneratorSpec.from_dict(d))
        assert e.value.field == fieldname
    assert isinstance(generate(GeneratorSpec("stolz_mult", {"n": 2})), ZeroSet)
