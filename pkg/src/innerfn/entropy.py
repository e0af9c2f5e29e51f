"""Entropy of boundary sets, dyadic Whitney families and SIP-ification.

Boundary sets are finite unions of closed arcs stored exactly, in turns
(fractions of the full circle), as :class:`fractions.Fraction`.  Dyadic arc
tests are therefore exact rational comparisons; floats are converted with
``Fraction(float)``, which is exact as well.

Whitney sums are measured in turns (``|J| = 2^-m``), so the dyadic
condition ``|L| >= |J|^2`` reads ``level(L) <= 2 level(J)``.  Heights of the
zeros ``z_I`` and of the probe points use arclength, matching
:func:`innerfn.hyperbolic.top_center`.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from innerfn import kernels
from innerfn.evaluation import SingularMeasure, ZeroSet
from innerfn.hyperbolic import TWO_PI, Arc, DomainError, DyadicArc

LN2 = math.log(2.0)


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, float) and not math.isfinite(x):
        raise DomainError(f"non-finite angle {x!r}")
    return Fraction(x)


@dataclass(frozen=True)
class BoundarySet:
    """Pairwise disjoint closed arcs ``[start, start + length]`` in turns, sorted by start.

    Zero-length arcs are points.
    """

    arcs: tuple  # of (start, length) Fractions, 0 <= start < 1, 0 <= length < 1

    def __post_init__(self):
        if not self.arcs:
            raise DomainError("a boundary set needs at least one arc or point")
        arcs = []
        for s, ln in self.arcs:
            s, ln = _frac(s), _frac(ln)
            if not (0 <= ln < 1):
                raise DomainError(f"arc length {ln} turns not in [0, 1)")
            arcs.append((s - math.floor(s), ln))
        arcs.sort()
        for i, (s, ln) in enumerate(arcs):
            ns, _ = arcs[(i + 1) % len(arcs)]
            if i + 1 == len(arcs):
                ns += 1
            if len(arcs) > 1 and not s + ln < ns:
                raise DomainError("arcs must be pairwise disjoint")
        if len(arcs) == 1 and arcs[0][1] >= 1:
            raise DomainError("the full circle is not a proper boundary set")
        object.__setattr__(self, "arcs", tuple(arcs))
        ends, starts = [], []
        for shift in (-1, 0, 1):
            for s, ln in arcs:
                starts.append(s + shift)
                ends.append(s + ln + shift)
        object.__setattr__(self, "_starts", starts)
        object.__setattr__(self, "_ends", ends)

    @classmethod
    def from_intervals(cls, intervals) -> "BoundarySet":
        """From ``[start, end]`` pairs in turns; ``end < start`` wraps through 0."""
        arcs = []
        for a, b in intervals:
            a, b = _frac(a), _frac(b)
            ln = b - a
            if ln < 0:
                ln += 1
            arcs.append((a, ln))
        return cls(tuple(arcs))

    @classmethod
    def points(cls, turns) -> "BoundarySet":
        return cls(tuple((_frac(t), Fraction(0)) for t in turns))

    @property
    def measure_turns(self) -> Fraction:
        return sum((ln for _, ln in self.arcs), Fraction(0))

    @property
    def positive_measure(self) -> bool:
        return self.measure_turns > 0

    def gaps_turns(self) -> list:
        """Lengths of the complementary open arcs, in turns."""
        out = []
        n = len(self.arcs)
        for i, (s, ln) in enumerate(self.arcs):
            ns = self.arcs[(i + 1) % n][0] + (1 if i + 1 == n else 0)
            out.append(ns - (s + ln))
        return out

    def to_arcs(self) -> list:
        """As :class:`Arc` values (radians); points are omitted."""
        return [Arc(TWO_PI * float(s + ln / 2), math.pi * float(ln))
                for s, ln in self.arcs if ln > 0]

    def intersects(self, p: Fraction, q: Fraction) -> bool:
        """Does the half-open interval ``[p, q)`` (turns, ``-1 <= p``, ``q <= 2``) meet the set?"""
        if q - p >= 1:
            return True
        i = bisect_left(self._ends, p)
        return i < len(self._ends) and self._starts[i] < q

    def covers(self, p: Fraction, q: Fraction) -> bool:
        """Is the closed interval ``[p, q]`` inside one arc of the set?"""
        i = bisect_left(self._ends, q)
        return i < len(self._ends) and self._starts[i] <= p

    def contains_point(self, t: Fraction) -> bool:
        t = t - math.floor(t)
        return self.covers(t, t)

    def to_dict(self):
        return {"arcs": [[str(s), str(s + ln)] for s, ln in self.arcs]}


def entropy_integral(E: BoundarySet) -> float:
    """``integral of log(1/dist(zeta, E)) |dzeta|`` over the complement of ``E``.

    Arclength distance.  A gap of length ``l`` contributes
    ``l (1 + log 2 - log l)``.  For sets of positive measure the integral over
    ``E`` itself diverges; the value returned is then the complement part
    only (check ``E.positive_measure``).
    """
    if not isinstance(E, BoundarySet):
        raise DomainError("entropy_integral needs a nonempty BoundarySet")
    total = 0.0
    for g in E.gaps_turns():
        ell = TWO_PI * float(g)
        if ell > 0:
            total += ell * (1.0 + LN2 - math.log(ell))
    return total


# dyadic families -------------------------------------------------------------

def double_meets(E: BoundarySet, d: DyadicArc) -> bool:
    """Does ``2J`` (same center, twice the length, half-open) meet ``E``?"""
    m, k = d.level, d.index
    p = Fraction(2 * k - 1, 1 << (m + 1))
    q = Fraction(2 * k + 3, 1 << (m + 1))
    return E.intersects(p, q)


def inside(E: BoundarySet, d: DyadicArc) -> bool:
    return E.covers(Fraction(d.index, 1 << d.level), Fraction(d.index + 1, 1 << d.level))


@dataclass
class WhitneyFamilies:
    G: list
    F: list
    residual: list
    min_level: int
    max_level: int

    @property
    def L(self) -> list:
        return family_L(self.G)

    def to_dict(self):
        enc = lambda arcs: [[a.level, a.index] for a in arcs]
        return {"G": enc(self.G), "F": enc(self.F), "residual": enc(self.residual),
                "L_count": family_L_count(self.G), "min_level": self.min_level,
                "depth": self.max_level}


def whitney_families(E: BoundarySet, max_level: int, min_level: int = 2) -> WhitneyFamilies:
    """Top-down dyadic scan between ``min_level`` and ``max_level``.

    An arc joins ``G`` when its double misses ``E`` (no ancestor qualified,
    since qualifying arcs are not subdivided); otherwise it joins ``F`` and
    its children are examined.  ``F`` arcs at ``max_level`` not contained in
    ``E`` are undecided and listed as ``residual``.
    """
    if min_level < 2:
        raise DomainError("dyadic scans start at level 2 or deeper")
    if max_level < min_level:
        raise DomainError(f"max_level {max_level} < min_level {min_level}")
    G, F, residual = [], [], []
    frontier = [DyadicArc(min_level, k) for k in range(1 << min_level)]
    for level in range(min_level, max_level + 1):
        nxt = []
        for d in frontier:
            if double_meets(E, d):
                F.append(d)
                if level < max_level:
                    nxt.extend(d.children())
                elif not inside(E, d):
                    residual.append(d)
            else:
                G.append(d)
        frontier = nxt
    return WhitneyFamilies(G, F, residual, min_level, max_level)


def whitney_G(E: BoundarySet, max_level: int, min_level: int = 2):
    """Maximal dyadic arcs with ``2J`` disjoint from ``E``, plus the undecided residual."""
    fam = whitney_families(E, max_level, min_level)
    return fam.G, fam.residual


def family_F(E: BoundarySet, max_level: int, min_level: int = 2) -> list:
    """Dyadic arcs (levels ``min_level..max_level``) whose double meets ``E``."""
    return whitney_families(E, max_level, min_level).F


def family_L(G) -> list:
    """Dyadic sub-arcs ``L`` of each ``J`` in ``G`` with ``|L| >= |J|^2`` (levels ``m..2m``)."""
    out = []
    for J in G:
        for lev in range(J.level, 2 * J.level + 1):
            shift = lev - J.level
            base = J.index << shift
            out.extend(DyadicArc(lev, base + i) for i in range(1 << shift))
    return out


def family_L_count(G) -> int:
    return sum((1 << (J.level + 1)) - 1 for J in G)


def _turns(arcs):
    return np.array([2.0 ** -a.level for a in arcs])


def g_entropy_sum(G) -> float:
    """``sum_{J in G} |J| log(1/|J|)`` with ``|J|`` in turns."""
    return float(sum(2.0 ** -J.level * J.level * LN2 for J in G))


def g_entropy_sum_log2(G) -> float:
    return float(sum(2.0 ** -J.level * J.level for J in G))


def f_sum(F) -> float:
    return float(_turns(F).sum()) if F else 0.0


def l_sum(G) -> float:
    """``sum_{L} |L|`` in turns; each of the ``m + 1`` levels under ``J`` tiles ``J``."""
    return float(sum((J.level + 1) * 2.0 ** -J.level for J in G))


# SIP-ification ---------------------------------------------------------------

def _box_zeros(arcs, model_meta) -> ZeroSet:
    if not arcs:
        return ZeroSet.empty().with_metadata(**model_meta)
    lev = np.array([a.level for a in arcs], dtype=float)
    idx = np.array([a.index for a in arcs], dtype=float)
    angle = TWO_PI * (idx + 0.5) * np.exp2(-lev)
    depth = TWO_PI * np.exp2(-lev)
    if np.any(depth >= 1.0):
        raise DomainError("top-center points need dyadic level >= 3")
    return ZeroSet.from_polar(angle, depth, metadata=model_meta)


def _l_zero_arrays(G):
    angles, depths = [], []
    for J in G:
        for lev in range(J.level, 2 * J.level + 1):
            shift = lev - J.level
            idx = (J.index << shift) + np.arange(1 << shift, dtype=float)
            angles.append(TWO_PI * (idx + 0.5) * 2.0 ** -lev)
            depths.append(np.full(idx.shape[0], TWO_PI * 2.0 ** -lev))
    if not angles:
        return np.zeros(0), np.zeros(0)
    return np.concatenate(angles), np.concatenate(depths)


@dataclass
class Sipification:
    """Zero sets ``B1`` (over ``F``) and ``B2`` (over ``L``) for ``f = B1 S_mu``."""

    mu: SingularMeasure
    E: BoundarySet
    families: WhitneyFamilies
    B1: ZeroSet
    B2: ZeroSet
    metadata: dict = field(default_factory=dict)


def build_sipification(mu: SingularMeasure, E: BoundarySet, max_level: int,
                       min_level: int = 3) -> Sipification:
    """Blaschke products that turn ``S_mu`` into a divisor of a candidate SIP function.

    ``B1`` has zeros ``z_I`` for ``I`` in ``F``; ``B2`` has zeros ``z_L`` for the
    ``L`` family below each Whitney arc.  Levels below 3 carry no top-center
    point, so the scan starts at ``min_level >= 3``.
    """
    if min_level < 3:
        raise DomainError("top-center zeros need min_level >= 3")
    for t in mu.turns:
        if not E.contains_point(t):
            raise DomainError(f"atom at {t} turns lies outside the boundary set")
    fam = whitney_families(E, max_level, min_level)
    meta = {"min_level": min_level, "max_level": max_level,
            "G_count": len(fam.G), "F_count": len(fam.F),
            "L_count": family_L_count(fam.G), "residual_count": len(fam.residual),
            "positive_measure": E.positive_measure}
    B1 = _box_zeros(fam.F, {"construction": "B1", **meta})
    la, ld = _l_zero_arrays(fam.G)
    B2 = ZeroSet.from_polar(la, ld, metadata={"construction": "B2", **meta})
    meta["B1_blaschke_sum"] = B1.blaschke_sum
    meta["B2_blaschke_sum"] = B2.blaschke_sum
    return Sipification(mu, E, fam, B1, B2, meta)


def _probe_polar(G, heights):
    lev = np.array([J.level for J in G], dtype=float)
    idx = np.array([J.index for J in G], dtype=float)
    ang = TWO_PI * (idx + 0.5) * np.exp2(-lev)
    return np.cos(ang), np.sin(ang), np.asarray(heights, dtype=float)


def claim_ratios(s: Sipification) -> dict:
    """``log(1/|B1 S_mu(z)|) / ((1 - |z|)/|J|^2)`` at ``z = (1 - |J|^2/2) e^{i theta_J}``, ``J`` in ``G``.

    ``|J|`` is arclength.  The fitted constant is the maximum ratio.
    """
    G = s.families.G
    if not G:
        return {"ratios": [], "fitted_C": 0.0}
    J2 = (TWO_PI * np.exp2(-np.array([J.level for J in G], dtype=float))) ** 2
    heights = 0.5 * J2
    probes = _probe_polar(G, heights)
    nb, _, _ = kernels.point_sums(probes, s.B1.polar(), s.mu.polar())
    _, p, _ = kernels.point_sums(probes, ZeroSet.empty().polar(), s.mu.polar())
    ratios = (nb + p) / (heights / J2)
    return {"ratios": ratios.tolist(), "fitted_C": float(ratios.max())}


def b2_tail(s: Sipification, eps_values=(0.1, 0.01, 0.001)) -> dict:
    """``log(1/|B2(z)|)`` at ``z = (1 - eps |J|^2) e^{i theta_J}``, maximum over ``G`` per ``eps``."""
    G = s.families.G
    J2 = (TWO_PI * np.exp2(-np.array([J.level for J in G], dtype=float))) ** 2
    out = {}
    for eps in eps_values:
        if not G:
            out[eps] = 0.0
            continue
        probes = _probe_polar(G, eps * J2)
        nb, _, _ = kernels.point_sums(probes, s.B2.polar(), ([], [], []))
        out[eps] = float(nb.max())
    return out
