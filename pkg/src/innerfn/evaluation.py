"""Zero sets, singular measures and certified evaluation of inner functions.

Zeros are stored in polar form, an angle together with the depth
``1 - |a|``, so that sequences accumulating at the circle much faster than
double precision can resolve through ``|a|`` (for instance
``1 - 2**(-k*k)``) still evaluate correctly.  Half-plane zero sets keep their
original coordinates for export and are converted through the Cayley map
for everything else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from innerfn import kernels
from innerfn.hyperbolic import (
    TWO_PI,
    DiscPoint,
    DomainError,
    HalfPlanePoint,
    cayley,
    mobius,
)

MODELS = ("disc", "half-plane")


class ZeroValueError(ValueError):
    """The function vanishes where a strictly positive value was required."""


class MultipleZeroError(ValueError):
    """An operation defined for simple zeros met a multiple zero."""


class QuadratureError(ValueError):
    """A zero sits too close to the integration circle for the trapezoid rule."""


def polar_from_disc(z):
    """``(cos, sin, depth)`` of disc points given as complex numbers."""
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    mod = np.abs(z)
    depth = 1.0 - mod
    with np.errstate(invalid="ignore", divide="ignore"):
        c = np.where(mod > 0.0, z.real / mod, 1.0)
        s = np.where(mod > 0.0, z.imag / mod, 0.0)
    return c, s, depth


def halfplane_to_polar(w):
    """Angle and depth of the Cayley images of half-plane points, cancellation free."""
    w = np.atleast_1d(np.asarray(w, dtype=complex))
    x, y = w.real, w.imag
    # (w - i) * conj(w + i) = |w|^2 - 1 - 2 i x
    angle = np.arctan2(-2.0 * x, x * x + y * y - 1.0)
    one_m_sq = 4.0 * y / (x * x + (y + 1.0) ** 2)
    depth = one_m_sq / (1.0 + np.sqrt(np.maximum(1.0 - one_m_sq, 0.0)))
    return angle, depth


@dataclass(frozen=True, eq=False)
class ZeroSet:
    """Finite multiset of zeros.

    ``angle`` and ``depth`` describe the disc image of every distinct zero
    (``depth = 1 - |a|`` in ``(0, 1]``); ``mult`` holds multiplicities.
    For ``model == "half-plane"`` the original coordinates sit in ``hp``.
    ``tail_blaschke_sum_bound`` certifies ``sum mult (1 - |a|)`` over zeros
    left out of the list, all of which have modulus at least
    ``tail_min_modulus``.
    """

    model: str
    angle: np.ndarray
    depth: np.ndarray
    mult: np.ndarray
    hp: np.ndarray | None = None
    tail_blaschke_sum_bound: float | None = None
    tail_min_modulus: float | None = None
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.model not in MODELS:
            raise DomainError(f"unknown model {self.model!r}")
        object.__setattr__(self, "angle", np.asarray(self.angle, dtype=float).reshape(-1))
        object.__setattr__(self, "depth", np.asarray(self.depth, dtype=float).reshape(-1))
        object.__setattr__(self, "mult", np.asarray(self.mult, dtype=np.int64).reshape(-1))
        n = self.angle.shape[0]
        if self.depth.shape[0] != n or self.mult.shape[0] != n:
            raise DomainError("angle, depth and mult must have equal lengths")
        if not np.all(np.isfinite(self.angle)):
            raise DomainError("non-finite zero angle")
        if not np.all((self.depth > 0.0) & (self.depth <= 1.0)):
            raise DomainError("zeros must lie strictly inside the disc (0 < 1-|a| <= 1)")
        if np.any(self.mult < 1):
            raise DomainError("multiplicities must be >= 1")
        if self.model == "half-plane":
            if self.hp is None or np.shape(self.hp) != (n,):
                raise DomainError("half-plane zero set needs its original points")
        tb = self.tail_blaschke_sum_bound
        if tb is not None and not (tb >= 0.0):
            raise DomainError("tail_blaschke_sum_bound must be >= 0")
        tm = self.tail_min_modulus
        if tm is not None and not (0.0 <= tm < 1.0):
            raise DomainError("tail_min_modulus must be in [0, 1)")

    # construction -------------------------------------------------------

    @classmethod
    def empty(cls, model: str = "disc") -> "ZeroSet":
        hp = np.zeros(0, dtype=complex) if model == "half-plane" else None
        return cls(model, np.zeros(0), np.zeros(0), np.zeros(0, dtype=np.int64), hp=hp)

    @classmethod
    def from_points(cls, points, mult=None, model: str = "disc", **kw) -> "ZeroSet":
        pts = [complex(p) for p in points]
        mult = np.ones(len(pts), dtype=np.int64) if mult is None else np.asarray(mult)
        if model == "disc":
            for p in pts:
                DiscPoint.from_complex(p)
            arr = np.asarray(pts, dtype=complex)
            return cls("disc", np.angle(arr), 1.0 - np.abs(arr), mult, **kw)
        if model == "half-plane":
            for p in pts:
                HalfPlanePoint.from_complex(p)
            arr = np.asarray(pts, dtype=complex)
            angle, depth = halfplane_to_polar(arr) if len(pts) else (np.zeros(0), np.zeros(0))
            return cls("half-plane", angle, depth, mult, hp=arr, **kw)
        raise DomainError(f"unknown model {model!r}")

    @classmethod
    def from_polar(cls, angle, depth, mult=None, **kw) -> "ZeroSet":
        depth = np.asarray(depth, dtype=float)
        mult = np.ones(depth.shape[0], dtype=np.int64) if mult is None else mult
        return cls("disc", angle, depth, mult, **kw)

    # views ----------------------------------------------------------------

    def __len__(self):
        return int(self.angle.shape[0])

    @property
    def total_multiplicity(self) -> int:
        return int(self.mult.sum())

    @property
    def points(self) -> np.ndarray:
        """Disc images as complex numbers (rounded for zeros extremely close to the circle)."""
        return (1.0 - self.depth) * np.exp(1j * self.angle)

    @property
    def blaschke_sum(self) -> float:
        return float(np.sum(self.mult * self.depth))

    def polar(self):
        """``(cos, sin, depth, mult)`` arrays for the kernels."""
        return (np.cos(self.angle), np.sin(self.angle), self.depth,
                self.mult.astype(float))

    def to_disc(self) -> "ZeroSet":
        if self.model == "disc":
            return self
        return ZeroSet("disc", self.angle, self.depth, self.mult,
                       tail_blaschke_sum_bound=self.tail_blaschke_sum_bound,
                       tail_min_modulus=self.tail_min_modulus,
                       metadata=dict(self.metadata))

    def subset(self, mask, **kw) -> "ZeroSet":
        """Sub-multiset selected by a boolean mask or index array."""
        idx = np.arange(len(self))[mask]
        hp = None if self.hp is None else self.hp[idx]
        meta = dict(self.metadata)
        meta.update(kw.pop("metadata", {}))
        return ZeroSet(self.model, self.angle[idx], self.depth[idx], self.mult[idx],
                       hp=hp, metadata=meta, **kw)

    def with_metadata(self, **meta) -> "ZeroSet":
        m = dict(self.metadata)
        m.update(meta)
        return ZeroSet(self.model, self.angle, self.depth, self.mult, hp=self.hp,
                       tail_blaschke_sum_bound=self.tail_blaschke_sum_bound,
                       tail_min_modulus=self.tail_min_modulus, metadata=m)


@dataclass(frozen=True, eq=False)
class SingularMeasure:
    """Finite sum of point masses on the circle.

    Positions are kept in turns (fractions of the full circle); exact
    rationals are preserved as :class:`fractions.Fraction`.
    """

    turns: tuple
    masses: np.ndarray

    def __post_init__(self):
        turns = tuple(t if isinstance(t, Fraction) else Fraction(t) for t in self.turns)
        turns = tuple(t - math.floor(t) for t in turns)
        object.__setattr__(self, "turns", turns)
        masses = np.asarray(self.masses, dtype=float).reshape(-1)
        object.__setattr__(self, "masses", masses)
        if masses.shape[0] != len(turns):
            raise DomainError("one mass per atom required")
        if not np.all(np.isfinite(masses) & (masses > 0.0)):
            raise DomainError("atom masses must be finite and > 0")
        if len(set(turns)) != len(turns):
            raise DomainError("atom positions must be distinct")

    @classmethod
    def empty(cls) -> "SingularMeasure":
        return cls((), np.zeros(0))

    @classmethod
    def from_angles(cls, angles, masses) -> "SingularMeasure":
        return cls(tuple(Fraction(float(a) / TWO_PI) for a in angles), masses)

    def __len__(self):
        return len(self.turns)

    @property
    def angles(self) -> np.ndarray:
        return np.array([TWO_PI * float(t) for t in self.turns])

    @property
    def total_mass(self) -> float:
        return float(self.masses.sum())

    def polar(self):
        a = self.angles
        return np.cos(a), np.sin(a), self.masses


@dataclass(frozen=True, eq=False)
class InnerFunction:
    """``B * S_mu``: a Blaschke part and a singular part, either possibly empty."""

    blaschke: ZeroSet = field(default_factory=ZeroSet.empty)
    singular: SingularMeasure = field(default_factory=SingularMeasure.empty)

    @property
    def is_constant(self) -> bool:
        return len(self.blaschke) == 0 and len(self.singular) == 0


@dataclass(frozen=True)
class EvalResult:
    value: complex
    modulus_lower: float
    modulus_upper: float
    flags: tuple = ()


def as_inner(f) -> InnerFunction:
    if isinstance(f, InnerFunction):
        return f
    if isinstance(f, ZeroSet):
        return InnerFunction(blaschke=f)
    if isinstance(f, SingularMeasure):
        return InnerFunction(singular=f)
    raise TypeError(f"cannot interpret {type(f).__name__} as an inner function")


def _disc_coord(z, model="disc") -> complex:
    if isinstance(z, HalfPlanePoint):
        return cayley(z).z
    if isinstance(z, DiscPoint):
        return z.z
    z = complex(z)
    DiscPoint.from_complex(z)
    return z


# vectorised core ------------------------------------------------------------

def log_parts(f, probes, backend=None):
    """Kernel sums at probe points.

    ``probes`` is either an array of complex disc points or a
    ``(cos, sin, depth)`` triple.  Returns ``(neglog_blaschke, poisson,
    minrho)`` where ``-log|Theta| = neglog_blaschke + poisson``.
    """
    f = as_inner(f)
    if not isinstance(probes, tuple):
        probes = polar_from_disc(probes)
    zs = f.blaschke
    return kernels.point_sums(probes, zs.polar(), f.singular.polar(), backend=backend)


def tail_penalty(zs: ZeroSet, depth) -> np.ndarray:
    """``C(z) T`` bounding ``-log`` of the omitted tail factors, ``inf`` where invalid.

    ``C(z) = 2 (1 + |z|) / (1 - |z|)^2`` holds when every omitted zero is at
    pseudohyperbolic distance at least 1/2 from ``z``; that is checked against
    ``tail_min_modulus`` (absent means no guarantee).
    """
    depth = np.asarray(depth, dtype=float)
    T = zs.tail_blaschke_sum_bound
    if not T:
        return np.zeros_like(depth)
    r = 1.0 - depth
    m = zs.tail_min_modulus
    if m is None:
        return np.full_like(depth, np.inf)
    with np.errstate(divide="ignore", invalid="ignore"):
        sep = np.where(r < m, (m - r) / (1.0 - m * r), 0.0)
        pen = 2.0 * (2.0 - depth) / depth ** 2 * T
    return np.where(sep >= 0.5, pen, np.inf)


# point evaluation ------------------------------------------------------------

def blaschke_factor(a, z) -> complex:
    """``b_a(z) = (|a|/a) (a - z)/(1 - conj(a) z)``, with ``b_0(z) = z``."""
    a = _disc_coord(a)
    z = _disc_coord(z)
    if a == 0:
        return z
    return abs(a) / a * mobius(a, z).z


def _blaschke_argument(zs: ZeroSet, z: complex) -> float:
    if not len(zs):
        return 0.0
    a = zs.points
    nz = a != 0
    arg = np.zeros(len(zs))
    b = np.abs(a[nz]) / a[nz] * (a[nz] - z) / (1.0 - np.conj(a[nz]) * z)
    arg[nz] = np.angle(b)
    arg[~nz] = np.angle(z) if z != 0 else 0.0
    return float(np.sum(zs.mult * arg))


def eval_blaschke(zs: ZeroSet, z, require_nonzero: bool = False) -> EvalResult:
    """Evaluate the (truncated) Blaschke product with certified modulus bounds.

    Half-plane points are mapped through the Cayley transform; complex
    numbers are read as disc coordinates.
    """
    z = _disc_coord(z)
    neglog, _, _ = log_parts(zs, np.array([z]))
    neglog = float(neglog[0])
    if math.isinf(neglog):
        if require_nonzero:
            raise ZeroValueError(f"z = {z} is a zero of the product")
        return EvalResult(0j, 0.0, 0.0, ("at_zero",))
    mod = math.exp(-neglog)
    arg = _blaschke_argument(zs, z)
    value = mod * complex(math.cos(arg), math.sin(arg))
    pen = float(tail_penalty(zs, np.array([1.0 - abs(z)]))[0])
    flags = ()
    if math.isinf(pen):
        flags = ("tail_uncertified",)
        lower = 0.0
    else:
        lower = mod * math.exp(-pen)
    return EvalResult(value, lower, min(mod, 1.0), flags)


def eval_singular(mu: SingularMeasure, z) -> complex:
    """``S_mu(z) = exp(-sum mass (xi + z)/(xi - z))``."""
    z = _disc_coord(z)
    if not len(mu):
        return 1 + 0j
    xi = np.exp(1j * mu.angles)
    return complex(np.exp(-np.sum(mu.masses * (xi + z) / (xi - z))))


def poisson(mu: SingularMeasure, z) -> float:
    """Poisson integral ``sum mass (1 - |z|^2)/|xi - z|^2``, i.e. ``-log|S_mu(z)|``."""
    z = _disc_coord(z)
    _, p, _ = log_parts(InnerFunction(singular=mu), np.array([z]))
    return float(p[0])


def eval_inner(f, z) -> EvalResult:
    f = as_inner(f)
    z = _disc_coord(z)
    b = eval_blaschke(f.blaschke, z)
    if not len(f.singular):
        return b
    s = eval_singular(f.singular, z)
    ms = math.exp(-poisson(f.singular, z))
    return EvalResult(b.value * s, b.modulus_lower * ms, b.modulus_upper * ms, b.flags)


def pair_one_minus_rho_sq(zs: ZeroSet, rows=None) -> np.ndarray:
    """``1 - rho(a_k, a_j)^2`` for ``k`` in ``rows`` against every ``j``."""
    c, s, d, _ = zs.polar()
    rows = np.arange(len(zs)) if rows is None else np.asarray(rows)
    dk = d[rows][:, None]
    chord2 = (c[rows][:, None] - c) ** 2 + (s[rows][:, None] - s) ** 2
    cross = d + dk - d * dk
    denom = cross * cross + (1.0 - d) * (1.0 - dk) * chord2
    with np.errstate(divide="ignore", invalid="ignore"):
        x = np.where(denom > 0.0, dk * (2.0 - dk) * d * (2.0 - d) / denom, 1.0)
    x = np.minimum(x, 1.0)
    # rho(a, a) = 0 exactly; the formula above can round the diagonal below 1
    x[np.arange(len(rows)), rows] = 1.0
    return x


def zero_derivative_product(zs: ZeroSet, k: int) -> float:
    """``prod_{j != k} rho(a_k, a_j)^{m_j} = (1 - |a_k|^2) |B'(a_k)|`` for a simple zero."""
    if not (0 <= k < len(zs)):
        raise IndexError(k)
    if zs.mult[k] > 1:
        raise MultipleZeroError(f"zero {k} has multiplicity {zs.mult[k]}")
    x = pair_one_minus_rho_sq(zs, [k])[0]
    x[k] = 0.0
    with np.errstate(divide="ignore"):
        neglog = float(np.sum(-0.5 * zs.mult * np.log1p(-x)))
    return math.exp(-neglog)


def jensen_mean(zs: ZeroSet, z, r: float, n_quad: int):
    """Both sides of Jensen's formula on the pseudohyperbolic circle ``rho(z, .) = r``.

    ``lhs`` is the trapezoid mean of ``-log|B(phi_z(r e^{it}))|`` over
    ``n_quad`` nodes; ``rhs`` is ``-log|B(z)| - sum_{rho(z,a) < r} m log(r / rho(z,a))``.
    """
    z = _disc_coord(z)
    if not (0.0 < r < 1.0):
        raise DomainError(f"r = {r!r} not in (0, 1)")
    if n_quad < 1:
        raise DomainError("n_quad must be >= 1")
    if not len(zs):
        return 0.0, 0.0
    zs = zs.to_disc()
    neglog_z, _, _ = log_parts(zs, np.array([z]))
    neglog_z = float(neglog_z[0])
    if math.isinf(neglog_z):
        raise ZeroValueError("B(z) = 0; divide out the zero at z first")
    x = pair_one_minus_rho_sq(
        ZeroSet.from_polar(np.concatenate([[np.angle(z)], zs.angle]),
                           np.concatenate([[1.0 - abs(z)], zs.depth])), [0])[0][1:]
    rho = np.sqrt(1.0 - x)
    if np.any(np.abs(rho - r) < 1e-9):
        raise QuadratureError("a zero lies within 1e-9 of the integration circle")
    inside = rho < r
    rhs = neglog_z - float(np.sum(zs.mult[inside] * np.log(r / rho[inside])))
    nodes = r * np.exp(2j * math.pi * np.arange(n_quad) / n_quad)
    pts = (z - nodes) / (1.0 - np.conj(z) * nodes)
    vals, _, _ = log_parts(zs, pts)
    return float(np.mean(vals)), rhs
