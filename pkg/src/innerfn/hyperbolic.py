"""Hyperbolic geometry of the unit disc and the upper half-plane.

Distances, disc automorphisms, the Cayley map, Carleson boxes and dyadic
arcs.  Every function accepts plain complex numbers (or numpy arrays of
them) as well as the validated point types below; arrays are processed
elementwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

TWO_PI = 2.0 * math.pi


class DomainError(ValueError):
    """A point or parameter lies outside the domain of an operation."""


@dataclass(frozen=True)
class DiscPoint:
    """A point of the open unit disc."""

    re: float
    im: float

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise DomainError(f"non-finite disc point ({self.re}, {self.im})")
        if math.hypot(self.re, self.im) >= 1.0:
            raise DomainError(
                f"|z| = {math.hypot(self.re, self.im)!r} is not < 1")

    @classmethod
    def from_complex(cls, z: complex) -> "DiscPoint":
        z = complex(z)
        return cls(z.real, z.imag)

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    def __complex__(self):
        return self.z


@dataclass(frozen=True)
class HalfPlanePoint:
    """A point of the open upper half-plane."""

    re: float
    im: float

    def __post_init__(self):
        if not (math.isfinite(self.re) and math.isfinite(self.im)):
            raise DomainError(f"non-finite half-plane point ({self.re}, {self.im})")
        if not self.im > 0.0:
            raise DomainError(f"Im z = {self.im!r} is not > 0")

    @classmethod
    def from_complex(cls, z: complex) -> "HalfPlanePoint":
        z = complex(z)
        return cls(z.real, z.imag)

    @property
    def z(self) -> complex:
        return complex(self.re, self.im)

    def __complex__(self):
        return self.z


def _as_disc(z):
    """Coerce to complex (scalar or array) and check |z| < 1 strictly."""
    if isinstance(z, DiscPoint):
        return z.z
    if isinstance(z, HalfPlanePoint):
        raise DomainError("half-plane point passed where a disc point is expected")
    if np.ndim(z) == 0:
        z = complex(z)
        if not abs(z) < 1.0:
            raise DomainError(f"|z| = {abs(z)!r} is not < 1")
        return z
    z = np.asarray(z, dtype=complex)
    if not np.all(np.abs(z) < 1.0):
        raise DomainError("array contains points with |z| >= 1")
    return z


def _as_upper(z):
    if isinstance(z, HalfPlanePoint):
        return z.z
    if isinstance(z, DiscPoint):
        raise DomainError("disc point passed where a half-plane point is expected")
    if np.ndim(z) == 0:
        z = complex(z)
        if not z.imag > 0.0:
            raise DomainError(f"Im z = {z.imag!r} is not > 0")
        return z
    z = np.asarray(z, dtype=complex)
    if not np.all(z.imag > 0.0):
        raise DomainError("array contains points with Im z <= 0")
    return z


def _wrap(x):
    return DiscPoint.from_complex(x) if np.ndim(x) == 0 else x


def pseudo_dist(z, w):
    """Pseudohyperbolic distance ``|z - w| / |1 - conj(w) z|`` in the disc."""
    z = _as_disc(z)
    w = _as_disc(w)
    r = np.abs((z - w) / (1.0 - np.conj(w) * z))
    # rounding can push the quotient a hair above 1 for points near the circle
    r = np.minimum(r, np.nextafter(1.0, 0.0))
    return float(r) if np.ndim(r) == 0 else r


def one_minus_rho_sq(z, w):
    """``1 - rho(z, w)**2`` computed without cancellation."""
    z = _as_disc(z)
    w = _as_disc(w)
    num = (1.0 - np.abs(z) ** 2) * (1.0 - np.abs(w) ** 2)
    out = num / np.abs(1.0 - np.conj(w) * z) ** 2
    return float(out) if np.ndim(out) == 0 else out


def hyp_dist(z, w):
    """Hyperbolic distance ``atanh(rho(z, w))``."""
    out = np.arctanh(pseudo_dist(z, w))
    return float(out) if np.ndim(out) == 0 else out


def mobius(a, w):
    """The involutive disc automorphism ``phi_a(w) = (a - w) / (1 - conj(a) w)``."""
    a = _as_disc(a)
    w = _as_disc(w)
    return _wrap((a - w) / (1.0 - np.conj(a) * w))


def cayley(p):
    """Map the upper half-plane onto the disc, ``z -> (z - i) / (z + i)``."""
    z = _as_upper(p)
    return _wrap((z - 1j) / (z + 1j))


def cayley_inverse(d):
    """Inverse Cayley map, ``w -> i (1 + w) / (1 - w)``."""
    w = _as_disc(d)
    z = 1j * (1.0 + w) / (1.0 - w)
    return HalfPlanePoint.from_complex(z) if np.ndim(z) == 0 else z


def pseudo_dist_halfplane(z, w):
    """Pseudohyperbolic distance between two points of the upper half-plane.

    Uses ``1 - rho^2 = 4 Im z Im w / ((Re z - Re w)^2 + (Im z + Im w)^2)``.
    """
    z = _as_upper(z)
    w = _as_upper(w)
    one_minus = 4.0 * z.imag * w.imag / ((z.real - w.real) ** 2 + (z.imag + w.imag) ** 2)
    r = np.sqrt(np.clip(1.0 - one_minus, 0.0, 1.0))
    return float(r) if np.ndim(r) == 0 else r


def reduce_angle(theta):
    """Reduce an angle to ``(-pi, pi]``."""
    t = np.mod(theta, TWO_PI)
    t = np.where(t > math.pi, t - TWO_PI, t)
    return float(t) if np.ndim(t) == 0 else t


@dataclass(frozen=True)
class Arc:
    """Closed arc of the unit circle given by its center and half-length (radians)."""

    center_angle: float
    half_length: float

    def __post_init__(self):
        if not (0.0 < self.half_length <= math.pi):
            raise DomainError(f"half_length {self.half_length!r} not in (0, pi]")

    @property
    def length(self) -> float:
        return 2.0 * self.half_length

    def doubled(self) -> "Arc":
        """Same center, twice the length; saturates at the full circle."""
        return Arc(self.center_angle, min(2.0 * self.half_length, math.pi))

    def contains_angle(self, theta) -> bool:
        return abs(reduce_angle(theta - self.center_angle)) <= self.half_length


@dataclass(frozen=True)
class DyadicArc:
    """Dyadic arc ``{e^{i t}: k 2^-m <= t / 2pi < (k+1) 2^-m}``."""

    level: int
    index: int

    def __post_init__(self):
        if self.level < 0:
            raise DomainError(f"dyadic level {self.level} < 0")
        if not (0 <= self.index < (1 << self.level)):
            raise DomainError(f"dyadic index {self.index} out of range at level {self.level}")

    @property
    def arclength(self) -> float:
        return TWO_PI * 2.0 ** -self.level

    @property
    def turns(self) -> float:
        """Length as a fraction of the circle (exact power of two)."""
        return 2.0 ** -self.level

    @property
    def start_angle(self) -> float:
        return TWO_PI * self.index * 2.0 ** -self.level

    @property
    def center_angle(self) -> float:
        return TWO_PI * (self.index + 0.5) * 2.0 ** -self.level

    def parent(self) -> "DyadicArc":
        if self.level == 0:
            raise DomainError("the full circle has no parent")
        return DyadicArc(self.level - 1, self.index >> 1)

    def children(self) -> tuple["DyadicArc", "DyadicArc"]:
        return (DyadicArc(self.level + 1, 2 * self.index),
                DyadicArc(self.level + 1, 2 * self.index + 1))

    def contains(self, other: "DyadicArc") -> bool:
        """Dyadic inclusion, decided on (level, index) alone."""
        if other.level < self.level:
            return False
        return (other.index >> (other.level - self.level)) == self.index


def dyadic_geometry(d: DyadicArc) -> Arc:
    """The arc occupied by a dyadic arc."""
    return Arc(d.center_angle, 0.5 * d.arclength)


def top_center(d: DyadicArc) -> complex:
    """Top center ``(1 - l) e^{i theta_c}`` of the Carleson box over ``d``.

    ``l`` is the arclength.  Levels with ``l >= 1`` (levels 0, 1 and 2) have
    no such point inside the disc and are rejected.
    """
    ell = d.arclength
    if ell >= 1.0:
        raise DomainError(f"dyadic arc at level {d.level} has arclength {ell:.4g} >= 1")
    return (1.0 - ell) * np.exp(1j * d.center_angle)


@dataclass(frozen=True)
class CarlesonBox:
    """``Q(theta, h, delta) = {r e^{it}: 0 < 1 - r < delta h, |t - theta| < h}``."""

    theta: float
    h: float
    delta: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.h <= math.pi):
            raise DomainError(f"box width h = {self.h!r} not in (0, pi]")
        if not (0.0 < self.delta <= 1.0):
            raise DomainError(f"box depth ratio delta = {self.delta!r} not in (0, 1]")


def box_contains(b: CarlesonBox, z) -> bool | np.ndarray:
    """Strict membership of ``z`` in ``Q(theta, h, delta)``."""
    z = _as_disc(z)
    depth = 1.0 - np.abs(z)
    dtheta = np.abs(reduce_angle(np.angle(z) - b.theta))
    out = (depth > 0.0) & (depth < b.delta * b.h) & (dtheta < b.h)
    return bool(out) if np.ndim(out) == 0 else out


def carleson_square_contains(arc: Arc, z) -> bool | np.ndarray:
    """Membership in ``Q(I) = {z : z/|z| in I, 1 - |z| <= |I|}`` (arclength ``|I|``)."""
    z = _as_disc(z)
    depth = 1.0 - np.abs(z)
    dtheta = np.abs(reduce_angle(np.angle(z) - arc.center_angle))
    out = (depth <= arc.length) & (dtheta <= arc.half_length)
    return bool(out) if np.ndim(out) == 0 else out
