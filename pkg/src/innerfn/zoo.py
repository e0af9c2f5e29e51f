"""Parametric zero-set constructions and zero-set transformations."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from innerfn.evaluation import ZeroSet, halfplane_to_polar, pair_one_minus_rho_sq
from innerfn.hyperbolic import DomainError, HalfPlanePoint, DiscPoint

KINDS = ("exponential", "treil_grid", "rect_grid", "stolz_mult", "finite_cross",
         "thin", "cantor_like")

# caps applied to the nominal parameters of infinite constructions
MAX_ROW_COUNT = 1 << 15
MAX_ZEROS = 200_000


class GeneratorSpecError(ValueError):
    """Invalid generator parameters; ``field`` names the offending entry."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _meta(kind, params, **truncation):
    return {"generator": kind, "parameters": params, "truncation": truncation}


def gen_exponential(q: float, n: int, angle: float = 0.0) -> ZeroSet:
    """Zeros ``(1 - q^j) e^{i angle}``, ``j = 1..n``."""
    if not (0.0 < q < 1.0):
        raise GeneratorSpecError("parameters.q", f"must be in (0, 1), got {q!r}")
    if n < 0:
        raise GeneratorSpecError("parameters.n", f"must be >= 0, got {n!r}")
    j = np.arange(1, n + 1)
    return ZeroSet.from_polar(np.full(n, float(angle)), q ** j.astype(float),
                              metadata=_meta("exponential",
                                             {"q": q, "n": n, "angle": angle}, n=n))


def gen_treil_grid(n_max: int, half_width: int) -> ZeroSet:
    """Half-plane grid ``k n^2 + i n^3``: rows ``y_n = n^3``, spacing ``delta_n y_n`` with ``delta_n = 1/n``."""
    if n_max < 1:
        raise GeneratorSpecError("parameters.n_max", f"must be >= 1, got {n_max!r}")
    if half_width < 0:
        raise GeneratorSpecError("parameters.half_width", f"must be >= 0, got {half_width!r}")
    pts = []
    for n in range(1, n_max + 1):
        y = float(n) ** 3
        step = y / n
        pts.extend(k * step + 1j * y for k in range(-half_width, half_width + 1))
    return ZeroSet.from_points(pts, model="half-plane",
                               metadata=_meta("treil_grid",
                                              {"n_max": n_max, "half_width": half_width},
                                              n_max=n_max, half_width=half_width))


def rect_grid_offsets(L, gap_rule: str = "tight"):
    """Left endpoints ``x_n`` of the intervals ``[x_n, x_n + L_n]``.

    ``tight``: ``x_{n+1} = x_n + 2 L_n``.  ``separated``: an extra ``L_{n+1}``
    so the tripled intervals are pairwise disjoint too.
    """
    x = [0.0]
    for n in range(len(L) - 1):
        gap = 2.0 * L[n] + (L[n + 1] if gap_rule == "separated" else 0.0)
        x.append(x[-1] + gap)
    return x


def gen_rect_grid(L, N, gap_rule: str = "tight") -> ZeroSet:
    """Half-plane rows ``x_n + k L_n/N_n + i L_n/N_n``, ``0 <= k < N_n``."""
    L = [float(v) for v in L]
    N = [int(v) for v in N]
    if len(L) != len(N):
        raise GeneratorSpecError("parameters.N", "must have the same length as L")
    if gap_rule not in ("tight", "separated"):
        raise GeneratorSpecError("parameters.gap_rule", f"must be 'tight' or 'separated', got {gap_rule!r}")
    for i, v in enumerate(L):
        if not (v > 0.0 and math.isfinite(v)):
            raise GeneratorSpecError(f"parameters.L[{i}]", f"must be > 0, got {v!r}")
        if i and not v < L[i - 1]:
            raise GeneratorSpecError(f"parameters.L[{i}]", "lengths must be strictly decreasing")
    for i, v in enumerate(N):
        if not (1 <= v <= MAX_ROW_COUNT):
            raise GeneratorSpecError(f"parameters.N[{i}]", f"must be in [1, {MAX_ROW_COUNT}], got {v!r}")
    if sum(N) > MAX_ZEROS:
        raise GeneratorSpecError("parameters.N", f"total zero count exceeds {MAX_ZEROS}")
    xs = rect_grid_offsets(L, gap_rule)
    pts = []
    for x, ln, nn in zip(xs, L, N):
        h = ln / nn
        pts.extend(x + k * h + 1j * h for k in range(nn))
    meta = _meta("rect_grid", {"L": L, "N": N, "gap_rule": gap_rule}, rows=len(L))
    meta["row_offsets"] = xs
    return ZeroSet.from_points(pts, model="half-plane", metadata=meta)


def intnotsipable_parameters(rows: int):
    """``L_n = n^-2``, ``N_n = 2^{n^3}`` capped at ``2^15``."""
    L = [1.0 / n ** 2 for n in range(1, rows + 1)]
    N = [min(2 ** (n ** 3), MAX_ROW_COUNT) for n in range(1, rows + 1)]
    return L, N


def gen_stolz_mult(n: int) -> ZeroSet:
    """Zeros ``1 - 2^-j`` of multiplicity ``j``, ``j = 1..n``."""
    if n < 1:
        raise GeneratorSpecError("parameters.n", f"must be >= 1, got {n!r}")
    j = np.arange(1, n + 1)
    return ZeroSet.from_polar(np.zeros(n), 2.0 ** -j.astype(float), mult=j,
                              metadata=_meta("stolz_mult", {"n": n}, n=n))


def gen_finite_cross(r: float) -> ZeroSet:
    """Four simple zeros ``r e^{i pi (2k+1)/4}``; the product is ``(z^4 + r^4)/(1 + r^4 z^4)``."""
    if not (0.0 < r < 1.0):
        raise GeneratorSpecError("parameters.r", f"must be in (0, 1), got {r!r}")
    angle = math.pi * (2 * np.arange(4) + 1) / 4.0
    return ZeroSet.from_polar(angle, np.full(4, 1.0 - r),
                              metadata=_meta("finite_cross", {"r": r}))


def gen_thin(n: int, radius_rule: str = "double_exp", angles: str = "fixed",
             seed: int = 0, angle: float = 0.0) -> ZeroSet:
    """Radii ``1 - 2^{-k^2}``, ``k = 1..n``; angles all equal or seeded uniform."""
    if n < 1:
        raise GeneratorSpecError("parameters.n", f"must be >= 1, got {n!r}")
    if radius_rule != "double_exp":
        raise GeneratorSpecError("parameters.radius_rule", f"unknown rule {radius_rule!r}")
    k = np.arange(1, n + 1, dtype=float)
    depth = np.exp2(-k * k)
    if angles == "fixed":
        theta = np.full(n, float(angle))
    elif angles == "spread":
        theta = np.random.default_rng(seed).uniform(-math.pi, math.pi, n)
    else:
        raise GeneratorSpecError("parameters.angles", f"must be 'fixed' or 'spread', got {angles!r}")
    return ZeroSet.from_polar(theta, depth,
                              metadata=_meta("thin", {"n": n, "radius_rule": radius_rule,
                                                      "angles": angles, "angle": angle},
                                             n=n))


def gen_cantor_like(depth: int, ratio=Fraction(1, 3), base=(Fraction(0), Fraction(1, 4))):
    """Middle-removal set on the circle: ``2^depth`` closed arcs.

    Each arc keeps two end pieces of ``ratio`` times its length.  ``ratio``
    may also be a sequence with one value per level (fat Cantor sets).  The
    base arc is given in turns; with rational ratios the arcs are exact.
    """
    from innerfn.entropy import BoundarySet

    if depth < 0:
        raise GeneratorSpecError("parameters.depth", f"must be >= 0, got {depth!r}")
    if isinstance(ratio, (list, tuple)):
        if len(ratio) < depth:
            raise GeneratorSpecError("parameters.ratio", f"needs {depth} per-level values")
        ratios = [Fraction(r) for r in ratio[:depth]]
    else:
        ratios = [Fraction(ratio)] * depth
    for r in ratios:
        if not (0 < r < Fraction(1, 2)):
            raise GeneratorSpecError("parameters.ratio", f"must be in (0, 1/2), got {r}")
    arcs = [(Fraction(base[0]), Fraction(base[1]))]
    for r in ratios:
        nxt = []
        for a, b in arcs:
            piece = (b - a) * r
            nxt.append((a, a + piece))
            nxt.append((b - piece, b))
        arcs = nxt
    return BoundarySet.from_intervals(arcs)


# transformations ------------------------------------------------------------

def _rho_to_centers(zs: ZeroSet, centers) -> np.ndarray:
    """Pseudohyperbolic distance of every zero to its nearest center."""
    if zs.model == "half-plane":
        c = [HalfPlanePoint.from_complex(w).z for w in centers]
        ang, dep = halfplane_to_polar(np.asarray(c, dtype=complex))
    else:
        c = np.asarray([DiscPoint.from_complex(w).z for w in centers], dtype=complex)
        ang, dep = np.angle(c), 1.0 - np.abs(c)
    if len(c) == 0:
        return np.ones(len(zs))
    combined = ZeroSet.from_polar(np.concatenate([ang, zs.angle]),
                                  np.concatenate([dep, zs.depth]))
    x = pair_one_minus_rho_sq(combined, np.arange(len(c)))[:, len(c):]
    return np.sqrt(1.0 - x).min(axis=0)


def remove_in_discs(zs: ZeroSet, centers, R: float) -> ZeroSet:
    """Drop zeros with ``d_H(zero, center) < R`` for some center."""
    if R < 0:
        raise DomainError("R must be >= 0")
    if R == 0 or len(zs) == 0:
        return zs
    keep = _rho_to_centers(zs, centers) >= math.tanh(R)
    return zs.subset(keep, metadata={"removed_in_discs": {
        "centers": [[complex(c).real, complex(c).imag] for c in centers], "R": R}})


def _unit_disc_sample(rng) -> complex:
    while True:
        x, y = rng.uniform(-1.0, 1.0, 2)
        if x * x + y * y < 1.0:
            return complex(x, y)


def perturb(zs: ZeroSet, max_rho: float, seed: int) -> ZeroSet:
    """Move each zero to a seeded point of its pseudohyperbolic disc of radius ``max_rho``."""
    if not (0.0 <= max_rho < 1.0):
        raise DomainError(f"max_rho = {max_rho!r} not in [0, 1)")
    if max_rho == 0.0 or len(zs) == 0:
        return zs
    ws = np.array([max_rho * _unit_disc_sample(np.random.default_rng([seed, i]))
                   for i in range(len(zs))])
    meta = {"perturbed": {"max_rho": max_rho, "seed": seed}}
    if zs.model == "half-plane":
        # half-plane automorphism x + y * C^{-1}(w) sends i to x + i y
        zeta = 1j * (1.0 + ws) / (1.0 - ws)
        new = zs.hp.real + zs.hp.imag * zeta
        ang, dep = halfplane_to_polar(new)
        return ZeroSet("half-plane", ang, dep, zs.mult, hp=new,
                       metadata={**zs.metadata, **meta})
    # psi_z(w) = (z + w)/(1 + conj(z) w) in polar form, w rotated into the frame of z
    r = 1.0 - zs.depth
    wr = ws * np.exp(-1j * zs.angle)
    one_m_w2 = 1.0 - np.abs(wr) ** 2
    denom = np.abs(1.0 + r * wr) ** 2
    one_m_sq = zs.depth * (2.0 - zs.depth) * one_m_w2 / denom
    new_depth = one_m_sq / (1.0 + np.sqrt(np.maximum(1.0 - one_m_sq, 0.0)))
    new_angle = zs.angle + np.angle((r + wr) / (1.0 + r * wr))
    return ZeroSet("disc", new_angle, new_depth, zs.mult, metadata={**zs.metadata, **meta})


def transform_zeros(zs: ZeroSet, op: str, **params) -> ZeroSet:
    if op == "remove_in_discs":
        return remove_in_discs(zs, params["centers"], params["R"])
    if op == "perturb":
        return perturb(zs, params["max_rho"], params["seed"])
    raise DomainError(f"unknown transform {op!r}")


# generator specs ------------------------------------------------------------

@dataclass
class GeneratorSpec:
    kind: str
    parameters: dict = field(default_factory=dict)
    seed: int = 0

    @classmethod
    def from_dict(cls, d) -> "GeneratorSpec":
        if not isinstance(d, dict):
            raise GeneratorSpecError("<root>", "must be a JSON object")
        kind = d.get("kind")
        if kind not in KINDS:
            raise GeneratorSpecError("kind", f"must be one of {', '.join(KINDS)}, got {kind!r}")
        params = d.get("parameters", {})
        if not isinstance(params, dict):
            raise GeneratorSpecError("parameters", "must be a JSON object")
        seed = d.get("seed", 0)
        if not isinstance(seed, int) or isinstance(seed, bool) or seed < 0:
            raise GeneratorSpecError("seed", f"must be a non-negative integer, got {seed!r}")
        return cls(kind, params, seed)

    def to_dict(self):
        return {"kind": self.kind, "parameters": self.parameters, "seed": self.seed}


_SIGNATURES = {
    "exponential": {"q": float, "n": int, "angle": float},
    "treil_grid": {"n_max": int, "half_width": int},
    "rect_grid": {"L": list, "N": list, "gap_rule": str},
    "stolz_mult": {"n": int},
    "finite_cross": {"r": float},
    "thin": {"n": int, "radius_rule": str, "angles": str, "angle": float},
    "cantor_like": {"depth": int, "ratio": str},
}
_REQUIRED = {
    "exponential": ("q", "n"), "treil_grid": ("n_max", "half_width"),
    "rect_grid": ("L", "N"), "stolz_mult": ("n",), "finite_cross": ("r",),
    "thin": ("n",), "cantor_like": ("depth",),
}


def _check_params(spec: GeneratorSpec):
    sig = _SIGNATURES[spec.kind]
    for name in _REQUIRED[spec.kind]:
        if name not in spec.parameters:
            raise GeneratorSpecError(f"parameters.{name}", "is required")
    out = {}
    for name, value in spec.parameters.items():
        if name not in sig:
            raise GeneratorSpecError(f"parameters.{name}", f"unknown parameter for kind {spec.kind!r}")
        typ = sig[name]
        if typ is int and (not isinstance(value, int) or isinstance(value, bool)):
            raise GeneratorSpecError(f"parameters.{name}", f"must be an integer, got {value!r}")
        if typ is float and (isinstance(value, bool) or not isinstance(value, (int, float))):
            raise GeneratorSpecError(f"parameters.{name}", f"must be a number, got {value!r}")
        if typ is list and not isinstance(value, list):
            raise GeneratorSpecError(f"parameters.{name}", f"must be a list, got {value!r}")
        if typ is str and spec.kind == "cantor_like":
            try:
                value = Fraction(value)
            except (TypeError, ValueError, ZeroDivisionError):
                raise GeneratorSpecError(f"parameters.{name}", f"must be a rational, got {value!r}")
        elif typ is str and not isinstance(value, str):
            raise GeneratorSpecError(f"parameters.{name}", f"must be a string, got {value!r}")
        out[name] = float(value) if typ is float else value
    return out


def generate(spec: GeneratorSpec):
    """Run a generator spec.  Returns a :class:`ZeroSet` (a ``BoundarySet`` for ``cantor_like``)."""
    p = _check_params(spec)
    if spec.kind == "exponential":
        return gen_exponential(p["q"], p["n"], p.get("angle", 0.0))
    if spec.kind == "treil_grid":
        if p["n_max"] * (2 * p["half_width"] + 1) > MAX_ZEROS:
            raise GeneratorSpecError("parameters.n_max", f"total zero count exceeds {MAX_ZEROS}")
        return gen_treil_grid(p["n_max"], p["half_width"])
    if spec.kind == "rect_grid":
        return gen_rect_grid(p["L"], p["N"], p.get("gap_rule", "tight"))
    if spec.kind == "stolz_mult":
        return gen_stolz_mult(p["n"])
    if spec.kind == "finite_cross":
        return gen_finite_cross(p["r"])
    if spec.kind == "thin":
        return gen_thin(p["n"], p.get("radius_rule", "double_exp"), p.get("angles", "fixed"),
                        seed=spec.seed, angle=p.get("angle", 0.0))
    if spec.kind == "cantor_like":
        return gen_cantor_like(p["depth"], p.get("ratio", Fraction(1, 3)))
    raise GeneratorSpecError("kind", f"unknown kind {spec.kind!r}")
