"""Numerical diagnostics: eta curves, Carleson-type sums, narrowness, classification.

Probe meshes live on concentric circles of the disc.  Ring ``k`` sits at
hyperbolic radius ``k * mesh`` (in ``d_H = atanh rho``) and carries a power
of two of equally spaced points, enough that the hyperbolic angular step is
at most ``mesh``.  Halving ``mesh`` therefore gives a superset of probes,
which is what makes estimates monotone under refinement.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from innerfn import kernels
from innerfn.evaluation import (
    InnerFunction, ZeroSet, as_inner, pair_one_minus_rho_sq,
    tail_penalty,
)
from innerfn.hyperbolic import TWO_PI, DiscPoint, DomainError

DEFAULT_R_MAX = 1.0 - 2.0 ** -12
# probes at rho >= t - REGION_GUARD count as inside {rho(z, Z) >= t}
REGION_GUARD = 1e-12
CHUNK_PROBES = 1 << 17

EVIDENCE_FOR = "evidence_for"
EVIDENCE_AGAINST = "evidence_against"
INCONCLUSIVE = "inconclusive"


# meshes ----------------------------------------------------------------------

def ring_size(R: float, step: float) -> int:
    """Power-of-two point count for a circle of hyperbolic radius ``R``."""
    circumference = math.pi * math.sinh(2.0 * R)
    if circumference <= 0.0:
        return 1
    return 1 << max(0, math.ceil(math.log2(circumference / step)))


def _depth_of_radius(R):
    """``1 - tanh R`` without cancellation."""
    e = np.exp(-2.0 * np.asarray(R, dtype=float))
    return 2.0 * e / (1.0 + e)


def ring_radii(mesh: float, r_max: float) -> np.ndarray:
    R_max = math.atanh(r_max)
    k = np.arange(int(math.floor(R_max / mesh + 1e-9)) + 1)
    radii = k * mesh
    if R_max - radii[-1] > 1e-12:
        radii = np.append(radii, R_max)
    return radii


def _ring(R: float, mesh: float):
    n = ring_size(R, mesh) if R > 0 else 1
    ang = TWO_PI * (np.arange(n) / n)
    return np.cos(ang), np.sin(ang), np.full(n, float(_depth_of_radius(R))), ang


def mesh_chunks(mesh: float, r_max: float, max_points: int = CHUNK_PROBES):
    """Fixed partition of the probe mesh: list of ``(ring_radius, lo, hi)`` pieces.

    The partition depends on the mesh only, never on the worker count.
    """
    pieces = []
    for R in ring_radii(mesh, r_max):
        n = ring_size(R, mesh) if R > 0 else 1
        for lo in range(0, n, max_points):
            pieces.append((float(R), lo, min(n, lo + max_points)))
    return pieces


def _piece_probes(piece, mesh):
    R, lo, hi = piece
    c, s, d, ang = _ring(R, mesh)
    return c[lo:hi], s[lo:hi], d[lo:hi], ang[lo:hi]


def _map_ordered(fn, items, workers):
    if workers is None or workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


def _log_bounds(f: InnerFunction, probes, backend=None):
    """``(log upper, log lower, minrho)`` of ``|Theta|`` at polar probes."""
    nb, p, minrho = kernels.point_sums(probes, f.blaschke.polar(), f.singular.polar(),
                                       backend=backend)
    log_up = -(nb + p)
    with np.errstate(invalid="ignore"):
        log_lo = log_up - tail_penalty(f.blaschke, probes[2])
    return log_up, np.nan_to_num(log_lo, nan=-np.inf), minrho


def _polar_point(c, s, d) -> complex:
    return complex((1.0 - d) * c, (1.0 - d) * s)


# eta curves ------------------------------------------------------------------

@dataclass
class EtaSample:
    t: float
    estimate: float | None  # None when the probed region is empty
    n_probes: int
    argmin: complex | None = None

    @property
    def absent(self) -> bool:
        return self.estimate is None


@dataclass
class EtaCurve:
    """Sampled upper bounds for ``eta(t) = inf{|Theta(z)| : rho(z, Z) >= t}`` over ``|z| <= r_max``."""

    samples: list
    r_max: float
    resolution: float
    refine: int = 0
    flags: list = field(default_factory=list)

    @property
    def t(self) -> np.ndarray:
        return np.array([s.t for s in self.samples])

    @property
    def estimates(self) -> np.ndarray:
        return np.array([np.nan if s.absent else s.estimate for s in self.samples])

    def present(self) -> list:
        return [s for s in self.samples if not s.absent]

    def jump_candidates(self, ratio: float = 1.5) -> list:
        """Adjacent present samples whose estimates grow by more than ``ratio``."""
        ps = self.present()
        out = []
        for a, b in zip(ps, ps[1:]):
            if a.estimate > 0 and b.estimate / a.estimate > ratio:
                out.append((a.t, b.t, b.estimate / a.estimate))
            elif a.estimate == 0 and b.estimate > 0:
                out.append((a.t, b.t, math.inf))
        return out

    def csv_rows(self):
        rows = [("t", "estimate", "argmin_re", "argmin_im", "n_probes")]
        for s in self.samples:
            if s.absent:
                rows.append((s.t, None, None, None, s.n_probes))
            else:
                rows.append((s.t, s.estimate, s.argmin.real, s.argmin.imag, s.n_probes))
        return rows

    def to_dict(self):
        return {
            "r_max": self.r_max, "resolution": self.resolution, "refine": self.refine,
            "flags": list(self.flags),
            "samples": [{"t": s.t, "estimate": s.estimate, "n_probes": s.n_probes,
                         "argmin": None if s.argmin is None else [s.argmin.real, s.argmin.imag]}
                        for s in self.samples],
            "jump_candidates": [list(j) for j in self.jump_candidates()],
        }


def _check_t(t_values):
    t = np.asarray(sorted(set(float(x) for x in t_values)))
    if t.size == 0:
        raise DomainError("t_values is empty")
    if np.any(t <= 0.0) or np.any(t >= 1.0):
        raise DomainError("every t must lie in (0, 1)")
    return t


def _patch(center: complex, step: float):
    """9x9 pseudohyperbolic patch around ``center`` in polar form."""
    g = np.arange(-4, 5) * 0.5 * step
    w = (g[:, None] + 1j * g[None, :]).ravel()
    w = w[np.abs(w) < 1.0]
    c = center
    den = 1.0 - np.conj(c) * w
    z = (c - w) / den
    one_m_c2 = (1.0 - abs(c)) * (1.0 + abs(c))
    x = one_m_c2 * (1.0 - np.abs(w) ** 2) / np.abs(den) ** 2
    x = np.clip(x, 0.0, 1.0)
    depth = x / (1.0 + np.sqrt(1.0 - x))
    ang = np.angle(z)
    return np.cos(ang), np.sin(ang), depth


def eta_curve(f, t_values, r_max: float = DEFAULT_R_MAX, mesh: float = 0.05,
              workers: int = 1, refine: int = 0, backend=None) -> EtaCurve:
    """Upper bounds for ``eta`` on a hyperbolic mesh of ``D(0, r_max)``.

    For each ``t`` the estimate is the least certified lower modulus bound
    over probes with ``rho(z, Z) >= t``, followed by ``refine`` levels of
    local pattern search around the arg-min (each level halves the step).
    A right-to-left running minimum enforces monotonicity in ``t``; every
    value stays an upper bound for the infimum over the probed region.
    Ties go to the smaller radius, then the smaller angle.
    """
    f = as_inner(f)
    t = _check_t(t_values)
    if not (mesh > 0.0):
        raise DomainError(f"mesh must be positive, got {mesh!r}")
    if not (0.0 < r_max < 1.0):
        raise DomainError(f"r_max must lie in (0, 1), got {r_max!r}")
    thresholds = t - REGION_GUARD
    nt = t.size
    pieces = mesh_chunks(mesh, r_max)

    def work(item):
        pos, piece = item
        c, s, d, _ = _piece_probes(piece, mesh)
        _, log_lo, minrho = _log_bounds(f, (c, s, d), backend)
        best, idx = kernels.bucket_min(log_lo, minrho, thresholds, backend=backend)
        counts = np.bincount(np.searchsorted(thresholds, minrho, side="right"),
                             minlength=nt + 1)
        pts = [None if i < 0 else ((pos, int(i)), (c[i], s[i], d[i])) for i in idx]
        return best, pts, counts

    best = np.full(nt + 1, np.inf)
    where = [None] * (nt + 1)
    counts = np.zeros(nt + 1, dtype=np.int64)
    for b, pts, cnt in _map_ordered(work, list(enumerate(pieces)), workers):
        for j in np.flatnonzero(b < best):
            best[j] = b[j]
            where[j] = pts[j]
        counts += cnt

    # bucket j holds probes valid for t[0..j-1]; fold buckets into per-t values
    est = np.full(nt, np.inf)
    arg = [None] * nt
    n_probes = np.zeros(nt, dtype=np.int64)
    run, run_pt, run_n = np.inf, None, 0
    for j in range(nt, 0, -1):
        run_n += int(counts[j])
        if where[j] is not None and (
                best[j] < run or (best[j] == run and where[j][0] < run_pt[0])):
            run, run_pt = best[j], where[j]
        est[j - 1], arg[j - 1], n_probes[j - 1] = run, run_pt, run_n

    arg = [None if p is None else _polar_point(*p[1]) for p in arg]
    for i in range(nt):
        if arg[i] is None or refine <= 0:
            continue
        center, val = arg[i], est[i]
        for level in range(1, refine + 1):
            pc, ps, pd = _patch(center, math.tanh(mesh / 2 ** level))
            keep = pd >= 1.0 - r_max
            pc, ps, pd = pc[keep], ps[keep], pd[keep]
            _, log_lo, minrho = _log_bounds(f, (pc, ps, pd), backend)
            ok = np.flatnonzero(minrho >= thresholds[i])
            if ok.size:
                j = ok[np.argmin(log_lo[ok])]
                if log_lo[j] < val:
                    val, center = float(log_lo[j]), _polar_point(pc[j], ps[j], pd[j])
        est[i], arg[i] = val, center

    samples = []
    run, run_pt = np.inf, None
    for i in range(nt - 1, -1, -1):
        if est[i] > run:
            est[i], arg[i] = run, run_pt
        run, run_pt = est[i], arg[i]
    flags = []
    for i in range(nt):
        if arg[i] is None:
            samples.append(EtaSample(float(t[i]), None, 0, None))
            continue
        samples.append(EtaSample(float(t[i]), float(math.exp(est[i])), int(n_probes[i]), arg[i]))
    if f.blaschke.tail_blaschke_sum_bound and np.all(np.isinf(est)):
        flags.append("tail_uncertified")
    if all(s.absent for s in samples):
        flags.append("empty_region")
    return EtaCurve(samples, float(r_max), float(mesh), int(refine), flags)


def region_distance(f, z: complex) -> float:
    """``rho(z, Z)`` recomputed from the pairwise formula (``inf`` without zeros)."""
    zs = as_inner(f).blaschke
    if not len(zs):
        return math.inf
    combined = ZeroSet.from_polar(np.concatenate([[np.angle(z)], zs.angle]),
                                  np.concatenate([[1.0 - abs(z)], zs.depth]))
    x = pair_one_minus_rho_sq(combined, [0])[0][1:]
    return float(np.sqrt(1.0 - x).min())


def kappa(curve: EtaCurve, lam: float) -> float:
    """``inf{t : eta(t) > lam}`` read off the curve with linear interpolation; 1 if none."""
    ps = curve.present()
    if not curve.samples:
        raise DomainError("empty curve")
    prev = None
    for s in ps:
        if s.estimate > lam:
            if prev is None:
                return s.t
            frac = (lam - prev.estimate) / (s.estimate - prev.estimate)
            return float(prev.t + max(0.0, frac) * (s.t - prev.t))
        prev = s
    return 1.0


# Carleson-type sums ---------------------------------------------------------

def _rho_to(zs: ZeroSet, z) -> np.ndarray:
    z = DiscPoint.from_complex(complex(z)).z if not isinstance(z, DiscPoint) else z.z
    if not len(zs):
        return np.zeros(0)
    combined = ZeroSet.from_polar(np.concatenate([[np.angle(z)], zs.angle]),
                                  np.concatenate([[1.0 - abs(z)], zs.depth]))
    x = pair_one_minus_rho_sq(combined, [0])[0][1:]
    return np.sqrt(1.0 - x)


def s_t_sum(zs: ZeroSet, z, t: float) -> float:
    """``sum over rho(z, a_j) >= t`` of ``mult_j (1 - rho(z, a_j))``."""
    if not (0.0 <= t < 1.0):
        raise DomainError(f"t = {t!r} not in [0, 1)")
    rho = _rho_to(zs, z)
    keep = rho >= t
    return float(np.sum(zs.mult[keep] * (1.0 - rho[keep])))


def _row_sums(zs: ZeroSet, rows_per_chunk: int = 512):
    n = len(zs)
    out = np.empty(n)
    for lo in range(0, n, rows_per_chunk):
        rows = np.arange(lo, min(n, lo + rows_per_chunk))
        x = pair_one_minus_rho_sq(zs, rows)
        out[rows] = x @ zs.mult.astype(float)
    return out


def cn_constant(zs: ZeroSet) -> float:
    """``max_k sum_j mult_j (1 - rho(a_j, a_k)^2)``; the diagonal gives ``mult_k``."""
    if not len(zs):
        raise DomainError("cn_constant needs a nonempty zero set")
    return float(_row_sums(zs).max())


def box_sup(zs: ZeroSet, delta: float) -> float:
    """Largest ``mu(Q(theta, h, delta)) / h`` over boxes anchored at the zeros.

    ``mu`` puts mass ``mult (1 - |a|)`` at each zero.  For a fixed anchor the
    zeros inside ``Q`` are those with ``max(depth/delta, |dtheta|) < h``, so the
    supremum over ``h <= pi`` is read off exactly at these keys.  Re-centering
    an optimal box at one of its zeros with doubled width shows the result is
    within a factor 2 of the supremum over all boxes.
    """
    if not (0.0 < delta <= 1.0):
        raise DomainError(f"delta = {delta!r} not in (0, 1]")
    n = len(zs)
    if n == 0:
        return 0.0
    w = zs.mult * zs.depth
    ang = zs.angle
    best = 0.0
    for lo in range(0, n, 256):
        a = ang[lo:lo + 256][:, None]
        dth = np.abs(np.remainder(ang[None, :] - a + math.pi, TWO_PI) - math.pi)
        key = np.maximum(zs.depth[None, :] / delta, dth)
        order = np.argsort(key, axis=1, kind="stable")
        ks = np.take_along_axis(key, order, axis=1)
        cum = np.cumsum(w[order], axis=1)
        # equal keys enter together: use the last cumulative value of each run
        last = np.ones_like(ks, dtype=bool)
        last[:, :-1] = ks[:, 1:] != ks[:, :-1]
        ok = last & (ks <= math.pi)
        if np.any(ok):
            best = max(best, float(np.max(np.where(ok, cum / ks, 0.0))))
    return best


def thin_profile(zs: ZeroSet) -> list:
    """Per zero ``(k, prod_{j != k} rho(a_k, a_j), sum_{j != k} (1 - rho(a_k, a_j)^2))``.

    The product equals ``(1 - |a_k|^2)|B'(a_k)|``.  Zeros of multiplicity
    above one get product 0.
    """
    n = len(zs)
    out = []
    mult = zs.mult.astype(float)
    for lo in range(0, n, 512):
        rows = np.arange(lo, min(n, lo + 512))
        x = pair_one_minus_rho_sq(zs, rows)
        x[np.arange(rows.size), rows] = 0.0
        tails = x @ mult
        with np.errstate(divide="ignore"):
            neglog = (-0.5 * np.log1p(-x)) @ mult
        for i, k in enumerate(rows):
            prod = 0.0 if zs.mult[k] > 1 else math.exp(-neglog[i])
            tail = tails[i] + (zs.mult[k] - 1)
            out.append((int(k), prod, float(tail)))
    return out


def separation_profile(zs: ZeroSet) -> list:
    """``(N, inf{rho(a_j, a_k) : j != k, j, k >= N})`` for every ``N`` with two tail zeros."""
    n = len(zs)
    if n < 2:
        return []
    nearest_after = np.full(n, np.inf)
    for lo in range(0, n, 512):
        rows = np.arange(lo, min(n, lo + 512))
        x = pair_one_minus_rho_sq(zs, rows)
        rho = np.sqrt(1.0 - x)
        later = np.arange(n)[None, :] > rows[:, None]
        nearest_after[rows] = np.where(later, rho, np.inf).min(axis=1)
    nearest_after[zs.mult > 1] = 0.0
    tail = np.minimum.accumulate(nearest_after[::-1])[::-1]
    return [(N, float(tail[N])) for N in range(n - 1)]


# narrowness ------------------------------------------------------------------

NARROW_MODES = ("sip", "m_class", "p_class")


@dataclass
class NarrowSearch:
    mesh: float = 0.2
    r_max: float = 0.999
    R_step: float = 0.05
    R_cap: float = 3.0
    boundary_mesh: float = 0.05
    workers: int = 1


def _circle(center: complex, R: float, step: float, stride: int = 1):
    """Every ``stride``-th point of the power-of-two sample of ``dD_H(center, R)``."""
    n = ring_size(R, step)
    a = TWO_PI * (np.arange(0, n, stride) / n)
    w = math.tanh(R) * np.exp(1j * a)
    den = 1.0 - np.conj(center) * w
    z = (center - w) / den
    one_m_c2 = (1.0 - abs(center)) * (1.0 + abs(center))
    x = np.clip(one_m_c2 * (1.0 - math.tanh(R) ** 2) / np.abs(den) ** 2, 0.0, 1.0)
    depth = x / (1.0 + np.sqrt(1.0 - x))
    ang = np.angle(z)
    return np.cos(ang), np.sin(ang), depth


def narrowness_probe(f, eps: float, mode: str = "sip", search: NarrowSearch | dict | None = None,
                     backend=None):
    """Largest probed hyperbolic disc ``D_H(c, R)`` inside the mode's sublevel set.

    Sets: ``sip`` is ``{0 < |Theta| < 1 - eps}``, ``m_class`` is
    ``{eps < |Theta| < 1 - eps}``, ``p_class`` is ``{|Theta| < 1 - eps}``.
    Discs are checked on their boundary circle (maximum principle for the
    upper bound, minimum principle on zero-free discs for the lower one) and
    at the center; zero-free modes require ``rho(c, Z) > tanh R``.  Centers
    come from the nested mesh and radii from ``R_step`` multiples; a center
    scores the largest radius up to which every smaller grid radius passes.
    The result is a lower bound that never decreases when ``mesh`` is halved.
    Returns ``(R_found, center)``; ``center`` is None when nothing fits.
    """
    f = as_inner(f)
    if mode not in NARROW_MODES:
        raise DomainError(f"mode must be one of {NARROW_MODES}, got {mode!r}")
    if not (0.0 < eps < 1.0):
        raise DomainError(f"eps = {eps!r} not in (0, 1)")
    if mode == "m_class" and not eps < 0.5:
        raise DomainError("m_class needs eps < 1/2")
    if search is None:
        search = NarrowSearch()
    elif isinstance(search, dict):
        search = NarrowSearch(**search)
    log_hi = math.log1p(-eps)
    log_lo_min = math.log(eps) if mode == "m_class" else -math.inf
    zero_free = mode != "p_class"
    radii = search.R_step * np.arange(1, int(math.floor(search.R_cap / search.R_step + 1e-9)) + 1)
    pieces = mesh_chunks(search.mesh, search.r_max, max_points=4096)

    def passes(center, R):
        n = ring_size(R, search.boundary_mesh)
        # nested subsamples reject early; the full sample decides
        for stride in sorted({max(1, n // 64), max(1, n // 1024), 1}, reverse=True):
            up, lo, _ = _log_bounds(f, _circle(center, R, search.boundary_mesh, stride), backend)
            if not np.all(up < log_hi):
                return False
            if zero_free and not np.all(lo > log_lo_min):
                return False
        return True

    def work(piece):
        # R(c) is the end of the initial run of passing radii; a center can only
        # improve on best_R if radius best_R + step passes, which is tested first
        c, s, d, _ = _piece_probes(piece, search.mesh)
        up, lo, minrho = _log_bounds(f, (c, s, d), backend)
        ok = up < log_hi
        if zero_free:
            ok &= lo > log_lo_min
        best_k, best_c = 0, None
        # smallest |Theta| first: large discs tend to be found early, which
        # lets the single best_R + step test discard most later centers
        cand = np.flatnonzero(ok)
        for i in cand[np.argsort(up[cand], kind="stable")]:
            center = _polar_point(c[i], s[i], d[i])
            limit = radii.size
            if zero_free:
                limit = int(np.count_nonzero(np.tanh(radii) < minrho[i]))
            k = best_k
            while k < limit and passes(center, float(radii[k])):
                k += 1
            if k > best_k and all(passes(center, float(radii[j])) for j in range(best_k)):
                best_k, best_c = k, center
        return (float(radii[best_k - 1]) if best_k else 0.0), best_c

    best_R, best_c = 0.0, None
    for R, c in _map_ordered(work, pieces, search.workers):
        if R > best_R:
            best_R, best_c = R, c
    return best_R, (None if best_c is None else DiscPoint.from_complex(best_c))


# classification --------------------------------------------------------------

DEFAULT_T_GRID = tuple(round(0.05 * k, 2) for k in range(1, 20)) + (0.99,)


@dataclass
class ClassifyConfig:
    t_values: tuple = DEFAULT_T_GRID
    mesh: float = 0.1
    r_max: float = DEFAULT_R_MAX
    refine: int = 0
    workers: int = 1
    cn_threshold: float = 25.0
    cn_stable_growth: float = 0.05
    cn_divergent_growth: float = 0.20
    sip_tol: float = 0.1
    sip_against_below: float = 0.5
    wep_floor: float = 1e-6
    deltas: tuple = (1.0, 0.25, 0.0625)
    area_threshold: float = 1.0
    area_grid: tuple = (256, 1024)

    def to_dict(self):
        return {k: (list(v) if isinstance(v, tuple) else v) for k, v in self.__dict__.items()}


@dataclass
class Report:
    cn_constant: float | None
    cn_truncations: dict
    thin_tail: float | None
    separation: float | None
    box_sup_by_delta: list
    eta_curve: EtaCurve
    verdicts: dict
    area_integral: float | None = None
    flags: list = field(default_factory=list)

    def to_dict(self):
        return {
            "cn_constant": self.cn_constant,
            "cn_truncations": self.cn_truncations,
            "thin_tail": self.thin_tail,
            "separation": self.separation,
            "box_sup_by_delta": [[d, v] for d, v in self.box_sup_by_delta],
            "box_sup_approximation_factor": 2,
            "eta_curve": self.eta_curve.to_dict(),
            "verdicts": self.verdicts,
            "area_integral": self.area_integral,
            "flags": list(self.flags),
        }


def area_integral(f, threshold: float = 1.0, r_max: float = DEFAULT_R_MAX,
                  grid=(256, 1024)) -> float:
    """Midpoint estimate of ``integral over {P[mu] >= threshold}`` of ``dA / (1 - |z|)``.

    Radial nodes are uniform in ``log(1 - r)`` down to ``1 - r_max``.
    """
    f = as_inner(f)
    if not len(f.singular):
        return 0.0
    n_r, n_t = grid
    edges = np.linspace(0.0, math.log(1.0 - r_max), n_r + 1)
    mids = 0.5 * (edges[1:] + edges[:-1])
    dlog = edges[0] - edges[1]
    ang = TWO_PI * (np.arange(n_t) + 0.5) / n_t
    total = 0.0
    for m in mids:
        d = math.exp(m)
        probes = (np.cos(ang), np.sin(ang), np.full(n_t, d))
        _, p, _ = kernels.point_sums(probes, ZeroSet.empty().polar(), f.singular.polar())
        # dA/(1-r) = r dr dtheta / d = r d(log d) dtheta
        total += float(np.count_nonzero(p >= threshold)) * (1.0 - d) * dlog * (TWO_PI / n_t)
    return total


def _verdict(label, **meta):
    return {"verdict": label, **meta}


def classify(f, config: ClassifyConfig | None = None) -> Report:
    """Collect the diagnostics and turn them into evidence labels.

    Labels are evidence at the probed scale, never proofs.  Each verdict
    records the thresholds that produced it.
    """
    cfg = config or ClassifyConfig()
    f = as_inner(f)
    zs = f.blaschke
    flags = []

    cn = None
    trunc = {}
    cn_v = _verdict(INCONCLUSIVE, reason="no zeros")
    if len(zs):
        cn = cn_constant(zs)
        n_half = (len(zs) + 1) // 2
        cn_half = cn_constant(zs.subset(np.arange(len(zs)) < n_half))
        growth = cn / cn_half - 1.0
        trunc = {"n_half": n_half, "n_full": len(zs), "cn_half": cn_half, "cn_full": cn,
                 "growth": growth}
        th = {"threshold": cfg.cn_threshold, "stable_growth": cfg.cn_stable_growth,
              "divergent_growth": cfg.cn_divergent_growth, "growth": growth}
        if growth < cfg.cn_stable_growth and cn < cfg.cn_threshold:
            cn_v = _verdict(EVIDENCE_FOR, **th)
        elif growth > cfg.cn_divergent_growth:
            cn_v = _verdict(EVIDENCE_AGAINST, **th)
        else:
            cn_v = _verdict(INCONCLUSIVE, **th)

    thin_tail = separation = None
    if len(zs):
        prof = thin_profile(zs)
        thin_tail = prof[-1][2]
        sep = separation_profile(zs)
        separation = sep[-1][1] if sep else None
    boxes = [(d, box_sup(zs, d)) for d in cfg.deltas]

    curve = eta_curve(f, cfg.t_values, r_max=cfg.r_max, mesh=cfg.mesh,
                      workers=cfg.workers, refine=cfg.refine)
    flags.extend(curve.flags)
    present = curve.present()
    sip_th = {"tol": cfg.sip_tol, "against_below": cfg.sip_against_below}
    if not present:
        sip_v = _verdict(INCONCLUSIVE, reason="empty probe region", **sip_th)
        tail_est = None
    else:
        tail = present[-1]
        tail_est = tail.estimate
        sip_th.update(t=tail.t, estimate=tail.estimate)
        if tail.estimate > 1.0 - cfg.sip_tol:
            sip_v = _verdict(EVIDENCE_FOR, **sip_th)
        elif tail.estimate < cfg.sip_against_below:
            sip_v = _verdict(EVIDENCE_AGAINST, **sip_th)
        else:
            sip_v = _verdict(INCONCLUSIVE, **sip_th)

    if sip_v["verdict"] == EVIDENCE_FOR:
        wep_v = _verdict(EVIDENCE_FOR, rule="SIP evidence implies WEP evidence")
    elif tail_est is not None and tail_est < cfg.wep_floor:
        wep_v = _verdict(EVIDENCE_AGAINST, floor=cfg.wep_floor, estimate=tail_est)
    else:
        wep_v = _verdict(INCONCLUSIVE, floor=cfg.wep_floor)

    if sip_v["verdict"] == EVIDENCE_FOR:
        m_v = _verdict(EVIDENCE_FOR, rule="SIP evidence implies M evidence")
    else:
        m_v = _verdict(INCONCLUSIVE, rule="only SIP evidence is used for M")

    if cn_v["verdict"] == EVIDENCE_FOR and m_v["verdict"] == EVIDENCE_FOR:
        p_v = _verdict(EVIDENCE_FOR, rule="P needs CN and M evidence")
    elif cn_v["verdict"] == EVIDENCE_AGAINST:
        p_v = _verdict(EVIDENCE_AGAINST, rule="P needs CN")
    else:
        p_v = _verdict(INCONCLUSIVE, rule="P needs CN and M evidence")

    area = None
    if len(f.singular):
        area = area_integral(f, cfg.area_threshold, cfg.r_max, cfg.area_grid)
    return Report(cn, trunc, thin_tail, separation, boxes, curve,
                  {"CN": cn_v, "SIP": sip_v, "WEP": wep_v, "M": m_v, "P": p_v},
                  area, flags)
