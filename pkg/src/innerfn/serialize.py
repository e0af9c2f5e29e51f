"""JSON and CSV encodings shared by the command-line tools.

JSON is written with sorted keys and two-space indentation; CSV uses LF
line endings and 17 significant digits.  Every artifact carries a header
with the tool version, the run configuration and SHA-256 digests of the
inputs, so identical inputs give identical bytes.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from fractions import Fraction
from pathlib import Path

import numpy as np

from innerfn import __version__
from innerfn.entropy import BoundarySet
from innerfn.evaluation import InnerFunction, SingularMeasure, ZeroSet
from innerfn.hyperbolic import DomainError


class InputError(ValueError):
    """Malformed input file; the message names the location or field."""


def _default(o):
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, complex):
        return [o.real, o.imag]
    raise TypeError(f"cannot encode {type(o).__name__}")


def _clean(o):
    """Replace non-finite floats by strings so the output stays strict JSON."""
    if isinstance(o, float) and not math.isfinite(o):
        return "inf" if o > 0 else ("-inf" if o < 0 else "nan")
    if isinstance(o, dict):
        return {str(k): _clean(v) for k, v in o.items()}
    if isinstance(o, (list, tuple)):
        return [_clean(v) for v in o]
    if isinstance(o, (np.floating, np.integer, np.ndarray, Fraction, complex)):
        return _clean(json.loads(json.dumps(o, default=_default)))
    return o


def dumps(obj) -> str:
    return json.dumps(_clean(obj), sort_keys=True, indent=2, default=_default,
                      allow_nan=False) + "\n"


def digest(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def header(command: str, config: dict, inputs) -> dict:
    """Reproducibility block: version, configuration and input digests (by file name)."""
    return {"tool": "innerfn", "version": __version__, "command": command,
            "config": config,
            "inputs": {Path(p).name: digest(p) for p in inputs}}


def load_json(path):
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise InputError(f"{path}: cannot read ({e.strerror})")
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"{path}: line {e.lineno} column {e.colno}: {e.msg}")


# zero sets -------------------------------------------------------------------

def zeroset_to_dict(zs: ZeroSet) -> dict:
    zeros = []
    if zs.model == "half-plane":
        for w, m in zip(zs.hp, zs.mult):
            zeros.append({"re": float(w.real), "im": float(w.imag), "mult": int(m)})
    else:
        for a, d, m in zip(zs.angle, zs.depth, zs.mult):
            r = 1.0 - d
            zeros.append({"re": r * math.cos(a), "im": r * math.sin(a), "mult": int(m),
                          "depth": float(d)})
    out = {"model": zs.model, "zeros": zeros, "metadata": zs.metadata}
    if zs.tail_blaschke_sum_bound is not None:
        out["tail_bound"] = zs.tail_blaschke_sum_bound
    if zs.tail_min_modulus is not None:
        out["tail_min_modulus"] = zs.tail_min_modulus
    return out


def _num(v, where):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise InputError(f"{where}: must be a finite number, got {v!r}")
    return float(v)


def zeroset_from_dict(d, where="zeros file") -> ZeroSet:
    if not isinstance(d, dict):
        raise InputError(f"{where}: top level must be a JSON object")
    model = d.get("model", "disc")
    if model not in ("disc", "half-plane"):
        raise InputError(f"{where}: model: must be 'disc' or 'half-plane', got {model!r}")
    zeros = d.get("zeros")
    if not isinstance(zeros, list):
        raise InputError(f"{where}: zeros: must be a list")
    pts, mult, depth = [], [], []
    for i, z in enumerate(zeros):
        loc = f"{where}: zeros[{i}]"
        if not isinstance(z, dict):
            raise InputError(f"{loc}: must be an object")
        re_, im_ = _num(z.get("re"), f"{loc}.re"), _num(z.get("im"), f"{loc}.im")
        m = z.get("mult", 1)
        if not isinstance(m, int) or isinstance(m, bool) or m < 1:
            raise InputError(f"{loc}.mult: must be an integer >= 1, got {m!r}")
        pts.append(complex(re_, im_))
        mult.append(m)
        if model == "disc":
            if "depth" in z:
                dz = _num(z["depth"], f"{loc}.depth")
                if not (0.0 < dz <= 1.0) or abs(math.hypot(re_, im_) - (1.0 - dz)) > 1e-9:
                    raise InputError(f"{loc}.depth: inconsistent with re/im")
            else:
                dz = 1.0 - math.hypot(re_, im_)
            if not (0.0 < dz <= 1.0):
                raise InputError(f"{loc}: must lie inside the unit disc")
            depth.append(dz)
        elif not im_ > 0.0:
            raise InputError(f"{loc}.im: must be > 0 in the half-plane model")
    kw = {"metadata": d.get("metadata") or {}}
    if d.get("tail_bound") is not None:
        kw["tail_blaschke_sum_bound"] = _num(d["tail_bound"], f"{where}: tail_bound")
    if d.get("tail_min_modulus") is not None:
        kw["tail_min_modulus"] = _num(d["tail_min_modulus"], f"{where}: tail_min_modulus")
    try:
        if model == "half-plane":
            return ZeroSet.from_points(pts, mult, model="half-plane", **kw)
        ang = np.angle(np.asarray(pts, dtype=complex)) if pts else np.zeros(0)
        return ZeroSet.from_polar(ang, np.asarray(depth), np.asarray(mult, dtype=np.int64), **kw)
    except DomainError as e:
        raise InputError(f"{where}: {e}")


# measures and inner functions --------------------------------------------------

def _turns(v, where):
    if isinstance(v, str):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError):
            raise InputError(f"{where}: not a rational number: {v!r}")
    return Fraction(_num(v, where))


def measure_to_dict(mu: SingularMeasure) -> dict:
    return {"atoms": [{"angle_turns": str(t), "mass": float(m)}
                      for t, m in zip(mu.turns, mu.masses)]}


def measure_from_dict(d, where="measure file") -> SingularMeasure:
    atoms = d.get("atoms") if isinstance(d, dict) else None
    if not isinstance(atoms, list):
        raise InputError(f"{where}: atoms: must be a list")
    turns, masses = [], []
    for i, a in enumerate(atoms):
        if not isinstance(a, dict):
            raise InputError(f"{where}: atoms[{i}]: must be an object")
        turns.append(_turns(a.get("angle_turns"), f"{where}: atoms[{i}].angle_turns"))
        masses.append(_num(a.get("mass"), f"{where}: atoms[{i}].mass"))
    try:
        return SingularMeasure(tuple(turns), np.asarray(masses))
    except DomainError as e:
        raise InputError(f"{where}: {e}")


def inner_from_dict(d, where="input file") -> InnerFunction:
    """A zero-set document, a measure document, or one object carrying both keys."""
    if not isinstance(d, dict):
        raise InputError(f"{where}: top level must be a JSON object")
    if "zeros" not in d and "atoms" not in d:
        raise InputError(f"{where}: needs 'zeros' and/or 'atoms'")
    zs = zeroset_from_dict(d, where) if "zeros" in d else ZeroSet.empty()
    mu = measure_from_dict(d, where) if "atoms" in d else SingularMeasure.empty()
    return InnerFunction(zs, mu)


def boundary_from_dict(d, where="boundary file") -> BoundarySet:
    arcs = d.get("arcs") if isinstance(d, dict) else None
    if not isinstance(arcs, list) or not arcs:
        raise InputError(f"{where}: arcs: must be a nonempty list of [start, end] pairs")
    pairs = []
    for i, a in enumerate(arcs):
        if not isinstance(a, list) or len(a) != 2:
            raise InputError(f"{where}: arcs[{i}]: must be a [start, end] pair")
        pairs.append((_turns(a[0], f"{where}: arcs[{i}][0]"), _turns(a[1], f"{where}: arcs[{i}][1]")))
    try:
        return BoundarySet.from_intervals(pairs)
    except DomainError as e:
        raise InputError(f"{where}: {e}")


# CSV -------------------------------------------------------------------------

def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return str(v)


def csv_text(rows, head: dict | None = None) -> str:
    """RFC 4180 rows with LF endings, preceded by ``#`` comment lines holding ``head``."""
    buf = io.StringIO()
    if head is not None:
        for line in dumps(head).splitlines():
            buf.write("# " + line + "\n")
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def read_csv(path):
    """Rows of a CSV written by :func:`csv_text`, comment lines skipped."""
    with open(path, newline="") as fh:
        return list(csv.reader(line for line in fh if not line.startswith("#")))
