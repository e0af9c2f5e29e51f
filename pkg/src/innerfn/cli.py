"""Command-line front end.

Exit codes: 0 success, 2 input error, 3 completed but degenerate (every
requested eta sample had an empty probe region).
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from innerfn import __version__, diagnostics, entropy, kernels, serialize, zoo
from innerfn.evaluation import as_inner, tail_penalty
from innerfn.hyperbolic import TWO_PI, DomainError
from innerfn.serialize import InputError

EXIT_OK, EXIT_INPUT, EXIT_DEGENERATE = 0, 2, 3
_NOT_CONFIG = {"workers", "output", "eta_csv", "func"}
# inputs are identified by name here and by digest in the header
_PATH_ARGS = {"input", "spec", "measure", "set"}


def _config(args) -> dict:
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in _NOT_CONFIG:
            continue
        out[k] = Path(v).name if k in _PATH_ARGS and v is not None else v
    return out


def _write(path, text: str):
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _t_values(text: str):
    try:
        vals = [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"--t-values: not a comma-separated list of numbers: {text!r}")
    if not vals or any(not (0.0 < v < 1.0) for v in vals):
        raise InputError("--t-values: every value must lie in (0, 1)")
    return vals


def _load_inner(args):
    doc = serialize.load_json(args.input)
    f = serialize.inner_from_dict(doc, args.input)
    inputs = [args.input]
    if getattr(args, "measure", None):
        mu = serialize.measure_from_dict(serialize.load_json(args.measure), args.measure)
        if len(f.singular):
            raise InputError(f"{args.measure}: the input already carries atoms")
        f = type(f)(f.blaschke, mu)
        inputs.append(args.measure)
    return f, inputs


def _check_range(name, value, lo, hi, lo_open=True, hi_open=True):
    ok = (value > lo if lo_open else value >= lo) and (value < hi if hi_open else value <= hi)
    if not ok or not math.isfinite(value):
        raise InputError(f"--{name}: {value!r} out of range")


# commands ----------------------------------------------------------------------

def run_generate(args) -> int:
    doc = serialize.load_json(args.spec)
    spec = zoo.GeneratorSpec.from_dict(doc)
    out = zoo.generate(spec)
    head = serialize.header("generate", spec.to_dict(), [args.spec])
    if isinstance(out, entropy.BoundarySet):
        body = out.to_dict()
        body["metadata"] = {"generator": spec.kind, "parameters": spec.parameters,
                            "truncation": {"depth": spec.parameters.get("depth")}}
    else:
        body = serialize.zeroset_to_dict(out)
    body["header"] = head
    _write(args.output, serialize.dumps(body))
    return EXIT_OK


def _eta(args, f):
    _check_range("mesh", args.mesh, 0.0, math.inf)
    _check_range("r-max", args.r_max, 0.0, 1.0)
    return diagnostics.eta_curve(f, _t_values(args.t_values), r_max=args.r_max, mesh=args.mesh,
                                 workers=args.workers, refine=args.refine)


def run_diagnose(args) -> int:
    f, inputs = _load_inner(args)
    _check_range("mesh", args.mesh, 0.0, math.inf)
    _check_range("r-max", args.r_max, 0.0, 1.0)
    cfg = diagnostics.ClassifyConfig(
        t_values=tuple(_t_values(args.t_values)), mesh=args.mesh, r_max=args.r_max,
        refine=args.refine, workers=args.workers, cn_threshold=args.cn_threshold,
        sip_tol=args.sip_tol)
    report = diagnostics.classify(f, cfg)
    head = serialize.header("diagnose", _config(args), inputs)
    body = report.to_dict()
    body["header"] = head
    body["probed_region"] = {"r_max": args.r_max, "mesh": args.mesh}
    _write(args.output, serialize.dumps(body))
    if args.eta_csv:
        _write(args.eta_csv, serialize.csv_text(report.eta_curve.csv_rows(), head))
    if "empty_region" in report.eta_curve.flags:
        print("innerfn: warning: probe region empty at every requested t", file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


def run_eta(args) -> int:
    f, inputs = _load_inner(args)
    curve = _eta(args, f)
    head = serialize.header("eta", _config(args), inputs)
    _write(args.output, serialize.csv_text(curve.csv_rows(), head))
    return EXIT_DEGENERATE if "empty_region" in curve.flags else EXIT_OK


def sublevel_rows(f, eps: float, n_radial: int, n_angular: int, r_max: float, mode: str = "sip"):
    """Polar grid rows ``(re, im, modulus, in_set)`` for the sublevel set of ``mode``.

    Radii are ``r_max (i + 1) / n_radial``, angles ``2 pi j / n_angular``.
    """
    f = as_inner(f)
    rows = [("re", "im", "modulus", "in_set")]
    if n_radial == 0 or n_angular == 0:
        return rows
    r = r_max * (np.arange(n_radial) + 1.0) / n_radial
    ang = TWO_PI * (np.arange(n_angular) / n_angular)
    rr, aa = np.meshgrid(r, ang, indexing="ij")
    rr, aa = rr.ravel(), aa.ravel()
    nb, p, _ = kernels.point_sums((np.cos(aa), np.sin(aa), 1.0 - rr), f.blaschke.polar(),
                                  f.singular.polar())
    mod = np.exp(-(nb + p))
    lower = mod * np.exp(-tail_penalty(f.blaschke, 1.0 - rr))
    upper_ok = mod < 1.0 - eps
    if mode == "p_class":
        inside = upper_ok
    elif mode == "m_class":
        inside = upper_ok & (lower > eps)
    else:
        inside = upper_ok & (lower > 0.0)
    for x, y, m, s in zip(rr * np.cos(aa), rr * np.sin(aa), mod, inside):
        rows.append((float(x), float(y), float(m), int(s)))
    return rows


def run_sublevel(args) -> int:
    f, inputs = _load_inner(args)
    _check_range("eps", args.eps, 0.0, 1.0)
    _check_range("r-max", args.r_max, 0.0, 1.0)
    if args.mode == "m_class" and not args.eps < 0.5:
        raise InputError("--eps: m_class needs eps < 1/2")
    if args.n_radial < 0 or args.n_angular < 0:
        raise InputError("--n-radial/--n-angular: must be >= 0")
    rows = sublevel_rows(f, args.eps, args.n_radial, args.n_angular, args.r_max, args.mode)
    head = serialize.header("sublevel", _config(args), inputs)
    _write(args.output, serialize.csv_text(rows, head))
    return EXIT_OK


def run_entropy(args) -> int:
    E = serialize.boundary_from_dict(serialize.load_json(args.input), args.input)
    if args.max_level < args.min_level or args.min_level < 2:
        raise InputError("--max-level/--min-level: need 2 <= min-level <= max-level")
    fam = entropy.whitney_families(E, args.max_level, args.min_level)
    body = {
        "header": serialize.header("entropy", _config(args), [args.input]),
        "entropy_integral": entropy.entropy_integral(E),
        "measure_turns": E.measure_turns,
        "positive_measure": E.positive_measure,
        "families": fam.to_dict(),
        "sums": {"G_entropy": entropy.g_entropy_sum(fam.G),
                 "G_entropy_log2": entropy.g_entropy_sum_log2(fam.G),
                 "F": entropy.f_sum(fam.F), "L": entropy.l_sum(fam.G)},
        "truncation": {"max_level": args.max_level, "residual_count": len(fam.residual)},
    }
    _write(args.output, serialize.dumps(body))
    return EXIT_OK


def run_sipify(args) -> int:
    mu = serialize.measure_from_dict(serialize.load_json(args.measure), args.measure)
    E = serialize.boundary_from_dict(serialize.load_json(args.set), args.set)
    if args.max_level < 3:
        raise InputError("--max-level: must be >= 3")
    try:
        s = entropy.build_sipification(mu, E, args.max_level)
    except DomainError as e:
        raise InputError(str(e))
    claims = entropy.claim_ratios(s)
    body = {
        "header": serialize.header("sipify", _config(args), [args.measure, args.set]),
        "B1": serialize.zeroset_to_dict(s.B1),
        "B2": serialize.zeroset_to_dict(s.B2),
        "metadata": s.metadata,
        "claim_fitted_C": claims["fitted_C"],
        "b2_tail": {str(k): v for k, v in entropy.b2_tail(s).items()},
    }
    _write(args.output, serialize.dumps(body))
    return EXIT_OK


# parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="innerfn", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"innerfn {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--workers", type=int, default=1,
                        help="threads for probe evaluation; output does not depend on it (default 1)")

    def eta_opts(sp, mesh):
        sp.add_argument("--mesh", type=float, default=mesh,
                        help=f"hyperbolic mesh step in d_H (default {mesh})")
        sp.add_argument("--r-max", type=float, default=diagnostics.DEFAULT_R_MAX,
                        help="outer radius of the probed disc (default 1 - 2^-12)")
        sp.add_argument("--t-values", default=",".join(str(t) for t in diagnostics.DEFAULT_T_GRID),
                        help="comma-separated t grid in (0, 1) (default 0.05..0.95 step 0.05, 0.99)")
        sp.add_argument("--refine", type=int, default=0,
                        help="local refinement levels around each arg-min (default 0)")

    g = sub.add_parser("generate", help="zero set (or boundary set) from a generator spec")
    g.add_argument("spec", help="GeneratorSpec JSON: {kind, parameters, seed}")
    g.add_argument("-o", "--output", required=True)
    g.set_defaults(func=run_generate)

    d = sub.add_parser("diagnose", help="classification report and eta curve")
    d.add_argument("input", help="zero-set JSON, optionally with 'atoms'")
    d.add_argument("--measure", help="singular measure JSON")
    d.add_argument("-o", "--output", required=True, help="report JSON")
    d.add_argument("--eta-csv", help="eta curve CSV")
    eta_opts(d, 0.1)
    d.add_argument("--cn-threshold", type=float, default=25.0,
                   help="CN constant below which stable values count as evidence (default 25)")
    d.add_argument("--sip-tol", type=float, default=0.1,
                   help="SIP evidence needs eta(t_max) > 1 - tol (default 0.1)")
    common(d)
    d.set_defaults(func=run_diagnose)

    e = sub.add_parser("eta", help="eta curve CSV")
    e.add_argument("input")
    e.add_argument("--measure")
    e.add_argument("-o", "--output", required=True)
    eta_opts(e, 0.05)
    common(e)
    e.set_defaults(func=run_eta)

    s = sub.add_parser("sublevel", help="polar grid samples of |Theta| with sublevel membership")
    s.add_argument("input")
    s.add_argument("--measure")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--eps", type=float, default=0.5, help="set {|Theta| < 1 - eps} (default 0.5)")
    s.add_argument("--mode", choices=diagnostics.NARROW_MODES, default="sip",
                   help="sip: 0 < |Theta| < 1-eps; m_class: eps < |Theta| < 1-eps; "
                        "p_class: |Theta| < 1-eps (default sip)")
    s.add_argument("--n-radial", type=int, default=64, help="radial samples (default 64)")
    s.add_argument("--n-angular", type=int, default=256, help="angular samples (default 256)")
    s.add_argument("--r-max", type=float, default=0.99, help="outer grid radius (default 0.99)")
    s.set_defaults(func=run_sublevel)

    en = sub.add_parser("entropy", help="entropy integral and Whitney families of a boundary set")
    en.add_argument("input", help="boundary set JSON {arcs: [[start, end], ...]} in turns")
    en.add_argument("-o", "--output", required=True)
    en.add_argument("--max-level", type=int, default=12, help="deepest dyadic level (default 12)")
    en.add_argument("--min-level", type=int, default=2, help="first dyadic level (default 2)")
    en.set_defaults(func=run_entropy)

    sp = sub.add_parser("sipify", help="B1, B2 zero sets for a singular measure on a boundary set")
    sp.add_argument("--measure", required=True)
    sp.add_argument("--set", required=True, help="boundary set JSON")
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--max-level", type=int, default=8, help="deepest dyadic level (default 8)")
    sp.set_defaults(func=run_sipify)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "workers", 1) < 1:
        parser.error("--workers must be >= 1")
    try:
        return args.func(args)
    except (InputError, zoo.GeneratorSpecError, DomainError) as e:
        print(f"innerfn: error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
