"""Command line: residual reports, coefficient tables, verdicts, constructions and flow checks.

Every command prints a JSON report with the fields ``command``, ``inputs``,
``outputs``, ``comparisons``, ``passed`` and ``tolerances``. Exit status is
0 when the command ran and its checks passed, 1 when a check failed and 2
on a usage or input error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import cyclic as cy
from . import ruled as ru
from . import solutions as so
from .geometry import IndeterminateLambdaError, fit_lambda, grid, shrinker_residual, torus_patch
from .numerics import BracketError, eval_jet2

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _plain(x):
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        v = float(x)
        return v if math.isfinite(v) else repr(v)
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    return x


def _report(argv, inputs, outputs, comparisons, passed, tolerances) -> dict:
    return _plain({
        "command": list(argv),
        "inputs": inputs,
        "outputs": outputs,
        "comparisons": comparisons,
        "passed": bool(passed),
        "tolerances": tolerances,
    })


def _read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read JSON from {path}: {exc}") from exc


def _rel(x, y):
    return abs(x - y) / max(1.0, abs(y))


def _write(path, text):
    Path(path).write_text(text)


# ---------------------------------------------------------------------------
# residual
# ---------------------------------------------------------------------------

def _surface(args):
    kind = args.surface
    if kind in ("sphere", "cylinder", "plane"):
        patch, lam0 = so.canonical_shrinker(kind, args.radius)
        if kind == "sphere":
            return patch, lam0, (0.05, math.pi - 0.05), True
        return patch, lam0, (-1.0, 1.0), True
    if kind == "torus":
        return torus_patch(args.radius, args.minor), None, (0.0, 2.0 * math.pi), False
    if kind == "profile":
        if not args.profile:
            raise UsageError("--surface profile needs --profile FILE")
        try:
            curve = so.SampledCurve.from_csv(Path(args.profile).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
        patch = so.revolve_profile(curve)
        return patch, None, (0.0, patch.span), False
    raise UsageError(f"unknown surface {kind}")


def cmd_residual(args, argv):
    patch, lam0, s_range, s_end = _surface(args)
    lam = args.lam if args.lam is not None else (lam0 if lam0 is not None else 1.0)
    S, T = grid(args.grid, args.grid, s_range, (0.0, 2.0 * math.pi), endpoint_s=s_end)
    res = np.abs(shrinker_residual(eval_jet2(patch, S, T), lam))
    outputs = {"max_abs_residual": float(res.max()), "lambda": lam}
    comparisons = {}
    try:
        fit, spread = fit_lambda(patch, S, T)
        outputs.update(fitted_lambda=fit, fit_spread=spread)
        if lam0 is not None:
            comparisons["lambda"] = {"fitted": fit, "canonical": lam0, "rel_delta": _rel(fit, lam0)}
    except IndeterminateLambdaError:
        outputs["fitted_lambda"] = None
    passed = outputs["max_abs_residual"] < args.tol
    inputs = {"surface": args.surface, "radius": args.radius, "grid": args.grid}
    return _report(argv, inputs, outputs, comparisons, passed, {"max_abs_residual": args.tol}), None


# ---------------------------------------------------------------------------
# coeffs
# ---------------------------------------------------------------------------

def _cyclic_jet(args, rng):
    if args.jet:
        try:
            return cy.CyclicJet.from_dict(_read_json(args.jet))
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    return cy.random_cyclic_jet(rng)


def _ruled_jets(args, rng):
    if args.jet:
        data = _read_json(args.jet)
        items = data if isinstance(data, list) else [data]
        try:
            return [ru.RuledJet.from_dict(d) for d in items]
        except ValueError as exc:
            raise UsageError(str(exc)) from exc
    return [ru.random_ruled_jet(rng)]


def cmd_coeffs(args, argv):
    rng = np.random.default_rng(args.seed)
    if args.family == "cyclic":
        cj = _cyclic_jet(args, rng)
        lhs = cy.cyclic_lhs_poly(cj, args.order).padded(max(args.order, 1))
        rhs = cy.cyclic_rhs_poly(cj, args.order).padded(max(args.order, 1))
        n = max(lhs.order, rhs.order)
        quoted, corrected = cy.closed_forms(cj), cy.corrected_closed_forms(cj)
        extracted = cy.extracted_coefficients(cj)
        comparisons = {}
        for key, val in extracted.items():
            comparisons[key] = {
                "extracted": val, "quoted": quoted[key], "corrected": corrected[key],
                "delta_quoted": _rel(quoted[key], val), "delta_corrected": _rel(corrected[key], val),
            }
        passed = all(c["delta_corrected"] < args.tol for c in comparisons.values())
        table = [[j, lhs.a[j], lhs.b[j - 1] if j else 0.0, rhs.a[j], rhs.b[j - 1] if j else 0.0]
                 for j in range(n + 1)]
        outputs = {"lhs": {"a": lhs.a, "b": lhs.b}, "rhs": {"a": rhs.a, "b": rhs.b}}
        report = _report(argv, {"jet": cj.to_dict(), "order": args.order}, outputs, comparisons, passed,
                         {"relative": args.tol})
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["j", "a_j", "b_j", "ap_j", "bp_j"])
        w.writerows([[r[0]] + [repr(float(v)) for v in r[1:]] for r in table])
        w.writerow([])
        w.writerow(["coefficient", "extracted", "quoted", "corrected", "delta_quoted", "delta_corrected"])
        for key, c in comparisons.items():
            w.writerow([key] + [repr(float(c[f])) for f in
                                ("extracted", "quoted", "corrected", "delta_quoted", "delta_corrected")])
        return report, buf.getvalue()
    rj = _ruled_jets(args, rng)[0]
    poly = ru.ruled_residual_poly(rj, args.lam)
    oracle = ru.vandermonde_residual_poly(rj, args.lam)
    shown = ru.closed_form_poly(rj, args.lam)
    comparisons = {}
    for name in ("c0", "c1", "c2", "c3"):
        v = getattr(poly, name)
        comparisons[name] = {"analytic": v, "vandermonde": getattr(oracle, name), "displayed": getattr(shown, name),
                             "delta_oracle": _rel(getattr(oracle, name), v)}
    passed = all(c["delta_oracle"] < args.tol for c in comparisons.values())
    report = _report(argv, {"jet": rj.to_dict(), "lambda": args.lam}, {"poly": poly.to_dict()}, comparisons,
                     passed, {"relative": args.tol})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["coefficient", "analytic", "vandermonde", "displayed"])
    for name, c in comparisons.items():
        w.writerow([name, repr(c["analytic"]), repr(c["vandermonde"]), repr(c["displayed"])])
    return report, buf.getvalue()


# ---------------------------------------------------------------------------
# classify
# ---------------------------------------------------------------------------

def cmd_classify(args, argv):
    rng = np.random.default_rng(args.seed)
    if args.family == "cyclic":
        cj = _cyclic_jet(args, rng)
        try:
            out = cy.lemma2_classify(cj, args.lambda_hint, tol=args.tol).to_dict()
        except cy.FrameDegenerateError as exc:
            return _report(argv, {"jet": cj.to_dict()}, {"error": str(exc)}, {}, False, {"tol": args.tol}), None
        return _report(argv, {"jet": cj.to_dict()}, out, {}, True, {"tol": args.tol}), None
    if args.family == "parallel":
        if args.jet:
            try:
                pj = cy.ParallelCircleJet.from_dict(_read_json(args.jet))
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
        else:
            pj = cy.random_parallel_jet(rng)
        an = cy.parallel_circle_analysis(pj, args.lam, tol=args.tol)
        out = {"verdict": an.verdict, "witness": an.witness,
               "rhs": {"a": an.rhs.a, "b": an.rhs.b}, "lhs": {"a": an.lhs.a, "b": an.lhs.b}}
        return _report(argv, {"jet": pj.to_dict(), "lambda": args.lam}, out, {}, True, {"tol": args.tol}), None
    jets = [] if args.rulings_parallel and not args.jet else _ruled_jets(args, rng)
    inputs = {"jets": [j.to_dict() for j in jets], "lambda": args.lam, "rulings_parallel": args.rulings_parallel}
    try:
        out = ru.theorem2_classify(jets, args.lam, args.rulings_parallel, tol=args.tol)
    except ru.InconsistentJetsError as exc:
        out = {"verdict": "Contradiction", "step": exc.step, "message": str(exc), "witness": exc.witness}
    return _report(argv, inputs, out, {}, True, {"tol": args.tol}), None


# ---------------------------------------------------------------------------
# construct
# ---------------------------------------------------------------------------

def cmd_construct(args, argv):
    kind = args.kind
    tols = {"tol": args.tol}
    if kind in ("sphere", "cylinder"):
        patch, lam = so.canonical_shrinker(kind, args.radius)
        s_range = (0.05, math.pi - 0.05) if kind == "sphere" else (-1.0, 1.0)
        S, T = grid(args.grid, args.grid, s_range, (0.0, 2.0 * math.pi))
        res = float(np.abs(shrinker_residual(eval_jet2(patch, S, T), lam)).max())
        fit, spread = fit_lambda(patch, S, T)
        out = {"lambda": lam, "max_abs_residual": res, "fitted_lambda": fit, "fit_spread": spread}
        comp = {"lambda": {"fitted": fit, "canonical": lam, "rel_delta": _rel(fit, lam)}}
        return _report(argv, {"kind": kind, "radius": args.radius}, out, comp, res < args.tol, tols), None
    if kind == "angenent":
        try:
            res = so.angenent_profile_shoot(args.lam, tuple(args.bracket) if args.bracket else None,
                                            tol=args.tol, n=args.n)
        except BracketError as exc:
            raise UsageError(str(exc)) from exc
        out = res.to_dict()
        passed = res.success
        if args.grid:
            patch = so.revolve_profile(res.curve)
            S, T = grid(args.grid, max(args.grid // 2, 4), (0.0, patch.span), (0.0, 2.0 * math.pi), endpoint_s=False)
            out["surface_max_abs_residual"] = float(np.abs(shrinker_residual(eval_jet2(patch, S, T), args.lam)).max())
        out["ode_residual"] = so.profile_ode_residual(res.curve, args.lam)
        inputs = {"kind": kind, "lambda": args.lam, "bracket": args.bracket, "n": args.n}
        return _report(argv, inputs, out, {}, passed, tols), res.curve.to_csv()
    # abresch-langer
    if args.pq:
        res = so.abresch_langer_solve(args.lam, args.pq[0], args.pq[1], tol=args.tol, n=args.n)
    else:
        res = so.abresch_langer_shoot(args.lam, args.k0, tol=args.tol, n=args.n)
    out = res.to_dict()
    if res.success:
        out["ode_residual"] = so.planar_ode_residual(res.curve, args.lam)
    inputs = {"kind": kind, "lambda": args.lam, "k0": args.k0, "pq": args.pq, "n": args.n}
    data = res.curve.to_csv() if res.curve is not None else None
    return _report(argv, inputs, out, {}, res.success, tols), data


# ---------------------------------------------------------------------------
# flowcheck
# ---------------------------------------------------------------------------

def cmd_flowcheck(args, argv):
    if args.input:
        try:
            curve = so.SampledCurve.from_csv(Path(args.input).read_text())
        except (OSError, ValueError) as exc:
            raise UsageError(str(exc)) from exc
        curve = curve.resample(args.n)
    elif args.curve == "circle":
        curve = so.circle(args.radius, args.n)
    elif args.curve == "square":
        curve = so.square(args.radius, args.n)
    else:
        curve = so.abresch_langer_solve(args.lam, 2, 3).curve.resample(args.n)
    flow = so.csf_evolve(curve, args.T)
    dist = so.self_similarity_check(curve, flow.curve, args.lam, args.T)
    out = {"hausdorff": dist, "flow": flow.to_dict()}
    if args.curve == "circle" and not args.input:
        r = np.hypot(*flow.curve.points.T)
        out["max_radial_error"] = float(np.max(np.abs(r - math.sqrt(args.radius ** 2 - 2.0 * args.T))))
    inputs = {"curve": args.input or args.curve, "T": args.T, "lambda": args.lam, "n": args.n}
    passed = flow.completed and dist < args.tol
    return _report(argv, inputs, out, {}, passed, {"hausdorff": args.tol}), flow.curve.to_csv()


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common(p, tol):
    p.add_argument("--tol", type=float, default=tol, help=f"check tolerance (default {tol})")
    p.add_argument("--seed", type=int, default=0, help="seed for randomly generated inputs")
    p.add_argument("--out", help="write the data product (CSV) to this file")
    p.add_argument("--format", choices=("json", "csv"), default="json", help="stdout format")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="selfsim", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("residual", help="max residual of a surface on a chart grid")
    p.add_argument("--surface", choices=("sphere", "cylinder", "plane", "torus", "profile"), required=True)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--minor", type=float, default=0.5, help="tube radius for --surface torus")
    p.add_argument("--profile", help="profile CSV (s,r,z) for --surface profile")
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--grid", type=int, default=64)
    _common(p, 1e-9)
    p.set_defaults(func=cmd_residual)

    p = sub.add_parser("coeffs", help="coefficient tables with closed-form comparison")
    p.add_argument("family", choices=("cyclic", "ruled"))
    p.add_argument("--jet", help="jet JSON (random jet from --seed when omitted)")
    p.add_argument("--order", type=int, default=4)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    _common(p, 1e-8)
    p.set_defaults(func=cmd_coeffs)

    p = sub.add_parser("classify", help="case analysis for a jet")
    p.add_argument("family", choices=("cyclic", "parallel", "ruled"))
    p.add_argument("--jet", help="jet JSON (a list of ruled jets is accepted)")
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--lambda-hint", type=float)
    p.add_argument("--rulings-parallel", action="store_true")
    _common(p, 1e-9)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("construct", help="build a shrinker")
    p.add_argument("kind", choices=("sphere", "cylinder", "angenent", "abresch-langer"))
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--bracket", type=float, nargs=2, metavar=("LO", "HI"))
    p.add_argument("--k0", type=float, default=1.0)
    p.add_argument("--pq", type=int, nargs=2, metavar=("P", "Q"), help="solve k0 for rotation ratio P/Q")
    p.add_argument("--n", type=int, default=None, help="number of curve samples")
    p.add_argument("--grid", type=int, default=0, help="surface check grid (sphere/cylinder: N x N, angenent: N x N/2)")
    _common(p, 1e-8)
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("flowcheck", help="curve-shortening flow against the homothety law")
    p.add_argument("--curve", choices=("circle", "square", "abresch-langer"), default="circle")
    p.add_argument("--input", help="closed planar curve CSV (s,x,y)")
    p.add_argument("--T", type=float, default=0.05)
    p.add_argument("--lambda", dest="lam", type=float, default=1.0)
    p.add_argument("--radius", type=float, default=1.0, help="circle radius or square side")
    p.add_argument("--n", type=int, default=1000)
    _common(p, 1e-3)
    p.set_defaults(func=cmd_flowcheck)
    return parser


def _defaults(args):
    if getattr(args, "command", None) == "construct":
        if args.n is None:
            args.n = 32768 if args.kind == "angenent" else 2048
        if args.grid == 0 and args.kind in ("sphere", "cylinder"):
            args.grid = 64


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    _defaults(args)
    try:
        report, data = args.func(args, argv)
    except (UsageError, ValueError) as exc:
        print(f"selfsim: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.out and data is not None:
        _write(args.out, data)
    if args.format == "csv":
        if data is None:
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["key", "value"])
            for k, v in report["outputs"].items():
                w.writerow([k, json.dumps(v)])
            data = buf.getvalue()
        sys.stdout.write(data)
    else:
        sys.stdout.write(json.dumps(report, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if report["passed"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
