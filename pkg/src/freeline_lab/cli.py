"""Command-line interface: ``freeline-lab <subcommand> ...``.

Exit codes: 0 success, 1 a mathematical check failed, 2 usage or input
error, 3 a budget was exceeded.
"""
from __future__ import annotations

import argparse
import os
import sys

from . import io
from .census import DEFAULT_BUDGET, dimension_estimate, run_census
from .errors import (BudgetExceeded, BudgetExhausted, FreelineError,
                     InternalInconsistency, PipelineDisagreement, ValidationError)
from .fermatlab import audit_free_curve, audit_no_free_lines
from .galois import make_field
from .kersys import (LinearSystem, RationalCurve, classify_line_case,
                     globally_generated, is_basepoint_free, line_curve,
                     restricted_splitting, search_free_curve, twisted_cubic)
from .linegeom import (Hypersurface, fano_tangent_dim, line_is_free,
                       linear_part_profile, normal_bundle_line, tangent_F_lambda)
from .p1split import TwistedMap, scan_table, splitting_type
from .polyalg import LinearSubspace

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class CheckFailed(Exception):
    """A mathematical assertion did not hold; the report says which."""

    def __init__(self, report):
        super().__init__("check failed")
        self.report = report


def _load(path, kind, name):
    obj = io.parse_input(path)
    if not isinstance(obj, kind):
        raise ValidationError(f"--{name} must describe a {kind.__name__}, got {type(obj).__name__}")
    return obj


def _subspace(value, ctx, name):
    obj = io.parse_inline_or_path(value, ctx)
    if not isinstance(obj, LinearSubspace):
        raise ValidationError(f"--{name} must be a list of rows or a subspace file")
    if obj.ctx != ctx:
        obj = obj.base_change(ctx)
    return obj


def cmd_splitting(args):
    tmap = _load(args.map, TwistedMap, "map")
    split = splitting_type(tmap)
    return {"command": "splitting", "splitting": list(split.parts),
            "degree": split.degree, "table": scan_table(tmap, split)}, repr(split)


def cmd_line_report(args):
    X = _load(args.hypersurface, Hypersurface, "hypersurface")
    line = _subspace(args.line, X.ctx, "line")
    report = normal_bundle_line(X, line)
    free = line_is_free(X, line)
    point = line.rows[0]
    if args.point:
        point = io.parse_inline_or_path(args.point, X.ctx).rows[0]
    profile = linear_part_profile(X, line, point)
    out = {"command": "line-report", **report.to_json(), "free_cross_checked": free,
           "linear_parts": {"rank": profile.span_rank, "zero_space_dim": profile.tangent_dim,
                            "prefix_rank": profile.prefix_r,
                            "prefix_property": profile.prefix_property}}
    return out, f"N_l/X = {report.splitting}  free={free}  h0={report.h0}"


def cmd_kplane_report(args):
    X = _load(args.hypersurface, Hypersurface, "hypersurface")
    plane = _subspace(args.plane, X.ctx, "plane")
    h0, expected = fano_tangent_dim(X, plane)
    out = {"command": "kplane-report", "k": plane.k, "tangent_dim": h0,
           "expected_dim": expected}
    text = f"tangent dim {h0}, expected {expected}"
    if args.small:
        small = _subspace(args.small, X.ctx, "small")
        t = tangent_F_lambda(X, small, plane)
        out["flag"] = {"span_rank": t.span_rank, "tangent_dim": t.tangent_dim,
                       "expected_dim": t.expected_dim, "greedy_success": t.greedy_success,
                       "witness": [list(I) for I in t.witness] if t.witness else None}
        text += f"; flag tangent dim {t.tangent_dim} (expected {t.expected_dim})"
    return out, text


def cmd_bpf(args):
    V = _load(args.system, LinearSystem, "system")
    verdict = is_basepoint_free(V)
    return {"command": "bpf", "basepoint_free": verdict, "k": V.k, "r": V.r}, \
        "base-point free" if verdict else "has base points"


def _curve(value, V: LinearSystem, ctx):
    if value == "twisted-cubic":
        return twisted_cubic(ctx, V.k)
    obj = io.parse_inline_or_path(value, ctx)
    if isinstance(obj, LinearSubspace):
        return line_curve(obj)
    if isinstance(obj, RationalCurve):
        return obj
    raise ValidationError("--curve must be 'twisted-cubic', line rows, or a curve file")


def cmd_kernel_splitting(args):
    V = _load(args.system, LinearSystem, "system")
    if args.curve:
        C = _curve(args.curve, V, V.ctx)
        split = restricted_splitting(V, C)
        gg = globally_generated(V, C)
        return {"command": "kernel-splitting", "splitting": list(split.parts),
                "globally_generated": gg}, f"M|_C = {split}  globally generated={gg}"
    hist = classify_line_case(V, args.samples, args.seed, ext=args.ext)
    out = {"command": "kernel-splitting", "samples": hist.samples, "ext": hist.ext,
           "field": hist.field, "histogram": hist.counts, "majority": hist.majority}
    return out, f"{hist.counts} over {hist.field}"


def cmd_search_free_curve(args):
    V = _load(args.system, LinearSystem, "system")
    w = search_free_curve(V, args.budget or 100, args.seed, ext=args.ext)
    if w is None:
        return {"command": "search-free-curve", "found": False,
                "note": "budget exhausted; not a proof of nonexistence"}, "no free curve found"
    return {"command": "search-free-curve", "found": True, "stage": w.stage,
            "index": w.index, "degree": w.curve.e, "splitting": list(w.splitting.parts),
            "curve": w.curve.to_json()}, f"{w.stage} #{w.index}: M|_C = {w.splitting}"


def cmd_fermat_audit(args):
    if args.mode == "free-curve":
        if args.d is None or args.k is None or args.p is None:
            raise ValidationError("free-curve mode needs --p, --d and --k")
        audit = audit_free_curve(args.d, args.k, make_field(args.p))
        out = {"command": "fermat-audit", "mode": args.mode, **audit.to_json()}
        if not audit.free:
            raise CheckFailed(out)
        return out, f"{audit.to_json()['verdict']}: splitting {audit.splitting}"
    if args.p is None or args.n is None:
        raise ValidationError("no-free-lines mode needs --p and --n")
    audit = audit_no_free_lines(args.p, args.n, budget=args.budget or DEFAULT_BUDGET,
                                jobs=args.jobs)
    out = {"command": "fermat-audit", "mode": args.mode, **audit.to_json()}
    if not audit.passed:
        raise CheckFailed(out)
    return out, f"{audit.contained} lines, {audit.free} free, splittings {audit.splittings}"


def cmd_census(args):
    X = _load(args.hypersurface, Hypersurface, "hypersurface")
    budget = args.budget or DEFAULT_BUDGET
    result = run_census(X, args.k, args.ext, jobs=args.jobs,
                        checkpoint=args.checkpoint, budget=budget)
    out = {"command": "census", **result.to_json()}
    if args.estimate:
        est = dimension_estimate(X, args.k, args.estimate, budget=budget)
        out["counts_by_extension"] = est["counts"]
        out["heuristic"] = est["heuristic"]
    return out, f"{result.count} of {result.total_planes} {args.k}-planes lie on X"


def cmd_verify_paper(args):
    from .verify import run_suite
    out = {"command": "verify-paper", **run_suite(args.suite, args.seed)}
    lines = [f"[{'PASS' if c['passed'] else 'FAIL'}] {c['id']}. {c['name']}"
             for c in out["checks"]]
    if not out["passed"]:
        raise CheckFailed(out)
    return out, "\n".join(lines)


def _global_options():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="64-bit seed for sampling")
    common.add_argument("--ext", type=int, default=1, help="extension degree E")
    common.add_argument("--jobs", type=int,
                        default=int(os.environ.get("FREELINE_LAB_JOBS", "1")),
                        help="worker processes (default $FREELINE_LAB_JOBS or 1)")
    common.add_argument("--budget", type=int, default=None, help="enumeration or sample budget")
    common.add_argument("--output", choices=("text", "json"), default="text")
    common.add_argument("--checkpoint", default=None, help="census resume file")
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _global_options()
    parser = argparse.ArgumentParser(prog="freeline-lab",
                                     description="Free lines and curves on hypersurfaces over finite fields.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("splitting", parents=[common], help="kernel splitting of a twisted map")
    p.add_argument("--map", required=True)
    p.set_defaults(func=cmd_splitting)

    p = sub.add_parser("line-report", parents=[common], help="normal bundle of a line on X")
    p.add_argument("--hypersurface", required=True)
    p.add_argument("--line", required=True, help="JSON rows or a subspace file")
    p.add_argument("--point", help="point of the line for the linear parts (JSON [[...]])")
    p.set_defaults(func=cmd_line_report)

    p = sub.add_parser("kplane-report", parents=[common], help="tangent space to F_k(X) at a plane")
    p.add_argument("--hypersurface", required=True)
    p.add_argument("--plane", required=True)
    p.add_argument("--small", help="a smaller subspace for the flag tangent space")
    p.set_defaults(func=cmd_kplane_report)

    p = sub.add_parser("bpf", parents=[common], help="base-point-freeness certificate")
    p.add_argument("--system", required=True)
    p.set_defaults(func=cmd_bpf)

    p = sub.add_parser("kernel-splitting", parents=[common], help="splitting of M restricted to curves")
    p.add_argument("--system", required=True)
    p.add_argument("--curve", help="'twisted-cubic', line rows, or a curve file")
    p.add_argument("--samples", type=int, default=50, help="random lines when --curve is absent")
    p.set_defaults(func=cmd_kernel_splitting)

    p = sub.add_parser("search-free-curve", parents=[common], help="staged search for C with M|_C free")
    p.add_argument("--system", required=True)
    p.set_defaults(func=cmd_search_free_curve)

    p = sub.add_parser("fermat-audit", parents=[common], help="Fermat free-curve / no-free-lines audits")
    p.add_argument("--mode", choices=("free-curve", "no-free-lines"), required=True)
    p.add_argument("--p", type=int)
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_fermat_audit)

    p = sub.add_parser("census", parents=[common], help="count k-planes on X over F_{q^e}")
    p.add_argument("--hypersurface", required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--estimate", type=int, default=0, metavar="E_MAX",
                   help="also report a heuristic dimension estimate from e = 1..E_MAX")
    p.set_defaults(func=cmd_census)

    p = sub.add_parser("verify-paper", parents=[common], help="run the acceptance suite")
    p.add_argument("--suite", choices=("quick", "full"), default="quick")
    p.set_defaults(func=cmd_verify_paper, seed=7)
    return parser


def _emit(args, report, text, stream):
    if args.output == "json":
        stream.write(io.dumps(report))
    else:
        stream.write(text + "\n")


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        report, text = args.func(args)
    except CheckFailed as exc:
        _emit(args, {**exc.report, "status": "failed"}, "FAILED\n" + io.dumps(exc.report), stdout)
        return EXIT_FAILED
    except (BudgetExceeded, BudgetExhausted) as exc:
        stderr.write(f"budget: {exc}\n")
        return EXIT_BUDGET
    except (PipelineDisagreement, InternalInconsistency) as exc:
        stderr.write(f"check failed: {type(exc).__name__}: {exc}\n")
        return EXIT_FAILED
    except (FreelineError, ValueError) as exc:
        stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return EXIT_USAGE
    _emit(args, {**report, "status": "ok"}, text, stdout)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
