"""Command-line driver: scheme validation, scheme design, sweeps, slope fits.

Exit codes: 0 ok, 1 validation failure, 2 runtime failure, 3 reference
inconsistency.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import bench, designer
from .errors import CxsplitError, ReferenceInconsistent
from .order_conditions import residuals
from .schemes import (BUILTIN_TOL, FILE_TOL, builtin_names, builtin_scheme,
                      expand, load_scheme, serialize_scheme, validate_scheme)

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2
EXIT_REFERENCE = 3


def _load_any(spec):
    path = Path(spec)
    if path.exists():
        return load_scheme(path.read_text()), FILE_TOL
    return builtin_scheme(spec), BUILTIN_TOL


def cmd_validate(args):
    status = EXIT_OK
    for name in args.schemes:
        try:
            scheme, tol = _load_any(name)
        except CxsplitError as exc:
            print(f"{name}: INVALID ({exc})")
            status = EXIT_VALIDATION
            continue
        report = validate_scheme(scheme, tol=tol)
        res = residuals(expand(scheme))
        ok = report.consistent(tol) and (not scheme.symmetric
                                         or report.symmetry_defect < tol)
        print(f"{scheme.name}: pattern={scheme.pattern} stages={scheme.stages} "
              f"order={scheme.claimed_order}")
        print(f"  sum_a = {report.sum_a:.17g}  sum_b = {report.sum_b:.17g}")
        print(f"  symmetry_defect = {report.symmetry_defect:.3e}  "
              f"min_re_a = {report.min_re_a:.6g}  min_re_b = {report.min_re_b:.6g}")
        print(f"  p_aba = {abs(res.p_aba):.6e}  p_abb = {abs(res.p_abb):.6e}  "
              f"p_abaaa = {abs(res.p_abaaa):.6e}")
        if not ok:
            print(f"  FAILED structural validation (tol {tol:g})")
            status = EXIT_VALIDATION
    return status


def cmd_design(args):
    if args.scan:
        if args.stages != 4:
            print("--scan supports 4-stage designs only", file=sys.stderr)
            return EXIT_RUNTIME
        a1_opt, sol = designer.scan_a1(grid_points=args.grid_points,
                                       refine_tol=1e-10, seed=args.seed)
        fixed = (a1_opt, 0.5 - a1_opt)
        print(f"a1_opt = {a1_opt:.17g}")
    else:
        if args.a is not None:
            fixed = tuple(_parse_fraction(tok) for tok in args.a.split(","))
        elif args.a1 is not None:
            fixed = (args.a1,) if args.stages == 4 else None
            if fixed is None:
                print("6-stage designs need --a a1,a2,a3", file=sys.stderr)
                return EXIT_RUNTIME
        elif args.stages == 6:
            fixed = (1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0)
        else:
            print("give --a1, --a, or --scan", file=sys.stderr)
            return EXIT_RUNTIME
        sol = designer.solve_b(designer.DesignProblem(args.stages, fixed),
                               starts=args.starts, seed=args.seed)
    problem = designer.DesignProblem(args.stages, fixed)
    scheme = sol.scheme(problem, name=args.name)
    print(f"|Re(p_abaaa)| = {abs(sol.re_p_abaaa):.6e}")
    print(f"residual_norm = {sol.residual_norm:.3e}")
    text = serialize_scheme(scheme)
    if args.out:
        Path(args.out).write_text(text)
        print(f"wrote {args.out}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _parse_fraction(token):
    if "/" in token:
        num, den = token.split("/")
        return float(num) / float(den)
    return float(token)


def _parse_nsteps(text):
    return [int(tok) for tok in text.split(",")]


def cmd_sweep(args):
    params = {"epsilon": args.eps} if args.problem == "osc" and args.eps else {}
    spec = bench.SweepSpec(
        problem=args.problem,
        methods=args.methods.split(","),
        n_steps_grid=_parse_nsteps(args.nsteps),
        params=params,
        a_flow_kind=args.aflow,
        freeze_convention="literal" if args.freeze == "literal" else "midpoint",
        cache_dir=args.cache_dir,
    )
    records = bench.sweep(spec)
    csv_text = bench.records_to_csv(records)
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(csv_text)
    else:
        sys.stdout.write(csv_text)
    return EXIT_OK


def cmd_converge(args):
    params = {"epsilon": args.eps} if args.problem == "osc" and args.eps else {}
    slope, resid, _ = bench.converge(
        args.problem, args.method, _parse_nsteps(args.nsteps), params=params,
        a_flow_kind=args.aflow,
        freeze_convention="literal" if args.freeze == "literal" else "midpoint",
        cache_dir=args.cache_dir)
    print(f"slope = {slope:.4f}  fit_residual = {resid:.3e}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="cxsplit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check scheme invariants and residuals")
    p.add_argument("schemes", nargs="+",
                   help=f"builtin names ({', '.join(builtin_names())}) or files")
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("design", help="re-derive complex-kick BAB schemes")
    p.add_argument("--stages", type=int, default=4, choices=(4, 6))
    p.add_argument("--a1", type=float, default=None)
    p.add_argument("--a", default=None, help="comma list of fixed a values")
    p.add_argument("--scan", action="store_true",
                   help="optimize a1 over (0, 1/2) (4-stage only)")
    p.add_argument("--grid-points", type=int, default=200)
    p.add_argument("--starts", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--name", default="designed")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=cmd_design)

    for cmd, fn in (("sweep", cmd_sweep), ("converge", cmd_converge)):
        p = sub.add_parser(cmd)
        p.add_argument("--problem", required=True,
                       choices=("osc", "parabolic", "fisher"))
        p.add_argument("--eps", type=float, default=None)
        p.add_argument("--nsteps", required=True, help="comma list, dyadic")
        p.add_argument("--aflow", default="cf4", choices=("cf2", "cf4", "exact"))
        p.add_argument("--freeze", default="midpoint", choices=("literal", "midpoint"))
        p.add_argument("--cache-dir", default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--seed", type=int, default=0)
        if cmd == "sweep":
            p.add_argument("--methods", required=True, help="comma list")
        else:
            p.add_argument("--method", required=True)
        p.set_defaults(fn=fn)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except ReferenceInconsistent as exc:
        print(f"reference inconsistency: {exc}", file=sys.stderr)
        return EXIT_REFERENCE
    except CxsplitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
