"""Command-line interface.

Subcommands: ``solve`` (single run with error metrics), ``study``
(convergence/decay ladders), ``weights`` (quadrature weight tables),
``mlf`` (special-function tabulation), ``mesh-info``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys as _sys

import numpy as np

from . import baselines, harness, meshfem, reference, schemes
from .cq import cq_weights, get_rule
from .harness import ConfigError
from .mlf import MlfAccuracyError, MlfParams, mlf
from .numkit import CgError


def _add_common(p):
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("csv", "markdown"), default="csv")


def _emit_text(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        _sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _cmd_mesh_info(args):
    mesh = meshfem.build_mesh(args.M)
    print(f"M = {mesh.M}")
    print(f"h = {mesh.h:.17g}")
    print(f"nodes = {len(mesh.nodes)}")
    print(f"triangles = {len(mesh.triangles)}")
    print(f"interior dofs = {mesh.n_interior}")
    return 0


def _cmd_weights(args):
    rule = get_rule(args.rule)
    w = cq_weights(rule, args.alpha, args.tau, args.N)
    lines = ["j,weight"]
    lines += [f"{j},{format(v, '.17g')}" for j, v in enumerate(w.weights)]
    _emit_text("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_mlf(args):
    p = MlfParams(args.alpha, args.beta)
    xs = np.geomspace(args.x_min, args.x_max, args.points) if args.x_min > 0 else (
        np.linspace(args.x_min, args.x_max, args.points)
    )
    lines = ["x,E"]
    for x in xs:
        lines.append(f"{format(x, '.17g')},{format(mlf(p, -x), '.17g')}")
    _emit_text("\n".join(lines) + "\n", args.out)
    return 0


def _cmd_solve(args):
    case = reference.get_case(args.case, args.alpha)
    sys_ = meshfem.fem_system(args.M)
    grid = schemes.TimeGrid(args.t, args.N)
    scheme = args.scheme.lower()
    if scheme in harness.PRIMARY_SCHEMES:
        cfg = schemes.SchemeConfig(
            stepper=scheme.upper(),
            equation="subdiffusion" if case.is_subdiffusion else "diffusion_wave",
            corrected=args.corrected,
        )
        hist = schemes.solve(sys_, case, cfg, grid)
    else:
        hist = baselines.solve_baseline(sys_, case, scheme, args.alpha, grid)

    metrics = {
        "case": args.case,
        "alpha": args.alpha,
        "scheme": scheme,
        "M": args.M,
        "N": args.N,
        "t": args.t,
        "reference": args.reference,
        "normalized": case.v_l2_norm > 0.0,
    }
    if args.reference == "discrete_modal":
        ref = reference.discrete_reference(sys_, case, args.t)
        err = meshfem.l2_norm(sys_, hist.final - ref)
        metrics["error_l2"] = err
        metrics["error_h1"] = meshfem.h1_seminorm(sys_, hist.final - ref)
    elif args.reference == "self_convergence":
        fine = schemes.TimeGrid(args.t, 4 * args.N)
        if scheme in harness.PRIMARY_SCHEMES:
            ref = schemes.solve(sys_, case, cfg, fine).final
        else:
            ref = baselines.solve_baseline(sys_, case, scheme, args.alpha, fine).final
        metrics["error_l2"] = meshfem.l2_norm(sys_, hist.final - ref)
        metrics["error_h1"] = meshfem.h1_seminorm(sys_, hist.final - ref)
    else:
        exp = reference.modal_coefficients(case, args.K_max)
        sol = reference.exact_solution(case, exp, args.t)
        l2, h1 = meshfem.error_norms(sys_, hist.final, sol, sol.grad)
        metrics["error_l2"] = l2
        metrics["error_h1"] = h1
    if metrics["normalized"]:
        metrics["error_l2_normalized"] = metrics["error_l2"] / case.v_l2_norm
    if args.dump_solution:
        np.savetxt(args.dump_solution, hist.final)
    _emit_text(json.dumps(metrics, indent=2), args.out)
    return 0


def _cmd_study(args):
    overrides = {
        "case": args.case,
        "alphas": [args.alpha] if args.alpha is not None else None,
        "schemes": [args.scheme] if args.scheme is not None else None,
        "kind": args.kind,
        "M": args.M,
        "N": args.N,
        "t": args.t,
        "reference": args.reference,
        "out": args.out,
        "format": args.format,
    }
    if args.corrected is not None:
        overrides["corrected"] = args.corrected
    if args.N_list:
        overrides["N_list"] = [int(x) for x in args.N_list.split(",")]
    if args.M_list:
        overrides["M_list"] = [int(x) for x in args.M_list.split(",")]
    if args.t_list:
        overrides["t_list"] = [float(x) for x in args.t_list.split(",")]

    if args.config:
        cfg = harness.StudyConfig.from_json(args.config, overrides)
    else:
        required = ("case", "kind")
        missing = [k for k in required if overrides.get(k) is None]
        if missing:
            raise ConfigError(f"missing required flags: {missing}")
        overrides = {k: v for k, v in overrides.items() if v is not None}
        overrides.setdefault("alphas", [0.5])
        overrides.setdefault("schemes", ["be", "sbd"])
        for key in ("alphas", "schemes", "M_list", "N_list", "t_list"):
            if key in overrides:
                overrides[key] = tuple(overrides[key])
        cfg = harness.StudyConfig(**overrides)

    report = harness.run_study(cfg)
    _emit_text(harness.emit(report, cfg.format), cfg.out)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="fracstep",
        description="Galerkin FEM + convolution quadrature solvers for "
        "time-fractional diffusion benchmarks",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mesh-info", help="print mesh statistics")
    p.add_argument("--M", type=int, required=True)
    p.set_defaults(func=_cmd_mesh_info)

    p = sub.add_parser("weights", help="dump quadrature weight tables as CSV")
    p.add_argument("--rule", choices=("be", "sbd", "BE", "SBD"), required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--tau", type=float, default=1.0)
    p.add_argument("--N", type=int, default=32)
    _add_common(p)
    p.set_defaults(func=_cmd_weights)

    p = sub.add_parser("mlf", help="tabulate E_{alpha,beta}(-x)")
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--x-min", type=float, default=0.0)
    p.add_argument("--x-max", type=float, default=10.0)
    p.add_argument("--points", type=int, default=21)
    _add_common(p)
    p.set_defaults(func=_cmd_mlf)

    p = sub.add_parser("solve", help="single run with error metrics")
    p.add_argument("--case", required=True, choices=list("abcdefg"))
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--scheme", default="be", choices=list(harness.ALL_SCHEMES))
    p.add_argument("--M", type=int, default=16)
    p.add_argument("--N", type=int, default=100)
    p.add_argument("--t", type=float, default=0.1)
    p.add_argument("--reference", default="discrete_modal", choices=harness.REFERENCES)
    p.add_argument("--K-max", type=int, default=255)
    p.add_argument("--corrected", action=argparse.BooleanOptionalAction, default=True)
    p.add_argument("--dump-solution", help="write final interior coefficients")
    _add_common(p)
    p.set_defaults(func=_cmd_solve)

    p = sub.add_parser("study", help="convergence/decay study")
    p.add_argument("--config", help="JSON study config (flags override keys)")
    p.add_argument("--print-schema", action="store_true")
    p.add_argument("--case", choices=list("abcdefg"))
    p.add_argument("--alpha", type=float)
    p.add_argument("--scheme", choices=list(harness.ALL_SCHEMES))
    p.add_argument("--kind", choices=("temporal", "spatial", "decay"))
    p.add_argument("--M", type=int)
    p.add_argument("--M-list", dest="M_list")
    p.add_argument("--N", type=int)
    p.add_argument("--N-list", dest="N_list")
    p.add_argument("--t", type=float)
    p.add_argument("--t-list", dest="t_list")
    p.add_argument("--reference", choices=harness.REFERENCES)
    p.add_argument("--corrected", action=argparse.BooleanOptionalAction, default=None)
    _add_common(p)
    p.set_defaults(func=_cmd_study)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "print_schema", False):
        print(json.dumps(harness.STUDY_CONFIG_SCHEMA, indent=2))
        return 0
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=_sys.stderr)
        return 2
    except (CgError, MlfAccuracyError, ArithmeticError) as exc:
        print(f"numerical failure: {exc}", file=_sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())
