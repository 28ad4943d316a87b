"""Command-line interface.

Subcommands: validate, solve, interpolate, ratio-map, oracle-check.
Exit codes: 0 success, 1 checks or solver failed, 2 bad input (malformed
JSON, invalid descriptors, wrong arity).  Output JSON is deterministic:
fixed field order, 9 significant digits, -inf serialized as the string
"-inf".
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from .apps import hermite_fejer_interpolate, log_concave_interpolate, weighted_poly_ratio_map
from .core import Problem, local_maxima, tail_bound, write_profile
from .descriptors import (
    parse_interpolation_file,
    parse_problem_file,
    parse_ratio_file,
)
from .exceptions import DescriptorError, SolverFailedError, SumTranslatesError
from .fields import is_admissible
from .kernels import check_shift_inequalities, eval_kernel, log_kernel, slope_limits
from .oracle import GridSpec, grid_invert
from .solver import equioscillate, invert_difference

_PROFILE_SAMPLES = 4096


def _fmt(v) -> str:
    if isinstance(v, np.generic):
        v = v.item()
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return '"nan"'
        if v == math.inf:
            return '"inf"'
        if v == -math.inf:
            return '"-inf"'
        return f"{v:.9g}"
    if isinstance(v, str):
        return json.dumps(v)
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ",".join(_fmt(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ",".join(f"{json.dumps(k)}:{_fmt(x)}" for k, x in v.items()) + "}"
    raise TypeError(f"cannot serialize {type(v).__name__}")


def render_json(obj) -> str:
    return _fmt(obj)


def _load_json(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _merged_options(file_options: dict, args) -> dict:
    opts = dict(file_options)
    for key in ("tol", "max_iter", "starts", "seed"):
        value = getattr(args, key, None)
        if value is not None:
            opts[key] = value
    opts.pop("grid_density", None)
    return opts


def _sample_concavity(kernel, count: int, seed: int) -> int:
    """Chord-below-graph violations over random same-side triples."""
    rng = np.random.default_rng(seed)
    violations = 0
    for _ in range(count):
        a, b, c = 10.0 ** rng.uniform(-3.0, 1.0, size=3)
        for sign in (1.0, -1.0):
            t1, t2, t3 = sign * a, sign * (a + b), sign * (a + b + c)
            if sign < 0:
                t1, t3 = t3, t1
            k1 = eval_kernel(kernel, t1)
            k2 = eval_kernel(kernel, t2)
            k3 = eval_kernel(kernel, t3)
            chord = ((t3 - t2) * k1 + (t2 - t1) * k3) / (t3 - t1)
            if k2 < chord - 1e-9:
                violations += 1
    return violations


def cmd_validate(args) -> int:
    problem, _ = parse_problem_file(_load_json(args.problem))
    seed = args.seed if args.seed is not None else 0
    ok = True
    lines: list[str] = []

    for j, k in enumerate(problem.kernels):
        lines.append(f"kernel[{j}] type={k.kind}")
        if k.singular and eval_kernel(k, 0.0) == -math.inf:
            lines.append("  singular: yes")
        else:
            ok = False
            lines.append("  singular: NO (solver hypotheses need a singularity at 0)")
        if k.strictly_concave_claimed:
            lines.append("  strict concavity claimed: yes")
        else:
            ok = False
            lines.append("  strict concavity claimed: NO")
        conc = _sample_concavity(k, 400, seed)
        if conc == 0:
            lines.append("  concavity sample: ok (800 chords, 0 violations)")
        else:
            ok = False
            lines.append(f"  concavity sample: FAILED ({conc} chord violations)")
        sl = slope_limits(k)
        if sl.gm_holds:
            lines.append(
                f"  slope limits: {sl.at_minus_infinity:g} at -inf, "
                f"{sl.at_plus_infinity:g} at +inf (order ok)"
            )
        else:
            ok = False
            lines.append(
                "  slope limits: GM violated: slopes "
                f"({sl.at_minus_infinity:g}, {sl.at_plus_infinity:g})"
            )
        rep = check_shift_inequalities(k, sample_count=1000, seed=seed)
        if rep.ok:
            note = "" if rep.part2_checked else f" [{rep.note}]"
            lines.append(f"  shift inequalities: ok ({rep.samples} tuples, 0 violations){note}")
        else:
            ok = False
            worst = max(rep.violations, key=lambda v: v.excess)
            lines.append(
                f"  shift inequalities: FAILED ({len(rep.violations)} violations, "
                f"worst excess {worst.excess:.3g} at t1={worst.t1:.6g} t2={worst.t2:.6g} "
                f"h={worst.h:.6g} part {worst.part})"
            )

    f = problem.field
    lines.append(f"field type={f.kind}")
    lines.append(f"  bounded above by: {f.upper_bound:g}")
    count = f.finite_support_count
    if count > problem.n:
        where = "everywhere" if count == math.inf else f"{int(count)} points"
        lines.append(f"  finite support: {where} (> {problem.n} as required)")
    else:
        ok = False
        lines.append(
            f"  finite support: ONLY {int(count)} points (need more than {problem.n})"
        )
    verdict = is_admissible(f, problem.kernels)
    if verdict.admissible:
        lines.append(f"  admissibility probe: ok (interior estimate {verdict.interior_estimate:g})")
    else:
        ok = False
        lines.append(f"  admissibility check failed ({verdict.reason})")
    if verdict.trail:
        shown = [t for t in verdict.trail if abs(t[0]) >= verdict.trail[-1][0] / 4]
        trail = ", ".join(f"S({t:g})={_fmt(v)}" for t, v in shown[-6:])
        lines.append(f"  probe trail: {trail}")

    lines.append("verdict: " + ("hypotheses hold" if ok else "hypotheses unmet"))
    print("\n".join(lines))
    return 0 if ok else 1


def _emit_profile(problem: Problem, result, path: str) -> None:
    tau = result.report.truncation_radius
    if math.isfinite(tau):
        lo, hi = -tau, tau
    else:
        xs = [x for x, _ in problem.field.support_points]
        lo, hi = min(xs) - 1.0, max(xs) + 1.0
    write_profile(problem, result.nodes, lo, hi, _PROFILE_SAMPLES, path)


def cmd_solve(args) -> int:
    problem, file_options = parse_problem_file(_load_json(args.problem))
    opts = _merged_options(file_options, args)

    failed = False
    try:
        if args.equioscillate:
            result = equioscillate(problem, **opts)
        else:
            if len(args.target) != problem.n:
                print(
                    f"error: target length {len(args.target)} != {problem.n}", file=sys.stderr
                )
                return 2
            result = invert_difference(problem, np.asarray(args.target), **opts)
    except SolverFailedError as exc:
        # Report the best attempt instead of a bare error so the caller can
        # inspect the residual.
        if exc.result is None:
            raise
        result = exc.result
        failed = True

    if args.emit_profile:
        _emit_profile(problem, result, args.emit_profile)

    out = {
        "y": result.nodes,
        "m": result.report.values,
        "d": result.achieved,
        "residual": result.residual,
        "iterations": result.iterations,
        "converged": result.converged,
    }
    print(render_json(out))
    return 1 if failed else 0


def cmd_interpolate(args) -> int:
    ip, file_mode, file_options = parse_interpolation_file(_load_json(args.problem))
    opts = _merged_options(file_options, args)
    mode = {"points": "points", "hf": "hermite_fejer", None: file_mode}[args.mode]

    if mode == "points":
        result = log_concave_interpolate(ip, **opts)
    else:
        result = hermite_fejer_interpolate(ip, **opts)

    out = {"C": result.coefficient, "y": result.nodes}
    if result.peaks is not None:
        out["z"] = result.peaks
    out["achieved"] = result.achieved
    print(render_json(out))
    return 0


def cmd_ratio_map(args) -> int:
    weight, exponents, file_nodes, file_options = parse_ratio_file(_load_json(args.problem))
    nodes = args.nodes if args.nodes else file_nodes
    if nodes is None:
        print('error: ratio-map needs nodes (--nodes or a "y" entry)', file=sys.stderr)
        return 2
    problem = Problem(
        kernels=tuple(log_kernel(r) for r in exponents),
        field=weight,
        grid_density=file_options.get("grid_density", 2048),
    )
    ratios = weighted_poly_ratio_map(problem, np.asarray(nodes, dtype=float))
    print(render_json({"y": list(map(float, nodes)), "ratios": ratios}))
    return 0


def cmd_oracle_check(args) -> int:
    problem, file_options = parse_problem_file(_load_json(args.problem))
    opts = _merged_options(file_options, args)
    if len(args.target) != problem.n:
        print(f"error: target length {len(args.target)} != {problem.n}", file=sys.stderr)
        return 2
    d_target = np.asarray(args.target, dtype=float)

    result = invert_difference(problem, d_target, **opts)
    extent = args.extent
    if extent is None:
        extent = tail_bound(problem, result.nodes, margin=1.0)
    y_oracle, _ = grid_invert(problem, d_target, GridSpec(step=args.step, extent=extent))
    max_diff = float(np.max(np.abs(result.nodes - y_oracle)))
    agree = max_diff <= args.agree_tol
    out = {
        "y_solver": result.nodes,
        "y_oracle": y_oracle,
        "max_diff": max_diff,
        "agree": agree,
    }
    print(render_json(out))
    return 0 if agree else 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sumtranslates",
        description="Sums of translated concave kernels: validation, inversion, interpolation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("problem", help="JSON problem file")
        p.add_argument("--tol", type=float, default=None)
        p.add_argument("--max-iter", dest="max_iter", type=int, default=None)
        p.add_argument("--starts", type=int, default=None)
        p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("validate", help="check solver hypotheses, print verdicts")
    common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("solve", help="invert the difference map")
    common(p)
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--target", type=float, nargs="+", help="difference target vector")
    group.add_argument(
        "--equioscillate", action="store_true", help="equalize all interval maxima"
    )
    p.add_argument("--emit-profile", default=None, metavar="CSV", help="write a profile CSV")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("interpolate", help="log-concave product interpolation")
    common(p)
    p.add_argument("--mode", choices=["points", "hf"], default=None)
    p.set_defaults(func=cmd_interpolate)

    p = sub.add_parser("ratio-map", help="consecutive supremum ratios of a weighted product")
    common(p)
    p.add_argument("--nodes", type=float, nargs="+", default=None)
    p.set_defaults(func=cmd_ratio_map)

    p = sub.add_parser("oracle-check", help="compare the solver against the grid oracle")
    common(p)
    p.add_argument("--target", type=float, nargs="+", required=True)
    p.add_argument("--step", type=float, default=1e-3)
    p.add_argument("--extent", type=float, default=None)
    p.add_argument("--agree-tol", dest="agree_tol", type=float, default=2e-3)
    p.set_defaults(func=cmd_oracle_check)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except json.JSONDecodeError as exc:
        print(
            f"error: malformed JSON at line {exc.lineno} column {exc.colno}: {exc.msg}",
            file=sys.stderr,
        )
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DescriptorError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SumTranslatesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())
