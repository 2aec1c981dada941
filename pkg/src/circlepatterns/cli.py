"""Command-line front end.

Subcommands: validate, check, solve, flow, report.  Structured output goes
to stdout, diagnostics to stderr.  Exit codes: 0 success, 1 mathematical
failure (infeasible target, nonconvergence, invalid problem for the
``validate`` subcommand), 2 I/O or format failure.  Set CIRCLEPATTERNS_LOG
to debug/info/warning to control verbosity.
"""

import argparse
import json
import logging
import os
import sys
import time

import numpy as np

from . import __version__
from .feasibility import check_target
from .files import (
    ProblemFormatError,
    build_result,
    load_problem,
    load_result,
    save_result,
    verify_result,
)
from .solve import (
    FlowOptions,
    NonconvergenceError,
    SolveOptions,
    calabi_flow,
    closed_form_solve_00d,
    ricci_flow,
    solve_newton,
)

logger = logging.getLogger("circlepatterns")

EXIT_OK = 0
EXIT_MATH = 1
EXIT_IO = 2


def _configure_logging():
    level = os.environ.get("CIRCLEPATTERNS_LOG", "warning").upper()
    logging.basicConfig(
        stream=sys.stderr, level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
    )


def _load(path):
    """Load a problem; ProblemFormatError propagates, I/O errors become OSError."""
    return load_problem(path)


def cmd_validate(args) -> int:
    try:
        problem = _load(args.problem)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ProblemFormatError as exc:
        for message in exc.errors:
            print(f"invalid: {message}", file=sys.stderr)
        return EXIT_MATH
    print(
        json.dumps(
            {
                "valid": True,
                "faces": problem.pattern.face_count,
                "edges": problem.pattern.edge_count,
                "pattern_type": str(problem.ptype),
            }
        )
    )
    return EXIT_OK


def _witness_doc(report):
    if report.witness is None:
        return None
    return {
        "faces": list(report.witness.faces),
        "edges": list(report.witness.edges),
        "lhs": report.witness.lhs,
        "rhs": report.witness.rhs,
    }


def cmd_check(args) -> int:
    try:
        problem = _load(args.problem)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ProblemFormatError as exc:
        for message in exc.errors:
            print(f"invalid problem: {message}", file=sys.stderr)
        return EXIT_IO
    report = check_target(problem.pattern, problem.ptype, problem.target)
    print(
        json.dumps(
            {
                "feasible": report.feasible,
                "marginal": report.marginal,
                "method": report.method,
                "witness": _witness_doc(report),
            }
        )
    )
    return EXIT_OK if report.feasible else EXIT_MATH


def _merged_solve_options(problem, args):
    overrides = dict(problem.solve_options)
    if args.tol is not None:
        overrides["tol_residual"] = args.tol
    if args.max_iter is not None:
        overrides["max_iter"] = args.max_iter
    return SolveOptions(**overrides)


def cmd_solve(args) -> int:
    try:
        problem = _load(args.problem)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ProblemFormatError as exc:
        for message in exc.errors:
            print(f"invalid problem: {message}", file=sys.stderr)
        return EXIT_IO
    opts = _merged_solve_options(problem, args)
    failure = None
    if problem.ptype.epsilon == 0:
        started = time.perf_counter()
        u = closed_form_solve_00d(
            problem.pattern, problem.ptype, problem.theta, problem.target
        )
        wall = time.perf_counter() - started
        doc = build_result(
            problem, method="closed_form", converged=True, u=u,
            iterations=0, wall_time=wall,
        )
    else:
        try:
            result = solve_newton(
                problem.pattern,
                problem.ptype,
                problem.theta,
                problem.target,
                opts=opts,
                u0=problem.initial_u,
            )
            doc = build_result(
                problem,
                method=result.method,
                converged=True,
                u=result.u,
                iterations=result.iterations,
                wall_time=result.wall_time,
            )
        except NonconvergenceError as exc:
            logger.info("solver did not converge: %s", exc)
            failure = exc
            doc = build_result(
                problem,
                method="newton",
                converged=False,
                u=exc.u_last,
                iterations=exc.iterations,
                boundary=exc.boundary,
            )
    if args.out:
        try:
            save_result(args.out, doc)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
    print(
        json.dumps(
            {
                "converged": doc["converged"],
                "method": doc["method"],
                "iterations": doc.get("iterations"),
                "residual_sup": doc["residual"]["sup"],
            }
        )
    )
    if failure is not None:
        print(f"nonconvergence: {failure}", file=sys.stderr)
        return EXIT_MATH
    return EXIT_OK


def cmd_flow(args) -> int:
    try:
        problem = _load(args.problem)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ProblemFormatError as exc:
        for message in exc.errors:
            print(f"invalid problem: {message}", file=sys.stderr)
        return EXIT_IO
    overrides = dict(problem.flow_options)
    method = overrides.pop("method", "ricci")
    if args.method is not None:
        method = args.method
    if args.dt is not None:
        overrides["dt"] = args.dt
    if args.t_max is not None:
        overrides["t_max"] = args.t_max
    if args.tol is not None:
        overrides["tol_residual"] = args.tol
    opts = FlowOptions(**overrides)
    run = ricci_flow if method == "ricci" else calabi_flow
    trajectory = run(
        problem.pattern,
        problem.ptype,
        problem.theta,
        problem.target,
        u0=problem.initial_u,
        opts=opts,
    )
    doc = build_result(
        problem,
        method=trajectory.method,
        converged=trajectory.converged,
        u=trajectory.final_u,
        wall_time=trajectory.wall_time,
        termination=trajectory.termination,
        boundary=trajectory.boundary or None,
        trajectory=trajectory,
    )
    if args.out:
        try:
            save_result(args.out, doc)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_IO
    print(
        json.dumps(
            {
                "converged": trajectory.converged,
                "method": trajectory.method,
                "termination": trajectory.termination,
                "t_final": float(trajectory.t[-1]),
                "residual_sup": float(trajectory.residual_sup[-1]),
                "accepted_steps": trajectory.accepted_steps,
                "rejected_steps": trajectory.rejected_steps,
            }
        )
    )
    if not trajectory.converged:
        print(
            f"flow did not converge: {trajectory.termination}, "
            f"residual {trajectory.residual_sup[-1]:.3e}, "
            f"boundary {trajectory.boundary}",
            file=sys.stderr,
        )
        return EXIT_MATH
    return EXIT_OK


def _format_float(value) -> str:
    if value is None:
        return "-"
    return repr(float(value))


def cmd_report(args) -> int:
    try:
        doc = load_result(args.result)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ValueError, KeyError) as exc:
        print(f"corrupt result file: {exc}", file=sys.stderr)
        return EXIT_IO
    try:
        inconsistencies = verify_result(doc)
    except Exception as exc:  # any structural defect counts as corruption
        print(f"corrupt result file: {exc}", file=sys.stderr)
        return EXIT_IO
    lines = []
    problem = doc.get("problem", {})
    ptype = problem.get("pattern_type", {})
    faces = problem.get("faces", {})
    face_count = faces.get("count") if isinstance(faces, dict) else faces
    lines.append(
        f"problem {doc.get('problem_sha256', '')[:12]}  "
        f"type=({ptype.get('epsilon')},{ptype.get('epsilon')},{ptype.get('delta')})  "
        f"faces={face_count}  edges={len(problem.get('edges', []))}"
    )
    lines.append(
        f"method={doc.get('method')}  converged={doc.get('converged')}"
        + (f"  iterations={doc['iterations']}" if "iterations" in doc else "")
        + (f"  termination={doc['termination']}" if "termination" in doc else "")
    )
    residual = doc.get("residual", {})
    lines.append(
        f"residual sup={_format_float(residual.get('sup'))} "
        f"l2={_format_float(residual.get('l2'))}"
    )
    lines.append(
        f"ricci_energy={_format_float(doc.get('ricci_energy'))} "
        f"calabi_energy={_format_float(doc.get('calabi_energy'))}"
    )
    lines.append("u = [" + ", ".join(_format_float(v) for v in doc.get("u", [])) + "]")
    lines.append("r = [" + ", ".join(_format_float(v) for v in doc.get("r", [])) + "]")
    if inconsistencies:
        lines.append("self-check: FAILED")
        lines.extend(f"  {p}" for p in inconsistencies)
    else:
        lines.append("self-check: OK (curvature reproduced to 1e-12)")
    if "trajectory" in doc:
        lines.append("")
        lines.append("t log10_calabi_energy")
        t_values = doc["trajectory"]["t"]
        c_values = doc["trajectory"]["calabi_energy"]
        for t_now, c_now in zip(t_values, c_values):
            with np.errstate(divide="ignore"):
                log_c = float(np.log10(c_now)) if c_now > 0 else float("-inf")
            lines.append(f"{_format_float(t_now)} {_format_float(log_c)}")
    print("\n".join(lines))
    if inconsistencies:
        for problem_text in inconsistencies:
            print(f"corrupt result file: {problem_text}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="circlepatterns",
        description="Generalized hyperbolic circle patterns with prescribed "
        "curvature: validation, feasibility, Newton solve, curvature flows.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse and validate a problem file")
    p.add_argument("problem")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("check", help="decide feasibility of the curvature target")
    p.add_argument("problem")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("solve", help="solve for the prescribed curvature")
    p.add_argument("problem")
    p.add_argument("--tol", type=float, default=None, help="residual sup-norm tolerance")
    p.add_argument("--max-iter", type=int, default=None)
    p.add_argument("--out", default=None, help="write the result document here")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("flow", help="run a combinatorial curvature flow")
    p.add_argument("problem")
    p.add_argument("--method", choices=("ricci", "calabi"), default=None)
    p.add_argument("--dt", type=float, default=None, help="initial step size")
    p.add_argument("--t-max", type=float, default=None)
    p.add_argument("--tol", type=float, default=None, help="residual sup-norm tolerance")
    p.add_argument("--out", default=None, help="write the result document here")
    p.set_defaults(func=cmd_flow)

    p = sub.add_parser("report", help="summarize a result document")
    p.add_argument("result")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    _configure_logging()
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, NonconvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())
