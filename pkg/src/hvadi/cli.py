"""Command-line front end.

Subcommands:

    solve          integrate one problem/scheme and dump the field as CSV
    study-time     time-convergence study (rates CSV, optional error table)
    study-space    space-convergence study at fixed mu (rates CSV, ...)
    list-problems  show the built-in problem names

Options may also come from a config file of ``key = value`` lines (keys are
the long option names without the leading dashes); command-line flags win.
Exit codes: 0 success, 1 usage/validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

import numpy as np

from . import harness
from .exceptions import DivergenceError, HvadiError, SingularMatrixError
from .grid import error_norms, sample, write_field_csv
from .harness import SpaceStudyConfig, TimeStudyConfig, grid_for
from .problems import available_problems, get_problem
from .schemes import SchemeKind, build_scheme_context
from .splitting import SplittingConfig, hv_step_traced, integrate

THETA_TABLE4 = 0.5 + np.sqrt(3.0) / 6.0  # 0.7886751345948129


def _parse_schemes(text: str) -> tuple[SchemeKind, ...]:
    kinds = []
    for name in text.split(","):
        name = name.strip().lower()
        try:
            kinds.append(SchemeKind(name))
        except ValueError:
            valid = ", ".join(k.value for k in SchemeKind)
            raise argparse.ArgumentTypeError(
                f"unknown scheme '{name}'; valid schemes: {valid}"
            ) from None
    return tuple(kinds)


def _parse_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated reals, got '{text}'")


def _read_config(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise argparse.ArgumentTypeError(
                    f"{path}:{lineno}: expected 'key = value', got '{line}'"
                )
            key, val = (part.strip() for part in line.split("=", 1))
            values[key.replace("-", "_")] = val
    return values


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hvadi",
        description="ADI solver for 2D convection-diffusion problems with "
        "mixed derivative terms (CDS / HO5 / HOC spatial schemes).",
    )
    parser.add_argument("--config", help="key=value config file supplying defaults")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--problem", required=False)
        p.add_argument("--theta", type=float, default=0.5)
        p.add_argument("--sigma", type=float, default=0.5)
        p.add_argument("--tf", type=float, default=harness.TF_DEFAULT)
        p.add_argument("--t0", type=float, default=0.0)
        p.add_argument("--out", required=False)

    p_solve = sub.add_parser("solve", help="single integration, field dump")
    common(p_solve)
    p_solve.add_argument("--scheme", type=_parse_schemes)
    p_solve.add_argument("--h", type=float)
    p_solve.add_argument("--dt", type=float)
    p_solve.add_argument("--mu", type=float)
    p_solve.add_argument(
        "--hoc-explicit",
        choices=("five", "solve"),
        default="five",
        help="explicit F1/F2 policy for HOC (five-point formulas, or B^-1 A)",
    )
    p_solve.add_argument(
        "--stage-trace",
        action="store_true",
        help="print stage norms of the first step",
    )
    p_solve.add_argument(
        "--exact-error",
        action="store_true",
        help="also print errors vs the exact solution (if known)",
    )

    p_time = sub.add_parser("study-time", help="time-convergence study")
    common(p_time)
    p_time.add_argument("--schemes", type=_parse_schemes)
    p_time.add_argument("--h", type=float)
    p_time.add_argument("--dts", type=_parse_floats, default=())
    p_time.add_argument("--dt-ref", type=float, default=0.0)
    p_time.add_argument("--errors-out")
    p_time.add_argument("--plot-data")

    p_space = sub.add_parser("study-space", help="space-convergence study")
    common(p_space)
    p_space.add_argument("--schemes", type=_parse_schemes)
    p_space.add_argument("--mu", type=float)
    p_space.add_argument("--hs", type=_parse_floats, default=harness.H_SWEEP_DEFAULT)
    p_space.add_argument("--h-ref", type=float, default=harness.H_REF_DEFAULT)
    p_space.add_argument(
        "--exact-error",
        action="store_true",
        help="measure errors against the exact solution instead of a reference run",
    )
    p_space.add_argument("--errors-out")
    p_space.add_argument("--plot-data")

    sub.add_parser("list-problems", help="list built-in problems")
    return parser


def _require(args, *names):
    for name in names:
        if getattr(args, name, None) in (None, ()):
            raise HvadiError(f"missing required option --{name.replace('_', '-')}")


def _resolve_dt(args) -> float:
    if args.dt is not None and args.mu is not None:
        raise HvadiError("give either --dt or --mu, not both")
    if args.dt is not None:
        return args.dt
    if args.mu is not None:
        return args.mu * args.h * args.h
    raise HvadiError("one of --dt or --mu is required")


def _cmd_solve(args) -> int:
    _require(args, "problem", "scheme", "h", "out")
    if len(args.scheme) != 1:
        raise HvadiError("solve takes exactly one --scheme")
    scheme = args.scheme[0]
    problem = get_problem(args.problem)
    grid = grid_for(problem, args.h)
    dt = _resolve_dt(args)
    cfg = SplittingConfig(dt, args.tf, args.t0, args.theta, args.sigma)
    via_solve = args.hoc_explicit == "solve"
    if args.stage_trace and cfg.n_steps > 0:
        ctx = build_scheme_context(
            scheme, grid, problem.c1, problem.c2, problem.diffusion,
            cfg.theta * cfg.dt, hoc_explicit_via_solve=via_solve,
        )
        u0 = sample(grid, problem.initial)
        _, trace = hv_step_traced(ctx, problem, u0, cfg.t0, cfg.dt, cfg)
        for name in ("y0", "y1", "y2", "yt0", "yt1", "yt2"):
            stage = getattr(trace, name)
            rms = float(np.sqrt(np.mean(stage.values**2)))
            print(f"stage {name}: rms = {rms:.12e}")
    u = integrate(problem, scheme, cfg, grid, hoc_explicit_via_solve=via_solve)
    if args.exact_error:
        if problem.exact is None:
            raise HvadiError(f"problem '{problem.name}' has no exact solution")
        ex = sample(grid, lambda x, y: problem.exact(x, y, args.tf))
        l2, linf = error_norms(u, ex)
        print(f"exact-error l2 = {l2:.12e}  linf = {linf:.12e}")
    meta = {
        "problem": problem.name,
        "scheme": scheme.value,
        "theta": args.theta,
        "sigma": args.sigma,
        "h": args.h,
        "dt": dt,
        "t": args.tf,
    }
    with open(args.out, "w") as fh:
        write_field_csv(u, fh, meta)
    return 0


def _write_report(report, args) -> None:
    with open(args.out, "w") as fh:
        report.write_rates_csv(fh)
    if args.errors_out:
        with open(args.errors_out, "w") as fh:
            report.write_errors_csv(fh)
    if args.plot_data:
        with open(args.plot_data, "w") as fh:
            report.write_plot_data(fh)
    for r in report.rates:
        print(
            f"{r.scheme.value} {r.norm}: rate = {r.rate:.4f}, "
            f"constant = {r.constant:.6e}"
        )


def _cmd_study_time(args) -> int:
    _require(args, "problem", "schemes", "h", "out")
    cfg = TimeStudyConfig(
        problem=args.problem,
        schemes=args.schemes,
        h=args.h,
        theta=args.theta,
        sigma=args.sigma,
        tf=args.tf,
        t0=args.t0,
        dts=args.dts,
        dt_ref=args.dt_ref,
    )
    _write_report(harness.time_convergence_study(cfg), args)
    return 0


def _cmd_study_space(args) -> int:
    _require(args, "problem", "schemes", "mu", "out")
    cfg = SpaceStudyConfig(
        problem=args.problem,
        schemes=args.schemes,
        mu=args.mu,
        theta=args.theta,
        sigma=args.sigma,
        tf=args.tf,
        t0=args.t0,
        hs=args.hs,
        h_ref=args.h_ref,
        exact_errors=args.exact_error,
    )
    _write_report(harness.space_convergence_study(cfg), args)
    return 0


def _cmd_list_problems(args) -> int:
    for name in available_problems():
        print(name)
    return 0


_COMMANDS = {
    "solve": _cmd_solve,
    "study-time": _cmd_study_time,
    "study-space": _cmd_study_space,
    "list-problems": _cmd_list_problems,
}


def run(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    # pre-scan for --config so file values become parser defaults
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if known.config:
        try:
            config = _read_config(known.config)
        except OSError as exc:
            print(f"error: cannot read config: {exc}", file=sys.stderr)
            return 1
        except argparse.ArgumentTypeError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        typed = {}
        for key, val in config.items():
            if key in ("schemes", "scheme"):
                typed[key] = _parse_schemes(val)
            elif key in ("dts", "hs"):
                typed[key] = _parse_floats(val)
            elif key in ("stage_trace", "exact_error"):
                typed[key] = val.lower() in ("1", "true", "yes", "on")
            else:
                typed[key] = val
        parser.set_defaults(**typed)
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    # config-file strings for numeric options arrive untyped; coerce them
    for name in ("theta", "sigma", "tf", "t0", "h", "dt", "mu", "dt_ref", "h_ref"):
        val = getattr(args, name, None)
        if isinstance(val, str):
            setattr(args, name, float(val))
    try:
        return _COMMANDS[args.command](args)
    except (SingularMatrixError, DivergenceError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2
    except HvadiError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    raise SystemExit(run())


if __name__ == "__main__":
    main()
