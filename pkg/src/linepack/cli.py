"""Command line front end for the scenario harness."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np
from scipy.interpolate import CubicSpline

from .adiabatic import calibrate
from .core import BC_KINDS, BoundarySpec
from .errors import InvalidParameterError, LinepackError
from .harness import (
    compute_scenario,
    convergence_study,
    load_config,
    validate_scenario,
    write_result,
)


def _add_scenario_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="scenario config file (INI)")
    parser.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="SECTION.KEY=VALUE",
        help="override one config entry (repeatable)",
    )
    parser.add_argument(
        "--bc",
        choices=BC_KINDS + ("both",),
        default=None,
        help="restrict to one boundary kind",
    )
    parser.add_argument(
        "--dimensionless",
        action="store_true",
        default=None,
        help="treat all config values as scaled numbers",
    )


def _scenario_from_args(args):
    overrides = list(args.overrides)
    if args.bc is not None:
        overrides.append(f"bc.kind={args.bc}")
    return load_config(args.config, overrides, args.dimensionless)


def _cmd_run(args) -> int:
    scenario = _scenario_from_args(args)
    result = compute_scenario(scenario)
    written = write_result(result, args.out)
    for path in written:
        print(f"wrote {path}")
    if result.metrics:
        print("bc_kind variant          var probe    err_l2_rel  err_linf_rel")
        for rec in result.metrics:
            print(
                f"{rec.bc_kind:<7} {rec.variant:<16} {rec.variable:<3} "
                f"{rec.probe_x:<8.3g} {rec.err_l2_rel:12.4e} {rec.err_linf_rel:12.4e}"
            )
    if result.failures:
        for key in sorted(result.failures):
            print(f"FAILED {result.failures[key]}", file=sys.stderr)
        return 1
    return 0


def _cmd_convergence(args) -> int:
    scenario = _scenario_from_args(args)
    records = convergence_study(scenario, levels=args.levels)
    header = "bc_kind,nx_coarse,nx_fine,diff_l2_p,diff_l2_phi,order_p,order_phi"
    lines = [header]
    print(header.replace(",", "  "))
    for rec in records:
        row = [
            rec["bc_kind"],
            str(rec["nx_coarse"]),
            str(rec["nx_fine"]),
            format(rec["diff_l2_p"], ".17g"),
            format(rec["diff_l2_phi"], ".17g"),
            format(rec["order_p"], ".17g") if "order_p" in rec else "",
            format(rec["order_phi"], ".17g") if "order_phi" in rec else "",
        ]
        lines.append(",".join(row))
        print("  ".join(item or "-" for item in row))
    if args.out is not None:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "convergence.csv").write_text("\n".join(lines) + "\n")
        print(f"wrote {out / 'convergence.csv'}")
    return 0


def _cmd_calibrate(args) -> int:
    scenario = _scenario_from_args(args)
    if len(scenario.bc_kinds) != 1:
        raise InvalidParameterError("calibrate needs a single bc kind, pass --bc pp or --bc pphi")
    kind = scenario.bc_kinds[0]
    data = np.genfromtxt(args.input, delimiter=",", comments="#", names=True)
    for column in ("t", "left", "right"):
        if column not in (data.dtype.names or ()):
            raise InvalidParameterError(
                f"calibration input {args.input!r} needs a {column!r} column"
            )
    t = np.asarray(data["t"], dtype=float)
    left = CubicSpline(t, np.asarray(data["left"], dtype=float))
    right = CubicSpline(t, np.asarray(data["right"], dtype=float))
    bc = BoundarySpec(
        kind=kind,
        left=lambda s: float(left(s)),
        right=lambda s: float(right(s)),
    )
    schedule = calibrate(
        scenario.pipe,
        bc,
        t,
        nx=scenario.nx,
        fd_step=args.fd_step,
        smooth_window=args.smooth_window,
    )
    lines = ["t,lam,g0,lam_dot,g0_dot"]
    for tk in t:
        lines.append(
            ",".join(
                format(float(v), ".17g")
                for v in (
                    tk,
                    schedule.lam(tk),
                    schedule.g0(tk),
                    schedule.lam_dot(tk),
                    schedule.g0_dot(tk),
                )
            )
        )
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines) + "\n")
    print(f"wrote {out} ({t.size} samples, bc kind {kind})")
    return 0


def _cmd_validate(args) -> int:
    scenario = _scenario_from_args(args)
    checks = validate_scenario(scenario, drift_steps=args.drift_steps)
    all_ok = True
    for name, ok, detail in checks:
        tag = "PASS" if ok else "FAIL"
        all_ok = all_ok and ok
        print(f"[{tag}] {name}: {detail}")
    return 0 if all_ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="linepack",
        description="transient single-pipe gas flow: reduced models vs reference solver",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run all variants and write CSV results")
    _add_scenario_args(p_run)
    p_run.add_argument("--out", default="results", help="output directory")
    p_run.set_defaults(func=_cmd_run)

    p_conv = sub.add_parser("convergence", help="reference solver self-convergence study")
    _add_scenario_args(p_conv)
    p_conv.add_argument("--levels", type=int, default=3, help="number of grid levels")
    p_conv.add_argument("--out", default=None, help="directory for convergence.csv")
    p_conv.set_defaults(func=_cmd_convergence)

    p_cal = sub.add_parser("calibrate", help="recover schedule parameters from boundary data")
    _add_scenario_args(p_cal)
    p_cal.add_argument("--input", required=True, help="CSV with t,left,right columns")
    p_cal.add_argument("--out", default="schedule.csv", help="output CSV path")
    p_cal.add_argument("--fd-step", type=float, default=None, help="derivative stencil step")
    p_cal.add_argument(
        "--smooth-window",
        type=int,
        default=0,
        help="odd window length for smoothed derivatives (0 disables)",
    )
    p_cal.set_defaults(func=_cmd_calibrate)

    p_val = sub.add_parser("validate", help="run the invariant checks and report pass/fail")
    _add_scenario_args(p_val)
    p_val.add_argument("--drift-steps", type=int, default=10_000)
    p_val.set_defaults(func=_cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except LinepackError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
