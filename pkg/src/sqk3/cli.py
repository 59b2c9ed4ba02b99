"""Command-line interface.

Subcommands: verify (proposition suites, JSON report), tables (closedness
and energy-condition tables), simulate (trajectory CSV), edm (solution
certificate).  Exit codes: 0 pass, 1 check failure, 2 usage error, 3 I/O
failure.
"""

import argparse
import datetime
import json
import sys
from dataclasses import replace

import numpy as np

from . import dynamics as dyn
from . import fields as fld
from . import geometry as geo
from . import sqk, verify
from .config import ConfigError, base_config, load_config_file, parse_grid
from .geometry import ChartDomainError, ChartValidityError, SpaceForm
from .spinors import contact_maxwell, dirac_current

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _parse_complex(text: str) -> complex:
    re_s, _, im_s = text.partition(",")
    return complex(float(re_s), float(im_s or "0"))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="sqk3",
        description="Verification and simulation for spinor geometry on "
                    "three-dimensional Sasakian space-forms.")
    ap.add_argument("--config", help="config file (flat key = value); the "
                                     "SQK_CONFIG env var supplies a default")
    sub = ap.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int)
    common.add_argument("--tol-alg", type=float, dest="tol_alg")
    common.add_argument("--tol-fd", type=float, dest="tol_fd")
    common.add_argument("--tol-ode", type=float, dest="tol_ode")
    common.add_argument("--out", help="output path")
    common.add_argument("--r", type=int, choices=(0, 1))
    common.add_argument("--H", type=float)
    common.add_argument("--grid", help="start:stop:step override")

    pv = sub.add_parser("verify", parents=[common],
                        help="run a verification scope and emit a JSON report")
    pv.add_argument("scope", choices=verify.SCOPES)

    pt = sub.add_parser("tables", parents=[common],
                        help="closedness (table2) or energy-condition (table3) scan")
    pt.add_argument("which", choices=("table2", "table3"))

    ps = sub.add_parser("simulate", parents=[common],
                        help="integrate a trajectory and write CSV")
    ps.add_argument("kind", choices=("magnetic", "dirac-flow", "geodesic"))
    ps.add_argument("--C1", default="1,0", help="re,im")
    ps.add_argument("--C2", default="0.5,0.3", help="re,im")
    ps.add_argument("--initial", default="", help="x1,x2,x3 start point")
    ps.add_argument("--t-max", type=float, dest="t_max")
    ps.add_argument("--dt", type=float)

    pe = sub.add_parser("edm", parents=[common],
                        help="construct and certify a coupled-system solution")
    pe.add_argument("--q", type=float, required=True,
                    help="invariant norm of the spinor")
    pe.add_argument("--sign", choices=("+", "-"))
    return ap


def _merge_config(args):
    cfg = base_config()
    if args.config:
        cfg = load_config_file(args.config, cfg)
    updates = {}
    for key in ("seed", "tol_alg", "tol_fd", "tol_ode", "t_max", "dt"):
        val = getattr(args, key, None)
        if val is not None:
            updates[key] = val
    if getattr(args, "out", None):
        updates["out"] = args.out
    if getattr(args, "r", None) is not None:
        updates["restrict_r"] = args.r
    if getattr(args, "H", None) is not None:
        updates["restrict_H"] = args.H
    if getattr(args, "grid", None):
        if args.command == "tables" and args.which == "table3":
            updates["grid_table3"] = args.grid
        else:
            updates["grid_table2_r0"] = args.grid
            updates["grid_table2_r1"] = args.grid
    return replace(cfg, **updates).validate()


def _write_out(path: str, text: str):
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_verify(args) -> int:
    cfg = _merge_config(args)
    results = verify.run_scope(args.scope, cfg)
    report = verify.build_report(args.scope, cfg, results)
    _write_out(cfg.out, verify.report_json(report))
    if cfg.out:
        for row in report["checks"]:
            state = "SKIP" if row["skipped"] else ("PASS" if row["passed"] else "FAIL")
            print(f"{state:4s} {row['id']}")
        print(f"{'PASS' if report['passed'] else 'FAIL'} ({len(report['checks'])} "
              f"checks, {report['n_skipped']} with skipped parts)")
    return EXIT_OK if report["passed"] else EXIT_CHECK_FAILED


def _render_table2(scan, r):
    fams = ("S0", "S+", "S-")
    width = 16
    head = "pair".ljust(6) + "".join(f.ljust(width) for f in fams)
    lines = [f"closedness of the two-spinor Maxwell form (r={r})", head]
    for f2 in fams:
        cells = []
        for f1 in fams:
            cell = scan[(f1, f2)]
            if cell["all_closed"]:
                text = "all valid H"
            elif cell["closed_H"]:
                text = ",".join(f"H={h:g}" for h in cell["closed_H"])
            else:
                text = "none"
            cells.append(text.ljust(width))
        lines.append(f2.ljust(6) + "".join(cells))
    return "\n".join(lines) + "\n"


def _render_table3(scan):
    lines = ["energy-condition boundaries by solution type"]
    for kind in ("i", "ii", "iii"):
        parts = []
        for cond in ("nec", "wec", "dec", "sec"):
            marks = scan[kind]["boundaries"][cond]
            if scan[kind]["empty"][cond]:
                parts.append(f"{cond.upper()}: empty")
            elif marks:
                txt = ", ".join(f"[{lo:g},{hi:g}]" for lo, hi in marks)
                parts.append(f"{cond.upper()}: {txt}")
            else:
                parts.append(f"{cond.upper()}: all valid H")
        lines.append(f"({kind})  " + "  ".join(parts))
    return "\n".join(lines) + "\n"


def cmd_tables(args) -> int:
    cfg = _merge_config(args)
    if args.which == "table2":
        r = cfg.restrict_r if cfg.restrict_r in (0, 1) else 0
        grid = parse_grid(cfg.grid_table2_r0 if r == 0 else cfg.grid_table2_r1)
        scan = fld.table2_scan(r, grid)
        payload = {
            "schema": verify.SCHEMA_VERSION,
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "table": "table2",
            "r": r,
            "cells": {f"{f1}x{f2}": cell for (f1, f2), cell in scan.items()},
        }
        text = _render_table2(scan, r)
    else:
        if cfg.restrict_r == 0:
            print("table3 is defined for the Lorentzian signature only",
                  file=sys.stderr)
            return EXIT_USAGE
        grid = parse_grid(cfg.grid_table3)
        scan = fld.table3_scan(grid)
        payload = {
            "schema": verify.SCHEMA_VERSION,
            "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
            "table": "table3",
            "grid_step": float(grid[1] - grid[0]),
            "boundaries": {k: scan[k]["boundaries"] for k in scan},
            "empty": {k: scan[k]["empty"] for k in scan},
        }
        text = _render_table3(scan)
    sys.stdout.write(text)
    if cfg.out:
        payload_json = json.dumps(payload, indent=2, sort_keys=True, default=str)
        _write_out(cfg.out, payload_json + "\n")
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = _merge_config(args)
    r = cfg.restrict_r if cfg.restrict_r in (0, 1) else 0
    h_val = cfg.restrict_H if not np.isnan(cfg.restrict_H) else (2.0 if r == 0 else 0.0)
    sf = SpaceForm(r, h_val)
    sf.require_chart()
    c1 = _parse_complex(args.C1)
    c2 = _parse_complex(args.C2)
    if args.initial:
        p0 = np.array([float(t) for t in args.initial.split(",")])
    else:
        p0 = geo.random_points(sf, 1, cfg.seed, margin=0.8)[0]
    geo.validate_point(sf, p0)
    field = sqk.explicit_solution(sf, "S0", c1, c2)
    t_max = cfg.t_max
    dt = cfg.dt
    if args.kind == "dirac-flow":
        traj = dyn.dirac_flow(field, p0, t_max, dt)
    else:
        v0 = geo.frame_to_chart(sf, p0, dirac_current(field.value(p0), r=sf.r))
        charge = dyn.magnetic_charge(field, p0) if args.kind == "magnetic" else 0.0
        f_frame = contact_maxwell(1.0) if args.kind == "magnetic" else np.zeros((3, 3))
        traj = dyn.integrate_charged(sf, p0, v0, charge, f_frame, t_max, dt)
    out = cfg.out or "trajectory.csv"
    try:
        dyn.write_csv(out, traj)
    except OSError as exc:
        print(f"cannot write {out}: {exc}", file=sys.stderr)
        return EXIT_IO
    sp = traj.monitors["speed2"]
    j1 = traj.monitors["J1"]
    print(f"samples={len(traj)} domain_exit={traj.domain_exit} "
          f"speed2_drift={np.max(np.abs(sp - sp[0])):.3e} "
          f"J1_drift={np.max(np.abs(j1 - j1[0])):.3e} -> {out}")
    return EXIT_CHECK_FAILED if traj.domain_exit else EXIT_OK


def cmd_edm(args) -> int:
    cfg = _merge_config(args)
    r = cfg.restrict_r if cfg.restrict_r in (0, 1) else 1
    branch = 0
    if args.sign:
        branch = +1 if args.sign == "+" else -1
    try:
        sol = fld.edm_solution(args.q, r, branch)
    except (ZeroDivisionError, ValueError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_USAGE
    res = fld.edm_verify(sol, n_points=max(4, cfg.n_points // 10), seed=cfg.seed)
    cert = {
        "schema": verify.SCHEMA_VERSION,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "r": r,
        "q_norm": format(args.q, ".17g"),
        "branch": "+" if sol.branch > 0 else "-",
        "H": format(sol.sf.H, ".17g"),
        "Lambda": format(sol.Lam, ".17g"),
        "B": format(sol.gauge.B, ".17g"),
        "lambda": format(sol.lam, ".17g"),
        "mode": res["mode"],
        "residuals": {k: format(v, ".17g") for k, v in res.items()
                      if k != "mode"},
    }
    if r == 1:
        cert["classification"] = fld.edm_classify(args.q)
    text = json.dumps(cert, indent=2, sort_keys=True) + "\n"
    _write_out(cfg.out, text)
    if cfg.out:
        print(f"H={sol.sf.H:.6g} Lambda={sol.Lam:.6g} mode={res['mode']} -> {cfg.out}")
    return EXIT_OK


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        if args.command == "verify":
            return cmd_verify(args)
        if args.command == "tables":
            return cmd_tables(args)
        if args.command == "simulate":
            return cmd_simulate(args)
        if args.command == "edm":
            return cmd_edm(args)
        return EXIT_USAGE
    except (ConfigError, ChartValidityError, ChartDomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
