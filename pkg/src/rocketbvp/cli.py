"""Command-line entry point: ``rocketbvp solve|certify|sweep``.

Exit codes:
    0  success (solve: all three methods agree; certify: verdict true)
    1  unreadable or malformed input, bad arguments
    2  Picard iteration failed to converge
    3  oracles disagree with the Picard solution or failed themselves
    4  certify: existence conditions not met
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from .errors import InvalidScenarioError, RocketBVPError, SolverError
from .model import ExhaustProfile, MassProfile, ScenarioConfig, chord_shift, mass_eval
from .operator import GridFunction, ode_residual_profile
from .oracle import compare, fd_newton_solve, shooting_solve, trajectory_to_grid
from .scenario_io import ScenarioFileError, load_scenario, scenario_to_dict, write_trajectory_csv
from .solver import certificate, picard_solve

REPORT_SCHEMA = "rocketbvp.report/1"
EXIT_OK, EXIT_INPUT, EXIT_NONCONVERGED, EXIT_DISAGREE, EXIT_UNCERTIFIED = 0, 1, 2, 3, 4
SWEEP_PARAMS = ("A", "C_D", "burn_rate", "c", "x1")


def _finite(obj):
    """Replace non-finite floats by ``None`` so the JSON stays standard."""
    if isinstance(obj, dict):
        return {k: _finite(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def dump_report(report: dict) -> str:
    return json.dumps(_finite(report), indent=2, sort_keys=True, allow_nan=False) + "\n"


def drag_gravity_ratio(z: GridFunction, config: ScenarioConfig) -> dict:
    """Integrated drag deceleration relative to the gravity loss ``g (t1 - t0)``."""
    shift = chord_shift(config)
    x = z.values + shift(z.grid)
    v = z.derivs + shift.a
    m, _ = mass_eval(config.mass, z.grid)
    drag_acc = config.drag_factor * v**2 * np.exp(-x / config.H) / (2 * m)
    drag_impulse = float(np.trapezoid(drag_acc, z.grid))
    gravity_impulse = config.g * (config.t1 - config.t0)
    ratio = drag_impulse / gravity_impulse if gravity_impulse > 0 else math.nan
    return {"drag_impulse": drag_impulse, "gravity_impulse": gravity_impulse, "drag_gravity_impulse_ratio": ratio}


def agreement_tolerance(z: GridFunction) -> float:
    return max(1e-3 * float(np.max(np.abs(z.values))), 1e-6)


def run_solve(config: ScenarioConfig, label: str):
    """Solve, cross-check, and assemble the report.

    Returns ``(exit_code, report, csv_columns_or_None)``.
    """
    report = {
        "schema": REPORT_SCHEMA,
        "label": label,
        "scenario": scenario_to_dict(config),
        "certificate": {m: certificate(config, m).to_dict() for m in ("paper", "rigorous")},
    }
    try:
        z, srep = picard_solve(config)
    except SolverError as exc:
        report["solve"] = exc.report.to_dict() if exc.report else {}
        report["solve"]["error"] = str(exc)
        report["status"] = "nonconverged"
        report["exit_code"] = EXIT_NONCONVERGED
        return EXIT_NONCONVERGED, report, None
    report["solve"] = srep.to_dict()
    report["diagnostics"] = drag_gravity_ratio(z, config)

    tol = agreement_tolerance(z)
    oracles = {"tolerance": tol}
    candidates = {"picard": z}
    try:
        traj = shooting_solve(config, reference=z)
        candidates["shooting"] = trajectory_to_grid(traj, config)
        oracles["shooting"] = {"v_init": traj.v_init, "roots": list(traj.roots), "miss": float(traj.x[-1] - config.x1)}
    except RocketBVPError as exc:
        oracles["shooting"] = {"error": str(exc)}
    try:
        candidates["fd_newton"] = fd_newton_solve(config)
        oracles["fd_newton"] = {"ok": True}
    except RocketBVPError as exc:
        oracles["fd_newton"] = {"error": str(exc)}
    pairs = {}
    names = list(candidates)
    for i, p in enumerate(names):
        for q in names[i + 1 :]:
            pairs[f"{p}_vs_{q}"] = compare(candidates[p], candidates[q])
    oracles["comparisons"] = pairs
    agree = len(candidates) == 3 and all(m["sup_values"] <= tol for m in pairs.values())
    oracles["agree"] = agree
    report["oracles"] = oracles

    code = EXIT_OK if agree else EXIT_DISAGREE
    report["status"] = "ok" if agree else "oracle_disagreement"
    report["exit_code"] = code
    shift = chord_shift(config)
    cols = {
        "z": z,
        "x": z.values + shift(z.grid),
        "v": z.derivs + shift.a,
        "residual": ode_residual_profile(z, config),
    }
    return code, report, cols


def _out_dir(arg: str | None) -> Path:
    return Path(arg or os.environ.get("ROCKETBVP_OUT") or ".")


def _load(path: str, overrides: dict | None = None):
    config, label = load_scenario(path)
    if overrides:
        try:
            config = replace(config, **{k: v for k, v in overrides.items() if v is not None})
        except InvalidScenarioError as exc:
            raise ScenarioFileError(path, 0, 0, f"after command-line overrides: {exc}") from None
    return config, label


def cmd_solve(args) -> int:
    config, label = _load(args.scenario, {"n_grid": args.grid, "tol": args.tol, "damping": args.damping})
    code, report, cols = run_solve(config, label)
    if args.stamp:
        report["created"] = datetime.now(timezone.utc).isoformat()
    out = _out_dir(args.out)
    out.mkdir(parents=True, exist_ok=True)
    if cols is not None:
        write_trajectory_csv(out / f"{label}.trajectory.csv", cols["z"], cols["x"], cols["v"], cols["residual"])
    (out / f"{label}.report.json").write_text(dump_report(report), encoding="utf-8")
    print(f"{label}: {report['status']} (exit {code})", file=sys.stderr)
    return code


def certify_report(certs: dict, label: str) -> dict:
    return {
        "schema": REPORT_SCHEMA,
        "label": label,
        "certificate": {m: c.to_dict() for m, c in certs.items()},
    }


def cmd_certify(args) -> int:
    config, label = _load(args.scenario)
    modes = [args.mode] if args.mode else ["paper", "rigorous"]
    certs = {m: certificate(config, m) for m in modes}
    sys.stdout.write(dump_report(certify_report(certs, label)))
    deciding = certs[args.mode or "rigorous"]
    return EXIT_OK if deciding.verdict_overall else EXIT_UNCERTIFIED


def with_param(config: ScenarioConfig, param: str, value: float) -> ScenarioConfig:
    if param in ("A", "C_D", "x1"):
        return replace(config, **{param: value})
    if param == "burn_rate":
        m = config.mass
        return replace(config, mass=MassProfile(m.m_dry, m.propellant, value, m.t_start))
    if param == "c":
        ex = config.exhaust
        return replace(config, exhaust=ExhaustProfile(tuple(-abs(value) for _ in ex.values), ex.breakpoints))
    raise ValueError(f"unknown sweep parameter {param!r}")


SWEEP_COLUMNS = (
    "param", "value", "status", "converged", "iterations", "max_abs_z",
    "cert_paper", "cert_rigorous", "linear", "drag_gravity_ratio",
)


def sweep_row(config: ScenarioConfig, param: str, value: float) -> dict:
    row = dict.fromkeys(SWEEP_COLUMNS, "")
    row.update(param=param, value=value, converged=False)
    try:
        cfg = with_param(config, param, value)
    except InvalidScenarioError as exc:
        row["status"] = f"invalid: {exc}"
        return row
    row["linear"] = cfg.drag_factor == 0
    row["cert_paper"] = certificate(cfg, "paper").verdict_overall
    row["cert_rigorous"] = certificate(cfg, "rigorous").verdict_overall
    try:
        z, rep = picard_solve(cfg)
    except SolverError as exc:
        row["status"] = exc.report.status if exc.report else "failed"
        row["iterations"] = exc.report.iterations if exc.report else ""
        return row
    row.update(
        status="ok",
        converged=True,
        iterations=rep.iterations,
        max_abs_z=float(np.max(np.abs(z.values))),
        drag_gravity_ratio=drag_gravity_ratio(z, cfg)["drag_gravity_impulse_ratio"],
    )
    return row


def _sweep_task(task):
    return sweep_row(*task)


def cmd_sweep(args) -> int:
    if args.param not in SWEEP_PARAMS:
        print(f"error: --param must be one of {', '.join(SWEEP_PARAMS)}", file=sys.stderr)
        return EXIT_INPUT
    try:
        lo, hi = (float(s) for s in args.range.split(":"))
    except ValueError:
        print("error: --range must look like LO:HI", file=sys.stderr)
        return EXIT_INPUT
    if args.steps < 1:
        print("error: --steps must be >= 1", file=sys.stderr)
        return EXIT_INPUT
    config, _ = _load(args.scenario)
    values = [lo] if args.steps == 1 else list(np.linspace(lo, hi, args.steps))
    tasks = [(config, args.param, float(v)) for v in values]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_task, tasks))
    else:
        rows = [_sweep_task(t) for t in tasks]
    fh = open(args.out, "w", newline="", encoding="utf-8") if args.out else sys.stdout
    try:
        w = csv.DictWriter(fh, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: (format(v, ".17g") if isinstance(v, float) else v) for k, v in row.items()})
    finally:
        if fh is not sys.stdout:
            fh.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rocketbvp", description="Rocket two-point boundary value problem solver.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="solve a scenario and cross-check with two oracles")
    s.add_argument("scenario")
    s.add_argument("--grid", type=int, help="override n_grid")
    s.add_argument("--tol", type=float, help="override the Picard tolerance")
    s.add_argument("--damping", type=float, help="override the relaxation weight")
    s.add_argument("--out", help="output directory (default $ROCKETBVP_OUT or .)")
    s.add_argument("--stamp", action="store_true", help="add a creation timestamp to the report")
    s.set_defaults(func=cmd_solve)

    c = sub.add_parser("certify", help="evaluate the existence conditions without solving")
    c.add_argument("scenario")
    c.add_argument("--mode", choices=("paper", "rigorous"))
    c.set_defaults(func=cmd_certify)

    w = sub.add_parser("sweep", help="solve a family of scenarios varying one parameter")
    w.add_argument("scenario")
    w.add_argument("--param", required=True, help=f"one of {', '.join(SWEEP_PARAMS)} (c means |c|)")
    w.add_argument("--range", required=True, metavar="LO:HI")
    w.add_argument("--steps", type=int, required=True)
    w.add_argument("--jobs", type=int, default=1)
    w.add_argument("--out", help="CSV path (default stdout)")
    w.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ScenarioFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
