"""Command-line front end.

Subcommands:

    validate  -- structural checks and coupling-strength threshold (JSON)
    simulate  -- one network integration: CSV trajectory + JSON summary
    scalar    -- scalar decay model: CSV of (t, V_numeric, V_closed_form)
    sweep     -- repeat simulate over one parameter, CSV table of results

Exit codes are the machine contract: 0 success, 2 input/schema error,
3 structural assumption violated (report still emitted), 4 numerical
failure (partial CSV flushed with a truncation marker).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
import time

import numpy as np

from ._util import float_repr
from .config import RunConfig, load_config
from .errors import (
    AssumptionViolatedError,
    BlowupError,
    NotNegativeDefiniteError,
    NotNegativeInTSError,
    PtsyncError,
    StepUnderflowError,
)
from .network import compute_threshold
from .regulator import Regulator
from .scalar import ScalarModel, classify_phi, closed_form, simulate_scalar
from .simulate import Trajectory, _csv_text, integrate

__all__ = ["run", "main"]

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_ASSUMPTION = 3
EXIT_NUMERICAL = 4

# W counts as "still decaying" only above this relative floor; below it
# the trajectory sits in roundoff and monotonicity is meaningless.
_W_FLOOR = 1e-12


def _emit_json(doc: dict, path: str | None) -> None:
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _monotone_w(w: np.ndarray) -> bool:
    w = np.asarray(w, dtype=float)
    if w.size < 2:
        return True
    floor = _W_FLOOR * max(1.0, float(w[0]))
    live = w > floor
    deltas = np.diff(w)
    return bool(np.all(deltas[live[1:]] < 0.0))


def _summary(cfg: RunConfig, traj: Trajectory, wall: float, truncated: bool) -> dict:
    e0 = float(traj.error[0]) if traj.error.size else float("nan")
    e_end = float(traj.error[-1]) if traj.error.size else float("nan")
    if e0 < 1e-9 and e_end < 1e-9:
        ratio = 0.0
    elif e0 > 0.0:
        ratio = e_end / e0
    else:
        ratio = float("nan")
    doc = {
        "error_initial": e0,
        "error_final": e_end,
        "error_ratio": ratio,
        "monotone_w": _monotone_w(traj.lyapunov),
        "samples": int(traj.times.size),
        "wall_time_s": wall,
        "truncated": truncated,
    }
    try:
        report = compute_threshold(cfg.network, cfg.dynamics.hf)
        doc["threshold"] = report.threshold
        doc["eta_sufficient"] = report.eta_sufficient
    except PtsyncError:
        doc["threshold"] = None
        doc["eta_sufficient"] = None
    return doc


def _write_trajectory_csv(
    traj: Trajectory, path: str | None, full_state: bool, marker: str | None = None
) -> None:
    text = _csv_text(traj, full_state)
    if marker is not None:
        text += f"# truncated: {marker}\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    try:
        report = compute_threshold(cfg.network, cfg.dynamics.hf)
    except AssumptionViolatedError as exc:
        doc = {
            "a1": [
                {"dimension": v.dimension, "ok": v.ok, "reasons": list(v.reasons)}
                for v in exc.verdicts
            ],
            "error": str(exc),
        }
        _emit_json(doc, args.out_json)
        return EXIT_ASSUMPTION
    except (NotNegativeDefiniteError, NotNegativeInTSError) as exc:
        _emit_json({"error": str(exc)}, args.out_json)
        return EXIT_ASSUMPTION
    _emit_json(report.to_dict(), args.out_json)
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    out_csv = args.out_csv or cfg.out_csv
    out_json = args.out_json or cfg.out_json
    start = time.perf_counter()
    try:
        traj = integrate(cfg.network, cfg.dynamics, cfg.initial_states, cfg.integrator)
    except (BlowupError, StepUnderflowError) as exc:
        wall = time.perf_counter() - start
        if exc.partial is not None:
            _write_trajectory_csv(exc.partial, out_csv, args.full_state, marker=str(exc))
            _emit_json(_summary(cfg, exc.partial, wall, truncated=True), out_json)
        else:
            _emit_json({"error": str(exc), "truncated": True}, out_json)
        return EXIT_NUMERICAL
    wall = time.perf_counter() - start
    _write_trajectory_csv(traj, out_csv, args.full_state)
    _emit_json(_summary(cfg, traj, wall, truncated=False), out_json)
    return EXIT_OK


def cmd_scalar(args) -> int:
    regulator = Regulator(kind=args.regulator, T=args.T, ell=args.ell, a=args.a)
    model = ScalarModel(
        kind=args.kind,
        regulator=regulator,
        v0=args.v0,
        delta=args.delta,
        delta1=args.delta1,
        delta2=args.delta2,
        p=args.p,
    )
    traj = simulate_scalar(model, stop_gap=args.stop_gap, samples=args.samples)
    exact = [closed_form(model, t) for t in traj.times]

    lines = ["t,V_numeric,V_closed_form"]
    for t, v, e in zip(traj.times, traj.values, exact):
        lines.append(",".join([float_repr(t), float_repr(v), float_repr(e)]))
    text = "\n".join(lines) + "\n"
    if args.out_csv:
        with open(args.out_csv, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    doc: dict = {"model": dataclasses.asdict(model) | {"regulator": regulator.to_dict()}}
    if model.kind in ("lemma2", "lemma3") and regulator.kind == "power":
        phi = classify_phi(model)
        doc["classification"] = phi.value.value
        if phi.constant is not None:
            doc["constant"] = phi.constant
        sys.stderr.write(f"classification: {phi.value.value}\n")
    else:
        doc["classification"] = None
        sys.stderr.write("classification: not defined for this model/regulator\n")
    if args.out_json:
        _emit_json(doc, args.out_json)
    return EXIT_OK


_SWEEP_PARAMETERS = ("eta", "ell", "shrink_factor")


def _sweep_variant(cfg: RunConfig, parameter: str, value: float) -> RunConfig:
    if parameter == "eta":
        network = dataclasses.replace(cfg.network, eta=value)
        return dataclasses.replace(cfg, network=network)
    if parameter == "ell":
        regulator = dataclasses.replace(cfg.network.regulator, ell=value)
        network = dataclasses.replace(cfg.network, regulator=regulator)
        return dataclasses.replace(cfg, network=network)
    integrator = dataclasses.replace(cfg.integrator, shrink_factor=value)
    return dataclasses.replace(cfg, integrator=integrator)


def cmd_sweep(args) -> int:
    if args.parameter not in _SWEEP_PARAMETERS:
        sys.stderr.write(
            f"error: unknown sweep parameter {args.parameter!r}; "
            f"choose from {', '.join(_SWEEP_PARAMETERS)}\n"
        )
        return EXIT_INPUT
    cfg = load_config(args.config)
    rows = []
    for value in args.values:
        variant = _sweep_variant(cfg, args.parameter, value)
        try:
            traj = integrate(
                variant.network, variant.dynamics, variant.initial_states, variant.integrator
            )
        except (BlowupError, StepUnderflowError):
            rows.append((value, float("nan"), False))
            continue
        e0, e_end = float(traj.error[0]), float(traj.error[-1])
        if e0 < 1e-9 and e_end < 1e-9:
            ratio = 0.0
        elif e0 > 0.0:
            ratio = e_end / e0
        else:
            ratio = float("nan")
        rows.append((value, ratio, _monotone_w(traj.lyapunov)))

    lines = [f"{args.parameter},final_error_ratio,monotone_W"]
    for value, ratio, mono in rows:
        lines.append(",".join([float_repr(value), float_repr(ratio), str(mono).lower()]))
    text = "\n".join(lines) + "\n"
    if args.out_csv:
        with open(args.out_csv, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ptsync",
        description="Prescribed-time synchronization analysis for multiweighted directed networks",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_val = sub.add_parser("validate", help="check assumptions and compute the threshold")
    p_val.add_argument("--config", required=True)
    p_val.add_argument("--out-json", default=None)
    p_val.set_defaults(func=cmd_validate)

    p_sim = sub.add_parser("simulate", help="integrate a configured network run")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--out-csv", default=None)
    p_sim.add_argument("--out-json", default=None)
    p_sim.add_argument("--full-state", action="store_true")
    p_sim.add_argument("--seed", type=int, default=None, help="accepted for interface parity")
    p_sim.set_defaults(func=cmd_simulate)

    p_sca = sub.add_parser("scalar", help="scalar decay model vs. closed form")
    p_sca.add_argument("--kind", choices=("lemma2", "power", "lemma3"), default="lemma2")
    p_sca.add_argument("--regulator", choices=("power", "exp_a", "exp_b"), default="power")
    p_sca.add_argument("--T", type=float, default=1.0)
    p_sca.add_argument("--ell", type=float, default=1.0)
    p_sca.add_argument("--a", type=float, default=1.0)
    p_sca.add_argument("--v0", type=float, default=15.0)
    p_sca.add_argument("--delta", type=float, default=1.0)
    p_sca.add_argument("--delta1", type=float, default=0.0)
    p_sca.add_argument("--delta2", type=float, default=1.0)
    p_sca.add_argument("--p", type=float, default=1.0)
    p_sca.add_argument("--stop-gap", type=float, default=1e-3)
    p_sca.add_argument("--samples", type=int, default=200)
    p_sca.add_argument("--out-csv", default=None)
    p_sca.add_argument("--out-json", default=None)
    p_sca.set_defaults(func=cmd_scalar)

    p_swp = sub.add_parser("sweep", help="repeat a run over one parameter")
    p_swp.add_argument("--config", required=True)
    p_swp.add_argument("--parameter", required=True)
    p_swp.add_argument("--values", type=float, nargs="+", required=True)
    p_swp.add_argument("--out-csv", default=None)
    p_swp.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (AssumptionViolatedError, NotNegativeDefiniteError, NotNegativeInTSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_ASSUMPTION
    except (BlowupError, StepUnderflowError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_NUMERICAL
    except PtsyncError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except OSError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT


def run() -> None:
    """Console-script entry point."""
    sys.exit(main())
