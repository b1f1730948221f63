"""Command-line interface and flat-file serialization.

Two subcommands.  ``evolve`` runs one trajectory and writes
quantities.csv (t,L,A,dA_rel,Psi), snapshots.csv (t,j,x,y) and
manifest.json.  ``converge`` runs a refinement ladder and writes
convergence.csv plus manifest.json.  Floats are serialized with 17
significant digits so files re-parse bit-exactly.

Exit codes: 0 success, 1 numerical failure (annotated with the failing
time level), 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path

from . import __version__
from .curves import CurveKind
from .errors import CurveFlowError, EvolutionAborted
from .forcing import ForceSpec
from .harness import (
    ConvergenceTable,
    EvolutionRecord,
    Scheme,
    SchemeConfig,
    run_convergence,
    run_evolution,
)

_CANONICAL_ERRORS = ("E1", "E2", "E3", "E4")
_EXTRA_ERRORS = ("E1_L2", "E1_Linf")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


# ---------------------------------------------------------------------------
# Config (de)serialization


def config_to_dict(config: SchemeConfig) -> dict:
    return {
        "scheme": config.scheme.value,
        "case": config.kind.value,
        "flow": {
            "variant": config.force.variant,
            "ind": config.force.ind,
            "beta": config.force.beta,
        },
        "n": config.n,
        "tau": config.tau,
        "t_final": config.t_final,
        "alpha": config.alpha,
        "snapshot_times": list(config.snapshot_times),
    }


def config_from_dict(data: dict) -> SchemeConfig:
    flow = data["flow"]
    return SchemeConfig(
        scheme=Scheme(data["scheme"]),
        kind=CurveKind(data["case"]),
        force=ForceSpec(flow["variant"], ind=flow["ind"], beta=flow["beta"]),
        n=data["n"],
        tau=data["tau"],
        t_final=data["t_final"],
        alpha=data["alpha"],
        snapshot_times=tuple(data["snapshot_times"]),
    )


# ---------------------------------------------------------------------------
# Writers


def write_quantities(path: Path, record: EvolutionRecord) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "L", "A", "dA_rel", "Psi"])
        for row in zip(
            record.times, record.perimeter, record.area, record.rel_area_loss, record.mesh_ratio
        ):
            writer.writerow([_fmt(v) for v in row])


def write_snapshots(path: Path, record: EvolutionRecord) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "j", "x", "y"])
        for t, curve in record.snapshots:
            for j, (x, y) in enumerate(curve.vertices):
                writer.writerow([_fmt(t), str(j), _fmt(x), _fmt(y)])


def write_convergence(path: Path, table: ConvergenceTable) -> None:
    extras = [n for n in table.error_names if n not in _CANONICAL_ERRORS]
    names = list(_CANONICAL_ERRORS) + extras
    header = ["N", "h", "tau"] + names + [f"EOC_{n}" for n in names]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i, row in enumerate(table.rows):
            cells = [str(row.n), _fmt(row.h), _fmt(row.tau)]
            cells += [_fmt(row.errors[n]) if n in row.errors else "" for n in names]
            for n in names:
                orders = table.eoc.get(n, [])
                has = i >= 1 and len(orders) >= i and not math.isnan(orders[i - 1])
                cells.append(_fmt(orders[i - 1]) if has else "")
            writer.writerow(cells)


def _write_manifest(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# Argument handling


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--scheme", required=True, choices=[s.value for s in Scheme])
    sub.add_argument("--case", required=True, choices=[k.value for k in CurveKind])
    sub.add_argument("--flow", required=True, choices=["ap", "ap-ind", "rate"])
    sub.add_argument("--ind", type=int, help="turning number (flow ap-ind only)")
    sub.add_argument("--beta", type=float, help="area decrease rate (flow rate only)")
    sub.add_argument("--alpha", type=float, help="tangential-motion strength (fem-tm only)")
    sub.add_argument("--out", required=True, help="output directory")
    sub.add_argument("--seed", type=int, help="reserved; all computations are deterministic")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="curveflow")
    commands = parser.add_subparsers(dest="command", required=True)

    evolve = commands.add_parser("evolve", help="run one evolution experiment")
    _add_common_flags(evolve)
    evolve.add_argument("--n", type=int, required=True, help="number of nodes (e.g. 80)")
    evolve.add_argument("--tau", type=float, default=1.0 / 160.0, help="time step")
    evolve.add_argument("--tfinal", type=float, required=True, help="final time")
    evolve.add_argument("--snapshots", help="comma-separated snapshot times")

    converge = commands.add_parser("converge", help="run a convergence ladder")
    _add_common_flags(converge)
    converge.add_argument("--nmin", type=int, required=True, help="coarsest node count")
    converge.add_argument("--levels", type=int, required=True, help="number of rows")
    converge.add_argument("--tfinal", type=float, default=0.25, help="final time")
    return parser


def _force_from_args(args, parser: argparse.ArgumentParser) -> ForceSpec:
    if args.flow == "ap":
        if args.ind is not None or args.beta is not None:
            parser.error("--ind/--beta are not valid for --flow ap")
        return ForceSpec.area_preserving()
    if args.flow == "ap-ind":
        if args.ind is None:
            parser.error("--flow ap-ind requires --ind")
        if args.beta is not None:
            parser.error("--beta is not valid for --flow ap-ind")
        if args.ind == 0:
            parser.error("--ind must be nonzero")
        return ForceSpec.area_preserving_nonsimple(args.ind)
    if args.beta is None:
        parser.error("--flow rate requires --beta")
    if args.ind is not None:
        parser.error("--ind is not valid for --flow rate")
    return ForceSpec.prescribed_rate(args.beta)


def _alpha_from_args(args, parser: argparse.ArgumentParser) -> float | None:
    if args.scheme == Scheme.FEM_TM.value:
        alpha = 1.0 if args.alpha is None else args.alpha
        if not 0.0 < alpha <= 1.0:
            parser.error("--alpha must lie in (0, 1]")
        return alpha
    if args.alpha is not None:
        parser.error("--alpha is only valid for --scheme fem-tm")
    return None


def _parse_snapshots(args, parser: argparse.ArgumentParser) -> tuple[float, ...]:
    if args.snapshots is None:
        return (0.0, args.tfinal)
    try:
        return tuple(float(tok) for tok in args.snapshots.split(",") if tok.strip())
    except ValueError:
        parser.error(f"--snapshots must be comma-separated numbers, got {args.snapshots!r}")
        raise  # unreachable; parser.error exits


# ---------------------------------------------------------------------------
# Commands


def _cmd_evolve(args, parser: argparse.ArgumentParser) -> int:
    force = _force_from_args(args, parser)
    alpha = _alpha_from_args(args, parser)
    snapshots = _parse_snapshots(args, parser)
    try:
        config = SchemeConfig(
            scheme=Scheme(args.scheme),
            kind=CurveKind(args.case),
            force=force,
            n=args.n,
            tau=args.tau,
            t_final=args.tfinal,
            alpha=alpha,
            snapshot_times=snapshots,
        )
    except ValueError as exc:
        parser.error(str(exc))

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    failure = None
    try:
        record = run_evolution(config)
    except EvolutionAborted as exc:
        record = exc.record
        failure = {"level": exc.level, "time": exc.time, "message": str(exc.cause)}

    q_path = outdir / "quantities.csv"
    s_path = outdir / "snapshots.csv"
    write_quantities(q_path, record)
    write_snapshots(s_path, record)
    manifest = {
        "artifact_version": __version__,
        "command": "evolve",
        "config": config_to_dict(config),
        "outputs": [str(q_path), str(s_path)],
        "duration_seconds": time.perf_counter() - started,
        "failure": failure,
    }
    _write_manifest(outdir / "manifest.json", manifest)
    if failure is not None:
        print(
            f"evolve failed at level {failure['level']} (t = {failure['time']:g}): "
            f"{failure['message']}; partial results written to {outdir}",
            file=sys.stderr,
        )
        return 1
    print(f"wrote {q_path} {s_path} {outdir / 'manifest.json'}")
    return 0


def _cmd_converge(args, parser: argparse.ArgumentParser) -> int:
    force = _force_from_args(args, parser)
    alpha = _alpha_from_args(args, parser)
    if args.nmin < 3:
        parser.error("--nmin must be at least 3")
    if args.levels < 1:
        parser.error("--levels must be at least 1")
    n_list = [args.nmin * 2**i for i in range(args.levels)]

    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    started = time.perf_counter()
    table = run_convergence(
        Scheme(args.scheme),
        CurveKind(args.case),
        force,
        n_list,
        args.tfinal,
        alpha=alpha,
    )
    c_path = outdir / "convergence.csv"
    write_convergence(c_path, table)
    failed = [row.n for row in table.rows if row.failure is not None]
    manifest = {
        "artifact_version": __version__,
        "command": "converge",
        "config": {
            "scheme": args.scheme,
            "case": args.case,
            "flow": {"variant": force.variant, "ind": force.ind, "beta": force.beta},
            "n_list": n_list,
            "t_final": args.tfinal,
            "alpha": alpha,
        },
        "outputs": [str(c_path)],
        "duration_seconds": time.perf_counter() - started,
        "failure": {"rows": failed} if failed else None,
    }
    _write_manifest(outdir / "manifest.json", manifest)
    if failed:
        print(f"converge: rows {failed} failed and were excluded from EOC", file=sys.stderr)
        return 1
    print(f"wrote {c_path} {outdir / 'manifest.json'}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "evolve":
            return _cmd_evolve(args, parser)
        return _cmd_converge(args, parser)
    except CurveFlowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
