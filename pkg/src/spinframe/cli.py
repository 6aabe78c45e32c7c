"""Command-line interface.

    spinframe direction solve --N 2 --m 0
    spinframe direction sweep --N-min 2 --N-max 40
    spinframe direction povm-check --N 6 --m 0
    spinframe frame optimize --n 4 --merit xyz
    spinframe frame compare-split --N 20
    spinframe frame weighted --dirs dirs.txt --n 3
    spinframe simulate direction --N 4 --shots 200000 --seed 7
    spinframe simulate frame --n 2 --merit z --shots 50000 --seed 1

Exit codes: 0 ok, 2 usage, 3 numerical non-convergence, 4 unsupported model.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from datetime import datetime, timezone
from importlib import metadata

import numpy as np

from . import direction, frame, simulate
from .exceptions import InvalidIndex, NonConvergence, UnsupportedWeights
from .spinmath import HalfInt

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_UNSUPPORTED = 0, 2, 3, 4

DIRECTION_COLUMNS = ["N", "m", "fidelity", "one_minus_F", "mp_baseline", "eq22_limit", "ratio"]
POVM_COLUMNS = ["N", "m", "quad_order", "phi_points", "max_abs_deviation"]
FRAME_COLUMNS = [
    "n", "merit_kind", "merit", "cos_wx", "cos_wy", "cos_wz",
    "mse_total", "iters", "converged", "restarts_used",
]
WEIGHTED_COLUMNS = FRAME_COLUMNS[:2] + ["w_z", "w_xy"] + FRAME_COLUMNS[2:]
SPLIT_COLUMNS = ["N", "split_per_axis_mse", "collective_per_axis_mse", "bbm_reference"]
SIM_COLUMNS = ["mean", "stderr", "analytic", "sigma_distance", "shots", "seed", "flag"]

SIGMA_FLAG = 4.0


class UsageError(Exception):
    pass


def tool_version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _jsonable(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else str(v)
    return value


def render(rows: list[dict], columns: list[str], fmt: str) -> str:
    if fmt == "json":
        data = [{c: _jsonable(row[c]) for c in columns} for row in rows]
        return json.dumps(data, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_fmt(row[c]) for c in columns])
    return buf.getvalue()


def emit(args, rows, columns):
    text = render(rows, columns, args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        params = {
            k: v for k, v in sorted(vars(args).items())
            if k not in {"func", "out", "format", "group", "action", "command_path"}
        }
        manifest = {
            "command": " ".join(args.command_path),
            "parameters": params,
            "seed": params.get("seed"),
            "tool_version": tool_version(),
            "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds").replace("+00:00", "Z"),
        }
        with open(args.out + ".manifest.json", "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, default=str)
            fh.write("\n")
    else:
        sys.stdout.write(text)


def _half(flag: str):
    def parse(text):
        try:
            return HalfInt.of(text)
        except (InvalidIndex, ValueError, ZeroDivisionError):
            raise argparse.ArgumentTypeError(f"{flag} expects an integer or half-integer, got {text!r}")

    return parse


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return value


def _seed(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be a non-negative 64-bit integer, got {text!r}")
    return value


def _check_m(N, m, flag="--m"):
    try:
        return direction._check_Nm(N, m)
    except InvalidIndex as exc:
        raise UsageError(f"{flag}: {exc}") from exc


def _direction_row(N, sol):
    limit = (direction.BESSEL_J0_ZERO / (N + 3)) ** 2
    return {
        "N": N,
        "m": sol.signal.m.value,
        "fidelity": sol.fidelity,
        "one_minus_F": sol.one_minus_F,
        "mp_baseline": direction.mp_baseline(N),
        "eq22_limit": limit,
        "ratio": sol.one_minus_F / limit,
    }


def cmd_direction_solve(args):
    m = _check_m(args.N, args.m)
    emit(args, [_direction_row(args.N, direction.solve_optimal(args.N, m))], DIRECTION_COLUMNS)
    return EXIT_OK


def cmd_direction_sweep(args):
    if args.N_max < args.N_min:
        raise UsageError("--N-max must be >= --N-min")
    Ns = [N for N in range(args.N_min, args.N_max + 1, args.step) if args.include_odd or N % 2 == 0]
    sols = direction.sweep(Ns, include_odd=True, workers=args.workers)
    emit(args, [_direction_row(N, s) for N, s in zip(Ns, sols)], DIRECTION_COLUMNS)
    return EXIT_OK


def cmd_direction_povm(args):
    m = _check_m(args.N, args.m)
    dev = direction.povm_completeness_check(args.N, m, args.quad_order, args.phi_points)
    row = {
        "N": args.N, "m": m.value, "quad_order": args.quad_order,
        "phi_points": args.phi_points, "max_abs_deviation": dev,
    }
    emit(args, [row], POVM_COLUMNS)
    return EXIT_OK


def _frame_row(sol, label):
    return {
        "n": sol.n,
        "merit_kind": label,
        "merit": sol.merit,
        "cos_wx": sol.per_axis[0],
        "cos_wy": sol.per_axis[1],
        "cos_wz": sol.per_axis[2],
        "mse_total": sol.mse_total,
        "iters": sol.iterations,
        "converged": sol.converged,
        "restarts_used": sol.restarts_used,
    }


def _optimize(args, kind):
    return frame.alternating_optimize(
        args.n, kind, tol=args.tol, max_iters=args.max_iters,
        restarts=args.restarts, seed=args.seed, workers=args.workers,
    )


def cmd_frame_optimize(args):
    sol = _optimize(args, frame.MeritKind.parse(args.merit))
    emit(args, [_frame_row(sol, args.merit)], FRAME_COLUMNS)
    return EXIT_OK if sol.converged else EXIT_NUMERIC


def cmd_frame_split(args):
    if args.N < 4 or args.N % 4:
        raise UsageError("--N must be >= 4 with N/2 even")
    res = frame.split_strategy_compare(args.N, seed=args.seed)
    row = {
        "N": res.N,
        "split_per_axis_mse": res.split_per_axis_mse,
        "collective_per_axis_mse": res.collective_per_axis_mse,
        "bbm_reference": res.bbm_reference,
    }
    emit(args, [row], SPLIT_COLUMNS)
    return EXIT_OK


def load_directions(path):
    """Read ``x y z [weight]`` rows (comma or whitespace separated, ``#`` comments)."""
    dirs, weights = [], []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].replace(",", " ").strip()
            if not line:
                continue
            try:
                parts = [float(p) for p in line.split()]
            except ValueError as exc:
                raise UsageError(f"--dirs: line {lineno}: {exc}") from exc
            if len(parts) not in (3, 4):
                raise UsageError(f"--dirs: line {lineno} needs 3 or 4 numbers, got {len(parts)}")
            dirs.append(parts[:3])
            weights.append(parts[3] if len(parts) == 4 else 1.0)
    if not dirs:
        raise UsageError("--dirs: no directions found")
    return np.array(dirs), np.array(weights)


def cmd_frame_weighted(args):
    try:
        dirs, weights = load_directions(args.dirs)
    except OSError as exc:
        raise UsageError(f"--dirs: {exc}") from exc
    principal, _ = frame.weighted_merit_reduction(dirs, weights)
    kind, _ = frame.weighted_kind(principal)
    sol = _optimize(args, kind)
    row = _frame_row(sol, "weighted")
    row.update(w_z=kind.w_z, w_xy=kind.w_xy)
    emit(args, [row], WEIGHTED_COLUMNS)
    return EXIT_OK if sol.converged else EXIT_NUMERIC


def _sim_row(report, seed):
    row = report.as_row()
    row["seed"] = seed
    row["flag"] = "sigma>4" if report.sigma_distance > SIGMA_FLAG else ""
    return row


def cmd_simulate_direction(args):
    m = _check_m(args.N, args.m)
    sol = direction.solve_optimal(args.N, m)
    cfg = simulate.SimConfig(args.shots, args.seed, args.workers)
    samples = simulate.sample_direction_outcomes(sol.signal, cfg)
    report = simulate.estimate_direction_fidelity(samples, sol.fidelity)
    emit(args, [_sim_row(report, args.seed)], SIM_COLUMNS)
    return EXIT_OK


def cmd_simulate_frame(args):
    kind = frame.MeritKind.parse(args.merit)
    sol = frame.alternating_optimize(args.n, kind, seed=args.seed)
    cfg = simulate.SimConfig(args.shots, args.seed, args.workers)
    samples = simulate.sample_frame_outcomes(sol.alice, sol.bob, cfg)
    report = simulate.estimate_frame_merit(samples, kind, sol.merit)
    emit(args, [_sim_row(report, args.seed)], SIM_COLUMNS)
    return EXIT_OK


def _common(p):
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", help="write here instead of stdout; a .manifest.json is written alongside")
    p.add_argument("--workers", type=_positive, default=1)


def _frame_opts(p):
    p.add_argument("--restarts", type=int, default=5)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iters", type=_positive, default=1000)
    p.add_argument("--seed", type=_seed, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spinframe", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=tool_version())
    groups = parser.add_subparsers(dest="group", required=True)

    d = groups.add_parser("direction", help="direction transmission with N spins")
    dsub = d.add_subparsers(dest="action", required=True)
    p = dsub.add_parser("solve")
    p.add_argument("--N", type=_positive, required=True)
    p.add_argument("--m", type=_half("--m"))
    _common(p)
    p.set_defaults(func=cmd_direction_solve)
    p = dsub.add_parser("sweep", help="even N by default")
    p.add_argument("--N-min", dest="N_min", type=_positive, required=True)
    p.add_argument("--N-max", dest="N_max", type=_positive, required=True)
    p.add_argument("--step", type=_positive, default=1)
    p.add_argument("--include-odd", action="store_true", help="also odd N (at m=1/2)")
    _common(p)
    p.set_defaults(func=cmd_direction_sweep)
    p = dsub.add_parser("povm-check")
    p.add_argument("--N", type=_positive, required=True)
    p.add_argument("--m", type=_half("--m"))
    p.add_argument("--quad-order", type=_positive, default=40)
    p.add_argument("--phi-points", type=_positive, default=64)
    _common(p)
    p.set_defaults(func=cmd_direction_povm)

    f = groups.add_parser("frame", help="Cartesian frame with one Rydberg level")
    fsub = f.add_subparsers(dest="action", required=True)
    p = fsub.add_parser("optimize")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--merit", choices=["z", "xy", "xyz"], required=True)
    _frame_opts(p)
    _common(p)
    p.set_defaults(func=cmd_frame_optimize)
    p = fsub.add_parser("compare-split")
    p.add_argument("--N", type=_positive, required=True)
    p.add_argument("--seed", type=_seed, default=0)
    _common(p)
    p.set_defaults(func=cmd_frame_split)
    p = fsub.add_parser("weighted")
    p.add_argument("--dirs", required=True, help="file of 'x y z [weight]' rows")
    p.add_argument("--n", type=_positive, required=True)
    _frame_opts(p)
    _common(p)
    p.set_defaults(func=cmd_frame_weighted)

    s = groups.add_parser("simulate", help="Monte Carlo estimates")
    ssub = s.add_subparsers(dest="action", required=True)
    p = ssub.add_parser("direction")
    p.add_argument("--N", type=_positive, required=True)
    p.add_argument("--m", type=_half("--m"))
    p.add_argument("--shots", type=_positive, required=True)
    p.add_argument("--seed", type=_seed, required=True)
    _common(p)
    p.set_defaults(func=cmd_simulate_direction)
    p = ssub.add_parser("frame")
    p.add_argument("--n", type=_positive, required=True)
    p.add_argument("--merit", choices=["z", "xy", "xyz"], required=True)
    p.add_argument("--shots", type=_positive, required=True)
    p.add_argument("--seed", type=_seed, required=True)
    _common(p)
    p.set_defaults(func=cmd_simulate_frame)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    args.command_path = [args.group, args.action]
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"spinframe: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedWeights as exc:
        print(f"spinframe: unsupported model: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except NonConvergence as exc:
        print(f"spinframe: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
