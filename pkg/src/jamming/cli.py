"""Command-line interface.

Every run prints one document: the resolved configuration followed by the
result, as JSON, CSV or a plain-text table. Exit status is 0 on success,
1 when a computation fails or a reproduced table has a mismatching cell,
and 2 on usage errors. Failures also write a JSON error record to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import closed_forms as cf
from .combinatorics import (
    GameParams,
    brute_force_classical,
    classical_value,
    enumerate_safe_sets,
    greedy_strategy,
)
from .errors import JammingError
from .frames import FAMILIES, coherence, load_frame, make_frame, save_frame, welch_bound
from .game import decompose_by_intersection, joint_distribution, quantum_value, quantum_value_direct
from .linalg import DEFAULT_RANK_TOL
from .measurement import all_bases
from .montecarlo import estimate_alpha, estimate_alpha_via_pgm, estimate_Ewq, estimate_Lj
from .optimize import optimize_rank1, optimize_seed, scan
from .tables import TABLE_IDS, compute_table

COMMANDS = ("classical", "quantum", "joint", "decompose", "montecarlo", "optimize",
            "scan", "table", "frame", "constants", "emit")
EMIT_KINDS = ("harmonic-ratio-curve", "crossover-curve", "overlap-profile")


class UsageError(Exception):
    """Flags that parse but do not make sense together."""


@dataclass
class CommandConfig:
    command: str
    parameters: dict
    format: str = "text"
    output: str | None = None
    seed: int | None = None
    threads: int = 1

    def to_record(self) -> dict:
        return {"command": self.command, "parameters": self.parameters, "format": self.format,
                "output": self.output, "seed": self.seed, "threads": self.threads}


@dataclass
class Result:
    """Rows for tabular output plus an optional JSON payload and exit status."""

    rows: list[dict]
    payload: Any = None
    status: int = 0
    notes: list[str] = field(default_factory=list)


def _params(args) -> GameParams:
    if args.k is None and getattr(args, "d", None) is None:
        raise UsageError("give --k or --d")
    k = args.k if args.k is not None else args.n - args.d
    try:
        return GameParams(args.n, k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _frame_for(args, params: GameParams):
    if args.frame_file:
        return load_frame(args.frame_file)
    try:
        return make_frame(args.frame, params.n, params.d, args.seed or 0)
    except JammingError:
        raise
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _set_arg(text: str) -> tuple[int, ...]:
    try:
        return tuple(sorted(int(t) for t in text.split(",") if t.strip()))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated channels, got {text!r}") from None


def run_classical(args, cfg) -> Result:
    params = _params(args)
    value = classical_value(params)
    row = {**params.as_dict(), "omega_c": float(value), "exact": str(value)}
    payload = dict(row)
    if args.brute:
        found, strategy = brute_force_classical(params, args.brute, args.budget)
        row["brute_force"] = float(found)
        payload["brute_force"] = {"mode": args.brute, "value": str(found)}
        if args.brute == "aligned":
            payload["brute_force"]["strategy"] = strategy.to_table()
    if args.strategy_table:
        payload["greedy_strategy"] = greedy_strategy(params).to_table()
    return Result([row], payload)


def run_quantum(args, cfg) -> Result:
    params = _params(args)
    frame = _frame_for(args, params)
    fn = quantum_value if args.method == "trace" else quantum_value_direct
    record = fn(frame, params, args.rank_tol).to_record()
    return Result([record], record)


def run_joint(args, cfg) -> Result:
    params = _params(args)
    frame = _frame_for(args, params)
    sets = set(enumerate_safe_sets(params))
    for s in (args.x, args.y):
        if s not in sets:
            raise UsageError(f"{s} is not a safe set of the ({params.n}, {params.k}) game")
    P = joint_distribution(all_bases(frame, params, args.rank_tol), args.x, args.y)
    rows = [{"a": a, "b": b, "probability": float(P[i, j])}
            for i, a in enumerate(args.x) for j, b in enumerate(args.y)]
    return Result(rows, {"x": list(args.x), "y": list(args.y), "total": float(P.sum()), "cells": rows})


def run_decompose(args, cfg) -> Result:
    params = _params(args)
    frame = _frame_for(args, params)
    report = decompose_by_intersection(frame, params, args.rank_tol)
    rec = report.to_record()
    rec["omega_q"] = quantum_value(frame, params, args.rank_tol).omega
    return Result(rec["per_j"], rec, notes=[f"reconstructed omega_q = {report.reconstructed_omega:.12g}"])


def run_montecarlo(args, cfg) -> Result:
    seed = 0 if args.seed is None else args.seed
    q = args.quantity
    if q in ("alpha", "alpha-pgm"):
        if args.d is None:
            raise UsageError("--d is required for alpha estimates")
        fn = estimate_alpha if q == "alpha" else estimate_alpha_via_pgm
        est = fn(args.d, args.samples, seed, workers=cfg.threads)
    else:
        params = _params(args)
        if q == "lj":
            if args.j is None:
                raise UsageError("--j is required for lj estimates")
            est = estimate_Lj(params, args.j, args.samples, seed, workers=cfg.threads)
        else:
            est = estimate_Ewq(params, args.samples, seed, args.method, workers=cfg.threads)
    rec = est.to_record()
    row = {"quantity": rec["quantity"], "mean": rec["mean"], "stderr": rec["stderr"],
           "samples": rec["samples"], "seed": rec["seed"]}
    return Result([row], rec)


def run_optimize(args, cfg) -> Result:
    params = _params(args)
    seed = 0 if args.seed is None else args.seed
    fn = optimize_seed if args.kind == "seed" else optimize_rank1
    res = fn(params, restarts=args.restarts, tol=args.tol, seed=seed, workers=cfg.threads)
    if args.export_frame:
        if args.kind != "seed":
            raise UsageError("--export-frame only applies to --kind seed")
        save_frame(res.best, args.export_frame)
    rec = res.to_record()
    rows = [{"restart": i, "value": v} for i, v in enumerate(rec["per_restart_values"])]
    return Result(rows, rec, notes=[f"best value {rec['best_value']:.10f} (restart {rec['best_restart']})"])


def run_scan(args, cfg) -> Result:
    rows = [r.to_record() for r in scan(args.family, args.d, range(args.n_min, args.n_max + 1), args.seed or 0)]
    return Result(rows, rows)


def run_table(args, cfg) -> Result:
    cells = compute_table(args.id, include_optimized=not args.skip_optimized,
                          seed=args.seed or 0, restarts=args.restarts, workers=cfg.threads)
    rows = [c.to_record() for c in cells]
    failed = sum(not c.passed for c in cells)
    return Result(rows, {"table": args.id, "cells": rows, "failed": failed}, status=1 if failed else 0,
                  notes=[f"{len(cells) - failed}/{len(cells)} cells match"])


def run_frame(args, cfg) -> Result:
    if args.validate:
        frame = load_frame(args.validate)
    else:
        if args.family is None or args.d is None:
            raise UsageError("give --validate PATH or --family with --d (and --n where needed)")
        n = args.n
        if n is None:
            n = {"simplex": args.d + 1, "sic": args.d**2, "mub": args.d * (args.d + 1)}.get(args.family)
        if n is None:
            raise UsageError(f"--n is required for the {args.family} family")
        try:
            frame = make_frame(args.family, n, args.d, args.seed or 0)
        except JammingError:
            raise
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if args.save:
        save_frame(frame, args.save)
    row = {"label": frame.label, "n": frame.n, "d": frame.d,
           "coherence": coherence(frame) if frame.n > 1 else 0.0,
           "welch_bound": welch_bound(frame.n, frame.d) if frame.n > 1 else 0.0,
           "max_norm_error": float(np.max(np.abs(np.linalg.norm(frame.vectors, axis=1) - 1)))}
    return Result([row], row)


def run_constants(args, cfg) -> Result:
    c = cf.CONSTANTS
    rows = [
        {"name": "montanaro_bound", "value": c.montanaro_bound, "expression": "64/(9 pi^2)"},
        {"name": "harmonic_limit", "value": c.harmonic_limit, "expression": "3/4 + 3/pi^2"},
        {"name": "large_d_ratio_bound", "value": c.large_d_ratio_bound, "expression": "2 (8/(3 pi))^4"},
        {"name": "alpha_2", "value": float(c.alpha_2), "expression": "5/6"},
        {"name": "simplex_crossover", "value": cf.simplex_crossover(), "expression": "root of (d+1) mu^2 - d"},
    ]
    return Result(rows, rows)


def run_emit(args, cfg) -> Result:
    what = args.what
    if what == "harmonic-ratio-curve":
        start, stop = args.start or 3, args.stop or 100
        d = args.d or 2
        if start < d + 1 or stop < start:
            raise UsageError(f"need {d + 1} <= start <= stop")
        rows = []
        for n in range(start, stop + 1):
            params = GameParams.from_nd(n, d)
            omega = cf.harmonic_d2_value(n) if d == 2 else quantum_value(make_frame("harmonic", n, d), params).omega
            oc = float(classical_value(params))
            rows.append({"n": n, "d": d, "omega_q": omega, "omega_c": oc, "ratio": omega / oc})
    elif what == "crossover-curve":
        start, stop = args.start or 2, args.stop or 10
        if start < 2 or stop < start:
            raise UsageError("need 2 <= start <= stop")
        rows = []
        for d in range(start, stop + 1):
            mu, omega = cf.simplex_value(d)
            oc = float(classical_value(GameParams(d + 1, 1)))
            rows.append({"d": d, "mu": mu, "omega_q": omega, "omega_c": oc,
                         "margin": cf.simplex_margin(d), "ratio": omega / oc})
    else:
        n = args.n or 5
        if n < 3:
            raise UsageError("overlap profile needs n >= 3")
        rows = [{"n": n, "delta": k, "overlap": math.cos(math.pi * k / (2 * n)) ** 2} for k in range(n - 1)]
    return Result(rows, rows)


RUNNERS = {
    "classical": run_classical, "quantum": run_quantum, "joint": run_joint,
    "decompose": run_decompose, "montecarlo": run_montecarlo, "optimize": run_optimize,
    "scan": run_scan, "table": run_table, "frame": run_frame, "constants": run_constants,
    "emit": run_emit,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default="text")
    common.add_argument("--output", help="write to this path instead of standard output")
    common.add_argument("--seed", type=int, help="RNG seed for stochastic commands")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker count (default: available CPUs)")

    game = argparse.ArgumentParser(add_help=False)
    game.add_argument("--n", type=int, required=True, help="number of channels")
    game.add_argument("--k", type=int, help="number of jammed channels")
    game.add_argument("--d", type=int, help="safe-set size, alternative to --k")

    framed = argparse.ArgumentParser(add_help=False)
    framed.add_argument("--frame", choices=[f for f in FAMILIES if f != "file"], default="harmonic")
    framed.add_argument("--frame-file", help="load the seed frame from a JSON frame file")
    framed.add_argument("--rank-tol", type=float, default=DEFAULT_RANK_TOL)

    p = argparse.ArgumentParser(prog="jamming", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("classical", parents=[common, game], help="exact classical value")
    s.add_argument("--brute", choices=("aligned", "full"), help="also run exhaustive search")
    s.add_argument("--budget", type=int, default=10**7)
    s.add_argument("--strategy-table", action="store_true", help="include the greedy strategy table (JSON)")

    s = sub.add_parser("quantum", parents=[common, game, framed], help="quantum value of a frame strategy")
    s.add_argument("--method", choices=("trace", "direct"), default="trace")

    s = sub.add_parser("joint", parents=[common, game, framed], help="joint outcome distribution for inputs x, y")
    s.add_argument("--x", type=_set_arg, required=True, help="Alice's safe set, e.g. 0,1")
    s.add_argument("--y", type=_set_arg, required=True, help="Bob's safe set, e.g. 0,2")

    sub.add_parser("decompose", parents=[common, game, framed], help="split the value by intersection size")

    s = sub.add_parser("montecarlo", parents=[common], help="Haar-random Monte Carlo estimates")
    s.add_argument("--quantity", choices=("alpha", "alpha-pgm", "lj", "ewq"), required=True)
    s.add_argument("--n", type=int)
    s.add_argument("--k", type=int)
    s.add_argument("--d", type=int)
    s.add_argument("--j", type=int)
    s.add_argument("--samples", type=int, default=100_000)
    s.add_argument("--method", choices=("direct", "decomposed"), default="direct")

    s = sub.add_parser("optimize", parents=[common, game], help="numerical optimization of the quantum value")
    s.add_argument("--kind", choices=("seed", "rank1"), default="seed")
    s.add_argument("--restarts", type=int, default=10)
    s.add_argument("--tol", type=float, default=1e-10)
    s.add_argument("--export-frame", help="save the best seed frame to this path")

    s = sub.add_parser("scan", parents=[common], help="frame family across n at fixed d")
    s.add_argument("--family", choices=[f for f in FAMILIES if f != "file"], default="harmonic")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--n-min", type=int, required=True)
    s.add_argument("--n-max", type=int, required=True)

    s = sub.add_parser("table", parents=[common], help="reproduce a reference table")
    s.add_argument("--id", choices=TABLE_IDS, required=True)
    s.add_argument("--skip-optimized", action="store_true", help="skip cells that need optimization")
    s.add_argument("--restarts", type=int, default=10)

    s = sub.add_parser("frame", parents=[common], help="build, save or validate a frame")
    s.add_argument("--family", choices=[f for f in FAMILIES if f != "file"])
    s.add_argument("--n", type=int)
    s.add_argument("--d", type=int)
    s.add_argument("--save", help="write the frame JSON here")
    s.add_argument("--validate", help="load and check a frame file")

    sub.add_parser("constants", parents=[common], help="asymptotic constants")

    s = sub.add_parser(
        "emit", parents=[common], help="CSV data for plots",
        description="harmonic-ratio-curve: n,d,omega_q,omega_c,ratio over n in [start, stop]; "
                    "crossover-curve: d,mu,omega_q,omega_c,margin,ratio for the simplex over d; "
                    "overlap-profile: n,delta,overlap = cos^2(pi delta / 2n) for delta = 0..n-2.",
    )
    s.add_argument("--what", choices=EMIT_KINDS, required=True)
    s.add_argument("--start", type=int)
    s.add_argument("--stop", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--d", type=int)
    return p


def _json_default(obj):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _fmt(value) -> str:
    if isinstance(value, float):
        return "nan" if math.isnan(value) else f"{value:.4f}"
    return "" if value is None else str(value)


def render(cfg: CommandConfig, result: Result) -> str:
    header = json.dumps(cfg.to_record(), sort_keys=True, default=_json_default)
    if cfg.format == "json":
        doc = {"config": cfg.to_record(), "result": result.payload if result.payload is not None else result.rows}
        return json.dumps(doc, indent=2, sort_keys=True, default=_json_default) + "\n"
    columns = []
    for row in result.rows:
        columns += [k for k in row if k not in columns]
    if cfg.format == "csv":
        buf = io.StringIO()
        buf.write(f"# config={header}\n")
        writer = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n")
        writer.writeheader()
        for row in result.rows:
            writer.writerow({k: ("" if row.get(k) is None else repr(row[k]) if isinstance(row.get(k), float) else row.get(k))
                             for k in columns})
        return buf.getvalue()
    lines = [f"# config={header}"]
    cells = [[_fmt(row.get(k)) for k in columns] for row in result.rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    lines.append("  ".join(c.rjust(w) for c, w in zip(columns, widths)))
    lines += ["  ".join(v.rjust(w) for v, w in zip(r, widths)) for r in cells]
    lines += [f"# {note}" for note in result.notes]
    return "\n".join(lines) + "\n"


def _error(kind: str, message: str, status: int) -> int:
    sys.stderr.write(json.dumps({"error": kind, "message": message, "exit_code": status}) + "\n")
    return status


def cmd_run(cfg: CommandConfig, args) -> tuple[str, int]:
    """Dispatch one parsed command and return (rendered output, exit status)."""
    result = RUNNERS[cfg.command](args, cfg)
    return render(cfg, result), result.status


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in ("command", "format", "output", "seed", "threads")}
    params = {k: list(v) if isinstance(v, tuple) else v for k, v in params.items()}
    cfg = CommandConfig(args.command, params, args.format, args.output, args.seed, max(1, args.threads))
    try:
        text, status = cmd_run(cfg, args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        return _error("UsageError", str(exc), 2)
    except (JammingError, ValueError, ArithmeticError, OSError) as exc:
        return _error(type(exc).__name__, str(exc), 1)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
