"""Command-line front end.

Every subcommand prints one report to stdout, JSON by default.  Exit status
is 0 on success, 1 when a Simon run exhausts its data budget, and 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import random
import sys
from pathlib import Path

from . import bv, deutsch, simon
from .bits import to_int
from .errors import BudgetExceeded, TTMError
from .railnet import CellKind, build_single_cell, sum_detector


def _quad(q) -> list[str]:
    return [str(r) for r in q]


def _seed(args, parser, required: bool):
    if args.seed is not None:
        return args.seed
    env = os.environ.get("TTM_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            parser.error(f"TTM_SEED must be an integer, got {env!r}")
    if required:
        parser.error("--seed is required for randomized runs (or set TTM_SEED)")
    return None


def _bits_arg(parser, text: str, n: int | None, flag: str) -> tuple[int, int]:
    try:
        value = to_int(text, n)
    except ValueError as exc:
        parser.error(f"{flag}: {exc}")
    return value, len(text.strip())


def cmd_deutsch(args, parser) -> tuple[int, dict]:
    if args.kind:
        kind = CellKind[args.kind.upper()]
        result = deutsch.deutsch_classify(build_single_cell(kind), args.common_mode)
        report = {"kind": kind.value, "census": "balanced" if kind.balanced else "constant"}
    else:
        try:
            answer = None if args.answer is None else args.answer - 1
            circuit = deutsch.build_two_input(args.table, answer, allow_exponential=args.allow_exponential)
        except (ValueError, TTMError) as exc:
            parser.error(f"--table: {exc}")
        result = deutsch.deutsch_jozsa_classify(circuit, args.common_mode)
        report = {
            "table": "".join(map(str, circuit.table)),
            "answer_variable": circuit.answer + 1,
            "census": deutsch.census(circuit.table).value,
            "switches": len(circuit.net.switches),
        }
    report.update(
        verdict=result.verdict.value,
        queries=result.queries,
        quad=_quad(result.quad),
        sum=sum_detector(result.quad),
        common_mode=args.common_mode,
    )
    return 0, report


def cmd_bv(args, parser) -> tuple[int, dict]:
    seed = _seed(args, parser, required=args.secret is None)
    if args.secret is not None:
        s, width = _bits_arg(parser, args.secret, args.n, "--secret")
        n = args.n or width
    else:
        if not args.n:
            parser.error("--n is required when --secret is not given")
        n = args.n
        s = random.Random(seed).getrandbits(n)
    circuit = bv.synthesize_cascade(s, n)
    rec = bv.bv_recover(circuit)
    report = {
        "n": n,
        "seed": seed,
        "secret": rec.bits,
        "queries": rec.queries,
        "quads": [_quad(q) for q in rec.quads],
        "cells": circuit.cell_count,
        "switches": len(circuit.net.switches),
    }
    return 0, report


def _locate_trace(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    bundled = simon.worked_trace_path()
    if p.name == bundled.name:
        return Path(str(bundled))
    raise FileNotFoundError(path)


def cmd_simon(args, parser) -> tuple[int, dict]:
    config = simon.SolveConfig(
        max_data=args.max_data_factor * args.n if args.n else None,
        walk=args.walk,
        cadence=args.cadence,
        trace=args.trace or bool(args.replay),
    )
    try:
        if args.replay:
            try:
                path = _locate_trace(args.replay)
                n, elements = simon.load_trace(path)
            except (OSError, ValueError) as exc:
                parser.error(f"--replay: {exc}")
            report = simon.replay(elements, n, config=config)
        else:
            if not args.n:
                parser.error("--n is required unless --replay is given")
            seed = _seed(args, parser, required=True)
            rng = random.Random(seed)
            if args.secret is not None:
                secret, _ = _bits_arg(parser, args.secret, args.n, "--secret")
                if secret == 0:
                    parser.error("--secret must be nonzero")
            else:
                secret = rng.randrange(1, 1 << args.n)
            instance = simon.make_instance(args.n, secret, rng.getrandbits(64))
            report = simon.solve_simon(instance, config, seed=rng.getrandbits(64))
            report.seed = seed
    except BudgetExceeded as exc:
        if not args.replay:
            exc.report.seed = seed
        out = exc.report.as_dict()
        out["error"] = str(exc)
        return 1, out
    return 0, report.as_dict()


def cmd_montecarlo(args, parser) -> tuple[int, dict]:
    seed = _seed(args, parser, required=True)
    if args.trials < 1:
        parser.error("--trials must be at least 1")
    report = simon.monte_carlo(
        args.n, args.trials, seed, max_factor=args.max_data_factor, walk=args.walk, workers=args.workers
    )
    report["expected_window"] = [2 * args.n, 3 * args.n]
    if not args.trace:
        report.pop("runs")
    return 0, report


def cmd_delay(args, parser) -> tuple[int, dict]:
    try:
        per, total = simon.estimate_ripple_delay(args.qubits, args.frequency, args.penalty, args.iterations)
    except ValueError as exc:
        parser.error(str(exc))
    return 0, {
        "qubits": args.qubits,
        "frequency_hz": args.frequency,
        "penalty": args.penalty,
        "iterations": args.iterations,
        "per_ripple_s": per,
        "total_s": total,
    }


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--seed", type=int, help="RNG seed (falls back to $TTM_SEED)")

    parser = argparse.ArgumentParser(prog="ttmsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("deutsch", parents=[common], help="balanced/constant classification")
    which = p.add_mutually_exclusive_group(required=True)
    which.add_argument("--kind", choices=[k.value for k in CellKind])
    which.add_argument("--table", help="truth table bits, first input as MSB, e.g. 1001")
    p.add_argument("--answer", type=int, help="answer variable for --table, 1 = first input")
    p.add_argument("--allow-exponential", action="store_true", help="permit 3 or 4 input tables")
    p.add_argument("--common-mode", type=int, choices=(0, 1), default=1)
    p.set_defaults(run=cmd_deutsch)

    p = sub.add_parser("bv", parents=[common], help="recover s from a hidden cascade")
    p.add_argument("--n", type=int)
    p.add_argument("--secret")
    p.set_defaults(run=cmd_bv)

    walk_opts = argparse.ArgumentParser(add_help=False)
    walk_opts.add_argument("--max-data-factor", type=int, default=50, help="budget in multiples of n")
    walk_opts.add_argument("--walk", choices=("single", "general"), default="single")
    walk_opts.add_argument("--trace", action="store_true")

    p = sub.add_parser("simon", parents=[common, walk_opts], help="solve a Simon instance")
    p.add_argument("--n", type=int)
    p.add_argument("--secret")
    p.add_argument("--cadence", type=int, default=1, help="eliminate every k data elements")
    p.add_argument("--replay", help="trace file of '<x> <f>' lines")
    p.set_defaults(run=cmd_simon)

    p = sub.add_parser("montecarlo", parents=[common, walk_opts], help="convergence statistics")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--workers", type=int)
    p.set_defaults(run=cmd_montecarlo)

    p = sub.add_parser("delay", parents=[common], help="ripple delay estimate")
    p.add_argument("--qubits", type=int, required=True)
    p.add_argument("--frequency", type=float, required=True, help="transitions per second")
    p.add_argument("--penalty", type=float, default=1.0)
    p.add_argument("--iterations", type=int, default=1)
    p.set_defaults(run=cmd_delay)
    return parser


def render(report: dict, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(report, sort_keys=True) + "\n"
    flat = {
        k: (json.dumps(v, sort_keys=True) if isinstance(v, (list, dict)) else v)
        for k, v in sorted(report.items())
    }
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(flat), lineterminator="\n")
    writer.writeheader()
    writer.writerow(flat)
    return buf.getvalue()


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n", None) is not None and args.n < 1:
        parser.error("--n must be at least 1")
    if getattr(args, "cadence", 1) < 1:
        parser.error("--cadence must be at least 1")
    status, report = args.run(args, parser)
    report = {"command": args.command, **report}
    sys.stdout.write(render(report, args.format))
    if status:
        print(f"ttmsim: {report.get('error', 'failed')}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
