"""Command-line front end: ``verify``, ``schedule``, ``report`` and ``fer``.

Exit status is 0 on success, 1 when a verification suite fails and 2 on a
usage error. Sizes are given in the log domain (``--n``, ``--p``).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .bits import is_power_of_two
from .channel import CSV_HEADER, ChannelConfig, fer_montecarlo, frame_seed, make_frame
from .cost import DecoderShape, bound_check, memory_report, total_decode_cycles
from .crc import CRC16_CCITT
from .decoder import MEMORY_KINDS, ListDecoder
from .memory.recovery import recover_bits
from .memory.schedules import format_table, psn_schedule, psn_table, recovery_schedule, recovery_table
from .polar import PolarCodeConfig, partial_sums

THREADS_ENV = "POLARMEM_THREADS"


def make_manifest(subcommand: str, args: argparse.Namespace, seed: int | None = None) -> dict:
    """Parameter echo embedded in every output.

    The timestamp honours ``SOURCE_DATE_EPOCH`` and is left out of CSV
    output so that repeated runs are byte-identical.
    """
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command", "json", "csv")}
    return {
        "tool": "polarmem",
        "version": __version__,
        "subcommand": subcommand,
        "parameters": params,
        "seed": seed,
        "timestamp": when.replace(microsecond=0).isoformat(),
    }


def _emit_json(obj: dict) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _check_sizes(parser: argparse.ArgumentParser, n: int, p: int, L: int | None = None) -> None:
    if n < 2:
        parser.error(f"--n must be >= 2, got {n}")
    if not 1 <= p < n:
        parser.error(f"--p must satisfy 1 <= p < n (P = 1 is not supported), got p={p}, n={n}")
    if L is not None and not is_power_of_two(L):
        parser.error(f"--list must be a power of two, got {L}")


def _default_code(n: int, p: int, L: int, K: int | None = None) -> PolarCodeConfig:
    N = 1 << n
    K = N // 2 if K is None else K
    crc = CRC16_CCITT if K > 2 * CRC16_CCITT.width else None
    return PolarCodeConfig(n, K, p, L, crc=crc)


# --------------------------------------------------------------------- verify

def _cross_model_trial(config: PolarCodeConfig, channel: ChannelConfig, index: int) -> bool:
    _, llrs = make_frame(config, channel, index)
    decoder = ListDecoder(config, "merged", shadow_kinds=("traditional", "folded"), record=False)
    agree = [True]

    def check(dec, i, outcome):
        views = [m.read_all()[: dec.active, : i + 1] for m in dec.memories.values()]
        if any(not np.array_equal(views[0], v) for v in views[1:]):
            agree[0] = False

    result = decoder.decode(llrs, on_step=check)
    for kind in ("traditional", "folded"):
        bits, ok = decoder.select(decoder.memories[kind].read_all())
        agree[0] &= bool(np.array_equal(bits, result.info_bits) and ok == result.crc_pass)
    return agree[0]


def _recovery_trials(n: int, p: int, trials: int, seed: int) -> tuple[int, int]:
    rng = np.random.default_rng(frame_seed(seed, 1 << 32))
    passed = failed = 0
    for lam in range(p, n):
        u = rng.integers(0, 2, (trials, 1 << lam), dtype=np.uint8)
        ok = np.all(recover_bits(partial_sums(u, lam), 1 << p) == u, axis=1)
        passed += int(ok.sum())
        failed += int((~ok).sum())
    return passed, failed


def cmd_verify(args, parser) -> int:
    _check_sizes(parser, args.n, args.p, args.list)
    if args.trials < 1:
        parser.error("--trials must be >= 1")
    config = _default_code(args.n, args.p, args.list)
    channel = ChannelConfig.for_code(config, args.ebn0, args.seed)
    cross = [_cross_model_trial(config, channel, i) for i in range(args.trials)]
    suites = {
        "cross_model": (sum(cross), len(cross) - sum(cross)),
        "recovery_round_trip": _recovery_trials(args.n, args.p, args.trials, args.seed),
    }
    ok = all(failed == 0 for _, failed in suites.values())
    if args.json:
        _emit_json({
            "manifest": make_manifest("verify", args, args.seed),
            "suites": {k: {"passed": a, "failed": b} for k, (a, b) in suites.items()},
            "status": "pass" if ok else "fail",
        })
    else:
        for name, (a, b) in suites.items():
            print(f"{name:<20} passed {a:>6}  failed {b:>6}  {'PASS' if b == 0 else 'FAIL'}")
    return 0 if ok else 1


# ------------------------------------------------------------------- schedule

def cmd_schedule(args, parser) -> int:
    lam, p = args.lambda_, args.p
    if p < 1:
        parser.error("--p must be >= 1 (P = 1 is not supported)")
    if lam < p:
        parser.error(f"Lambda = 2^{lam} is smaller than P = 2^{p}")
    if args.kind == "psn":
        rows, cycles = psn_table(lam, p), len(psn_schedule(lam, p))
    else:
        rows, cycles = recovery_table(lam, p), len(recovery_schedule(lam, p))
    if args.json:
        _emit_json({
            "manifest": make_manifest("schedule", args),
            "kind": args.kind,
            "lambda": lam,
            "p": p,
            "cycles": cycles,
            "rows": {name: [list(cell) for cell in cells] for name, cells in rows.items()},
        })
    elif args.csv:
        sys.stdout.write(format_table(rows, csv=True))
    else:
        sys.stdout.write(format_table(rows))
        print(f"cycles: {cycles}")
    return 0


# --------------------------------------------------------------------- report

def cmd_report(args, parser) -> int:
    _check_sizes(parser, args.n, args.p, args.list)
    N, P = 1 << args.n, 1 << args.p
    memory = memory_report(N, P, args.list)
    shape = DecoderShape(args.n, args.p)
    plain = total_decode_cycles(shape, with_recovery=False)
    merged = total_decode_cycles(shape, with_recovery=True)
    bounds = {str(g.size): str(bound_check(g.size, P)) for g in merged.groups}
    if args.json:
        _emit_json({
            "manifest": make_manifest("report", args),
            "memory": memory.to_dict(),
            "cycles": {"without_recovery": plain.to_dict(), "with_recovery": merged.to_dict()},
            "bound_checks": bounds,
            "stall_cycles": merged.stall_cycles,
        })
    else:
        print(f"N={N} P={P} L={args.list}")
        sys.stdout.write(memory.to_text())
        print()
        print("without recovery")
        sys.stdout.write(plain.to_text())
        print()
        print("with recovery")
        sys.stdout.write(merged.to_text())
        print()
        print("bound checks: " + ", ".join(f"{k}:{v}" for k, v in bounds.items()))
        print(f"stall cycles: {merged.stall_cycles}")
    return 0


# ------------------------------------------------------------------------ fer

def cmd_fer(args, parser) -> int:
    _check_sizes(parser, args.n, args.p, args.list)
    if args.frames < 1:
        parser.error("--frames must be >= 1")
    N = 1 << args.n
    if not 0 < args.K <= N:
        parser.error(f"--K must lie in (0, {N}]")
    crc = None if args.no_crc else CRC16_CCITT
    try:
        config = PolarCodeConfig(args.n, args.K, args.p, args.list, crc=crc)
    except ValueError as exc:
        parser.error(str(exc))
    threads = args.threads if args.threads is not None else int(os.environ.get(THREADS_ENV, "1"))
    if threads < 1:
        parser.error("--threads must be >= 1")
    results = []
    for ebn0 in args.ebn0:
        channel = ChannelConfig.for_code(config, ebn0, args.seed)
        results.append(fer_montecarlo(config, channel, args.frames, args.memory_kind, workers=threads))
    if args.json:
        manifest = make_manifest("fer", args, args.seed)
        manifest["parameters"].pop("threads", None)
        _emit_json({"manifest": manifest, "results": [r._asdict() for r in results]})
        return 0
    manifest = make_manifest("fer", args, args.seed)
    manifest.pop("timestamp")
    manifest["parameters"].pop("threads", None)
    print("# " + json.dumps(manifest, sort_keys=True))
    print(CSV_HEADER)
    for r in results:
        print(r.csv_row())
    return 0


# ---------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polarmem", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def sizes(sp, L=True):
        sp.add_argument("--n", type=int, required=True, help="log2 of the code length")
        sp.add_argument("--p", type=int, required=True, help="log2 of the parallelism P")
        if L:
            sp.add_argument("--list", type=int, default=4, help="list size L (power of two)")

    sp = sub.add_parser("verify", help="cross-model equivalence and recovery round trips")
    sizes(sp)
    sp.add_argument("--trials", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--ebn0", type=float, default=2.0, help="Eb/N0 in dB of the test frames")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("schedule", help="per-cycle PSN or recovery schedule")
    sp.add_argument("--kind", choices=("psn", "recovery"), required=True)
    sp.add_argument("--lambda", dest="lambda_", type=int, required=True, help="log2 of the group size")
    sp.add_argument("--p", type=int, required=True, help="log2 of the parallelism P")
    fmt = sp.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    sp.set_defaults(func=cmd_schedule)

    sp = sub.add_parser("report", help="memory cost and cycle report")
    sizes(sp)
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_report)

    sp = sub.add_parser("fer", help="Monte Carlo frame error rate (CSV)")
    sizes(sp)
    sp.add_argument("--K", type=int, required=True, help="information bits including CRC")
    sp.add_argument("--no-crc", action="store_true", help="disable the 16-bit CRC")
    sp.add_argument("--ebn0", type=float, nargs="+", required=True, help="Eb/N0 points in dB")
    sp.add_argument("--frames", type=int, default=1000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--memory-kind", choices=MEMORY_KINDS, default="traditional")
    sp.add_argument("--threads", type=int, default=None, help=f"worker processes (default ${THREADS_ENV} or 1)")
    fmt = sp.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true", help="CSV output (the default)")
    sp.set_defaults(func=cmd_fer)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    sub = parser._subparsers._group_actions[0].choices[args.command]
    return args.func(args, sub)


if __name__ == "__main__":
    sys.exit(main())
