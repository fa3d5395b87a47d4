"""Command-line front end: generate instances, run ascents, verify claims.

Exit codes: 0 success, 1 verification failure, 2 usage or I/O error,
3 step limit reached before a local solution.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from . import __version__
from .ascent import (
    first_improvement_ascent,
    ordered_ascent,
    steepest_ascent,
    trace_to_csv,
    trace_to_json,
)
from .constructions import (
    FAMILIES,
    build_boolean_pw4,
    build_family,
    canonical_start,
)
from .model import (
    BuildError,
    ModelError,
    decomposition_to_json,
    load_instance,
    save_instance,
)
from .verification import CHECK_NAMES, DEFAULT_CAPS, run_check

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_STEP_LIMIT = 3

# Older scripted names for two of the checks.
_CHECK_ALIASES = {"prop11": "ordered-length", "theorem8": "simulation"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ascentlab",
        description="Exact-integer VCSP landscapes with provably long ascents.",
    )
    parser.add_argument("--version", action="version", version=f"ascentlab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="build an instance and write it as JSON")
    gen.add_argument("--family", required=True, choices=FAMILIES)
    gen.add_argument("--n", required=True, type=int, help="number of chain positions")
    gen.add_argument("--out", required=True, help="output instance path (.json)")

    asc = sub.add_parser("ascend", help="run one ascent and print a summary")
    asc.add_argument("--instance", help="instance JSON produced by gen")
    asc.add_argument("--family", choices=FAMILIES, help="build in memory instead")
    asc.add_argument("--n", type=int)
    asc.add_argument(
        "--engine", default="steepest", choices=("steepest", "ordered", "first")
    )
    asc.add_argument(
        "--start",
        default="canonical",
        help="'canonical' or a JSON file with a list of state ids",
    )
    asc.add_argument("--step-limit", type=int, default=None)
    asc.add_argument("--trace", help="write the trace here (.csv or .json)")
    asc.add_argument(
        "--summary-only",
        action="store_true",
        help="do not materialize steps (required for very long runs)",
    )
    asc.add_argument("--seed", type=int, default=0, help="seed for the 'first' engine")

    ver = sub.add_parser("verify", help="run the structural checks")
    ver.add_argument(
        "--check", default="all", help=f"one of {', '.join(CHECK_NAMES)} or 'all'"
    )
    ver.add_argument(
        "--cap",
        action="append",
        default=[],
        help="size cap, either N (for the selected check) or name=N; repeatable",
    )

    ben = sub.add_parser("bench", help="ascent-length scaling data as CSV")
    ben.add_argument("--family", required=True, choices=FAMILIES)
    ben.add_argument("--n-list", default="", help="comma-separated sizes, e.g. 2,4,8")
    ben.add_argument(
        "--engine", default="ordered", choices=("steepest", "ordered", "first")
    )
    ben.add_argument("--seed", type=int, default=0)
    ben.add_argument("--out", help="write CSV here instead of stdout")
    return parser


def _cmd_gen(args) -> int:
    if args.family == "bool-pw4":
        instance, codec, decomp, _ = build_boolean_pw4(args.n)
    else:
        instance = build_family(args.family, args.n)
        codec = decomp = None
    out = Path(args.out)
    save_instance(instance, out)
    if codec is not None:
        sidecar = out.with_suffix("")
        Path(f"{sidecar}.codec.json").write_text(
            json.dumps(codec.to_json()), encoding="utf-8"
        )
        Path(f"{sidecar}.decomp.json").write_text(
            json.dumps(decomposition_to_json(decomp)), encoding="utf-8"
        )
    print(json.dumps({"written": str(out), "family": args.family, "n": args.n}))
    return EXIT_OK


def _load_start(args, instance) -> tuple[int, ...]:
    if args.start == "canonical":
        if not instance.family:
            raise BuildError("instance has no family tag; provide --start FILE")
        return canonical_start(instance.family, instance.base_n)
    data = json.loads(Path(args.start).read_text(encoding="utf-8"))
    if isinstance(data, dict):
        data = data["values"]
    values = []
    for k, v in enumerate(data):
        if isinstance(v, str):
            values.append(instance.domains[k].states.index(v))
        else:
            values.append(int(v))
    return tuple(values)


def _cmd_ascend(args) -> int:
    if bool(args.instance) == bool(args.family):
        raise BuildError("give exactly one of --instance or --family/--n")
    if args.instance:
        instance = load_instance(args.instance)
    else:
        if args.n is None:
            raise BuildError("--family needs --n")
        instance = build_family(args.family, args.n)
    if args.summary_only and args.trace:
        raise BuildError("--summary-only cannot be combined with --trace")

    start = _load_start(args, instance)
    record = not args.summary_only
    t0 = time.perf_counter()
    if args.engine == "steepest":
        trace = steepest_ascent(instance, start, args.step_limit, record_steps=record)
    elif args.engine == "ordered":
        trace = ordered_ascent(
            instance, start, step_limit=args.step_limit, record_steps=record
        )
    else:
        trace = first_improvement_ascent(
            instance, start, args.step_limit, seed=args.seed, record_steps=record
        )
    seconds = time.perf_counter() - t0

    if args.trace:
        path = Path(args.trace)
        if path.suffix == ".json":
            path.write_text(json.dumps(trace_to_json(trace, instance)), encoding="utf-8")
        else:
            with path.open("w", encoding="utf-8") as fh:
                trace_to_csv(trace, instance, fh)

    summary = {
        "family": instance.family,
        "n": instance.base_n,
        "engine": args.engine,
        "start": args.start,
        "steps": trace.length,
        "terminal": trace.terminal,
        "final_fitness": trace.final_fitness,
        "seconds": round(seconds, 6),
        "steps_per_sec": round(trace.length / max(seconds, 1e-9), 1),
    }
    print(json.dumps(summary))
    return EXIT_OK if trace.terminal else EXIT_STEP_LIMIT


def _parse_caps(raw: list[str], check: str) -> dict[str, int]:
    caps: dict[str, int] = {}
    for item in raw:
        if "=" in item:
            key, _, value = item.partition("=")
            if key not in DEFAULT_CAPS:
                raise BuildError(f"unknown cap {key!r}; known: {sorted(DEFAULT_CAPS)}")
            caps[key] = int(value)
        else:
            if check == "all":
                raise BuildError("bare --cap N needs a single --check")
            caps[check] = int(item)
    return caps


def _cmd_verify(args) -> int:
    check = _CHECK_ALIASES.get(args.check, args.check)
    if check != "all" and check not in CHECK_NAMES:
        raise BuildError(f"unknown check {args.check!r}; known: {CHECK_NAMES} or 'all'")
    caps = _parse_caps(args.cap, check)
    names = CHECK_NAMES if check == "all" else (check,)
    all_ok = True
    for name in names:
        report = run_check(name, caps)
        print(json.dumps(report.to_json()))
        all_ok = all_ok and report.passed
    return EXIT_OK if all_ok else EXIT_VERIFY_FAILED


def _cmd_bench(args) -> int:
    rows = ["family,n,steps,seconds,steps_per_sec"]
    sizes = [int(v) for v in args.n_list.split(",") if v.strip()]
    for n in sizes:
        instance = build_family(args.family, n)
        start = canonical_start(args.family, n)
        t0 = time.perf_counter()
        if args.engine == "steepest":
            trace = steepest_ascent(instance, start, record_steps=False)
        elif args.engine == "ordered":
            trace = ordered_ascent(instance, start, record_steps=False)
        else:
            trace = first_improvement_ascent(
                instance, start, seed=args.seed, record_steps=False
            )
        seconds = time.perf_counter() - t0
        rows.append(
            f"{args.family},{n},{trace.length},{seconds:.6f},"
            f"{trace.length / max(seconds, 1e-9):.1f}"
        )
    text = "\n".join(rows) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "gen":
            return _cmd_gen(args)
        if args.command == "ascend":
            return _cmd_ascend(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command == "bench":
            return _cmd_bench(args)
    except (ModelError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
