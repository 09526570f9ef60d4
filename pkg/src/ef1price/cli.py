"""Command-line interface.

Exit codes: 0 success (and predicate holds), 1 predicate false, 2 bad input
or violated algorithm precondition, 3 oracle budget exceeded. All numeric
output is exact-fraction first; decimal renderings are advisory only.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import algorithms, fairness, generators, oracle
from .core import (
    InputError,
    Instance,
    allocation_from_json,
    allocation_to_json,
    classify_ternary,
    format_rational,
    instance_from_json,
    instance_to_json,
    is_normalized,
    NotTernary,
)

BUDGET_ENV = "EF1_BUDGET"

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def _budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return oracle.DEFAULT_BUDGET
    try:
        value = int(raw)
        if value <= 0:
            raise ValueError
    except ValueError:
        raise InputError(f"{BUDGET_ENV} must be a positive integer, got {raw!r}")
    return value


def _load_json(path: str):
    with open(path) as handle:
        return json.load(handle)


def _load_instance(path: str) -> Instance:
    return instance_from_json(_load_json(path))


def _emit(data, stream=None) -> None:
    print(json.dumps(data, indent=2), file=stream or sys.stdout)


def _instance_summary(inst: Instance) -> dict:
    try:
        profile = classify_ternary(inst)
        ternary = {"a": format_rational(profile.a), "b": format_rational(profile.b)}
    except NotTernary:
        ternary = None
    return {
        "agents": inst.n,
        "items": inst.m,
        "normalized": is_normalized(inst),
        "ternary": ternary,
    }


def cmd_check(args) -> int:
    inst = _load_instance(args.instance)
    alloc = allocation_from_json(_load_json(args.allocation))
    report = fairness.is_ef1(inst, alloc)
    sw = fairness.social_welfare(inst, alloc)
    _emit(
        {
            "holds": report.holds,
            "social_welfare": format_rational(sw),
            "violations": [list(pair) for pair in report.violations],
            "witnesses": [
                {"envious": i, "envied": j, "item": g} for i, j, g in report.witnesses
            ],
        }
    )
    return EXIT_OK if report.holds else EXIT_FALSE


def cmd_solve(args) -> int:
    inst = _load_instance(args.instance)
    opt, _ = oracle.optimal_social_welfare(inst)
    trace = None
    if args.alg == "opt-sw":
        sw, alloc = oracle.optimal_social_welfare(inst)
    elif args.alg == "opt-ef1":
        sw, alloc = oracle.max_ef1_welfare(inst, budget=_budget())
    else:
        name = args.alg.replace("-", "_")
        alloc, trace, sw = algorithms.run_algorithm(inst, name)
    payload = dict(allocation_to_json(alloc))
    payload["social_welfare"] = format_rational(sw)
    payload["optimal_social_welfare"] = format_rational(opt)
    payload["ratio_to_optimal"] = format_rational(opt / sw) if sw != 0 else None
    if args.trace and trace is not None:
        payload["trace"] = algorithms.trace_to_json(trace)
    _emit(payload)
    return EXIT_OK


def cmd_price(args) -> int:
    inst = _load_instance(args.instance)
    report = oracle.price_of_ef1(inst, budget=_budget())
    _emit(
        {
            "opt": format_rational(report.opt),
            "opt_allocation": allocation_to_json(report.opt_allocation),
            "ef1_opt": format_rational(report.ef1_opt),
            "ef1_opt_allocation": allocation_to_json(report.ef1_opt_allocation),
            "price": format_rational(report.price),
            "price_decimal": oracle.decimal6(report.price),
        }
    )
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.family == "sqrt-n":
        if args.n is None:
            raise InputError("--n is required for the sqrt-n family")
        inst = generators.gen_sqrt_n_instance(args.n, args.b)
    elif args.family == "two-tight":
        inst = generators.gen_two_agent_tight()
    elif args.family == "three-tight":
        inst = generators.gen_three_agent_tight()
    else:
        inst = generators.gen_intro_example()
    payload = instance_to_json(inst)
    if args.out:
        with open(args.out, "w") as handle:
            json.dump(payload, handle, indent=2)
            handle.write("\n")
        _emit(_instance_summary(inst))
    else:
        _emit(payload)
        _emit(_instance_summary(inst), stream=sys.stderr)
    return EXIT_OK


def _parse_levels(spec: str) -> tuple[tuple[int, int], ...]:
    pairs = []
    for chunk in spec.split(","):
        head, sep, tail = chunk.partition(":")
        if not sep:
            raise InputError(f"bad level pair {chunk!r}; expected a:b")
        try:
            pairs.append((int(head), int(tail)))
        except ValueError:
            raise InputError(f"bad level pair {chunk!r}; expected integers a:b")
    return tuple(pairs)


def cmd_search(args) -> int:
    params = generators.EnumerationParams(
        n=args.n, m_max=args.m_max, level_pairs=_parse_levels(args.levels)
    )
    report = oracle.worst_case_search(
        params, csv_path=args.out, jobs=args.jobs, budget=_budget()
    )
    _emit(
        {
            "instances_checked": report.instances_checked,
            "worst_price": (
                format_rational(report.worst_price) if report.worst_price is not None else None
            ),
            "worst_price_decimal": (
                oracle.decimal6(report.worst_price) if report.worst_price is not None else None
            ),
            "worst_instance_id": report.worst_instance_id,
            "alg_worst_ratios": {
                alg: format_rational(r) for alg, r in report.alg_worst_ratios
            },
            "csv": report.csv_path,
        }
    )
    return EXIT_OK


def cmd_trace_replay(args) -> int:
    inst = _load_instance(args.instance)
    trace = algorithms.trace_from_json(_load_json(args.trace))
    alloc = algorithms.replay_trace(inst, trace)
    _emit(allocation_to_json(alloc))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ef1price",
        description="Exact EF1 allocation algorithms and price-of-EF1 oracles "
        "for indivisible goods with ternary valuations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="check an allocation for EF1 and report welfare")
    p.add_argument("instance")
    p.add_argument("allocation")
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("solve", help="run an allocation algorithm or oracle")
    p.add_argument("instance")
    p.add_argument(
        "--alg",
        required=True,
        choices=["m2rr", "rmm", "round-robin", "opt-ef1", "opt-sw"],
    )
    p.add_argument("--trace", action="store_true", help="include the replayable trace")
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("price", help="exact price-of-EF1 report for one instance")
    p.add_argument("instance")
    p.set_defaults(fn=cmd_price)

    p = sub.add_parser("gen", help="write a named instance family member")
    p.add_argument(
        "--family",
        required=True,
        choices=["sqrt-n", "two-tight", "three-tight", "intro"],
    )
    p.add_argument("--n", type=int, help="agent count (sqrt-n family)")
    p.add_argument("--b", default="1", help="low level b as p/q (sqrt-n family)")
    p.add_argument("--out", help="output path (default: stdout)")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("search", help="exhaustive worst-case sweep with CSV output")
    p.add_argument("--n", type=int, required=True, choices=[2, 3])
    p.add_argument("--m-max", type=int, required=True)
    p.add_argument("--levels", required=True, help='level pairs "a:b,a:b,..."')
    p.add_argument("--out", required=True, help="CSV output path")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(fn=cmd_search)

    p = sub.add_parser("trace-replay", help="rebuild an allocation from a trace")
    p.add_argument("trace")
    p.add_argument("instance")
    p.set_defaults(fn=cmd_trace_replay)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except oracle.BudgetExceeded as exc:
        print(f"error [BudgetExceeded]: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, json.JSONDecodeError, OSError) as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
