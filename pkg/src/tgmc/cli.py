"""Command-line interface.

Subcommands: ``check`` (one model/params/spec), ``bench`` (reproduce a
manifest of expected verdicts), ``paths`` (list a model's step paths).
Exit codes: 0 holds / all match, 1 violated / mismatch, 2 usage or model
error, 3 resource cap reached.
"""

from __future__ import annotations

import argparse
import json
import sys

from .checker import DEFAULT_MAX_PRODUCT_STATES, check_spec
from .cfa import enumerate_paths
from .core import ModelError, check_resilience
from .dsl import parse_params_binding
from .harness import (exit_code_for, records_csv_text, render_state,
                      render_trace, resolve_model, run_manifest, summarize,
                      verify_trace, write_records_csv)
from .ltl import render_formula

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tgmc",
        description="Explicit-state checker for threshold-guarded "
                    "fault-tolerant broadcast models.")
    sub = parser.add_subparsers(dest="command", required=True)

    check = sub.add_parser("check", help="check one spec of one model instance")
    check.add_argument("--model", required=True,
                       help="model file path or builtin:NAME "
                            f"(builtins: byz, omit, symm, clean)")
    check.add_argument("--params", help='parameter binding, e.g. "n=7,t=2,f=2"')
    check.add_argument("--spec", help="spec name declared in the model")
    check.add_argument("--no-fairness", action="store_true",
                       help="ignore the spec's `unless` clause")
    check.add_argument("--no-symmetry", action="store_true",
                       help="disable symmetry reduction")
    check.add_argument("--trace", metavar="FILE",
                       help="write the counterexample trace here if violated")
    check.add_argument("--verify-trace", metavar="FILE",
                       help="instead of checking, replay a previously "
                            "written trace file against the model")
    check.add_argument("--format", choices=("text", "json"), default="text")
    check.add_argument("--max-states", type=int,
                       default=DEFAULT_MAX_PRODUCT_STATES,
                       help="product-state cap before giving up as "
                            "inconclusive (default %(default)s)")

    bench = sub.add_parser("bench", help="run a manifest of expected verdicts")
    bench.add_argument("--manifest", required=True,
                       help="CSV with columns model,params,spec,expected,tier")
    bench.add_argument("--jobs", type=int, default=1,
                       help="worker processes (default 1)")
    bench.add_argument("--out", metavar="CSV",
                       help="write per-case results here (default: stdout)")
    bench.add_argument("--max-states", type=int,
                       default=DEFAULT_MAX_PRODUCT_STATES)
    bench.add_argument("--no-symmetry", action="store_true")

    paths = sub.add_parser("paths", help="list a model's step paths")
    paths.add_argument("--model", required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "check":
            return _cmd_check(args)
        if args.command == "bench":
            return _cmd_bench(args)
        return _cmd_paths(args)
    except ModelError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def _cmd_check(args) -> int:
    model = resolve_model(args.model)

    if args.verify_trace:
        with open(args.verify_trace, encoding="utf-8") as fh:
            text = fh.read()
        problems = verify_trace(text, model)
        if problems:
            for problem in problems:
                print(f"trace invalid: {problem}", file=sys.stderr)
            return EXIT_VIOLATED
        print("trace valid: replays and witnesses the violation")
        return EXIT_OK

    if not args.params or not args.spec:
        raise ModelError("check requires --params and --spec "
                         "(unless --verify-trace is given)")
    env = parse_params_binding(args.params, model)
    if not check_resilience(model.resilience, env):
        print(f"note: parameters violate the resilience condition "
              f"({model.resilience.render()}); checking anyway",
              file=sys.stderr)
    fairness = not args.no_fairness
    symmetry = not args.no_symmetry
    verdict = check_spec(model, env, args.spec, fairness=fairness,
                         symmetry=symmetry, max_states=args.max_states)

    trace_text = None
    if verdict.counterexample is not None:
        trace_text = render_trace(verdict.counterexample, model, env=env,
                                  spec_name=args.spec, fairness=fairness,
                                  symmetry=symmetry)
        if args.trace:
            with open(args.trace, "w", encoding="utf-8") as fh:
                fh.write(trace_text)

    if args.format == "json":
        record = {
            "model": model.name,
            "params": args.params,
            "spec": args.spec,
            "fairness": fairness,
            "symmetry": symmetry,
            "formula": render_formula(verdict.formula),
            "verdict": verdict.status,
            "states_stored": verdict.product_states,
            "kripke_states": verdict.kripke_states,
            "transitions": verdict.transitions,
            "elapsed_ms": verdict.elapsed_ms,
        }
        if verdict.counterexample is not None:
            lasso = verdict.counterexample
            record["trace"] = {
                "prefix": [render_state(s, model) for s in lasso.prefix],
                "cycle": [render_state(s, model) for s in lasso.cycle],
            }
        print(json.dumps(record, indent=2))
    else:
        print(f"model {model.name}  spec {args.spec}  params {args.params}  "
              f"fairness {'on' if fairness else 'off'}  "
              f"symmetry {'on' if symmetry else 'off'}")
        print(f"checked: {render_formula(verdict.formula)}")
        print(f"verdict: {verdict.status}")
        print(f"stored {verdict.product_states} product states "
              f"({verdict.kripke_states} system states), "
              f"{verdict.transitions} transitions, {verdict.elapsed_ms} ms")
        if trace_text is not None:
            if args.trace:
                print(f"counterexample written to {args.trace}")
            print("counterexample:")
            print(trace_text, end="")

    if verdict.status == "holds":
        return EXIT_OK
    if verdict.status == "violated":
        return EXIT_VIOLATED
    return EXIT_CAP


def _cmd_bench(args) -> int:
    records = run_manifest(args.manifest, jobs=args.jobs,
                           max_states=args.max_states,
                           symmetry=not args.no_symmetry)
    if args.out:
        write_records_csv(records, args.out)
        print(summarize(records))
    else:
        sys.stdout.write(records_csv_text(records))
        print(summarize(records), file=sys.stderr)
    return exit_code_for(records)


def _cmd_paths(args) -> int:
    model = resolve_model(args.model)
    paths = enumerate_paths(model.cfa)
    print(f"model {model.name}: {len(paths)} step paths")
    for i, ops in enumerate(paths, start=1):
        print(f"  {i}: " + "; ".join(op.render() for op in ops))
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
