"""Command-line entry point: ``khc run|check|katz FILE``.

Exit codes: 0 success, 1 a check failed, 2 parse or semantic error,
3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .dsl import parse_program, pretty_statement
from .errors import InvariantViolation, KhcError
from .evaluate import Evaluation, eval_program
from .katz import katz_reduce
from .render import render, render_trace
from .serialize import dumps, system_to_dict, trace_to_list

EXIT_OK, EXIT_CHECK, EXIT_USER, EXIT_INTERNAL = 0, 1, 2, 3


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="khc", description="Hodge and monodromy data calculator.")
    sub = ap.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="evaluate a program and print emitted systems")
    run.add_argument("file")
    run.add_argument("--format", choices=("table", "json"), default="table")
    run.add_argument("--emit-intermediate", action="store_true", help="print every binding")
    run.add_argument("--trace", action="store_true", help="log each evaluation step")
    chk = sub.add_parser("check", help="run the embedded check statements")
    chk.add_argument("file")
    kz = sub.add_parser("katz", help="print the reduction trace of the last binding")
    kz.add_argument("file")
    kz.add_argument("--format", choices=("table", "json"), default="table")
    return ap


def _evaluate(path: str) -> Evaluation:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise KhcError(f"cannot read {path}: {exc.strerror}") from exc
    return eval_program(parse_program(text))


def _check_lines(ev: Evaluation) -> list[str]:
    out = []
    for r in ev.checks:
        status = "PASS" if r.passed else "FAIL"
        c = r.check
        out.append(f"{status} {c.line}:{c.col} {pretty_statement(c)} (actual {r.actual})")
    return out


def _cmd_run(args, out) -> int:
    ev = _evaluate(args.file)
    if args.emit_intermediate:
        shown = [(n, ev.bindings[n]) for n in ev.order]
    elif ev.emitted:
        shown = ev.emitted
    else:
        shown = [(ev.order[-1], ev.bindings[ev.order[-1]])] if ev.order else []
    if args.format == "json":
        doc = {"systems": [{"name": n, "system": system_to_dict(S)} for n, S in shown]}
        if args.trace:
            doc["log"] = ev.log
        if ev.checks:
            doc["checks"] = _check_lines(ev)
        print(dumps(doc), file=out)
    else:
        if args.trace:
            for line in ev.log:
                print(f"# {line}", file=out)
        for i, (name, S) in enumerate(shown):
            if i:
                print(file=out)
            print(f"== {name} ==", file=out)
            print(render(S, "table"), file=out)
        failed = [l for l in _check_lines(ev) if l.startswith("FAIL")]
        for line in failed:
            print(line, file=sys.stderr)
    return EXIT_OK if ev.ok else EXIT_CHECK


def _cmd_check(args, out) -> int:
    ev = _evaluate(args.file)
    for line in _check_lines(ev):
        print(line, file=out)
    passed = sum(r.passed for r in ev.checks)
    print(f"{passed}/{len(ev.checks)} checks passed", file=out)
    return EXIT_OK if ev.ok else EXIT_CHECK


def _cmd_katz(args, out) -> int:
    ev = _evaluate(args.file)
    if not ev.order:
        raise KhcError("program has no bindings")
    last = ev.order[-1]
    trace = ev.traces.get(last) or katz_reduce(ev.bindings[last])
    if args.format == "json":
        print(dumps({"name": last, "ranks": trace.ranks, "steps": trace_to_list(trace)}), file=out)
    else:
        print(f"== katz({last}) ==", file=out)
        print(render_trace(trace), file=out)
    return EXIT_OK


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = _parser().parse_args(argv)
    handler = {"run": _cmd_run, "check": _cmd_check, "katz": _cmd_katz}[args.command]
    try:
        return handler(args, out)
    except InvariantViolation as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except KhcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USER


def main_entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
