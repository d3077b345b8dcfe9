"""Command-line front end: batch queries and a REPL.

Batch mode (``--query``) runs one goal and exits 0 on success, 1 on failure,
2 when a limit cut the search off, 3 on usage or parse errors. Without
``--query`` a REPL opens: ``?- goal.`` runs a query, ``more.`` asks for the
next answer, ``halt.`` leaves. `&` decisions are answered from ``--choices``
when given, otherwise by prompting.

Bindings print one per line as ``Name = term.`` in query source order,
followed by ``yes.`` / ``no.`` / ``unknown.`` (unknown: a limit fired, which
is not a disproof). Bindings for ``_``-named variables and variables the
search left unconstrained are not printed.
"""

from __future__ import annotations

import argparse
import sys
from typing import IO, Optional

from .ast import Program, Var
from .engine import (
    ChoicePoint,
    Failure,
    Indeterminate,
    Limits,
    Outcome,
    ScriptExhausted,
    ScriptedOracle,
    Success,
    run_query,
)
from .parser import ParseError, parse_goal, parse_program, pretty
from .session import ChoiceRequested, Failed, Session
from .session import Indeterminate as SessionIndeterminate
from .session import Solved, start

EXIT_SUCCESS, EXIT_FAILURE, EXIT_INDETERMINATE, EXIT_USAGE = 0, 1, 2, 3


class PromptOracle:
    """Asks the user on the spot; used when no ``--choices`` script is given."""

    def __init__(self, inp: IO[str], out: IO[str]):
        self.inp = inp
        self.out = out

    def choose(self, cp: ChoicePoint) -> int:
        return prompt_for_choice(cp, self.inp, self.out)


def prompt_for_choice(cp: ChoicePoint, inp: IO[str], out: IO[str]) -> int:
    out.write(f"[0] {pretty(cp.left)}\n[1] {pretty(cp.right)}\n")
    while True:
        out.write("choice> ")
        out.flush()
        line = inp.readline()
        if not line:
            raise EOFError("input closed while a choice was pending")
        answer = line.strip()
        if answer in ("0", "1"):
            return int(answer)
        out.write("please answer 0 or 1.\n")


def print_bindings(bindings, out: IO[str]) -> None:
    for name, term in bindings:
        if name.startswith("_"):
            continue
        if isinstance(term, Var) and term.name == name:
            continue  # unconstrained
        out.write(f"{name} = {pretty(term)}.\n")


def report(outcome: Outcome, out: IO[str], all_answers: bool) -> int:
    if isinstance(outcome, Success):
        answers = outcome.answers if all_answers else outcome.answers[:1]
        for answer in answers:
            print_bindings(answer.bindings, out)
            out.write("yes.\n")
        return EXIT_SUCCESS
    if isinstance(outcome, Failure):
        out.write("no.\n")
        return EXIT_FAILURE
    assert isinstance(outcome, Indeterminate)
    out.write("unknown.\n")
    return EXIT_INDETERMINATE


def _drive(session: Session, event, inp: IO[str], out: IO[str]):
    """Answer choice prompts until the session settles."""
    while isinstance(event, ChoiceRequested):
        index = prompt_for_choice(event.cp, inp, out)
        event = session.resolve_choice(event.request_id, index)
    return event


def repl_loop(program: Program, semantics: str, limits: Limits,
              inp: Optional[IO[str]] = None, out: Optional[IO[str]] = None,
              trace=None) -> int:
    inp = inp or sys.stdin
    out = out or sys.stdout
    session: Optional[Session] = None
    while True:
        out.write("?- ")
        out.flush()
        line = inp.readline()
        if not line:
            out.write("\n")
            return EXIT_SUCCESS
        text = line.strip()
        if not text:
            continue
        if text in ("halt.", "halt"):
            return EXIT_SUCCESS
        if text in ("more.", "more"):
            if session is None or session.state != "done" or not isinstance(
                    session.outcome, Success):
                out.write("no.\n")
                continue
            try:
                event = _drive(session, session.more(), inp, out)
            except EOFError:
                return EXIT_SUCCESS
            _print_event(event, out)
            continue
        if text.startswith("?-"):
            text = text[2:].strip()
        try:
            goal = parse_goal(text)
        except ParseError as err:
            out.write(f"parse error at {err}\n")
            continue
        session = start(program, goal, semantics, limits, trace=trace)
        try:
            event = _drive(session, session.advance(), inp, out)
        except EOFError:
            return EXIT_SUCCESS
        _print_event(event, out)


def _print_event(event, out: IO[str]) -> None:
    if isinstance(event, Solved):
        print_bindings(event.bindings, out)
        out.write("yes.\n")
    elif isinstance(event, Failed):
        out.write("no.\n")
    elif isinstance(event, SessionIndeterminate):
        out.write("unknown.\n")


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):  # usage errors exit 3, not argparse's 2
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(
        prog="addprolog",
        description="Run logic programs with machine-chosen (;) and user-chosen (&) goals.",
    )
    p.add_argument("program", nargs="?", help="program file (.lp); omit for an empty program")
    p.add_argument("--query", help="goal to run in batch mode; omit to open the REPL")
    p.add_argument("--semantics", choices=("prov", "prove"), default="prove",
                   help="prov: classical, never asks; prove: interactive & (default)")
    p.add_argument("--choices", help="comma-separated 0/1 script for & decisions")
    p.add_argument("--all", action="store_true", help="enumerate every answer")
    p.add_argument("--limit-steps", type=int, default=Limits().steps, metavar="N")
    p.add_argument("--limit-depth", type=int, default=Limits().depth, metavar="N")
    p.add_argument("--trace", action="store_true", help="print rule applications to stderr")
    return p


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    program = Program()
    if args.program is not None:
        try:
            with open(args.program, encoding="utf-8") as f:
                text = f.read()
        except OSError as err:
            sys.stderr.write(f"error: cannot read {args.program}: {err.strerror}\n")
            return EXIT_USAGE
        try:
            program = parse_program(text)
        except ParseError as err:
            sys.stderr.write(f"error: {args.program}:{err}\n")
            return EXIT_USAGE

    limits = Limits(steps=args.limit_steps, depth=args.limit_depth)
    trace = (lambda line: sys.stderr.write(line + "\n")) if args.trace else None

    oracle = None
    if args.choices is not None:
        try:
            script = tuple(int(part) for part in args.choices.split(",") if part.strip() != "")
            if any(i not in (0, 1) for i in script):
                raise ValueError
        except ValueError:
            sys.stderr.write("error: --choices must be a comma-separated list of 0s and 1s\n")
            return EXIT_USAGE
        oracle = ScriptedOracle(script)

    if args.query is None:
        return repl_loop(program, args.semantics, limits, trace=trace)

    try:
        goal = parse_goal(args.query)
    except ParseError as err:
        sys.stderr.write(f"error: query:{err}\n")
        return EXIT_USAGE

    if oracle is None:
        oracle = PromptOracle(sys.stdin, sys.stdout)
    try:
        outcome = run_query(program, goal, args.semantics, oracle=oracle,
                            limits=limits, all_answers=args.all, trace=trace)
    except ScriptExhausted:
        sys.stderr.write("error: --choices script ran out of answers for & decisions\n")
        return EXIT_USAGE
    except EOFError as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_USAGE
    return report(outcome, sys.stdout, args.all)


if __name__ == "__main__":
    sys.exit(main())
