#!/usr/bin/env python3
"""Differential corpus experiment: classical vs interactive search.

Generates random program/goal pairs and checks that the interactive
procedure succeeds under every exhaustively enumerated choice script exactly
when the classical procedure succeeds. Prints a summary plus any
counterexamples (there should be none).

Usage:
    python scripts/differential_corpus.py [--cases N] [--seed S] [--steps N]
"""

import argparse
import random
import sys
import time

from addprolog.diffcheck import theorem_proxy_verdict
from addprolog.engine import Limits
from addprolog.parser import pretty
from addprolog.randprog import GenConfig, random_program, random_query


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--cases", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=20250811)
    ap.add_argument("--steps", type=int, default=10_000)
    ap.add_argument("--depth", type=int, default=200)
    ap.add_argument("--show-excluded", action="store_true",
                    help="print the cases that hit a limit")
    args = ap.parse_args()

    cfg = GenConfig()
    limits = Limits(steps=args.steps, depth=args.depth)
    rng = random.Random(args.seed)
    started = time.monotonic()

    checked = excluded = 0
    scripts_total = 0
    counterexamples = []
    for i in range(args.cases):
        program, sig = random_program(rng, cfg)
        goal = random_query(rng, cfg, sig)
        verdict = theorem_proxy_verdict(program, goal, limits)
        if verdict.excluded:
            excluded += 1
            if args.show_excluded:
                print(f"-- excluded case {i}: {pretty(goal)}")
            continue
        checked += 1
        scripts_total += verdict.scripts_run
        if not (verdict.equivalent and verdict.uniform):
            counterexamples.append((program, goal, verdict))

    elapsed = time.monotonic() - started
    print(f"cases:            {args.cases}")
    print(f"conclusive:       {checked}")
    print(f"excluded (limit): {excluded} ({100 * excluded / args.cases:.1f}%)")
    print(f"scripts explored: {scripts_total}")
    print(f"counterexamples:  {len(counterexamples)}")
    print(f"elapsed:          {elapsed:.1f}s")

    for program, goal, verdict in counterexamples:
        print("\nCOUNTEREXAMPLE")
        for c in program.clauses:
            print(f"  {pretty(c)}")
        print(f"  ?- {pretty(goal)}")
        print(f"  classical succeeds: {verdict.prov_succeeds}; "
              f"all scripts succeed: {verdict.all_scripts_succeed}; "
              f"uniform: {verdict.uniform}")
    return 1 if counterexamples else 0


if __name__ == "__main__":
    sys.exit(main())
