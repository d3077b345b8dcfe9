"""Differential checks between the classical and interactive procedures.

The headline property: for a finite search, the interactive procedure
succeeds under *every* complete choice script exactly when the classical one
succeeds. Cases that hit a limit anywhere (or whose script tree is larger
than the exploration cap) are excluded rather than guessed at; the caller
reports exclusion rates separately.
"""

from __future__ import annotations

from dataclasses import dataclass

from .ast import Goal, Program, alpha_eq, close_query
from .engine import (
    Indeterminate,
    LimitReached,
    Limits,
    Success,
    explore_choice_scripts,
    run_query,
    solve_prov,
    solve_prove,
)
from .unify import EMPTY, apply


@dataclass(frozen=True)
class ProxyVerdict:
    prov_succeeds: bool
    scripts_run: int
    all_scripts_succeed: bool
    uniform: bool  # every complete script agreed on success/failure
    excluded: bool  # a limit fired somewhere, or exploration was capped

    @property
    def equivalent(self) -> bool:
        return self.all_scripts_succeed == self.prov_succeeds


def theorem_proxy_verdict(p: Program, g: Goal, limits: Limits,
                          max_scripts: int = 256) -> ProxyVerdict:
    """Compare classical success against success under every choice script."""
    prov_outcome = run_query(p, g, "prov", limits=limits)
    exploration = explore_choice_scripts(p, g, limits=limits, max_scripts=max_scripts)
    excluded = (
        isinstance(prov_outcome, Indeterminate)
        or exploration.capped
        or exploration.any_indeterminate
        or not exploration.outcomes
    )
    flags = {isinstance(o.outcome, Success) for o in exploration.outcomes}
    return ProxyVerdict(
        prov_succeeds=isinstance(prov_outcome, Success),
        scripts_run=len(exploration.outcomes),
        all_scripts_succeed=flags == {True},
        uniform=len(flags) == 1,
        excluded=excluded,
    )


def answer_streams_equal(p: Program, g: Goal, limits: Limits,
                         max_answers: int = 50) -> bool | None:
    """Do both procedures produce the same answers in the same order?

    Only meaningful for `&`-free goals (no oracle is supplied). Returns None
    when either run hits a limit.
    """
    closed = close_query(g)
    qvars = [v for _, v in closed.answer_vars]

    def collect(stream):
        out = []
        try:
            for s in stream:
                out.append(tuple(apply(s, v) for v in qvars))
                if len(out) >= max_answers:
                    break
        except LimitReached:
            return None
        return out

    a = collect(solve_prov(p, closed.goal, EMPTY, limits))
    b = collect(solve_prove(p, closed.goal, EMPTY, None, limits))
    if a is None or b is None:
        return None
    if len(a) != len(b):
        return False
    return all(len(x) == len(y) and all(alpha_eq(t1, t2) for t1, t2 in zip(x, y))
               for x, y in zip(a, b))
