"""Brute-force ground evaluator used as an independent test oracle.

Deliberately shares nothing with the engine or the unifier: its own
substitution, its own truth evaluation. Provability is decided by grounding
every clause over the constants appearing in the program (plus the goal) and
iterating to a least fixpoint. Complete only for function-free programs;
sound for any program whose answers stay within that vocabulary, which the
function-free test corpora guarantee.
"""

from __future__ import annotations

import itertools
from typing import Iterator

from addprolog.ast import (
    Atom,
    Compound,
    Const,
    Exists,
    Goal,
    Plus,
    Program,
    Tensor,
    Term,
    Var,
    With,
)


def subst_term(t: Term, env: dict[Var, Term]) -> Term:
    if isinstance(t, Var):
        return env.get(t, t)
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(subst_term(a, env) for a in t.args))
    return t


def term_constants(t: Term, out: set[str]) -> None:
    if isinstance(t, Const):
        out.add(t.name)
    elif isinstance(t, Compound):
        for a in t.args:
            term_constants(a, out)


def goal_constants(g: Goal, out: set[str]) -> None:
    if isinstance(g, Atom):
        term_constants(g.term, out)
    elif isinstance(g, (Tensor, Plus, With)):
        goal_constants(g.left, out)
        goal_constants(g.right, out)
    else:
        goal_constants(g.body, out)


def universe(p: Program, g: Goal | None = None) -> list[Const]:
    names: set[str] = set()
    for c in p.clauses:
        term_constants(c.head, names)
        if c.body is not None:
            goal_constants(c.body, names)
    if g is not None:
        goal_constants(g, names)
    if not names:
        names.add("c0")  # a nonempty domain is needed to ground anything
    return [Const(n) for n in sorted(names)]


def ground_substitutions(variables: list[Var], consts: list[Const]) -> Iterator[dict[Var, Term]]:
    for combo in itertools.product(consts, repeat=len(variables)):
        yield dict(zip(variables, combo))


def goal_true(g: Goal, facts: set[Term], consts: list[Const], env: dict[Var, Term]) -> bool:
    if isinstance(g, Atom):
        return subst_term(g.term, env) in facts
    if isinstance(g, (Tensor, With)):
        return goal_true(g.left, facts, consts, env) and goal_true(g.right, facts, consts, env)
    if isinstance(g, Plus):
        return goal_true(g.left, facts, consts, env) or goal_true(g.right, facts, consts, env)
    return any(goal_true(g.body, facts, consts, {**env, g.var: c}) for c in consts)


def provable_facts(p: Program, consts: list[Const]) -> set[Term]:
    """Least fixpoint of the ground program."""
    grounded: list[tuple[Term, Goal | None]] = []
    for c in p.clauses:
        for env in ground_substitutions(list(c.universals), consts):
            grounded.append((subst_term(c.head, env), None if c.body is None
                             else _subst_goal(c.body, env)))
    facts: set[Term] = set()
    changed = True
    while changed:
        changed = False
        for head, body in grounded:
            if head in facts:
                continue
            if body is None or goal_true(body, facts, consts, {}):
                facts.add(head)
                changed = True
    return facts


def _subst_goal(g: Goal, env: dict[Var, Term]) -> Goal:
    if isinstance(g, Atom):
        return Atom(subst_term(g.term, env))
    if isinstance(g, Tensor):
        return Tensor(_subst_goal(g.left, env), _subst_goal(g.right, env))
    if isinstance(g, Plus):
        return Plus(_subst_goal(g.left, env), _subst_goal(g.right, env))
    if isinstance(g, With):
        return With(_subst_goal(g.left, env), _subst_goal(g.right, env))
    inner = {k: v for k, v in env.items() if k != g.var}
    return Exists(g.var, _subst_goal(g.body, inner))


def goal_provable(p: Program, g: Goal) -> bool:
    """Is the goal provable, treating its free variables existentially?"""
    consts = universe(p, g)
    facts = provable_facts(p, consts)
    free = _free_vars(g)
    return any(goal_true(g, facts, consts, env)
               for env in ground_substitutions(free, consts))


def _free_vars(g: Goal, bound: frozenset[Var] = frozenset()) -> list[Var]:
    out: list[Var] = []

    def walk(g: Goal, bound: frozenset[Var]) -> None:
        if isinstance(g, Atom):
            stack = [g.term]
            while stack:
                t = stack.pop()
                if isinstance(t, Var) and t not in bound and t not in out:
                    out.append(t)
                elif isinstance(t, Compound):
                    stack.extend(reversed(t.args))
        elif isinstance(g, (Tensor, Plus, With)):
            walk(g.left, bound)
            walk(g.right, bound)
        else:
            walk(g.body, bound | {g.var})

    walk(g, bound)
    return out
