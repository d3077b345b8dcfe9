"""Seeded random programs, goals and terms for differential testing.

Everything is driven by an explicit ``random.Random`` so corpora are
reproducible bit for bit. Generated programs use a small signature (a few
predicates with fixed arities, constants ``a``/``b``/``c``, optional function
symbols) and can be recursive, so a slice of any corpus is expected to hit
step limits; differential checks exclude those cases explicitly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .ast import (
    Atom,
    AtomTerm,
    Clause,
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
    clause,
    fresh_var,
)

_PRED_NAMES = ("p", "q", "r", "s")
_CONST_NAMES = ("a", "b", "c")
_VAR_NAMES = ("X", "Y", "Z", "W")
_FUNCTORS = ("f", "g")


@dataclass(frozen=True)
class GenConfig:
    max_clauses: int = 6
    predicates: int = 3
    constants: int = 3
    max_arity: int = 2
    goal_connectives: int = 3
    body_connectives: int = 2
    term_depth: int = 2
    functions: bool = True
    fact_bias: float = 0.5  # chance a clause is a fact
    var_bias: float = 0.35  # chance a term position is a variable
    stratify_bias: float = 0.9  # chance a body calls later predicates only
    quirky_constants: bool = False  # mix in constants that need quoting


def signature(rng: random.Random, cfg: GenConfig) -> dict[str, int]:
    """Predicate name -> arity, fixed for one generated program."""
    return {
        _PRED_NAMES[i]: rng.randint(0, cfg.max_arity)
        for i in range(min(cfg.predicates, len(_PRED_NAMES)))
    }


def random_const(rng: random.Random, cfg: GenConfig) -> Const:
    if cfg.quirky_constants and rng.random() < 0.15:
        return Const(rng.choice(("9:40", "Odd One", "mixedCase_0")))
    return Const(rng.choice(_CONST_NAMES[: cfg.constants]))


def random_term(rng: random.Random, cfg: GenConfig, pool: dict[str, Var],
                depth: Optional[int] = None) -> Term:
    depth = cfg.term_depth if depth is None else depth
    roll = rng.random()
    if depth > 0 and cfg.functions and roll < 0.15:
        functor = rng.choice(_FUNCTORS)
        arity = 1 if functor == "f" else 2
        return Compound(functor, tuple(random_term(rng, cfg, pool, depth - 1)
                                       for _ in range(arity)))
    if roll < 0.15 + cfg.var_bias:
        name = rng.choice(_VAR_NAMES)
        if name not in pool:
            pool[name] = fresh_var(name)
        return pool[name]
    return random_const(rng, cfg)


def random_atom(rng: random.Random, cfg: GenConfig, sig: dict[str, int],
                pool: dict[str, Var], preds: Optional[list[str]] = None) -> Atom:
    name = rng.choice(preds if preds else list(sig))
    arity = sig[name]
    if arity == 0:
        return Atom(Const(name))
    return Atom(Compound(name, tuple(random_term(rng, cfg, pool) for _ in range(arity))))


def random_goal(rng: random.Random, cfg: GenConfig, sig: dict[str, int],
                pool: dict[str, Var], budget: Optional[int] = None,
                preds: Optional[list[str]] = None) -> Goal:
    budget = rng.randint(0, cfg.goal_connectives) if budget is None else budget
    if budget <= 0:
        return random_atom(rng, cfg, sig, pool, preds)
    kind = rng.choices(("tensor", "plus", "with", "exists"), weights=(4, 3, 3, 2))[0]
    if kind == "exists":
        binder = fresh_var(rng.choice(_VAR_NAMES))
        inner = dict(pool)
        inner[binder.name] = binder
        return Exists(binder, random_goal(rng, cfg, sig, inner, budget - 1, preds))
    left_budget = rng.randint(0, budget - 1)
    left = random_goal(rng, cfg, sig, pool, left_budget, preds)
    right = random_goal(rng, cfg, sig, pool, budget - 1 - left_budget, preds)
    return {"tensor": Tensor, "plus": Plus, "with": With}[kind](left, right)


def random_clause(rng: random.Random, cfg: GenConfig, sig: dict[str, int]) -> Clause:
    pool: dict[str, Var] = {}
    names = list(sig)
    idx = rng.randrange(len(names))
    name = names[idx]
    arity = sig[name]
    head: AtomTerm = Const(name) if arity == 0 else Compound(
        name, tuple(random_term(rng, cfg, pool) for _ in range(arity)))
    # mostly stratified bodies (calling later predicates only) so that the
    # bulk of the corpus terminates; the rest may recurse freely
    later = names[idx + 1:]
    stratified = rng.random() < cfg.stratify_bias
    if rng.random() < cfg.fact_bias or (stratified and not later):
        return clause(head, None)
    body = random_goal(rng, cfg, sig, pool, rng.randint(0, cfg.body_connectives),
                       later if stratified else names)
    return clause(head, body)


def random_program(rng: random.Random, cfg: GenConfig,
                   sig: Optional[dict[str, int]] = None) -> tuple[Program, dict[str, int]]:
    sig = sig or signature(rng, cfg)
    n = rng.randint(1, cfg.max_clauses)
    return Program(tuple(random_clause(rng, cfg, sig) for _ in range(n))), sig


def random_query(rng: random.Random, cfg: GenConfig, sig: dict[str, int]) -> Goal:
    """A goal to run against a program of the same signature; its variables
    are left free (the query layer closes them)."""
    return random_goal(rng, cfg, sig, {}, rng.randint(0, cfg.goal_connectives))
