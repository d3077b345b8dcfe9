"""Abstract syntax for terms, goals, clauses and programs.

Terms are first order: a variable, a constant, or a compound application
``f(t1, ..., tn)``. Goals combine atoms with `,` (both conjuncts, shared
bindings), `;` (a branch picked by the machine), `&` (a branch picked by the
user) and an existential binder. A clause is a fact or ``head :- goal`` closed
under an outer universal prefix; a program is an ordered list of clauses.

Everything here is immutable and safe to share between concurrent sessions.
Variable identity is a globally fresh integer, minted by :func:`fresh_var` and
never reused within a process, so renamed-apart clauses and binder openings
can never capture each other.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional, Union

_ids = itertools.count(1)


@dataclass(frozen=True)
class Var:
    """A logic variable. ``name`` is for display only; ``id`` is identity."""

    name: str
    id: int

    def __repr__(self) -> str:
        return f"{self.name}#{self.id}"


@dataclass(frozen=True)
class Const:
    name: str

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Compound:
    functor: str
    args: tuple["Term", ...]

    def __post_init__(self) -> None:
        if len(self.args) < 1:
            raise ValueError("compound terms need at least one argument")

    def __repr__(self) -> str:
        return f"{self.functor}({', '.join(map(repr, self.args))})"


Term = Union[Var, Const, Compound]

# Atom payloads: a predicate applied to arguments, or a bare predicate name.
AtomTerm = Union[Const, Compound]


def fresh_var(name: str = "_G") -> Var:
    """Mint a variable with a never-before-used identity."""
    return Var(name, next(_ids))


@dataclass(frozen=True)
class Atom:
    term: AtomTerm

    def __post_init__(self) -> None:
        if isinstance(self.term, Var):
            raise ValueError("atomic goals cannot be bare variables")


@dataclass(frozen=True)
class Tensor:
    left: "Goal"
    right: "Goal"


@dataclass(frozen=True)
class Plus:
    left: "Goal"
    right: "Goal"


@dataclass(frozen=True)
class With:
    left: "Goal"
    right: "Goal"


@dataclass(frozen=True)
class Exists:
    var: Var
    body: "Goal"


Goal = Union[Atom, Tensor, Plus, With, Exists]


@dataclass(frozen=True)
class Clause:
    """``head`` or ``head :- body``, universally closed over ``universals``."""

    head: AtomTerm
    body: Optional[Goal] = None
    universals: tuple[Var, ...] = ()

    @property
    def is_fact(self) -> bool:
        return self.body is None


@dataclass(frozen=True)
class Program:
    clauses: tuple[Clause, ...] = ()


def clause(head: AtomTerm, body: Optional[Goal] = None) -> Clause:
    """Close ``head [:- body]`` over its free variables, in occurrence order."""
    seen = list(term_vars(head))
    if body is not None:
        for v in free_vars_ordered(body):
            if v not in seen:
                seen.append(v)
    return Clause(head, body, tuple(seen))


def term_vars(t: Term) -> list[Var]:
    """Variables of a term in first-occurrence order."""
    out: list[Var] = []
    _term_vars(t, out)
    return out


def _term_vars(t: Term, out: list[Var]) -> None:
    if isinstance(t, Var):
        if t not in out:
            out.append(t)
    elif isinstance(t, Compound):
        for a in t.args:
            _term_vars(a, out)


def free_vars_ordered(g: Goal) -> list[Var]:
    """Free variables of a goal in first-occurrence order."""
    out: list[Var] = []
    _free_vars(g, frozenset(), out)
    return out


def free_vars(g: Goal) -> set[Var]:
    """Variables of ``g`` not bound by any enclosing existential."""
    return set(free_vars_ordered(g))


def _free_vars(g: Goal, bound: frozenset[Var], out: list[Var]) -> None:
    if isinstance(g, Atom):
        for v in term_vars(g.term):
            if v not in bound and v not in out:
                out.append(v)
    elif isinstance(g, (Tensor, Plus, With)):
        _free_vars(g.left, bound, out)
        _free_vars(g.right, bound, out)
    else:
        _free_vars(g.body, bound | {g.var}, out)


def goal_atoms(g: Goal) -> Iterator[AtomTerm]:
    """All atom payloads in a goal, left to right."""
    if isinstance(g, Atom):
        yield g.term
    elif isinstance(g, (Tensor, Plus, With)):
        yield from goal_atoms(g.left)
        yield from goal_atoms(g.right)
    else:
        yield from goal_atoms(g.body)


def binders(g: Goal) -> Iterator[Var]:
    if isinstance(g, (Tensor, Plus, With)):
        yield from binders(g.left)
        yield from binders(g.right)
    elif isinstance(g, Exists):
        yield g.var
        yield from binders(g.body)


def distinct_binders(g: Goal) -> bool:
    """True when no two existential binders of ``g`` share an identity."""
    seen: set[Var] = set()
    for v in binders(g):
        if v in seen:
            return False
        seen.add(v)
    return True


@dataclass(frozen=True)
class ClosedQuery:
    goal: Goal
    # (source name, the fresh variable standing for it), in source order
    answer_vars: tuple[tuple[str, Var], ...]


def close_query(g: Goal) -> ClosedQuery:
    """Replace the free variables of ``g`` by fresh ones and record them.

    The recorded association drives answer reporting; substituting every
    recorded variable closes the goal.
    """
    mapping: dict[Var, Var] = {}
    recorded: list[tuple[str, Var]] = []
    for v in free_vars_ordered(g):
        nv = fresh_var(v.name)
        mapping[v] = nv
        recorded.append((v.name, nv))
    return ClosedQuery(rename_goal_vars(g, mapping), tuple(recorded))


def rename_term_vars(t: Term, mapping: dict[Var, Var]) -> Term:
    if isinstance(t, Var):
        return mapping.get(t, t)
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(rename_term_vars(a, mapping) for a in t.args))
    return t


def rename_goal_vars(g: Goal, mapping: dict[Var, Var]) -> Goal:
    """Rename variables homomorphically. Binders are left alone (their
    identities are globally fresh, so capture is impossible)."""
    if isinstance(g, Atom):
        return Atom(rename_term_vars(g.term, mapping))
    if isinstance(g, Tensor):
        return Tensor(rename_goal_vars(g.left, mapping), rename_goal_vars(g.right, mapping))
    if isinstance(g, Plus):
        return Plus(rename_goal_vars(g.left, mapping), rename_goal_vars(g.right, mapping))
    if isinstance(g, With):
        return With(rename_goal_vars(g.left, mapping), rename_goal_vars(g.right, mapping))
    inner = {k: v for k, v in mapping.items() if k != g.var}
    return Exists(g.var, rename_goal_vars(g.body, inner))


def alpha_eq(a: Goal | Term | Clause, b: Goal | Term | Clause) -> bool:
    """Structural equality modulo bound-variable identities.

    Free variables match by display name (how a re-parse would identify
    them); bound variables match by binder correspondence.
    """
    if isinstance(a, Clause) and isinstance(b, Clause):
        # compare as (head :- body) with the universals acting as binders
        if len(a.universals) != len(b.universals):
            return False
        m = dict(zip(a.universals, b.universals))
        if not _alpha_term(a.head, b.head, m):
            return False
        if (a.body is None) != (b.body is None):
            return False
        return a.body is None or _alpha_goal(a.body, b.body, m)
    if _is_term(a) and _is_term(b):
        return _alpha_term(a, b, {})
    if _is_term(a) or _is_term(b):
        return False
    return _alpha_goal(a, b, {})


def _is_term(x: object) -> bool:
    return isinstance(x, (Var, Const, Compound))


def _alpha_term(a: Term, b: Term, bound: dict[Var, Var]) -> bool:
    if isinstance(a, Var) and isinstance(b, Var):
        if a in bound:
            return bound[a] == b
        if b in bound.values():
            return False
        return a.name == b.name
    if isinstance(a, Const) and isinstance(b, Const):
        return a.name == b.name
    if isinstance(a, Compound) and isinstance(b, Compound):
        return (
            a.functor == b.functor
            and len(a.args) == len(b.args)
            and all(_alpha_term(x, y, bound) for x, y in zip(a.args, b.args))
        )
    return False


def _alpha_goal(a: Goal, b: Goal, bound: dict[Var, Var]) -> bool:
    if isinstance(a, Atom) and isinstance(b, Atom):
        return _alpha_term(a.term, b.term, bound)
    for kind in (Tensor, Plus, With):
        if isinstance(a, kind) and isinstance(b, kind):
            return _alpha_goal(a.left, b.left, bound) and _alpha_goal(a.right, b.right, bound)
    if isinstance(a, Exists) and isinstance(b, Exists):
        inner = dict(bound)
        inner[a.var] = b.var
        return _alpha_goal(a.body, b.body, inner)
    return False
