"""First-order unification with an always-on occurs check.

Substitutions are persistent values: binding returns a new substitution and
never mutates, so backtracking simply keeps holding the older value. Bindings
are stored triangularly (a bound term may mention variables bound later);
:func:`apply` resolves chains fully, which makes application idempotent.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .ast import (
    Atom,
    Clause,
    Compound,
    Const,
    Exists,
    Goal,
    Plus,
    Tensor,
    Term,
    Var,
    With,
    fresh_var,
)


class _FailMarker:
    """Unification failure. A normal outcome, not an error."""

    __slots__ = ()

    def __repr__(self) -> str:
        return "FAIL"

    def __bool__(self) -> bool:
        return False


FAIL = _FailMarker()


@dataclass(frozen=True)
class Substitution:
    bindings: dict[Var, Term] = field(default_factory=dict)

    def walk(self, t: Term) -> Term:
        """Chase variable bindings at the top of ``t`` only."""
        while isinstance(t, Var) and t in self.bindings:
            t = self.bindings[t]
        return t

    def bind(self, v: Var, t: Term) -> "Substitution":
        if isinstance(t, Var) and t == v:
            return self
        new = dict(self.bindings)
        new[v] = t
        return Substitution(new)

    def lookup(self, v: Var) -> Term | None:
        """Fully resolved value of ``v``, or None when unbound."""
        t = self.walk(v)
        if isinstance(t, Var) and t == v:
            return None
        return apply(self, t)

    def domain(self) -> set[Var]:
        return set(self.bindings)

    def __len__(self) -> int:
        return len(self.bindings)


EMPTY = Substitution()


def apply(s: Substitution, x: Term | Goal) -> Term | Goal:
    """Replace bound variables throughout ``x``, resolving chains fully.

    Goal binders are left untouched: their identities are globally fresh, so
    they can never occur in a substitution's domain or be captured.
    """
    if isinstance(x, (Var, Const, Compound)):
        return _apply_term(s, x)
    return _apply_goal(s, x)


def _apply_term(s: Substitution, t: Term) -> Term:
    t = s.walk(t)
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(_apply_term(s, a) for a in t.args))
    return t


def _apply_goal(s: Substitution, g: Goal) -> Goal:
    if isinstance(g, Atom):
        return Atom(_apply_term(s, g.term))
    if isinstance(g, Tensor):
        return Tensor(_apply_goal(s, g.left), _apply_goal(s, g.right))
    if isinstance(g, Plus):
        return Plus(_apply_goal(s, g.left), _apply_goal(s, g.right))
    if isinstance(g, With):
        return With(_apply_goal(s, g.left), _apply_goal(s, g.right))
    return Exists(g.var, _apply_goal(s, g.body))


def _occurs(s: Substitution, v: Var, t: Term) -> bool:
    t = s.walk(t)
    if isinstance(t, Var):
        return t == v
    if isinstance(t, Compound):
        return any(_occurs(s, v, a) for a in t.args)
    return False


def unify(t1: Term, t2: Term, s: Substitution = EMPTY) -> Substitution | _FailMarker:
    """Most general unifier extending ``s``, or FAIL.

    Binding a variable to a term containing it fails (occurs check), so the
    result can never describe an infinite term.
    """
    a, b = s.walk(t1), s.walk(t2)
    if isinstance(a, Var):
        if isinstance(b, Var) and a == b:
            return s
        if _occurs(s, a, b):
            return FAIL
        return s.bind(a, b)
    if isinstance(b, Var):
        if _occurs(s, b, a):
            return FAIL
        return s.bind(b, a)
    if isinstance(a, Const) and isinstance(b, Const):
        return s if a.name == b.name else FAIL
    if isinstance(a, Compound) and isinstance(b, Compound):
        if a.functor != b.functor or len(a.args) != len(b.args):
            return FAIL
        for x, y in zip(a.args, b.args):
            s = unify(x, y, s)
            if s is FAIL:
                return FAIL
        return s
    return FAIL


def rename_apart(c: Clause, fresh: Callable[[str], Var] = fresh_var) -> Clause:
    """Instantiate the clause's universal prefix with never-used variables."""
    if not c.universals:
        return c
    mapping: dict[Var, Term] = {v: fresh(v.name) for v in c.universals}
    s = Substitution(mapping)
    head = _apply_term(s, c.head)
    body = None if c.body is None else _apply_goal(s, c.body)
    return Clause(head, body, tuple(mapping.values()))
