"""Proof search: a classical procedure and an interactive one.

Execution alternates between goal reduction and backchaining on a focused
clause, depth first with chronological backtracking. The two entry points
share one core:

* ``solve_prov`` - classical search. `&` behaves like `,` (both operands must
  succeed under the threaded bindings); the machine never asks anything.
* ``solve_prove`` - interactive search. Reaching ``G0 & G1`` asks a choice
  oracle for an index i, pursues the chosen operand interactively, and checks
  the unchosen one with the classical procedure so no further question can
  arise from it. Both must succeed. `;` stays a machine choice (left branch
  first, backtracking into the right).

A user's `&` choice is committed: if search below it fails exhaustively, the
`&` goal fails for that run - the engine neither re-asks nor tries the other
operand. Machine backtracking below the committed choice is exhausted first.

The core is a generator yielding :class:`AnswerEvent` and
:class:`ChoiceEvent`; drivers reply to a choice with ``gen.send(index)``.
That makes suspension (the session layer) and synchronous oracles two thin
drivers over identical search state.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Callable, Iterator, Literal, Optional, Protocol, Union

from .ast import (
    Atom,
    AtomTerm,
    Clause,
    Goal,
    Plus,
    Program,
    Tensor,
    Term,
    Var,
    With,
    close_query,
    fresh_var,
    rename_goal_vars,
)
from .parser import pretty
from .unify import EMPTY, FAIL, Substitution, apply, rename_apart, unify

Semantics = Literal["prov", "prove"]


@dataclass(frozen=True)
class Limits:
    """Search is cut off (Indeterminate, not Failure) past these bounds."""

    steps: int = 100_000
    depth: int = 2_000


@dataclass
class StepStats:
    resolution_steps: int = 0  # every applied search rule
    choice_requests: int = 0
    max_depth: int = 0


class LimitReached(Exception):
    """Raised mid-search when a limit fires; surfaces as Indeterminate."""

    def __init__(self, kind: str):
        super().__init__(kind)
        self.kind = kind


class ScriptExhausted(Exception):
    """A scripted oracle was asked for more choices than it holds."""


@dataclass(frozen=True)
class ChoicePoint:
    """A pending `&` decision. Operands are shown under the current bindings;
    ``path`` locates the connective from the root goal."""

    left: Goal
    right: Goal
    path: tuple[str, ...] = ()
    context: object = None


class ChoiceOracle(Protocol):
    def choose(self, cp: ChoicePoint) -> int: ...


class ScriptedOracle:
    """Answers choices from a fixed list of indices, consumed in order."""

    def __init__(self, indices: tuple[int, ...] | list[int] = ()):
        self.indices = tuple(indices)
        self.position = 0

    def choose(self, cp: ChoicePoint) -> int:
        if self.position >= len(self.indices):
            raise ScriptExhausted(f"script of {len(self.indices)} choices ran dry")
        i = self.indices[self.position]
        self.position += 1
        if i not in (0, 1):
            raise ValueError(f"choice index must be 0 or 1, got {i!r}")
        return i


@dataclass(frozen=True)
class Focus:
    """A distinguished clause being decomposed against an atomic goal."""

    clause: Clause
    goal_atom: AtomTerm


@dataclass(frozen=True)
class AnswerEvent:
    subst: Substitution


@dataclass(frozen=True)
class ChoiceEvent:
    cp: ChoicePoint


_Event = Union[AnswerEvent, ChoiceEvent]


class _Search:
    """Mutable per-run state: the program, limits, counters, tracing."""

    def __init__(self, program: Program, limits: Limits, stats: StepStats,
                 trace: Optional[Callable[[str], None]] = None):
        self.program = program
        self.limits = limits
        self.stats = stats
        self.trace = trace
        needed = limits.depth * 8 + 2_000
        if sys.getrecursionlimit() < needed:
            sys.setrecursionlimit(needed)

    def _step(self, rule: str, detail=None) -> None:
        """Count a rule application; ``detail`` is a thunk, rendered only
        when tracing (rendering involves pretty-printing)."""
        self.stats.resolution_steps += 1
        if self.stats.resolution_steps > self.limits.steps:
            raise LimitReached("steps")
        if self.trace:
            rendered = detail() if detail else ""
            self.trace(f"[step{self.stats.resolution_steps}] {rule} {rendered}")

    # ``path`` is a cons list ((tag, parent) or None), materialized only when
    # a ChoicePoint is built; tuple-appending per descent would cost O(depth).

    def solve(self, g: Goal, s: Substitution, depth: int, interactive: bool,
              path) -> Iterator[_Event]:
        if depth > self.stats.max_depth:
            self.stats.max_depth = depth
        if depth > self.limits.depth:
            raise LimitReached("depth")

        if isinstance(g, Atom):
            # backchaining is inlined: deep derivations resume through this
            # generator chain on every step, so frames per level matter
            for cl in self.program.clauses:  # source order
                self._step("backchain", lambda: pretty(cl.head))
                focused = rename_apart(cl)
                s2 = unify(focused.head, g.term, s)
                if s2 is FAIL:
                    continue
                if focused.body is None:
                    yield AnswerEvent(s2)
                else:
                    yield from self.solve(focused.body, s2, depth + 1, interactive,
                                          (f"clause:{_functor(cl.head)}", path))
        elif isinstance(g, Tensor):
            self._step("tensor", lambda: pretty(apply(s, g)))
            yield from self._seq(g.left, g.right, s, depth, interactive, path, "tensor")
        elif isinstance(g, With) and not interactive:
            self._step("with", lambda: pretty(apply(s, g)))
            yield from self._seq(g.left, g.right, s, depth, interactive, path, "with")
        elif isinstance(g, With):
            self._step("with-choice", lambda: pretty(apply(s, g)))
            self.stats.choice_requests += 1
            cp = ChoicePoint(apply(s, g.left), apply(s, g.right), _path_tuple(path))
            idx = yield ChoiceEvent(cp)
            if idx not in (0, 1):
                raise ValueError(f"choice index must be 0 or 1, got {idx!r}")
            chosen, unchosen = (g.left, g.right) if idx == 0 else (g.right, g.left)
            inner = self.solve(chosen, s, depth + 1, True, (f"with.{idx}", path))
            reply = None
            while True:
                try:
                    ev = inner.send(reply)
                except StopIteration:
                    return
                if isinstance(ev, ChoiceEvent):
                    reply = yield ev
                else:
                    reply = None
                    # the unchosen operand is checked silently: no questions
                    yield from self.solve(unchosen, ev.subst, depth + 1, False,
                                          (f"with.{1 - idx}", path))
        elif isinstance(g, Plus):
            self._step("plus-left", lambda: pretty(apply(s, g.left)))
            yield from self.solve(g.left, s, depth + 1, interactive, ("plus.0", path))
            self._step("plus-right", lambda: pretty(apply(s, g.right)))
            yield from self.solve(g.right, s, depth + 1, interactive, ("plus.1", path))
        else:  # Exists: open the binder with a fresh variable; terms are
            # found by unification, not enumeration
            self._step("exists", lambda: g.var.name)
            opened = rename_goal_vars(g.body, {g.var: fresh_var(g.var.name)})
            yield from self.solve(opened, s, depth + 1, interactive, ("exists", path))

    def _seq(self, first: Goal, second: Goal, s: Substitution, depth: int,
             interactive: bool, path, kind: str) -> Iterator[_Event]:
        """Solve ``first`` then ``second`` under each of its answers."""
        inner = self.solve(first, s, depth + 1, interactive, (f"{kind}.0", path))
        reply = None
        while True:
            try:
                ev = inner.send(reply)
            except StopIteration:
                return
            if isinstance(ev, ChoiceEvent):
                reply = yield ev
            else:
                reply = None
                yield from self.solve(second, ev.subst, depth + 1, interactive,
                                      (f"{kind}.1", path))

    def backchain(self, focus: Focus, s: Substitution, depth: int,
                  interactive: bool, path) -> Iterator[_Event]:
        """Decompose one focused clause against an atomic goal."""
        self._step("backchain", lambda: pretty(focus.clause.head))
        s2 = unify(focus.clause.head, focus.goal_atom, s)
        if s2 is FAIL:
            return
        if focus.clause.body is None:
            yield AnswerEvent(s2)
        else:
            yield from self.solve(focus.clause.body, s2, depth + 1, interactive, path)


def _functor(t) -> str:
    return t.name if hasattr(t, "name") else t.functor


def _path_tuple(path) -> tuple[str, ...]:
    out = []
    while path is not None:
        out.append(path[0])
        path = path[1]
    return tuple(reversed(out))


def solve_prov(p: Program, g: Goal, s: Substitution = EMPTY,
               limits: Optional[Limits] = None, stats: Optional[StepStats] = None,
               trace: Optional[Callable[[str], None]] = None) -> Iterator[Substitution]:
    """Lazily enumerate answer substitutions, classical semantics.

    Never asks anything. Raises :class:`LimitReached` if a limit fires
    (``run_query`` converts that into an Indeterminate outcome).
    """
    search = _Search(p, limits or Limits(), stats if stats is not None else StepStats(), trace)
    for ev in search.solve(g, s, 0, False, None):
        assert isinstance(ev, AnswerEvent)  # classical search cannot ask
        yield ev.subst


def solve_prove(p: Program, g: Goal, s: Substitution = EMPTY,
                oracle: Optional[ChoiceOracle] = None,
                limits: Optional[Limits] = None, stats: Optional[StepStats] = None,
                trace: Optional[Callable[[str], None]] = None) -> Iterator[Substitution]:
    """Lazily enumerate answers, interactive semantics, choices answered by
    ``oracle`` (default: an empty script, so any `&` reached raises
    :class:`ScriptExhausted`)."""
    oracle = oracle if oracle is not None else ScriptedOracle(())
    search = _Search(p, limits or Limits(), stats if stats is not None else StepStats(), trace)
    gen = search.solve(g, s, 0, True, None)
    reply: Optional[int] = None
    while True:
        try:
            ev = gen.send(reply)
        except StopIteration:
            return
        if isinstance(ev, ChoiceEvent):
            idx = oracle.choose(ev.cp)
            if idx not in (0, 1):
                raise ValueError(f"choice index must be 0 or 1, got {idx!r}")
            reply = idx
        else:
            reply = None
            yield ev.subst


def backchain(focus: Focus, p: Program, s: Substitution = EMPTY,
              limits: Optional[Limits] = None,
              stats: Optional[StepStats] = None) -> Iterator[Substitution]:
    """Decompose a focused clause against an atomic goal (classical mode).

    The focused clause must already be renamed apart.
    """
    search = _Search(p, limits or Limits(), stats if stats is not None else StepStats())
    for ev in search.backchain(focus, s, 0, False, None):
        assert isinstance(ev, AnswerEvent)
        yield ev.subst


def search_events(p: Program, g: Goal, s: Substitution = EMPTY, interactive: bool = True,
                  limits: Optional[Limits] = None, stats: Optional[StepStats] = None,
                  trace: Optional[Callable[[str], None]] = None) -> Iterator[_Event]:
    """The raw event stream (for drivers that park on choices, e.g. sessions).

    Reply to a ChoiceEvent with ``gen.send(index)``; advance past an
    AnswerEvent with ``next(gen)``.
    """
    search = _Search(p, limits or Limits(), stats if stats is not None else StepStats(), trace)
    return search.solve(g, s, 0, interactive, None)


# -- outcomes ----------------------------------------------------------------


@dataclass(frozen=True)
class Answer:
    """One solution: the substitution restricted to the query's variables,
    and (name, value) pairs in query source order for reporting."""

    subst: Substitution
    bindings: tuple[tuple[str, Term], ...]


@dataclass(frozen=True)
class Success:
    answer: Substitution  # first solution, restricted to query variables
    bindings: tuple[tuple[str, Term], ...]
    answers: tuple[Answer, ...]  # all collected solutions (>= 1)
    stats: StepStats


@dataclass(frozen=True)
class Failure:
    stats: StepStats


@dataclass(frozen=True)
class Indeterminate:
    reason: str  # which limit fired: "steps" | "depth"
    stats: StepStats


Outcome = Union[Success, Failure, Indeterminate]


def restrict_answer(s: Substitution, answer_vars: tuple[tuple[str, Var], ...]) -> Answer:
    resolved = {v: apply(s, v) for _, v in answer_vars}
    subst = Substitution({v: t for v, t in resolved.items() if t != v})
    bindings = tuple((name, resolved[v]) for name, v in answer_vars)
    return Answer(subst, bindings)


def run_query(p: Program, g: Goal, semantics: Semantics = "prove",
              oracle: Optional[ChoiceOracle] = None, limits: Optional[Limits] = None,
              all_answers: bool = False,
              trace: Optional[Callable[[str], None]] = None) -> Outcome:
    """Close the query's free variables, run the search, package the outcome.

    Collects the first answer unless ``all_answers``. Oracle errors (e.g. a
    scripted oracle running dry) propagate to the caller.
    """
    if semantics not in ("prov", "prove"):
        raise ValueError(f"semantics must be 'prov' or 'prove', got {semantics!r}")
    stats = StepStats()
    cq = close_query(g)
    if semantics == "prov":
        stream = solve_prov(p, cq.goal, EMPTY, limits, stats, trace)
    else:
        stream = solve_prove(p, cq.goal, EMPTY, oracle, limits, stats, trace)
    answers: list[Answer] = []
    try:
        for s in stream:
            answers.append(restrict_answer(s, cq.answer_vars))
            if not all_answers:
                break
    except LimitReached as limit:
        if not answers:
            return Indeterminate(limit.kind, stats)
        # the limit fired while hunting for further answers; report the ones
        # already in hand
    if answers:
        return Success(answers[0].subst, answers[0].bindings, tuple(answers), stats)
    return Failure(stats)


# -- exhaustive choice-script exploration (test support) ---------------------


@dataclass(frozen=True)
class ScriptOutcome:
    script: tuple[int, ...]
    outcome: Outcome


@dataclass(frozen=True)
class Exploration:
    outcomes: tuple[ScriptOutcome, ...]
    capped: bool  # the script tree was cut off at max_scripts

    @property
    def all_succeed(self) -> bool:
        return all(isinstance(o.outcome, Success) for o in self.outcomes)

    @property
    def any_indeterminate(self) -> bool:
        return any(isinstance(o.outcome, Indeterminate) for o in self.outcomes)


def explore_choice_scripts(p: Program, g: Goal, limits: Optional[Limits] = None,
                           max_scripts: int = 256,
                           max_total_steps: int = 300_000) -> Exploration:
    """Run the interactive search under every complete choice script.

    Scripts form a prefix tree: a run that exhausts its script spawns the two
    one-longer extensions. Exploration is cut off (``capped``) past
    ``max_scripts`` completed scripts or ``max_total_steps`` summed engine
    steps, so one pathological case cannot eat a whole corpus budget.
    """
    limits = limits or Limits()
    pending: list[tuple[int, ...]] = [()]
    done: list[ScriptOutcome] = []
    capped = False
    total_steps = 0
    while pending:
        if len(done) >= max_scripts or total_steps > max_total_steps:
            capped = True
            break
        script = pending.pop()
        stats = StepStats()
        cq = close_query(g)
        outcome: Optional[Outcome] = None
        try:
            stream = solve_prove(p, cq.goal, EMPTY, ScriptedOracle(script), limits, stats)
            for s in stream:
                answer = restrict_answer(s, cq.answer_vars)
                outcome = Success(answer.subst, answer.bindings, (answer,), stats)
                break
            else:
                outcome = Failure(stats)
        except ScriptExhausted:
            pending.append(script + (1,))
            pending.append(script + (0,))
        except LimitReached as limit:
            outcome = Indeterminate(limit.kind, stats)
        total_steps += stats.resolution_steps
        if outcome is not None:
            done.append(ScriptOutcome(script, outcome))
    return Exploration(tuple(done), capped)
