"""Resumable interactive executions.

A session wraps one query's search so a controller (REPL, wire service, test)
can step it: ``advance`` runs until the search either needs a `&` decision
(state ``awaiting_choice``), finds an answer, fails, or hits a limit;
``resolve_choice`` feeds the decision back and resumes the very same search
frontier. The engine's event generator *is* the suspended computation, so
nothing is re-run on resume. This is the "defers to the controller" oracle:
instead of calling back synchronously, the request is parked and surfaced.

Sessions default to first-answer mode; ``more`` re-enters the search after a
success (the one sanctioned exit from the done state).

Every event is appended to ``transcript``; replaying the transcript's choices
through a scripted oracle reproduces the same outcome, which ``replay``
checks by construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Union

from . import engine
from .ast import Goal, Program, Term, close_query
from .engine import (
    Answer,
    ChoiceEvent,
    ChoicePoint,
    LimitReached,
    Limits,
    ScriptedOracle,
    Semantics,
    StepStats,
    restrict_answer,
    search_events,
    solve_prov,
    solve_prove,
)
from .unify import EMPTY


class SessionError(Exception):
    pass


class InvalidState(SessionError):
    pass


class UnknownRequest(SessionError):
    pass


@dataclass(frozen=True)
class ChoiceRequested:
    request_id: str
    cp: ChoicePoint


@dataclass(frozen=True)
class ChoiceMade:
    request_id: str
    index: int


@dataclass(frozen=True)
class Solved:
    bindings: tuple[tuple[str, Term], ...]


@dataclass(frozen=True)
class Failed:
    pass


@dataclass(frozen=True)
class Indeterminate:
    reason: str


@dataclass(frozen=True)
class Log:
    text: str


SessionEvent = Union[ChoiceRequested, ChoiceMade, Solved, Failed, Indeterminate, Log]

_session_ids = itertools.count(1)


class Session:
    """One query's suspended search. Single consumer; do not share calls."""

    def __init__(self, program: Program, goal: Goal, semantics: Semantics = "prove",
                 limits: Optional[Limits] = None, trace=None):
        if semantics not in ("prov", "prove"):
            raise ValueError(f"semantics must be 'prov' or 'prove', got {semantics!r}")
        self.id = f"s{next(_session_ids)}"
        self.program = program
        self.goal = goal
        self.semantics = semantics
        self.limits = limits or Limits()
        self.state = "created"  # created | running | awaiting_choice | done
        self.outcome: Optional[engine.Outcome] = None
        self.transcript: list[SessionEvent] = []
        self.stats = StepStats()
        self._closed = close_query(goal)
        self._events = search_events(program, self._closed.goal, EMPTY,
                                     interactive=(semantics == "prove"),
                                     limits=self.limits, stats=self.stats, trace=trace)
        self._request_ids = itertools.count(1)
        self._pending: Optional[ChoiceRequested] = None
        self._answers: list[Answer] = []

    # -- controller verbs ---------------------------------------------------

    def advance(self) -> SessionEvent:
        """Run until the next choice request, answer, failure or limit."""
        if self.state not in ("created", "running"):
            raise InvalidState(f"advance is not allowed in state {self.state!r}")
        return self._pump(None)

    def resolve_choice(self, request_id: str, index: int) -> SessionEvent:
        if self.state != "awaiting_choice":
            raise InvalidState(f"no choice is pending in state {self.state!r}")
        assert self._pending is not None
        if request_id != self._pending.request_id:
            raise UnknownRequest(f"unknown request id {request_id!r}")
        if index not in (0, 1):
            raise ValueError(f"choice index must be 0 or 1, got {index!r}")
        self._record(ChoiceMade(request_id, index))
        self._pending = None
        return self._pump(index)

    def more(self) -> SessionEvent:
        """After a success, re-enter the search for the next answer."""
        if self.state != "done" or not isinstance(self.outcome, engine.Success):
            raise InvalidState("more is only allowed after a successful outcome")
        return self._pump(None)

    # -- engine pump ----------------------------------------------------------

    def _pump(self, reply: Optional[int]) -> SessionEvent:
        self.state = "running"
        try:
            ev = self._events.send(reply)
        except StopIteration:
            return self._finish_exhausted()
        except LimitReached as limit:
            self.state = "done"
            self.outcome = engine.Indeterminate(limit.kind, self.stats)
            return self._record(Indeterminate(limit.kind))
        if isinstance(ev, ChoiceEvent):
            request = ChoiceRequested(f"r{next(self._request_ids)}", ev.cp)
            self._pending = request
            self.state = "awaiting_choice"
            return self._record(request)
        answer = restrict_answer(ev.subst, self._closed.answer_vars)
        self._answers.append(answer)
        self.state = "done"
        self.outcome = engine.Success(answer.subst, answer.bindings,
                                      tuple(self._answers), self.stats)
        return self._record(Solved(answer.bindings))

    def _finish_exhausted(self) -> SessionEvent:
        self.state = "done"
        if not self._answers:
            self.outcome = engine.Failure(self.stats)
        # else: keep the Success already reported; this is just "no more"
        return self._record(Failed())

    def _record(self, event: SessionEvent) -> SessionEvent:
        self.transcript.append(event)
        return event

    # -- audits ---------------------------------------------------------------

    def choice_script(self) -> tuple[int, ...]:
        return tuple(e.index for e in self.transcript if isinstance(e, ChoiceMade))

    def replay(self) -> engine.Outcome:
        """Re-run the finished session's search from its recorded choices."""
        if self.state != "done":
            raise InvalidState("replay needs a finished session")
        stats = StepStats()
        closed = close_query(self.goal)
        if self.semantics == "prov":
            stream = solve_prov(self.program, closed.goal, EMPTY, self.limits, stats)
        else:
            stream = solve_prove(self.program, closed.goal, EMPTY,
                                 ScriptedOracle(self.choice_script()), self.limits, stats)
        target = len(self._answers)
        answers: list[Answer] = []
        try:
            for s in stream:
                answers.append(restrict_answer(s, closed.answer_vars))
                if target and len(answers) >= target:
                    break
        except LimitReached as limit:
            if not answers:
                return engine.Indeterminate(limit.kind, stats)
        if answers:
            return engine.Success(answers[0].subst, answers[0].bindings, tuple(answers), stats)
        return engine.Failure(stats)


def start(program: Program, goal: Goal, semantics: Semantics = "prove",
          limits: Optional[Limits] = None, trace=None) -> Session:
    """Create a session; no search work happens until ``advance``."""
    return Session(program, goal, semantics, limits, trace)


def outcomes_equal(a: engine.Outcome, b: engine.Outcome) -> bool:
    """Outcome equality modulo freshly minted variable identities."""
    from .ast import alpha_eq

    if type(a) is not type(b):
        return False
    if isinstance(a, engine.Failure):
        return True
    if isinstance(a, engine.Indeterminate):
        return a.reason == b.reason
    assert isinstance(a, engine.Success) and isinstance(b, engine.Success)
    if len(a.answers) != len(b.answers):
        return False
    for x, y in zip(a.answers, b.answers):
        if len(x.bindings) != len(y.bindings):
            return False
        for (n1, t1), (n2, t2) in zip(x.bindings, y.bindings):
            if n1 != n2 or not alpha_eq(t1, t2):
                return False
    return True
