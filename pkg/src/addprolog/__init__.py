"""Horn-clause logic programming with additive goals.

`,` joins goals that must both succeed under shared bindings, `;` lets the
machine pick a branch (with backtracking), and `&` lets the *user* pick one:
proof search suspends, asks for an index, pursues the chosen branch
interactively and silently checks the unchosen one. Two search procedures are
provided: the classical one (``solve``/``run_query`` with semantics="prov")
which never asks, and the interactive one (semantics="prove") which asks once
per `&` reached.
"""

from .ast import (
    Atom,
    Clause,
    Compound,
    Const,
    Exists,
    Plus,
    Program,
    Tensor,
    Term,
    Var,
    With,
    alpha_eq,
    clause,
    close_query,
    free_vars,
    fresh_var,
)
from .engine import (
    ChoicePoint,
    Failure,
    Indeterminate,
    Limits,
    Outcome,
    ScriptExhausted,
    ScriptedOracle,
    StepStats,
    Success,
    run_query,
    solve_prov,
    solve_prove,
)
from .parser import ParseError, SourceSpan, parse_goal, parse_program, pretty
from .session import Session, SessionError, start
from .unify import FAIL, Substitution, apply, rename_apart, unify

__all__ = [
    "Atom",
    "ChoicePoint",
    "Clause",
    "Compound",
    "Const",
    "Exists",
    "FAIL",
    "Failure",
    "Indeterminate",
    "Limits",
    "Outcome",
    "ParseError",
    "Plus",
    "Program",
    "ScriptExhausted",
    "ScriptedOracle",
    "Session",
    "SessionError",
    "SourceSpan",
    "StepStats",
    "Substitution",
    "Success",
    "Tensor",
    "Term",
    "Var",
    "With",
    "alpha_eq",
    "apply",
    "clause",
    "close_query",
    "free_vars",
    "fresh_var",
    "parse_goal",
    "parse_program",
    "pretty",
    "rename_apart",
    "run_query",
    "solve_prov",
    "solve_prove",
    "start",
    "unify",
]
