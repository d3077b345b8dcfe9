"""Concrete syntax: lexer, parser and a round-tripping pretty-printer.

Grammar (programs are UTF-8 ``.lp`` files, ``%`` comments to end of line)::

    program  := clause* EOF
    clause   := atom (":-" goal)? "."
    goal     := plus ("&" goal)?          -- & loosest, right-assoc
    plus     := tensor (";" plus)?        -- ; next
    tensor   := primary ("," tensor)?     -- , tightest
    primary  := "exists" VAR "." plus | "(" goal ")" | atom
    atom     := functor ("(" term ("," term)* ")")?
    term     := VAR | functor ("(" term ("," term)* ")")?
    functor  := NAME | QUOTED

Lowercase- or digit-initial words are constants/functors, uppercase- or
``_``-initial words are variables (a bare ``_`` is anonymous: fresh at every
occurrence), and single-quoted tokens such as ``'9:40'`` are constants. An
``exists`` binder scopes rightwards over ``,`` and ``;`` but stops at ``&`` or
a closing paren; parenthesize to widen or narrow it. ``exists`` is reserved.
"""

from __future__ import annotations

import re
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
    clause as close_clause,
    free_vars_ordered,
    fresh_var,
)


@dataclass(frozen=True)
class SourceSpan:
    """Half-open [start, end) in code points, plus 0-based line/column."""

    start: int
    end: int
    line: int
    column: int


class ParseError(Exception):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(message)
        self.message = message
        self.span = span

    def __str__(self) -> str:
        return f"{self.span.line + 1}:{self.span.column + 1}: {self.message}"


_PUNCT = {":-": "TURNSTILE", "(": "LPAREN", ")": "RPAREN", ",": "COMMA",
          ";": "SEMI", "&": "AMP", ".": "DOT"}

_NAME_RE = re.compile(r"[a-z0-9][A-Za-z0-9_]*")
_VAR_RE = re.compile(r"[A-Z_][A-Za-z0-9_]*")


@dataclass(frozen=True)
class _Token:
    kind: str  # NAME | VAR | QUOTED | EXISTS | one of _PUNCT values | EOF
    text: str
    span: SourceSpan


def _lex(text: str) -> list[_Token]:
    toks: list[_Token] = []
    i, line, col = 0, 0, 0
    n = len(text)

    def span(start: int, end: int, sline: int, scol: int) -> SourceSpan:
        return SourceSpan(start, end, sline, scol)

    while i < n:
        c = text[i]
        if c == "\n":
            i += 1
            line += 1
            col = 0
            continue
        if c.isspace():
            i += 1
            col += 1
            continue
        if c == "%":
            while i < n and text[i] != "\n":
                i += 1
                col += 1
            continue
        start, sline, scol = i, line, col
        if c == ":" and text[i : i + 2] == ":-":
            toks.append(_Token("TURNSTILE", ":-", span(start, i + 2, sline, scol)))
            i += 2
            col += 2
            continue
        if c in "(),;&.":
            toks.append(_Token(_PUNCT[c], c, span(start, i + 1, sline, scol)))
            i += 1
            col += 1
            continue
        if c == "'":
            j = i + 1
            while j < n and text[j] not in "'\n":
                j += 1
            if j >= n or text[j] != "'":
                raise ParseError("unterminated quoted constant", span(start, min(j, n), sline, scol))
            toks.append(_Token("QUOTED", text[i + 1 : j], span(start, j + 1, sline, scol)))
            col += j + 1 - i
            i = j + 1
            continue
        m = _NAME_RE.match(text, i)
        if m:
            word = m.group(0)
            kind = "EXISTS" if word == "exists" else "NAME"
            toks.append(_Token(kind, word, span(start, m.end(), sline, scol)))
            col += m.end() - i
            i = m.end()
            continue
        m = _VAR_RE.match(text, i)
        if m:
            toks.append(_Token("VAR", m.group(0), span(start, m.end(), sline, scol)))
            col += m.end() - i
            i = m.end()
            continue
        raise ParseError(f"unexpected character {c!r}", span(start, i + 1, sline, scol))
    toks.append(_Token("EOF", "", SourceSpan(n, n, line, col)))
    return toks


class _Parser:
    """Recursive descent over the token list.

    ``scope`` maps a source variable name to its current Var; ``exists``
    binders shadow an outer same-named variable for the extent of their body.
    """

    def __init__(self, tokens: list[_Token]):
        self.toks = tokens
        self.pos = 0
        self.scope: dict[str, Var] = {}

    def peek(self) -> _Token:
        return self.toks[self.pos]

    def take(self) -> _Token:
        t = self.toks[self.pos]
        self.pos += 1
        return t

    def expect(self, kind: str, what: str) -> _Token:
        t = self.peek()
        if t.kind != kind:
            raise ParseError(f"expected {what}, found {t.text or 'end of input'!r}", t.span)
        return self.take()

    def var_for(self, name: str) -> Var:
        if name == "_":
            return fresh_var("_")
        if name not in self.scope:
            self.scope[name] = fresh_var(name)
        return self.scope[name]

    # -- goals ------------------------------------------------------------

    def goal(self) -> Goal:
        left = self.plus()
        if self.peek().kind == "AMP":
            self.take()
            return With(left, self.goal())
        return left

    def plus(self) -> Goal:
        left = self.tensor()
        if self.peek().kind == "SEMI":
            self.take()
            return Plus(left, self.plus())
        return left

    def tensor(self) -> Goal:
        left = self.primary()
        if self.peek().kind == "COMMA":
            self.take()
            return Tensor(left, self.tensor())
        return left

    def primary(self) -> Goal:
        t = self.peek()
        if t.kind == "EXISTS":
            self.take()
            name_tok = self.expect("VAR", "a variable after 'exists'")
            self.expect("DOT", "'.' after the exists binder")
            binder = fresh_var(name_tok.text)
            shadowed = self.scope.get(name_tok.text)
            self.scope[name_tok.text] = binder
            body = self.plus()
            if shadowed is None:
                self.scope.pop(name_tok.text, None)
            else:
                self.scope[name_tok.text] = shadowed
            return Exists(binder, body)
        if t.kind == "LPAREN":
            self.take()
            g = self.goal()
            self.expect("RPAREN", "')'")
            return g
        if t.kind in ("NAME", "QUOTED"):
            return Atom(self.atom_term())
        raise ParseError(f"expected a goal, found {t.text or 'end of input'!r}", t.span)

    # -- terms ------------------------------------------------------------

    def atom_term(self) -> AtomTerm:
        t = self.take()  # NAME or QUOTED, checked by callers
        if self.peek().kind == "LPAREN":
            self.take()
            args = [self.term()]
            while self.peek().kind == "COMMA":
                self.take()
                args.append(self.term())
            self.expect("RPAREN", "')'")
            return Compound(t.text, tuple(args))
        return Const(t.text)

    def term(self) -> Term:
        t = self.peek()
        if t.kind == "VAR":
            self.take()
            return self.var_for(t.text)
        if t.kind in ("NAME", "QUOTED"):
            return self.atom_term()
        raise ParseError(f"expected a term, found {t.text or 'end of input'!r}", t.span)

    # -- clauses ----------------------------------------------------------

    def clause(self) -> Clause:
        self.scope = {}
        t = self.peek()
        if t.kind not in ("NAME", "QUOTED"):
            raise ParseError(f"expected a clause head, found {t.text or 'end of input'!r}", t.span)
        head = self.atom_term()
        body: Optional[Goal] = None
        if self.peek().kind == "TURNSTILE":
            self.take()
            body = self.goal()
        self.expect("DOT", "'.' at the end of the clause")
        return close_clause(head, body)

    def program(self) -> Program:
        clauses = []
        while self.peek().kind != "EOF":
            clauses.append(self.clause())
        return Program(tuple(clauses))


def parse_program(text: str) -> Program:
    """Parse a program; clauses keep source order, variables are collected
    into each clause's universal prefix."""
    return _Parser(_lex(text)).program()


def parse_goal(text: str) -> Goal:
    """Parse one goal. Free variables stay free (close_query handles them);
    exists binders come out with fresh, pairwise-distinct identities."""
    p = _Parser(_lex(text))
    g = p.goal()
    tok = p.peek()
    if tok.kind == "DOT":  # tolerate a REPL-style trailing period
        p.take()
        tok = p.peek()
    if tok.kind != "EOF":
        raise ParseError(f"unexpected {tok.text!r} after the goal", tok.span)
    return g


# -- pretty-printing -------------------------------------------------------

_BARE_CONST_RE = re.compile(r"(?!exists$)[a-z0-9][A-Za-z0-9_]*$")


def _functor_str(name: str) -> str:
    return name if _BARE_CONST_RE.match(name) else f"'{name}'"


def _term_str(t: Term, names: dict[Var, str]) -> str:
    if isinstance(t, Var):
        return names.get(t, t.name)
    if isinstance(t, Const):
        return _functor_str(t.name)
    args = ", ".join(_term_str(a, names) for a in t.args)
    return f"{_functor_str(t.functor)}({args})"


def _goal_str(g: Goal, names: dict[Var, str], ctx) -> str:
    """ctx is None (top level), "exists" (directly under a binder),
    ("chain", kind) (right operand of `kind`) or "operand"."""
    if isinstance(g, Atom):
        return _term_str(g.term, names)
    if isinstance(g, Exists):
        name = names.get(g.var, g.var.name)
        taken = {names.get(v, v.name) for v in free_vars_ordered(g.body) if v != g.var}
        if name == "_" or name in taken:
            name = f"{g.var.name}_{g.var.id}"
        inner = dict(names)
        inner[g.var] = name
        s = f"exists {name}. {_goal_str(g.body, inner, 'exists')}"
        return s if ctx in (None, "exists") else f"({s})"
    kind = type(g)
    op = {Tensor: " , ", Plus: " ; ", With: " & "}[kind]
    s = f"{_goal_str(g.left, names, 'operand')}{op}{_goal_str(g.right, names, ('chain', kind))}"
    if ctx is None or ctx == ("chain", kind):
        return s  # top level, or a flat right-associative chain
    if ctx == "exists" and kind is not With:
        return s  # a binder's body spans , and ; but stops at &
    return f"({s})"


def pretty(x: Term | Goal | Clause) -> str:
    """Render with minimal-but-unambiguous parentheses; output re-parses to
    an alpha-equivalent structure."""
    if isinstance(x, (Var, Const, Compound)):
        return _term_str(x, {})
    if isinstance(x, Clause):
        head = _term_str(x.head, {})
        if x.body is None:
            return f"{head}."
        return f"{head} :- {_goal_str(x.body, {}, None)}."
    return _goal_str(x, {}, None)
