"""Parsing and printing of ground answer set programs.

Concrete syntax is Prolog-style with ``not`` for negation as failure:

    rule    ::= head "." | head ":-" body "." | ":-" body "."
    body    ::= literal ("," literal)*
    literal ::= "not" atom | atom
    atom    ::= [a-z][a-zA-Z0-9_]*

``%`` starts a line comment. Whitespace is insignificant; a rule may span
lines and is terminated by ``.``. ``not`` is a reserved word and cannot be
used as an atom name. A headless rule is an integrity constraint and must
have a non-empty body.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


class ParseError(ValueError):
    """Syntax error with 1-based line/column of the offending token."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class EmptyConstraintError(ParseError):
    """A bare ':- .' constraint with no body literals."""


@dataclass(frozen=True, slots=True)
class Literal:
    """A body literal: an atom, possibly under negation as failure."""

    atom: str
    negated: bool = False

    def __str__(self) -> str:
        return f"not {self.atom}" if self.negated else self.atom


@dataclass(frozen=True, slots=True)
class Rule:
    """A fact (empty body), normal rule, or headless constraint (head None)."""

    head: str | None
    body: tuple[Literal, ...]
    source_index: int = 0

    @property
    def is_fact(self) -> bool:
        return self.head is not None and not self.body

    @property
    def is_constraint(self) -> bool:
        return self.head is None

    def __str__(self) -> str:
        body = ", ".join(str(lit) for lit in self.body)
        if self.head is None:
            return f":- {body}."
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {body}."


@dataclass(frozen=True)
class Program:
    """An ordered list of ground rules."""

    rules: tuple[Rule, ...]
    _atoms: frozenset[str] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        names: set[str] = set()
        for rule in self.rules:
            if rule.head is not None:
                names.add(rule.head)
            names.update(lit.atom for lit in rule.body)
        object.__setattr__(self, "_atoms", frozenset(names))

    @property
    def atoms(self) -> frozenset[str]:
        return self._atoms

    @property
    def facts(self) -> frozenset[str]:
        return frozenset(r.head for r in self.rules if r.is_fact)

    @property
    def constraints(self) -> tuple[Rule, ...]:
        return tuple(r for r in self.rules if r.is_constraint)

    def extended(self, extra_rules) -> Program:
        """A new program with rules appended, source indexes continuing."""
        base = len(self.rules)
        renumbered = tuple(
            Rule(r.head, r.body, base + i) for i, r in enumerate(extra_rules)
        )
        return Program(self.rules + renumbered)

    def __str__(self) -> str:
        return print_program(self)


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>%[^\n]*)
  | (?P<ident>[a-z][a-zA-Z0-9_]*)
  | (?P<implied>:-)
  | (?P<comma>,)
  | (?P<dot>\.)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True, slots=True)
class _Token:
    kind: str  # ident | not | implied | comma | dot | eof
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    line = 1
    line_start = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(
                f"unexpected character {text[pos]!r}", line, pos - line_start + 1
            )
        kind = m.lastgroup
        value = m.group()
        column = pos - line_start + 1
        if kind == "ident":
            tokens.append(_Token("not" if value == "not" else "ident", value, line, column))
        elif kind not in ("ws", "comment"):
            tokens.append(_Token(kind, value, line, column))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = m.start() + value.rindex("\n") + 1
        pos = m.end()
    tokens.append(_Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.index = 0

    def peek(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        tok = self.tokens[self.index]
        if tok.kind != "eof":
            self.index += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            found = repr(tok.text) if tok.kind != "eof" else "end of input"
            raise ParseError(f"expected {what}, found {found}", tok.line, tok.column)
        return self.advance()

    def parse_literal(self) -> Literal:
        tok = self.peek()
        if tok.kind == "not":
            self.advance()
            atom = self.expect("ident", "atom after 'not'")
            return Literal(atom.text, negated=True)
        if tok.kind == "ident":
            self.advance()
            return Literal(tok.text, negated=False)
        found = repr(tok.text) if tok.kind != "eof" else "end of input"
        raise ParseError(f"expected literal, found {found}", tok.line, tok.column)

    def parse_body(self) -> tuple[Literal, ...]:
        literals = [self.parse_literal()]
        while self.peek().kind == "comma":
            self.advance()
            literals.append(self.parse_literal())
        # duplicate (atom, negated) pairs are redundant conjuncts
        seen: set[Literal] = set()
        deduped = []
        for lit in literals:
            if lit not in seen:
                seen.add(lit)
                deduped.append(lit)
        return tuple(deduped)

    def parse_rule(self, source_index: int) -> Rule:
        tok = self.peek()
        if tok.kind == "implied":
            self.advance()
            if self.peek().kind == "dot":
                raise EmptyConstraintError(
                    "constraint must have a non-empty body", tok.line, tok.column
                )
            body = self.parse_body()
            self.expect("dot", "'.'")
            return Rule(None, body, source_index)
        head = self.expect("ident", "rule head or ':-'")
        tok = self.peek()
        if tok.kind == "dot":
            self.advance()
            return Rule(head.text, (), source_index)
        self.expect("implied", "':-' or '.'")
        body = self.parse_body()
        self.expect("dot", "'.'")
        return Rule(head.text, body, source_index)


def parse_program(text: str) -> Program:
    """Parse program text, returning rules in textual order.

    Raises ParseError (with line/column of the first offending token) on
    ill-formed input and EmptyConstraintError for a bare ':- .'.
    """
    parser = _Parser(_tokenize(text))
    rules = []
    while parser.peek().kind != "eof":
        rules.append(parser.parse_rule(len(rules)))
    return Program(tuple(rules))


def print_program(program: Program) -> str:
    """Canonical text form, one rule per line; reparses to an equal Program."""
    return "".join(f"{rule}\n" for rule in program.rules)
