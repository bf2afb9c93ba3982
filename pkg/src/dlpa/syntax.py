"""Abstract syntax, parser and printer for DL-PA.

The surface language has the usual sugar (~, &, |, ->, <prog>, true); the
parser expands all of it so that downstream engines only ever see the core
connectives: atoms, `false`, and the box [prog]body, with programs built
from +p, -p, sequence, choice, star and tests.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union


class ParseError(ValueError):
    """Syntax error; carries the offending position in the input text."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class UnknownVariable(ValueError):
    """A variable outside the explicitly given universe was mentioned."""


# ---------------------------------------------------------------------------
# Core AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Assign:
    var: str
    value: bool


@dataclass(frozen=True)
class Seq:
    left: "Program"
    right: "Program"


@dataclass(frozen=True)
class Choice:
    left: "Program"
    right: "Program"


@dataclass(frozen=True)
class Star:
    body: "Program"


@dataclass(frozen=True)
class Test:
    cond: "Formula"


@dataclass(frozen=True)
class Atom:
    var: str


@dataclass(frozen=True)
class Falsum:
    pass


@dataclass(frozen=True)
class Box:
    prog: "Program"
    body: "Formula"


Program = Union[Assign, Seq, Choice, Star, Test]
Formula = Union[Atom, Falsum, Box]

FALSE = Falsum()


# Sugar, expanded into the core on construction.

def neg(f: Formula) -> Formula:
    return Box(Test(f), FALSE)


def implies(a: Formula, b: Formula) -> Formula:
    return Box(Test(a), b)


def or_(a: Formula, b: Formula) -> Formula:
    return implies(neg(a), b)


def and_(a: Formula, b: Formula) -> Formula:
    return neg(implies(a, neg(b)))


def dia(prog: Program, f: Formula) -> Formula:
    return neg(Box(prog, neg(f)))


def true() -> Formula:
    return neg(FALSE)


def conj(formulas: Sequence[Formula]) -> Formula:
    """Right-nested conjunction; `true` when empty."""
    if not formulas:
        return true()
    out = formulas[-1]
    for f in reversed(formulas[:-1]):
        out = and_(f, out)
    return out


def big_choice(progs: Sequence[Program]) -> Program:
    """Left-nested choice; the empty choice is the empty-relation test."""
    if not progs:
        return Test(FALSE)
    out = progs[0]
    for p in progs[1:]:
        out = Choice(out, p)
    return out


# ---------------------------------------------------------------------------
# Universe and valuations
# ---------------------------------------------------------------------------

VAR_RE = re.compile(r"[a-zA-Z][a-zA-Z0-9_]*")

# `u` is the choice operator, `false`/`true` are literals.
RESERVED = {"u", "false", "true"}


class Universe:
    """Ordered, finite enumeration of the active propositional variables."""

    def __init__(self, names: Sequence[str]):
        seen = {}
        for n in names:
            if not VAR_RE.fullmatch(n) or n in RESERVED:
                raise ValueError(f"invalid variable name: {n!r}")
            if n not in seen:
                seen[n] = len(seen)
        self.names: tuple = tuple(seen)
        self._index = seen

    @property
    def k(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariable(f"variable {name!r} not in universe") from None

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def __eq__(self, other) -> bool:
        return isinstance(other, Universe) and self.names == other.names

    def __repr__(self) -> str:
        return f"Universe({list(self.names)!r})"

    def valuation(self, true_vars: Sequence[str]) -> int:
        """Bitmask for the valuation making exactly `true_vars` true."""
        bits = 0
        for n in true_vars:
            bits |= 1 << self.index(n)
        return bits

    def names_of(self, bits: int) -> list:
        return [n for i, n in enumerate(self.names) if bits >> i & 1]


def node_len(node: Union[Program, Formula]) -> int:
    """AST node count (the size measure used by the depth bounds)."""
    if isinstance(node, (Assign, Atom, Falsum)):
        return 1
    if isinstance(node, (Seq, Choice)):
        return 1 + node_len(node.left) + node_len(node.right)
    if isinstance(node, (Star, Test)):
        return 1 + node_len(node.body if isinstance(node, Star) else node.cond)
    if isinstance(node, Box):
        return 1 + node_len(node.prog) + node_len(node.body)
    raise TypeError(f"not an AST node: {node!r}")


def vars_in_order(node: Union[Program, Formula]) -> list:
    """Variables in pre-order first-occurrence order."""
    out, seen = [], set()

    def walk(n):
        if isinstance(n, (Assign, Atom)):
            if n.var not in seen:
                seen.add(n.var)
                out.append(n.var)
        elif isinstance(n, (Seq, Choice)):
            walk(n.left)
            walk(n.right)
        elif isinstance(n, Star):
            walk(n.body)
        elif isinstance(n, Test):
            walk(n.cond)
        elif isinstance(n, Box):
            walk(n.prog)
            walk(n.body)

    walk(node)
    return out


def free_vars(node: Union[Program, Formula]) -> set:
    return set(vars_in_order(node))


def universe_of(node: Union[Program, Formula], extra: Sequence[str] = ()) -> Universe:
    return Universe(list(vars_in_order(node)) + list(extra))


# ---------------------------------------------------------------------------
# Tokenizer
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<ident>[a-zA-Z][a-zA-Z0-9_]*)|(?P<punct>[][()<>~&|+\-;*?]))"
)


@dataclass(frozen=True)
class _Tok:
    kind: str  # 'ident', 'punct', 'arrow', 'end'
    text: str
    pos: int


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise ParseError(f"unexpected character {text[pos:].lstrip()[0]!r}",
                             len(text) - len(text[pos:].lstrip()))
        if m.lastgroup == "arrow":
            toks.append(_Tok("arrow", "->", m.start("arrow")))
        elif m.lastgroup == "ident":
            toks.append(_Tok("ident", m.group("ident"), m.start("ident")))
        else:
            toks.append(_Tok("punct", m.group("punct"), m.start("punct")))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class Parser:
    """Recursive-descent parser for the DL-PA surface grammar.

    Precedence, tightest first: postfix `*` `?`; the unary prefixes
    `~ [..] <..>`; `&`; `|`; `->` (right-assoc). In programs, `;` binds
    tighter than `u`. Sugar constructors are factored into mk_* methods so
    extended languages can override them.
    """

    def __init__(self, text: str, universe: Optional[Universe] = None):
        self.toks = _tokenize(text)
        self.i = 0
        self.universe = universe

    # -- token helpers

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> None:
        t = self.next()
        if t.text != text:
            raise ParseError(f"expected {text!r}, found {t.text or 'end of input'!r}", t.pos)

    def at(self, text: str) -> bool:
        return self.peek().text == text

    def expect_end(self) -> None:
        t = self.peek()
        if t.kind != "end":
            raise ParseError(f"trailing input {t.text!r}", t.pos)

    def check_var(self, name: str, pos: int) -> str:
        if name in RESERVED:
            raise ParseError(f"{name!r} is reserved", pos)
        if self.universe is not None and name not in self.universe:
            raise UnknownVariable(f"variable {name!r} not in universe")
        return name

    # -- sugar factories (overridden by richer languages)

    def mk_atom(self, name):
        return Atom(name)

    def mk_false(self):
        return FALSE

    def mk_true(self):
        return true()

    def mk_not(self, f):
        return neg(f)

    def mk_and(self, a, b):
        return and_(a, b)

    def mk_or(self, a, b):
        return or_(a, b)

    def mk_implies(self, a, b):
        return implies(a, b)

    def mk_box(self, prog, f):
        return Box(prog, f)

    def mk_dia(self, prog, f):
        return dia(prog, f)

    def mk_test(self, f):
        return Test(f)

    # -- formulas

    def formula(self):
        lhs = self.formula_or()
        if self.at("->"):
            self.next()
            return self.mk_implies(lhs, self.formula())  # right-assoc
        return lhs

    def formula_or(self):
        f = self.formula_and()
        while self.at("|"):
            self.next()
            f = self.mk_or(f, self.formula_and())
        return f

    def formula_and(self):
        f = self.formula_unary()
        while self.at("&"):
            self.next()
            f = self.mk_and(f, self.formula_unary())
        return f

    def formula_unary(self):
        t = self.peek()
        if t.text == "~":
            self.next()
            return self.mk_not(self.formula_unary())
        if t.text == "[":
            self.next()
            prog = self.program()
            self.expect("]")
            return self.mk_box(prog, self.formula_unary())
        if t.text == "<":
            self.next()
            prog = self.program()
            self.expect(">")
            return self.mk_dia(prog, self.formula_unary())
        return self.formula_primary()

    def formula_primary(self):
        t = self.next()
        if t.text == "false":
            return self.mk_false()
        if t.text == "true":
            return self.mk_true()
        if t.kind == "ident" and t.text != "u":
            return self.mk_atom(self.check_var(t.text, t.pos))
        if t.text == "(":
            f = self.formula()
            self.expect(")")
            return f
        raise ParseError(f"expected a formula, found {t.text or 'end of input'!r}", t.pos)

    # -- programs

    def program(self):
        p = self.program_seq()
        while self.at("u"):
            self.next()
            p = Choice(p, self.program_seq())
        return p

    def program_seq(self):
        p = self.program_postfix()
        while self.at(";"):
            self.next()
            p = Seq(p, self.program_postfix())
        return p

    def program_postfix(self):
        p = self.program_atom()
        while self.at("*"):
            self.next()
            p = Star(p)
        return p

    def program_atom(self):
        t = self.peek()
        if t.text in ("+", "-"):
            self.next()
            name = self.next()
            if name.kind != "ident":
                raise ParseError("expected a variable after assignment sign", name.pos)
            return Assign(self.check_var(name.text, name.pos), t.text == "+")
        if t.text == "(":
            # Could be a parenthesized program or a parenthesized test
            # formula; try the program reading first and backtrack.
            mark = self.i
            try:
                self.next()
                p = self.program()
                self.expect(")")
                return p
            except ParseError:
                self.i = mark
        # test: a unary-level formula followed by `?`
        f = self.formula_unary()
        self.expect("?")
        return self.mk_test(f)


def parse_formula(text: str, universe: Optional[Universe] = None) -> Formula:
    p = Parser(text, universe)
    f = p.formula()
    p.expect_end()
    return f


def parse_program(text: str, universe: Optional[Universe] = None) -> Program:
    p = Parser(text, universe)
    prog = p.program()
    p.expect_end()
    return prog


# ---------------------------------------------------------------------------
# Printer
# ---------------------------------------------------------------------------

_CHOICE, _SEQ, _POSTFIX = 0, 1, 2


def _prog_level(p: Program) -> int:
    if isinstance(p, Choice):
        return _CHOICE
    if isinstance(p, Seq):
        return _SEQ
    return _POSTFIX


def _pp_prog(p: Program, min_level: int) -> str:
    lvl = _prog_level(p)
    if isinstance(p, Assign):
        s = ("+" if p.value else "-") + p.var
    elif isinstance(p, Seq):
        s = f"{_pp_prog(p.left, _SEQ)} ; {_pp_prog(p.right, _POSTFIX)}"
    elif isinstance(p, Choice):
        s = f"{_pp_prog(p.left, _CHOICE)} u {_pp_prog(p.right, _SEQ)}"
    elif isinstance(p, Star):
        s = f"({_pp_prog(p.body, _CHOICE)})*"
    elif isinstance(p, Test):
        s = f"{print_formula(p.cond)}?"
    else:
        raise TypeError(f"not a program: {p!r}")
    return f"({s})" if lvl < min_level else s


def print_program(p: Program) -> str:
    return _pp_prog(p, _CHOICE)


def print_formula(f: Formula) -> str:
    """Core-only rendering; satisfies parse_formula(print_formula(f)) == f."""
    if isinstance(f, Atom):
        return f.var
    if isinstance(f, Falsum):
        return "false"
    if isinstance(f, Box):
        return f"[{print_program(f.prog)}]{print_formula(f.body)}"
    raise TypeError(f"not a formula: {f!r}")
