"""Propositional formulas over -> & | false, with ~a as a -> false.

Text grammar, loosest first::

    imp   := disj ( "->" imp )?
    disj  := conj ( "|" conj )*
    conj  := unary ( "&" unary )*
    unary := "~" unary | atom
    atom  := NAME | "false" | "true" | "sa" | "kp" | "wem" | "(" imp ")"

Unicode connectives are accepted on input and never printed.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from typing import Dict, List, Tuple, Union

from .errors import ParseError, UnknownAxiomError, VariableNameError

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Var:
    name: str

    def __post_init__(self) -> None:
        if not isinstance(self.name, str) or not NAME_RE.fullmatch(self.name) or self.name in _KEYWORDS:
            raise VariableNameError(f"{self.name!r} is not a variable name")

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Bottom:
    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"

    def __str__(self) -> str:
        return to_text(self)


Formula = Union[Var, Bottom, And, Or, Implies]


def neg(f: Formula) -> Implies:
    return Implies(f, Bottom())


def top() -> Implies:
    return Implies(Bottom(), Bottom())


def is_neg(f: Formula) -> bool:
    return isinstance(f, Implies) and isinstance(f.right, Bottom)


# tokenizer

NAME_RE = re.compile(r"[a-z][a-z0-9_]*")

_ALIASES = {
    "¬": "~",  # not sign
    "∧": "&",  # logical and
    "∨": "|",  # logical or
    "→": "->",  # rightwards arrow
    "⊥": "false",  # up tack
    "⊤": "true",  # down tack
}
_KEYWORDS = {"false", "true", "sa", "kp", "wem"}

Token = Tuple[str, str, int]  # kind, text, position


def tokenize(text: str) -> List[Token]:
    out: List[Token] = []
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch in _ALIASES:
            sym = _ALIASES[ch]
            out.append(("kw" if sym in _KEYWORDS else "op", sym, i))
            i += 1
            continue
        if text.startswith("->", i):
            out.append(("op", "->", i))
            i += 2
            continue
        if ch in "~&|()":
            out.append(("op", ch, i))
            i += 1
            continue
        m = NAME_RE.match(text, i)
        if m:
            word = m.group(0)
            out.append(("kw" if word in _KEYWORDS else "name", word, i))
            i = m.end()
            continue
        raise ParseError(f"unexpected character {ch!r}", position=i, expected="a variable, connective or parenthesis")
    out.append(("end", "", n))
    return out


class _Parser:
    def __init__(self, text: str) -> None:
        self.toks = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def take(self) -> Token:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def accept(self, op: str) -> bool:
        kind, text, _ = self.peek()
        if kind == "op" and text == op:
            self.i += 1
            return True
        return False

    def parse(self) -> Formula:
        f = self.imp()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {text!r}", position=pos, expected="end of input")
        return f

    def imp(self) -> Formula:
        left = self.disj()
        if self.accept("->"):
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.accept("|"):
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.accept("&"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.accept("~"):
            return neg(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, text, pos = self.take()
        if kind == "name":
            return Var(text)
        if kind == "kw":
            if text == "false":
                return Bottom()
            if text == "true":
                return top()
            return axiom(text)
        if kind == "op" and text == "(":
            f = self.imp()
            kind, text, pos = self.peek()
            if not self.accept(")"):
                raise ParseError(f"unexpected {text or 'end of input'!r}", position=pos, expected="')'")
            return f
        found = text or "end of input"
        raise ParseError(f"unexpected {found!r}", position=pos, expected="a formula")


def parse(text: str) -> Formula:
    f = _Parser(text).parse()
    log.debug("parsed %r as %s", text, to_text(f))
    return f


# printer

_PREC_IMP, _PREC_OR, _PREC_AND, _PREC_NOT, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(f: Formula) -> int:
    if isinstance(f, (Var, Bottom)):
        return _PREC_ATOM
    if is_neg(f):
        return _PREC_NOT
    if isinstance(f, And):
        return _PREC_AND
    if isinstance(f, Or):
        return _PREC_OR
    return _PREC_IMP


def _wrap(f: Formula, parens: bool) -> str:
    s = to_text(f)
    return f"({s})" if parens else s


def to_text(f: Formula) -> str:
    """Minimal-parenthesis rendering; ``parse(to_text(f)) == f``."""
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Bottom):
        return "false"
    if is_neg(f):
        return "~" + _wrap(f.left, _prec(f.left) < _PREC_NOT)
    if isinstance(f, (And, Or)):
        p = _prec(f)
        sym = " & " if isinstance(f, And) else " | "
        return _wrap(f.left, _prec(f.left) < p) + sym + _wrap(f.right, _prec(f.right) <= p)
    return _wrap(f.left, _prec(f.left) <= _PREC_IMP) + " -> " + to_text(f.right)


def variables(f: Formula) -> List[str]:
    """Distinct variable names in first-occurrence order."""
    seen: Dict[str, None] = {}
    stack: List[Formula] = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Var):
            seen.setdefault(g.name, None)
        elif isinstance(g, (And, Or, Implies)):
            stack.append(g.right)
            stack.append(g.left)
    return list(seen)


def depth(f: Formula) -> int:
    if isinstance(f, (Var, Bottom)):
        return 0
    return 1 + max(depth(f.left), depth(f.right))


AXIOM_TEXT: Dict[str, str] = {
    "sa": "((~~p -> p) -> p | ~p) -> ~p | ~~p",
    "kp": "(~p -> q | r) -> (~p -> q) | (~p -> r)",
    "wem": "~p | ~~p",
}


def axiom(name: str) -> Formula:
    """The Scott (sa), Kreisel-Putnam (kp) or weak excluded middle (wem) axiom."""
    try:
        text = AXIOM_TEXT[name.lower()]
    except KeyError:
        raise UnknownAxiomError(f"unknown axiom {name!r} (known: {', '.join(AXIOM_TEXT)})") from None
    return _Parser(text).parse()


AXIOMS: Dict[str, Formula] = {name: axiom(name) for name in AXIOM_TEXT}
