"""Formula syntax: AST nodes, the concrete-syntax parser, and structural helpers.

The core connectives are truth, neighborhood and behavior atoms, negation,
conjunction, next, and until.  Disjunction, implication, falsity, eventually
and globally are surface syntax only; the parser expands them on the spot, so
every downstream consumer handles six node shapes plus the majority atom that
the translation pipeline introduces.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .errors import FormulaSyntaxError


@dataclass(frozen=True)
class Formula:
    """Base class for AST nodes."""


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Nbr(Formula):
    """``N(a,b)``: agent b is in a's neighborhood."""

    a: str
    b: str


@dataclass(frozen=True)
class Beh(Formula):
    """``B(a)``: agent a exhibits the behavior."""

    a: str


@dataclass(frozen=True)
class Not(Formula):
    child: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Next(Formula):
    child: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class MajorityGE(Formula):
    """Threshold test on the behaving fraction of an agent's neighborhood.

    Produced by the translation pipeline as the one-step lookahead of a
    behavior atom; the concrete grammar has no input syntax for it.  Rendered
    as ``MAJ(a)`` for display.
    """

    a: str


TOP = Top()


def or_(left: Formula, right: Formula) -> Formula:
    """Disjunction, expanded to its core form."""
    return Not(And(Not(left), Not(right)))


def implies(left: Formula, right: Formula) -> Formula:
    """Implication, expanded to its core form."""
    return Not(And(left, Not(right)))


def eventually(child: Formula) -> Formula:
    return Until(TOP, child)


def always(child: Formula) -> Formula:
    return Not(Until(TOP, Not(child)))


_ATOMS = (Top, Nbr, Beh, MajorityGE)


def _children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, _ATOMS):
        return ()
    if isinstance(f, (Not, Next)):
        return (f.child,)
    return (f.left, f.right)  # And, Until


def iter_nodes(f: Formula) -> Iterator[Formula]:
    """Every node of the syntax tree, parents before children.

    Shared subterms are visited once per occurrence; the walk is iterative so
    machine-built formulas of any depth are safe.
    """
    stack = [f]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(_children(node))


def size(f: Formula) -> int:
    """Number of nodes in the syntax tree (atoms count 1)."""
    total = 0
    for _ in iter_nodes(f):
        total += 1
    return total


def subformulas(f: Formula) -> list[Formula]:
    """Distinct subformulas of ``f`` in ascending size, children before parents."""
    sizes: dict[Formula, int] = {}
    order: list[Formula] = []
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        node, expanded = stack.pop()
        if node in sizes:
            continue
        if expanded:
            n = 1 + sum(sizes[c] for c in _children(node))
            sizes[node] = n
            order.append(node)
        else:
            stack.append((node, True))
            for c in _children(node):
                stack.append((c, False))
    order.sort(key=sizes.__getitem__)
    return order


def render(f: Formula) -> str:
    """Concrete syntax for ``f``; binary nodes are fully parenthesized.

    ``parse_formula(render(f)) == f`` for every formula free of majority
    atoms (those render as ``MAJ(a)``, which is display-only).
    """
    parts: list[str] = []
    stack: list[Formula | str] = [f]
    while stack:
        item = stack.pop()
        if isinstance(item, str):
            parts.append(item)
            continue
        if isinstance(item, Top):
            parts.append("true")
        elif isinstance(item, Beh):
            parts.append(f"B({item.a})")
        elif isinstance(item, Nbr):
            parts.append(f"N({item.a},{item.b})")
        elif isinstance(item, MajorityGE):
            parts.append(f"MAJ({item.a})")
        elif isinstance(item, Not):
            parts.append("!")
            stack.append(item.child)
        elif isinstance(item, Next):
            parts.append("X ")
            stack.append(item.child)
        elif isinstance(item, And):
            parts.append("(")
            stack.append(")")
            stack.append(item.right)
            stack.append(" & ")
            stack.append(item.left)
        else:  # Until
            parts.append("(")
            stack.append(")")
            stack.append(item.right)
            stack.append(" U ")
            stack.append(item.left)
    return "".join(parts)


# --- parser -----------------------------------------------------------------
#
# Precedence, loosest to tightest: ->  |  &  U  unary (!, X, F, G).
# `->` and `U` associate to the right, `&` and `|` to the left.

_TOKEN_RE = re.compile(r"[ \t]*(?:(?P<word>[A-Za-z_][A-Za-z0-9_]*)|(?P<arrow>->)|(?P<sym>[!&|(),]))")

_WORD, _ARROW, _SYM, _END = "word", "arrow", "sym", "end"


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            rest = text[pos:].lstrip(" \t")
            if not rest:
                break
            col = len(text) - len(rest) + 1
            raise FormulaSyntaxError(f"unexpected character {rest[0]!r}", col)
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    tokens.append((_END, "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.i]

    def advance(self) -> tuple[str, str, int]:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_sym(self, sym: str) -> None:
        kind, text, col = self.peek()
        if kind != _SYM or text != sym:
            shown = text if text else "end of input"
            raise FormulaSyntaxError(f"expected {sym!r}, found {shown!r}", col)
        self.advance()

    def expect_name(self) -> str:
        kind, text, col = self.peek()
        if kind != _WORD:
            shown = text if text else "end of input"
            raise FormulaSyntaxError(f"expected an agent name, found {shown!r}", col)
        self.advance()
        return text

    # implication level (right-associative)
    def formula(self) -> Formula:
        left = self.disjunction()
        if self.peek()[0] == _ARROW:
            self.advance()
            return implies(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        while self.peek()[:2] == (_SYM, "|"):
            self.advance()
            left = or_(left, self.conjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.until()
        while self.peek()[:2] == (_SYM, "&"):
            self.advance()
            left = And(left, self.until())
        return left

    # right-associative, binds tighter than &
    def until(self) -> Formula:
        left = self.unary()
        if self.peek()[:2] == (_WORD, "U"):
            self.advance()
            return Until(left, self.until())
        return left

    def unary(self) -> Formula:
        kind, text, col = self.peek()
        if kind == _SYM and text == "!":
            self.advance()
            return Not(self.unary())
        if kind == _WORD and text in ("X", "F", "G"):
            self.advance()
            child = self.unary()
            if text == "X":
                return Next(child)
            if text == "F":
                return eventually(child)
            return always(child)
        return self.atom()

    def atom(self) -> Formula:
        kind, text, col = self.advance()
        if kind == _WORD:
            if text == "true":
                return TOP
            if text == "false":
                return Not(TOP)
            if text == "B":
                self.expect_sym("(")
                a = self.expect_name()
                self.expect_sym(")")
                return Beh(a)
            if text == "N":
                self.expect_sym("(")
                a = self.expect_name()
                self.expect_sym(",")
                b = self.expect_name()
                self.expect_sym(")")
                return Nbr(a, b)
            raise FormulaSyntaxError(f"unexpected identifier {text!r}", col)
        if kind == _SYM and text == "(":
            inner = self.formula()
            self.expect_sym(")")
            return inner
        shown = text if text else "end of input"
        raise FormulaSyntaxError(f"expected a formula, found {shown!r}", col)


def parse_formula(text: str) -> Formula:
    """Parse concrete syntax into a core AST.

    Derived connectives (``false``, ``|``, ``->``, ``F``, ``G``) are expanded
    during parsing.  Raises :class:`FormulaSyntaxError` with a 1-based column
    on malformed input.
    """
    parser = _Parser(text)
    result = parser.formula()
    kind, text_, col = parser.peek()
    if kind != _END:
        raise FormulaSyntaxError(f"unexpected trailing input {text_!r}", col)
    return result
