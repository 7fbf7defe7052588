"""Lattice-linear expression trees and their S-expression text format.

Node kinds: generator (an evaluation map at a lattice element), rational
scaling, sum, join, meet.  Evaluation at a homomorphism is structural and
positively homogeneous.  Text form:

    (join (gen "(2,3)") (scale 1/2 (sum (gen "(1,1)") (meet (gen "(2,2)") (gen "(3,2)")))))
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Union


@dataclass(frozen=True)
class Gen:
    label: str


@dataclass(frozen=True)
class Scale:
    coeff: Fraction
    child: "Expr"

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))


@dataclass(frozen=True)
class Sum:
    children: tuple["Expr", ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise ValueError("sum needs at least one child")


@dataclass(frozen=True)
class Join:
    children: tuple["Expr", ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise ValueError("join needs at least one child")


@dataclass(frozen=True)
class Meet:
    children: tuple["Expr", ...]

    def __post_init__(self):
        object.__setattr__(self, "children", tuple(self.children))
        if not self.children:
            raise ValueError("meet needs at least one child")


Expr = Union[Gen, Scale, Sum, Join, Meet]


def generators(expr: Expr) -> Iterator[str]:
    if isinstance(expr, Gen):
        yield expr.label
    elif isinstance(expr, Scale):
        yield from generators(expr.child)
    else:
        for child in expr.children:
            yield from generators(child)


def eval_expr(expr: Expr, value_of) -> Fraction:
    """Evaluate with ``value_of(label)`` supplying generator values."""
    if isinstance(expr, Gen):
        return Fraction(value_of(expr.label))
    if isinstance(expr, Scale):
        return expr.coeff * eval_expr(expr.child, value_of)
    vals = [eval_expr(c, value_of) for c in expr.children]
    if isinstance(expr, Sum):
        return sum(vals, Fraction(0))
    if isinstance(expr, Join):
        return max(vals)
    return min(vals)


# -- text format --------------------------------------------------------------

def _tokenize(text: str) -> list[str]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            tokens.append(ch)
            i += 1
        elif ch == '"':
            j = text.index('"', i + 1)
            tokens.append(text[i:j + 1])
            i = j + 1
        else:
            j = i
            while j < len(text) and not text[j].isspace() and text[j] not in '()"':
                j += 1
            tokens.append(text[i:j])
            i = j
    return tokens


def parse_sexpr(text: str) -> Expr:
    tokens = _tokenize(text)
    expr, rest = _parse(tokens)
    if rest:
        raise ValueError(f"trailing tokens after expression: {rest[:3]}")
    return expr


def _parse(tokens: list[str]) -> tuple[Expr, list[str]]:
    if not tokens:
        raise ValueError("unexpected end of expression")
    head = tokens[0]
    if head != "(":
        raise ValueError(f"expected '(' but found {head!r}")
    if len(tokens) < 2:
        raise ValueError("unexpected end of expression")
    kind = tokens[1]
    rest = tokens[2:]
    if kind == "gen":
        if not rest or not rest[0].startswith('"'):
            raise ValueError("gen needs a quoted element label")
        label = rest[0][1:-1]
        if not rest[1:] or rest[1] != ")":
            raise ValueError("gen takes exactly one label")
        return Gen(label), rest[2:]
    if kind == "scale":
        if not rest:
            raise ValueError("scale needs a rational coefficient")
        try:
            coeff = Fraction(rest[0])
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational {rest[0]!r}") from exc
        child, rest = _parse(rest[1:])
        if not rest or rest[0] != ")":
            raise ValueError("scale takes exactly one child")
        return Scale(coeff, child), rest[1:]
    if kind in ("sum", "join", "meet"):
        children = []
        while rest and rest[0] != ")":
            child, rest = _parse(rest)
            children.append(child)
        if not rest:
            raise ValueError(f"unterminated ({kind} ...)")
        cls = {"sum": Sum, "join": Join, "meet": Meet}[kind]
        return cls(tuple(children)), rest[1:]
    raise ValueError(f"unknown expression kind {kind!r}")


def format_sexpr(expr: Expr) -> str:
    if isinstance(expr, Gen):
        return f'(gen "{expr.label}")'
    if isinstance(expr, Scale):
        return f"(scale {expr.coeff} {format_sexpr(expr.child)})"
    kind = {Sum: "sum", Join: "join", Meet: "meet"}[type(expr)]
    inner = " ".join(format_sexpr(c) for c in expr.children)
    return f"({kind} {inner})"
