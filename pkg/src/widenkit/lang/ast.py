"""Syntax trees for the analyzed while-language.

Expressions are affine: an integer constant plus coefficient*variable terms.
Conditions compare two affine expressions.  Statements are assignment,
havoc (forget a variable), assume, if/else and while; loops carry the
identifier and source line used to report their invariants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Tuple, Union

from ..extint import ExtInt

COMPARISONS = ("<", "<=", ">", ">=", "==", "!=")


@dataclass(frozen=True)
class AffineExpr:
    """constant + sum of coefficient*variable terms."""

    constant: int
    terms: Tuple[Tuple[int, str], ...] = ()

    def variables(self) -> Tuple[str, ...]:
        seen = []
        for _, name in self.terms:
            if name not in seen:
                seen.append(name)
        return tuple(seen)

    def __str__(self) -> str:
        parts = []
        for coeff, name in self.terms:
            parts.append(f"{coeff}*{name}" if coeff != 1 else name)
        if self.constant != 0 or not parts:
            parts.append(str(self.constant))
        return " + ".join(parts)


@dataclass(frozen=True)
class Cond:
    lhs: AffineExpr
    op: str  # one of COMPARISONS
    rhs: AffineExpr

    def __str__(self) -> str:
        return f"{self.lhs} {self.op} {self.rhs}"


@dataclass(frozen=True)
class Assign:
    var: str
    expr: AffineExpr
    line: int = 0


@dataclass(frozen=True)
class Havoc:
    var: str
    line: int = 0


@dataclass(frozen=True)
class Assume:
    cond: Cond
    line: int = 0


@dataclass(frozen=True)
class If:
    cond: Cond
    then_body: Tuple["Stmt", ...]
    else_body: Tuple["Stmt", ...] = ()
    line: int = 0


@dataclass(frozen=True)
class While:
    id: int
    cond: Cond
    body: Tuple["Stmt", ...]
    line: int = 0


Stmt = Union[Assign, Havoc, Assume, If, While]


@dataclass(frozen=True)
class Decl:
    var: str
    lo: ExtInt
    hi: ExtInt
    line: int = 0


@dataclass(frozen=True)
class Program:
    decls: Tuple[Decl, ...]
    body: Tuple[Stmt, ...] = field(default=())

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(d.var for d in self.decls)

    def loops(self) -> Tuple[While, ...]:
        """All while statements, in source order (which is id order)."""
        found = []

        def walk(stmts):
            for stmt in stmts:
                if isinstance(stmt, While):
                    found.append(stmt)
                    walk(stmt.body)
                elif isinstance(stmt, If):
                    walk(stmt.then_body)
                    walk(stmt.else_body)

        walk(self.body)
        return tuple(sorted(found, key=lambda w: w.id))


def negate(cond: Cond) -> Cond:
    """The exact complement of a comparison."""
    flipped = {"<": ">=", "<=": ">", ">": "<=", ">=": "<", "==": "!=", "!=": "=="}
    return Cond(cond.lhs, flipped[cond.op], cond.rhs)
