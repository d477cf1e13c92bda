"""Syntax tree for the modeling language.

Nodes are frozen dataclasses. Source positions are carried on every node but
excluded from equality, so a parse -> print -> reparse round trip compares
structurally equal even though positions moved.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Pos:
    """1-based line/column of the token that started a construct."""

    line: int
    col: int

    def __str__(self) -> str:
        return f"{self.line}:{self.col}"


NO_POS = Pos(0, 0)


def _pos_field() -> Pos:
    return field(default=NO_POS, compare=False, repr=False)  # type: ignore[return-value]


@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class IntLit(Expr):
    value: int
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class RealLit(Expr):
    value: float
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Name(Expr):
    """Reference to a declared constant or variable."""

    ident: str
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Unary(Expr):
    """Unary operation; ``op`` is ``!`` or ``-``."""

    op: str
    operand: Expr
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Binary(Expr):
    """Binary operation; ``op`` is one of ``| & = != < <= > >= + - * /``."""

    op: str
    left: Expr
    right: Expr
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Assignment:
    """One primed assignment ``(var' = expr)`` inside an update."""

    var: str
    value: Expr
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Update:
    """One probabilistic branch of a command.

    ``prob`` is None for the implicit probability 1 of a sole update.
    """

    prob: Expr | None
    assignments: tuple[Assignment, ...]
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Command:
    """Guarded command ``[label] guard -> p1:u1 + ... ;`` (label optional)."""

    label: str | None
    guard: Expr
    updates: tuple[Update, ...]
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class VarDecl:
    """Bounded integer variable ``name : [low..high] init start;``."""

    name: str
    low: int
    high: int
    init: int
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class ConstDecl:
    """Constant declaration; ``kind`` is ``int`` or ``double``."""

    name: str
    kind: str
    value: Expr
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Module:
    name: str
    variables: tuple[VarDecl, ...]
    commands: tuple[Command, ...]
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class LabelDef:
    """Named state predicate ``label "name" = bexpr;``."""

    name: str
    expr: Expr
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class Model:
    constants: tuple[ConstDecl, ...]
    modules: tuple[Module, ...]
    labels: tuple[LabelDef, ...]
    pos: Pos = _pos_field()
