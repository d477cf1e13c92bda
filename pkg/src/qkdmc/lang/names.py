"""Name resolution: one global namespace for constants, modules and variables."""

from __future__ import annotations

from dataclasses import dataclass

from qkdmc.errors import ParseError
from qkdmc.lang import ast


@dataclass(frozen=True)
class Symbols:
    """Declaration sites by name, after uniqueness has been checked."""

    constants: dict[str, ast.ConstDecl]
    variables: dict[str, ast.VarDecl]
    owner: dict[str, str]  # variable name -> owning module name


def build_symbols(model: ast.Model) -> Symbols:
    """Collect declarations, rejecting duplicate names in any namespace."""
    seen: dict[str, ast.Pos] = {}

    def declare(name: str, pos: ast.Pos) -> None:
        if name in seen:
            raise ParseError(
                f"duplicate name '{name}' (already declared at {seen[name]})",
                pos.line,
                pos.col,
                code="DUPLICATE",
            )
        seen[name] = pos

    constants: dict[str, ast.ConstDecl] = {}
    variables: dict[str, ast.VarDecl] = {}
    owner: dict[str, str] = {}
    for const in model.constants:
        declare(const.name, const.pos)
        constants[const.name] = const
    for module in model.modules:
        declare(module.name, module.pos)
        for var in module.variables:
            declare(var.name, var.pos)
            variables[var.name] = var
            owner[var.name] = module.name
    labels_seen: dict[str, ast.Pos] = {}
    for label in model.labels:
        if label.name in labels_seen:
            raise ParseError(
                f"duplicate label \"{label.name}\"", label.pos.line, label.pos.col, code="DUPLICATE"
            )
        labels_seen[label.name] = label.pos
    return Symbols(constants, variables, owner)


def expr_names(expr: ast.Expr) -> set[str]:
    """All identifiers referenced by an expression."""
    out: set[str] = set()
    _collect(expr, out)
    return out


def _collect(expr: ast.Expr, out: set[str]) -> None:
    if isinstance(expr, ast.Name):
        out.add(expr.ident)
    elif isinstance(expr, ast.Unary):
        _collect(expr.operand, out)
    elif isinstance(expr, ast.Binary):
        _collect(expr.left, out)
        _collect(expr.right, out)


def check_references(model: ast.Model, symbols: Symbols) -> None:
    """Reject any identifier that is not a declared constant or variable."""

    def check_expr(expr: ast.Expr) -> None:
        if isinstance(expr, ast.Name):
            if expr.ident not in symbols.constants and expr.ident not in symbols.variables:
                raise ParseError(
                    f"unknown identifier '{expr.ident}'",
                    expr.pos.line,
                    expr.pos.col,
                    code="UNKNOWN_IDENT",
                )
        elif isinstance(expr, ast.Unary):
            check_expr(expr.operand)
        elif isinstance(expr, ast.Binary):
            check_expr(expr.left)
            check_expr(expr.right)

    for const in model.constants:
        check_expr(const.value)
    for module in model.modules:
        for command in module.commands:
            check_expr(command.guard)
            for update in command.updates:
                if update.prob is not None:
                    check_expr(update.prob)
                for assign in update.assignments:
                    if assign.var not in symbols.variables:
                        raise ParseError(
                            f"unknown variable '{assign.var}' in assignment",
                            assign.pos.line,
                            assign.pos.col,
                            code="UNKNOWN_IDENT",
                        )
                    check_expr(assign.value)
    for label in model.labels:
        check_expr(label.expr)
