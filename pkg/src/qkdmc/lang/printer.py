"""Canonical text rendering; parse(print_model(ast)) is structurally equal."""

from __future__ import annotations

from qkdmc.lang import ast
from qkdmc.lang.parser import BIN_PREC, NEG_PREC, NOT_PREC

_SPACED = frozenset({"&", "|"})


def print_expr(expr: ast.Expr) -> str:
    """Render an expression with minimal parentheses."""
    return _expr(expr, 0)


def _expr(expr: ast.Expr, min_prec: int) -> str:
    if isinstance(expr, ast.IntLit):
        return str(expr.value)
    if isinstance(expr, ast.RealLit):
        return repr(expr.value)
    if isinstance(expr, ast.BoolLit):
        return "true" if expr.value else "false"
    if isinstance(expr, ast.Name):
        return expr.ident
    if isinstance(expr, ast.Unary):
        prec = NOT_PREC if expr.op == "!" else NEG_PREC
        text = f"{expr.op}{_expr(expr.operand, prec + 1)}"
        return f"({text})" if prec < min_prec else text
    assert isinstance(expr, ast.Binary)
    prec = BIN_PREC[expr.op]
    glue = f" {expr.op} " if expr.op in _SPACED else expr.op
    # Right operand gets prec+1 so non-associative printings re-bind the same
    # way they parsed (a-(b-c) keeps its parentheses, a-b-c stays flat).
    text = f"{_expr(expr.left, prec)}{glue}{_expr(expr.right, prec + 1)}"
    return f"({text})" if prec < min_prec else text


def _update(update: ast.Update) -> str:
    body = "&".join(
        f"({assign.var}'={_expr(assign.value, 0)})" for assign in update.assignments
    )
    if update.prob is None:
        return body
    return f"{_expr(update.prob, BIN_PREC['+'] + 1)}:{body}"


def _command(command: ast.Command) -> str:
    label = command.label or ""
    updates = " + ".join(_update(u) for u in command.updates)
    return f"  [{label}] {print_expr(command.guard)} -> {updates};"


def print_model(model: ast.Model) -> str:
    """Render a full model file, ending with a newline."""
    lines: list[str] = ["dtmc"]
    if model.constants:
        lines.append("")
        for const in model.constants:
            lines.append(f"const {const.kind} {const.name} = {print_expr(const.value)};")
    for module in model.modules:
        lines.append("")
        lines.append(f"module {module.name}")
        for var in module.variables:
            lines.append(f"  {var.name} : [{var.low}..{var.high}] init {var.init};")
        for command in module.commands:
            lines.append(_command(command))
        lines.append("endmodule")
    if model.labels:
        lines.append("")
        for label in model.labels:
            lines.append(f'label "{label.name}" = {print_expr(label.expr)};')
    return "\n".join(lines) + "\n"
