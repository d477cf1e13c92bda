"""Front end for the guarded-command DTMC modeling language."""

from qkdmc.lang.ast import (
    Assignment,
    Binary,
    BoolLit,
    Command,
    ConstDecl,
    Expr,
    IntLit,
    LabelDef,
    Model,
    Module,
    Name,
    Pos,
    RealLit,
    Unary,
    Update,
    VarDecl,
)
from qkdmc.lang.parser import parse
from qkdmc.lang.printer import print_expr, print_model
from qkdmc.lang.validate import ValidatedModel, validate

__all__ = [
    "Assignment",
    "Binary",
    "BoolLit",
    "Command",
    "ConstDecl",
    "Expr",
    "IntLit",
    "LabelDef",
    "Model",
    "Module",
    "Name",
    "Pos",
    "RealLit",
    "Unary",
    "Update",
    "VarDecl",
    "ValidatedModel",
    "parse",
    "print_expr",
    "print_model",
    "validate",
]
