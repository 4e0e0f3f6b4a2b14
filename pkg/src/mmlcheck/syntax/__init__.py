from .ast import (
    Decl,
    Expr,
    Module,
    Program,
    Span,
    TypeExpr,
)
from .lexer import SyntaxErrorWithSpan
from .parser import parse_expression, parse_module, parse_type_expression
from .resolve import ResolutionError, resolve_program

__all__ = [
    "Decl",
    "Expr",
    "Module",
    "Program",
    "ResolutionError",
    "Span",
    "SyntaxErrorWithSpan",
    "TypeExpr",
    "parse_expression",
    "parse_module",
    "parse_type_expression",
    "resolve_program",
]
