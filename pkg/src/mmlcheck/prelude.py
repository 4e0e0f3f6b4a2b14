"""Built-in value environment available to every module."""

from __future__ import annotations

from .syntax.parser import parse_type_expression
from .syntax import ast
from .terms import Scheme, TCon, TVar, TypeTerm

_BUILTIN_SOURCES = {
    # integer arithmetic
    "add": "Int -> Int -> Int",
    "sub": "Int -> Int -> Int",
    "mul": "Int -> Int -> Int",
    "div": "Int -> Int -> Int",
    "mod": "Int -> Int -> Int",
    "negate": "Int -> Int",
    # float arithmetic
    "addf": "Float -> Float -> Float",
    "subf": "Float -> Float -> Float",
    "mulf": "Float -> Float -> Float",
    "divf": "Float -> Float -> Float",
    "intToFloat": "Int -> Float",
    "floor": "Float -> Int",
    # comparisons
    "eq": "Int -> Int -> Bool",
    "neq": "Int -> Int -> Bool",
    "lt": "Int -> Int -> Bool",
    "gt": "Int -> Int -> Bool",
    "le": "Int -> Int -> Bool",
    "ge": "Int -> Int -> Bool",
    "eqf": "Float -> Float -> Bool",
    "ltf": "Float -> Float -> Bool",
    "gtf": "Float -> Float -> Bool",
    "eqc": "Char -> Char -> Bool",
    # booleans
    "not": "Bool -> Bool",
    "and": "Bool -> Bool -> Bool",
    "or": "Bool -> Bool -> Bool",
    # lists
    "length": "[a] -> Int",
    "null": "[a] -> Bool",
    "head": "[a] -> a",
    "tail": "[a] -> [a]",
    "cons": "a -> [a] -> [a]",
    "append": "[a] -> [a] -> [a]",
    "reverse": "[a] -> [a]",
    "sort": "[a] -> [a]",
    "elem": "a -> [a] -> Bool",
    "map": "(a -> b) -> [a] -> [b]",
    "filter": "(a -> Bool) -> [a] -> [a]",
    "foldl": "(b -> a -> b) -> b -> [a] -> b",
    "foldr": "(a -> b -> b) -> b -> [a] -> b",
    "zip": "[a] -> [b] -> [(a, b)]",
    "concat": "[[a]] -> [a]",
    "replicate": "Int -> a -> [a]",
    "take": "Int -> [a] -> [a]",
    "drop": "Int -> [a] -> [a]",
    "sum": "[Int] -> Int",
    "sumf": "[Float] -> Float",
    # tuples
    "fst": "(a, b) -> a",
    "snd": "(a, b) -> b",
    # functions
    "id": "a -> a",
    "const": "a -> b -> a",
    "compose": "(b -> c) -> (a -> b) -> a -> c",
    "flip": "(a -> b -> c) -> b -> a -> c",
    # chars and strings
    "chr": "Int -> Char",
    "ord": "Char -> Int",
    "showInt": "Int -> String",
    "showFloat": "Float -> String",
    "chars": "String -> [Char]",
    "strcat": "String -> String -> String",
}

BUILTIN_TYPE_CONS = {"Int": 0, "Float": 0, "Char": 0, "String": 0, "Bool": 0}


def scheme_from_type_expr(te: ast.TypeExpr, bound: dict[str, int]) -> TypeTerm:
    """Translate a TypeExpr to a term, mapping named variables via `bound`."""
    match te:
        case ast.TypeVarExpr(name=name):
            if name not in bound:
                bound[name] = len(bound)
            return TVar(bound[name])
        case ast.TypeConExpr(name=name, args=args):
            return TCon(name, tuple(scheme_from_type_expr(a, bound) for a in args))
        case ast.FnTypeExpr(arg=a, result=r):
            return TCon("->", (scheme_from_type_expr(a, bound), scheme_from_type_expr(r, bound)))
        case ast.ListTypeExpr(elem=e):
            return TCon("[]", (scheme_from_type_expr(e, bound),))
        case ast.TupleTypeExpr(elems=es):
            parts = tuple(scheme_from_type_expr(e, bound) for e in es)
            return TCon(f"(,{len(parts)})", parts)
    raise AssertionError(f"unhandled type expr {te!r}")


def _parse_scheme(source: str) -> Scheme:
    bound: dict[str, int] = {}
    term = scheme_from_type_expr(parse_type_expression(source), bound)
    return Scheme(len(bound), term)


BUILTINS: dict[str, Scheme] = {name: _parse_scheme(src) for name, src in _BUILTIN_SOURCES.items()}
