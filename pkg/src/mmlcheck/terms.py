"""Type terms used by constraint generation and the unification solver.

A term is either a type variable (integer id, globally unique per
generation run) or a constructor application. Functions, lists and
tuples are ordinary constructors with reserved names:

    "->"     binary, right-nested for curried functions
    "[]"     unary list
    "(,k)"   k-ary tuple
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Union

CompiledTerm = Union[int, tuple]  # int = tvar id, tuple = (name, *args)


@dataclass(frozen=True)
class TypeTerm:
    pass


@dataclass(frozen=True)
class TVar(TypeTerm):
    id: int


@dataclass(frozen=True)
class TCon(TypeTerm):
    name: str
    args: tuple[TypeTerm, ...] = ()


def t_con(name: str, *args: TypeTerm) -> TCon:
    return TCon(name, args)


def t_fn(arg: TypeTerm, result: TypeTerm) -> TCon:
    return TCon("->", (arg, result))


def fn_chain(params: Iterable[TypeTerm], result: TypeTerm) -> TypeTerm:
    out = result
    for p in reversed(list(params)):
        out = t_fn(p, out)
    return out


def t_list(elem: TypeTerm) -> TCon:
    return TCon("[]", (elem,))


def t_tuple(*elems: TypeTerm) -> TCon:
    return TCon(f"(,{len(elems)})", elems)


INT = t_con("Int")
FLOAT = t_con("Float")
CHAR = t_con("Char")
STRING = t_con("String")
BOOL = t_con("Bool")


def compile_term(term: TypeTerm) -> CompiledTerm:
    """Convert to the compact representation the solver unifies over."""
    if isinstance(term, TVar):
        return term.id
    assert isinstance(term, TCon)
    return (term.name, *(compile_term(a) for a in term.args))


def uncompile_term(term: CompiledTerm) -> TypeTerm:
    if isinstance(term, int):
        return TVar(term)
    return TCon(term[0], tuple(uncompile_term(a) for a in term[1:]))


def term_vars(term: CompiledTerm) -> set[int]:
    out: set[int] = set()
    stack = [term]
    while stack:
        t = stack.pop()
        if isinstance(t, int):
            out.add(t)
        else:
            stack.extend(t[1:])
    return out


@dataclass(frozen=True)
class Scheme:
    """A polymorphic type: `arity` bound variables numbered 0..arity-1."""

    arity: int
    term: TypeTerm

    def instantiate(self, fresh: Callable[[], int]) -> TypeTerm:
        mapping = {i: TVar(fresh()) for i in range(self.arity)}

        def go(t: TypeTerm) -> TypeTerm:
            if isinstance(t, TVar):
                return mapping[t.id]
            assert isinstance(t, TCon)
            return TCon(t.name, tuple(go(a) for a in t.args))

        return go(self.term)


# --- rendering -------------------------------------------------------------


def render_term(term: CompiledTerm, var_name: Callable[[int], str], lowercase_cons: bool = False) -> str:
    def con_name(name: str) -> str:
        return name.lower() if lowercase_cons else name

    def go(t: CompiledTerm, prec: int) -> str:
        if isinstance(t, int):
            return var_name(t)
        name = t[0]
        args = t[1:]
        if name == "->":
            s = f"{go(args[0], 1)} -> {go(args[1], 0)}"
            return f"({s})" if prec > 0 else s
        if name == "[]":
            return f"[{go(args[0], 0)}]"
        if name.startswith("(,"):
            return "(" + ", ".join(go(a, 0) for a in args) + ")"
        if not args:
            return con_name(name)
        s = con_name(name) + " " + " ".join(go(a, 2) for a in args)
        return f"({s})" if prec >= 2 else s

    return go(term, 0)


class CanonicalNames:
    """Assigns a, b, c, ... to unbound type variables in first-appearance order."""

    def __init__(self) -> None:
        self.names: dict[int, str] = {}

    def __call__(self, tvar: int) -> str:
        if tvar not in self.names:
            k = len(self.names)
            name = chr(ord("a") + k % 26) + ("" if k < 26 else str(k // 26))
            self.names[tvar] = name
        return self.names[tvar]
