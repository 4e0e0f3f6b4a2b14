"""Span-annotated AST for the Mini-ML surface language.

Every node carries a Span that addresses the exact source slice it was
parsed from (1-based lines and columns, end-exclusive columns).
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True, order=True)
class Span:
    module: str
    start_line: int
    start_col: int
    end_line: int
    end_col: int

    def __post_init__(self) -> None:
        if (self.start_line, self.start_col) > (self.end_line, self.end_col):
            raise ValueError(f"backwards span: {self}")

    def contains(self, other: Span) -> bool:
        if self.module != other.module:
            return False
        return (self.start_line, self.start_col) <= (other.start_line, other.start_col) and (
            other.end_line,
            other.end_col,
        ) <= (self.end_line, self.end_col)

    def cover(self, other: Span) -> Span:
        """Smallest span containing both self and other (same module)."""
        assert self.module == other.module
        lo = min((self.start_line, self.start_col), (other.start_line, other.start_col))
        hi = max((self.end_line, self.end_col), (other.end_line, other.end_col))
        return Span(self.module, lo[0], lo[1], hi[0], hi[1])

    def slice(self, source: str) -> str:
        """Extract the text this span addresses from its module source."""
        lines = source.split("\n")
        if self.start_line == self.end_line:
            return lines[self.start_line - 1][self.start_col - 1 : self.end_col - 1]
        parts = [lines[self.start_line - 1][self.start_col - 1 :]]
        parts.extend(lines[self.start_line : self.end_line - 1])
        parts.append(lines[self.end_line - 1][: self.end_col - 1])
        return "\n".join(parts)

    def to_json(self) -> dict:
        return {
            "module": self.module,
            "start_line": self.start_line,
            "start_col": self.start_col,
            "end_line": self.end_line,
            "end_col": self.end_col,
        }

    def __str__(self) -> str:
        return f"{self.module}:{self.start_line}:{self.start_col}-{self.end_line}:{self.end_col}"


# --- Expressions ---------------------------------------------------------


@dataclass(frozen=True)
class Expr:
    span: Span


@dataclass(frozen=True)
class IntLit(Expr):
    value: int


@dataclass(frozen=True)
class FloatLit(Expr):
    value: float


@dataclass(frozen=True)
class CharLit(Expr):
    value: str


@dataclass(frozen=True)
class StringLit(Expr):
    value: str


@dataclass(frozen=True)
class BoolLit(Expr):
    value: bool


@dataclass(frozen=True)
class VarRef(Expr):
    name: str


@dataclass(frozen=True)
class ConRef(Expr):
    name: str


@dataclass(frozen=True)
class Param:
    name: str
    span: Span


@dataclass(frozen=True)
class Lambda(Expr):
    params: tuple[Param, ...]
    body: Expr

    def __post_init__(self) -> None:
        assert self.params, "lambda needs at least one parameter"


@dataclass(frozen=True)
class Apply(Expr):
    fn: Expr
    args: tuple[Expr, ...]

    def __post_init__(self) -> None:
        assert self.args, "application needs at least one argument"


@dataclass(frozen=True)
class LetBinding:
    name: str
    name_span: Span
    value: Expr


@dataclass(frozen=True)
class Let(Expr):
    bindings: tuple[LetBinding, ...]
    body: Expr


@dataclass(frozen=True)
class If(Expr):
    cond: Expr
    then: Expr
    orelse: Expr


@dataclass(frozen=True)
class ListLit(Expr):
    elems: tuple[Expr, ...]


@dataclass(frozen=True)
class TupleLit(Expr):
    elems: tuple[Expr, ...]

    def __post_init__(self) -> None:
        assert len(self.elems) >= 2


# --- Patterns (flat: constructor args are plain binders) ------------------


@dataclass(frozen=True)
class Pattern:
    span: Span


@dataclass(frozen=True)
class ConPattern(Pattern):
    con_name: str
    binders: tuple[Param, ...]


@dataclass(frozen=True)
class VarPattern(Pattern):
    name: str


@dataclass(frozen=True)
class WildcardPattern(Pattern):
    pass


@dataclass(frozen=True)
class IntPattern(Pattern):
    value: int


@dataclass(frozen=True)
class CharPattern(Pattern):
    value: str


@dataclass(frozen=True)
class BoolPattern(Pattern):
    value: bool


@dataclass(frozen=True)
class CaseAlt:
    pattern: Pattern
    body: Expr
    span: Span


@dataclass(frozen=True)
class Case(Expr):
    scrutinee: Expr
    alts: tuple[CaseAlt, ...]


# --- Type expressions -----------------------------------------------------


@dataclass(frozen=True)
class TypeExpr:
    span: Span


@dataclass(frozen=True)
class TypeVarExpr(TypeExpr):
    name: str


@dataclass(frozen=True)
class TypeConExpr(TypeExpr):
    name: str
    args: tuple[TypeExpr, ...]
    name_span: Span


@dataclass(frozen=True)
class FnTypeExpr(TypeExpr):
    arg: TypeExpr
    result: TypeExpr


@dataclass(frozen=True)
class ListTypeExpr(TypeExpr):
    elem: TypeExpr


@dataclass(frozen=True)
class TupleTypeExpr(TypeExpr):
    elems: tuple[TypeExpr, ...]


# --- Declarations ---------------------------------------------------------


@dataclass(frozen=True)
class Decl:
    span: Span


@dataclass(frozen=True)
class ValueDecl(Decl):
    name: str
    name_span: Span
    params: tuple[Param, ...]
    body: Expr


@dataclass(frozen=True)
class SignatureDecl(Decl):
    name: str
    name_span: Span
    type_expr: TypeExpr


@dataclass(frozen=True)
class ConstructorDef:
    name: str
    name_span: Span
    fields: tuple[TypeExpr, ...]


@dataclass(frozen=True)
class DataDecl(Decl):
    type_name: str
    type_params: tuple[str, ...]
    constructors: tuple[ConstructorDef, ...]


@dataclass(frozen=True)
class ImportDecl(Decl):
    module_name: str


# --- Modules and programs -------------------------------------------------


@dataclass(frozen=True)
class Module:
    module_id: str
    decls: tuple[Decl, ...]
    source: str


@dataclass(frozen=True)
class ConstructorInfo:
    name: str
    data_type: str
    type_params: tuple[str, ...]
    fields: tuple[TypeExpr, ...]
    module: str


@dataclass(frozen=True)
class Program:
    """A resolved multi-module program with a flat top-level namespace."""

    modules: tuple[Module, ...]
    imports: tuple[tuple[str, str], ...]  # (importer, imported)
    # top-level value name -> (module_id, ValueDecl)
    values: dict[str, tuple[str, ValueDecl]] = field(default_factory=dict)
    # value name -> (module_id, SignatureDecl)
    signatures: dict[str, tuple[str, SignatureDecl]] = field(default_factory=dict)
    constructors: dict[str, ConstructorInfo] = field(default_factory=dict)
    datatypes: dict[str, int] = field(default_factory=dict)  # name -> arity
    # (module_id, var-ref span) -> resolution target
    resolution: dict[tuple[str, Span], "Target"] = field(default_factory=dict)

    def module(self, module_id: str) -> Module:
        for m in self.modules:
            if m.module_id == module_id:
                return m
        raise KeyError(module_id)


# Resolution targets for occurrences of names in expressions.


@dataclass(frozen=True)
class Target:
    pass


@dataclass(frozen=True)
class TopLevelTarget(Target):
    name: str
    module: str


@dataclass(frozen=True)
class LocalTarget(Target):
    binder_span: Span


@dataclass(frozen=True)
class BuiltinTarget(Target):
    name: str


@dataclass(frozen=True)
class ConstructorTarget(Target):
    name: str


def child_exprs(expr: Expr) -> tuple[Expr, ...]:
    """Direct expression children, in source order."""
    match expr:
        case Lambda(body=b):
            return (b,)
        case Apply(fn=f, args=a):
            return (f, *a)
        case Let(bindings=bs, body=b):
            return tuple(x.value for x in bs) + (b,)
        case If(cond=c, then=t, orelse=e):
            return (c, t, e)
        case ListLit(elems=es) | TupleLit(elems=es):
            return es
        case Case(scrutinee=s, alts=alts):
            return (s, *(a.body for a in alts))
        case _:
            return ()


def walk_exprs(expr: Expr):
    """Pre-order traversal of an expression tree."""
    yield expr
    for child in child_exprs(expr):
        yield from walk_exprs(child)
