"""Name resolution: combine parsed modules into one Program.

Produces a flat cross-module top-level scope (duplicate names are an
error program-wide) and a resolution table mapping every variable and
constructor occurrence, keyed by its span, to its binding.
"""

from __future__ import annotations

from . import ast
from .ast import (
    Apply,
    BoolPattern,
    BuiltinTarget,
    Case,
    CharPattern,
    ConPattern,
    ConRef,
    ConstructorInfo,
    ConstructorTarget,
    DataDecl,
    Decl,
    Expr,
    If,
    ImportDecl,
    IntPattern,
    Lambda,
    Let,
    ListLit,
    LocalTarget,
    Module,
    Program,
    SignatureDecl,
    Span,
    Target,
    TopLevelTarget,
    TupleLit,
    TypeExpr,
    ValueDecl,
    VarPattern,
    VarRef,
    WildcardPattern,
)
from .parser import parse_module


class ResolutionError(Exception):
    """A non-type diagnostic: unresolved name, duplicate, bad import, ..."""

    def __init__(self, message: str, span: Span | None = None):
        super().__init__(f"{span}: {message}" if span else message)
        self.message = message
        self.span = span


def resolve_program(
    modules: list[tuple[str, str]], imports: list[tuple[str, str]] | None = None
) -> Program:
    """Parse and link `(module_id, source)` pairs under the given import edges.

    `import X` declarations inside sources contribute edges as well.
    """
    parsed: list[Module] = []
    for module_id, source in modules:
        decls = parse_module(module_id, source)
        parsed.append(Module(module_id, decls, source))

    ids = [m.module_id for m in parsed]
    if len(set(ids)) != len(ids):
        raise ResolutionError("duplicate module ids in program")
    known = set(ids)

    edges: list[tuple[str, str]] = list(imports or [])
    for m in parsed:
        for d in m.decls:
            if isinstance(d, ImportDecl):
                edges.append((m.module_id, d.module_name))
    edges = sorted(set(edges))
    for importer, imported in edges:
        if importer not in known or imported not in known:
            raise ResolutionError(f"import of unknown module {imported!r} from {importer!r}")
    _check_acyclic(edges, ids)

    program = Program(modules=tuple(parsed), imports=tuple(edges))
    _collect_top_level(program)

    for m in parsed:
        visible = _visible_modules(m.module_id, edges)
        for d in m.decls:
            _resolve_decl(program, m.module_id, visible, d)
    return program


def _check_acyclic(edges: list[tuple[str, str]], ids: list[str]) -> None:
    adjacency: dict[str, list[str]] = {i: [] for i in ids}
    for a, b in edges:
        adjacency[a].append(b)
    state: dict[str, int] = {}  # 1 = on stack, 2 = done

    def visit(node: str, trail: list[str]) -> None:
        state[node] = 1
        for nxt in adjacency[node]:
            if state.get(nxt) == 1:
                cycle = " -> ".join(trail + [node, nxt])
                raise ResolutionError(f"cyclic import: {cycle}")
            if state.get(nxt) is None:
                visit(nxt, trail + [node])
        state[node] = 2

    for i in ids:
        if state.get(i) is None:
            visit(i, [])


def _visible_modules(module_id: str, edges: list[tuple[str, str]]) -> set[str]:
    return {module_id} | {b for a, b in edges if a == module_id}


def _collect_top_level(program: Program) -> None:
    from ..prelude import BUILTIN_TYPE_CONS

    for m in program.modules:
        sigs_here: set[str] = set()
        for d in m.decls:
            match d:
                case ValueDecl(name=name):
                    if name in program.values:
                        prev = program.values[name][0]
                        raise ResolutionError(
                            f"duplicate top-level name {name!r} (also defined in module {prev!r})",
                            d.name_span,
                        )
                    program.values[name] = (m.module_id, d)
                case SignatureDecl(name=name):
                    if name in sigs_here:
                        raise ResolutionError(f"duplicate signature for {name!r}", d.name_span)
                    sigs_here.add(name)
                    if name in program.signatures:
                        raise ResolutionError(
                            f"signature for {name!r} in more than one module", d.name_span
                        )
                    program.signatures[name] = (m.module_id, d)
                case DataDecl(type_name=tname, type_params=tparams, constructors=cons):
                    if tname in program.datatypes or tname in BUILTIN_TYPE_CONS:
                        raise ResolutionError(f"duplicate data type {tname!r}", d.span)
                    if len(set(tparams)) != len(tparams):
                        raise ResolutionError(f"duplicate type parameter in data {tname}", d.span)
                    program.datatypes[tname] = len(tparams)
                    for c in cons:
                        if c.name in program.constructors:
                            raise ResolutionError(
                                f"duplicate constructor {c.name!r}", c.name_span
                            )
                        program.constructors[c.name] = ConstructorInfo(
                            c.name, tname, tparams, c.fields, m.module_id
                        )

    # Signatures must accompany a definition in the same module.
    for name, (mod, sig) in program.signatures.items():
        if name not in program.values or program.values[name][0] != mod:
            raise ResolutionError(f"signature for {name!r} has no definition in module {mod!r}", sig.name_span)


def _resolve_decl(program: Program, module_id: str, visible: set[str], decl: Decl) -> None:
    match decl:
        case ValueDecl(params=params, body=body):
            scope: dict[str, Span] = {}
            for p in params:
                if p.name in scope:
                    raise ResolutionError(f"duplicate parameter {p.name!r}", p.span)
                scope[p.name] = p.span
            _resolve_expr(program, module_id, visible, [scope], body)
        case SignatureDecl(type_expr=te):
            _check_type_expr(program, visible, te, allow_free_vars=True)
        case DataDecl(type_params=tparams, constructors=cons):
            for c in cons:
                for f in c.fields:
                    _check_type_expr(program, visible, f, allow_free_vars=False, bound_vars=set(tparams))
        case ImportDecl():
            pass


def _check_type_expr(
    program: Program,
    visible: set[str],
    te: TypeExpr,
    allow_free_vars: bool,
    bound_vars: set[str] | None = None,
) -> None:
    from ..prelude import BUILTIN_TYPE_CONS

    match te:
        case ast.TypeVarExpr(name=name):
            if not allow_free_vars and name not in (bound_vars or set()):
                raise ResolutionError(f"unbound type variable {name!r}", te.span)
        case ast.TypeConExpr(name=name, args=args):
            if name in BUILTIN_TYPE_CONS:
                arity = BUILTIN_TYPE_CONS[name]
            elif name in program.datatypes:
                info_mod = next(
                    m for m in program.modules
                    if any(isinstance(d, DataDecl) and d.type_name == name for d in m.decls)
                ).module_id
                if info_mod not in visible:
                    raise ResolutionError(f"type {name!r} is not imported here", te.span)
                arity = program.datatypes[name]
            else:
                raise ResolutionError(f"unknown type constructor {name!r}", te.span)
            if len(args) != arity:
                raise ResolutionError(
                    f"type constructor {name!r} expects {arity} argument(s), got {len(args)}", te.span
                )
            for a in args:
                _check_type_expr(program, visible, a, allow_free_vars, bound_vars)
        case ast.FnTypeExpr(arg=a, result=r):
            _check_type_expr(program, visible, a, allow_free_vars, bound_vars)
            _check_type_expr(program, visible, r, allow_free_vars, bound_vars)
        case ast.ListTypeExpr(elem=e):
            _check_type_expr(program, visible, e, allow_free_vars, bound_vars)
        case ast.TupleTypeExpr(elems=es):
            for e in es:
                _check_type_expr(program, visible, e, allow_free_vars, bound_vars)


def _resolve_expr(
    program: Program,
    module_id: str,
    visible: set[str],
    scopes: list[dict[str, Span]],
    expr: Expr,
) -> None:
    match expr:
        case VarRef(name=name):
            program.resolution[(module_id, expr.span)] = _lookup(
                program, module_id, visible, scopes, name, expr.span
            )
        case ConRef(name=name):
            info = program.constructors.get(name)
            if info is None or info.module not in visible:
                raise ResolutionError(f"unknown constructor {name!r}", expr.span)
            program.resolution[(module_id, expr.span)] = ConstructorTarget(name)
        case Lambda(params=params, body=body):
            scope: dict[str, Span] = {}
            for p in params:
                if p.name in scope:
                    raise ResolutionError(f"duplicate parameter {p.name!r}", p.span)
                scope[p.name] = p.span
            _resolve_expr(program, module_id, visible, scopes + [scope], body)
        case Let(bindings=bindings, body=body):
            scope = {}
            for b in bindings:
                # non-recursive: each binding sees only earlier ones
                _resolve_expr(program, module_id, visible, scopes + [dict(scope)], b.value)
                if b.name in scope:
                    raise ResolutionError(f"duplicate let binding {b.name!r}", b.name_span)
                scope[b.name] = b.name_span
            _resolve_expr(program, module_id, visible, scopes + [scope], body)
        case Case(scrutinee=scrut, alts=alts):
            _resolve_expr(program, module_id, visible, scopes, scrut)
            for alt in alts:
                scope = {}
                match alt.pattern:
                    case ConPattern(con_name=cname, binders=binders):
                        info = program.constructors.get(cname)
                        if info is None or info.module not in visible:
                            raise ResolutionError(f"unknown constructor {cname!r}", alt.pattern.span)
                        if len(binders) != len(info.fields):
                            raise ResolutionError(
                                f"constructor {cname!r} has {len(info.fields)} field(s), "
                                f"pattern binds {len(binders)}",
                                alt.pattern.span,
                            )
                        for p in binders:
                            if p.name != "_":
                                if p.name in scope:
                                    raise ResolutionError(f"duplicate pattern binder {p.name!r}", p.span)
                                scope[p.name] = p.span
                    case VarPattern(name=name):
                        scope[name] = alt.pattern.span
                    case WildcardPattern() | IntPattern() | CharPattern() | BoolPattern():
                        pass
                _resolve_expr(program, module_id, visible, scopes + [scope], alt.body)
        case Apply() | If() | ListLit() | TupleLit():
            for child in ast.child_exprs(expr):
                _resolve_expr(program, module_id, visible, scopes, child)
        case _:
            pass  # literals


def _lookup(
    program: Program,
    module_id: str,
    visible: set[str],
    scopes: list[dict[str, Span]],
    name: str,
    span: Span,
) -> Target:
    from ..prelude import BUILTINS

    for scope in reversed(scopes):
        if name in scope:
            return LocalTarget(scope[name])
    if name in program.values:
        target_mod = program.values[name][0]
        if target_mod in visible:
            return TopLevelTarget(name, target_mod)
        raise ResolutionError(
            f"{name!r} is defined in module {target_mod!r} but not imported here", span
        )
    if name in BUILTINS:
        return BuiltinTarget(name)
    raise ResolutionError(f"unresolved name {name!r}", span)
