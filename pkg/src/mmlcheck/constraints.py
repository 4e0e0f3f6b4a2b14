"""Constraint generation.

Translates a resolved Program into a system of retractable (soft),
span-tagged equality constraints plus hard background constraints.

Every expression or type node that can independently cause a type error
owns exactly one soft constraint relating its type variable to its
shape; scope plumbing (declaration arity, container shells' element
wiring, pattern binders) is hard. Each top-level declaration becomes a
template; a use of a top-level name instantiates the callee's whole
binding group with fresh type variables while reusing the same
constraint ids, so retracting a constraint removes it from every
instantiation at once. Calls within one binding group (self- or mutual
recursion) are monomorphic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from .prelude import BUILTINS
from .syntax import ast
from .syntax.ast import (
    Apply,
    BoolLit,
    BoolPattern,
    BuiltinTarget,
    Case,
    CharLit,
    CharPattern,
    ConPattern,
    ConRef,
    DataDecl,
    FloatLit,
    If,
    ImportDecl,
    IntLit,
    IntPattern,
    Lambda,
    Let,
    ListLit,
    LocalTarget,
    Program,
    SignatureDecl,
    Span,
    StringLit,
    TopLevelTarget,
    TupleLit,
    ValueDecl,
    VarPattern,
    VarRef,
    WildcardPattern,
)
from .terms import (
    BOOL,
    CHAR,
    FLOAT,
    INT,
    STRING,
    CompiledTerm,
    Scheme,
    TCon,
    TVar,
    TypeTerm,
    compile_term,
    fn_chain,
    render_term,
    t_list,
    t_tuple,
)

DeclKey = tuple[str, str]  # (module_id, declaration name)

SOFT = "soft"
HARD = "hard"

# Origins reclassified by mark_structural_hard: shells whose wholesale
# replacement is never an instructive fix because their parts carry
# their own constraints.
STRUCTURAL_ORIGINS = frozenset({"apply-shape", "pattern-shape", "list-shape", "tuple-shape"})


@dataclass(frozen=True)
class Constraint:
    id: int
    lhs: TypeTerm
    rhs: TypeTerm
    spans: tuple[Span, ...]
    span_subjects: tuple[int, ...]  # parallel to spans: per-span expected-type variable
    owner_decl: DeclKey
    subject: int
    hardness: str
    origin: str

    def render(self, var_name=lambda v: f"V{v}", lowercase: bool = True) -> str:
        lhs = render_term(compile_term(self.lhs), var_name, lowercase_cons=lowercase)
        rhs = render_term(compile_term(self.rhs), var_name, lowercase_cons=lowercase)
        return f"{lhs} = {rhs}"


@dataclass(frozen=True)
class DeclTemplate:
    name: str
    module: str
    principal: int  # type variable of the declared name itself
    param_tvars: tuple[int, ...]  # (result tvar, *argument tvars)
    constraint_ids: tuple[int, ...]  # soft ids owned by this declaration


@dataclass(frozen=True)
class Binder:
    decl: DeclKey
    span: Span
    tvar: int
    kind: str  # "decl" | "param"


@dataclass(frozen=True)
class BindingGroup:
    index: int
    members: tuple[DeclKey, ...]
    tvars: frozenset[int]
    constraint_uids: tuple[int, ...]
    calls: tuple[tuple[int, int], ...]  # (link constraint uid, callee group index)
    # Monomorphism restriction: unsigned zero-parameter declarations get
    # one shared instantiation, so use-site demands pin their types.
    monomorphic: bool = False


@dataclass(frozen=True)
class _Raw:
    lhs: TypeTerm
    rhs: TypeTerm
    spans: tuple[Span, ...]
    span_subjects: tuple[int, ...]
    owner: DeclKey
    subject: int
    hardness: str
    origin: str


Equation = tuple  # (soft id | None, lhs CompiledTerm, rhs CompiledTerm)


@dataclass(frozen=True)
class ConstraintSystem:
    soft: tuple[Constraint, ...]
    hard: tuple[Constraint, ...]
    templates: dict[DeclKey, DeclTemplate]
    groups: tuple[BindingGroup, ...]
    binders: tuple[Binder, ...]
    decl_order: tuple[DeclKey, ...]
    program: Program
    equations: tuple[Equation, ...] = field(repr=False)
    # internal carriers so merge/mark can rebuild the system
    _raw: tuple[_Raw, ...] = field(repr=False)
    _links: dict[int, DeclKey] = field(repr=False)
    _principals: dict[DeclKey, int] = field(repr=False)
    _arg_tvars: dict[DeclKey, tuple[int, ...]] = field(repr=False)
    _fresh_base: int = 0

    @property
    def soft_count(self) -> int:
        return len(self.soft)

    def all_soft_ids(self) -> frozenset[int]:
        return frozenset(range(len(self.soft)))

    def constraints_of_decl(self, decl: DeclKey) -> list[Constraint]:
        return [c for c in self.soft if c.owner_decl == decl]


# --- generation -------------------------------------------------------------


class _Gen:
    def __init__(self, program: Program):
        self.program = program
        self.counter = itertools.count(0)
        self.raw: list[_Raw] = []
        self.links: dict[int, DeclKey] = {}
        self.call_edges: set[tuple[DeclKey, DeclKey]] = set()
        self.tvar_owner: dict[int, DeclKey] = {}
        self.principals: dict[DeclKey, int] = {}
        self.arg_tvars: dict[DeclKey, tuple[int, ...]] = {}
        self.binders: list[Binder] = []
        self.decl_order: list[DeclKey] = []
        self.current: DeclKey = ("", "")
        self.ctor_schemes: dict[str, Scheme] = {}
        for info in program.constructors.values():
            bound = {p: i for i, p in enumerate(info.type_params)}
            from .prelude import scheme_from_type_expr

            fields = [scheme_from_type_expr(f, bound) for f in info.fields]
            result = TCon(info.data_type, tuple(TVar(i) for i in range(len(info.type_params))))
            self.ctor_schemes[info.name] = Scheme(len(bound), fn_chain(fields, result))

    def fresh(self) -> int:
        v = next(self.counter)
        self.tvar_owner[v] = self.current
        return v

    def emit(
        self,
        lhs: TypeTerm,
        rhs: TypeTerm,
        span: Span,
        subject: int,
        origin: str,
        hardness: str = SOFT,
    ) -> int:
        uid = len(self.raw)
        self.raw.append(_Raw(lhs, rhs, (span,), (subject,), self.current, subject, hardness, origin))
        return uid

    # -- declarations

    def run(self) -> ConstraintSystem:
        # Allocate principals first so any declaration order works.
        for mod in self.program.modules:
            for d in mod.decls:
                if isinstance(d, ValueDecl):
                    self.current = (mod.module_id, d.name)
                    self.principals[self.current] = self.fresh()
        for mod in self.program.modules:
            for d in mod.decls:
                match d:
                    case ValueDecl():
                        self.current = (mod.module_id, d.name)
                        self.decl_order.append(self.current)
                        self.gen_value_decl(d)
                    case SignatureDecl():
                        self.current = (mod.module_id, d.name)
                        self.gen_signature(d)
                    case DataDecl() | ImportDecl():
                        pass
        return _finalize(
            self.program,
            tuple(self.raw),
            dict(self.links),
            self.tvar_owner,
            self.principals,
            self.arg_tvars,
            tuple(self.binders),
            tuple(self.decl_order),
            next(self.counter),
        )

    def gen_value_decl(self, decl: ValueDecl) -> None:
        key = self.current
        principal = self.principals[key]
        self.binders.append(Binder(key, decl.name_span, principal, "decl"))
        env: dict[str, TypeTerm] = {}
        if decl.params:
            params = []
            for p in decl.params:
                pv = self.fresh()
                params.append(pv)
                env[p.name] = TVar(pv)
                self.binders.append(Binder(key, p.span, pv, "param"))
            body_tv = self.fresh()
            self.arg_tvars[key] = tuple(params)
            self.emit(
                TVar(principal),
                fn_chain([TVar(p) for p in params], TVar(body_tv)),
                decl.name_span,
                principal,
                "decl-shape",
                HARD,
            )
            self.gen_expr(decl.body, body_tv, env)
        else:
            self.arg_tvars[key] = ()
            self.gen_expr(decl.body, principal, env)

    def gen_signature(self, decl: SignatureDecl) -> None:
        mod = self.current[0]
        value_key = (self.program.values[decl.name][0], decl.name)
        assert value_key[0] == mod
        principal = self.principals[value_key]
        named: dict[str, int] = {}
        self.gen_type_expr(decl.type_expr, principal, named)

    def gen_type_expr(self, te: ast.TypeExpr, expected: int, named: dict[str, int]) -> None:
        match te:
            case ast.TypeVarExpr(name=name):
                if name not in named:
                    named[name] = self.fresh()
                self.emit(TVar(expected), TVar(named[name]), te.span, expected, "sig")
            case ast.TypeConExpr(name=name, args=args, name_span=name_span):
                arg_tvs = [self.fresh() for _ in args]
                self.emit(
                    TVar(expected), TCon(name, tuple(TVar(v) for v in arg_tvs)), name_span, expected, "sig"
                )
                for a, v in zip(args, arg_tvs):
                    self.gen_type_expr(a, v, named)
            case ast.FnTypeExpr(arg=a, result=r):
                av, rv = self.fresh(), self.fresh()
                self.emit(TVar(expected), TCon("->", (TVar(av), TVar(rv))), te.span, expected, "sig")
                self.gen_type_expr(a, av, named)
                self.gen_type_expr(r, rv, named)
            case ast.ListTypeExpr(elem=e):
                ev = self.fresh()
                self.emit(TVar(expected), t_list(TVar(ev)), te.span, expected, "sig")
                self.gen_type_expr(e, ev, named)
            case ast.TupleTypeExpr(elems=es):
                tvs = [self.fresh() for _ in es]
                self.emit(TVar(expected), t_tuple(*(TVar(v) for v in tvs)), te.span, expected, "sig")
                for e, v in zip(es, tvs):
                    self.gen_type_expr(e, v, named)

    # -- expressions

    def gen_expr(self, expr: ast.Expr, expected: int, env: dict[str, TypeTerm]) -> None:
        match expr:
            case IntLit():
                self.emit(TVar(expected), INT, expr.span, expected, "lit")
            case FloatLit():
                self.emit(TVar(expected), FLOAT, expr.span, expected, "lit")
            case CharLit():
                self.emit(TVar(expected), CHAR, expr.span, expected, "lit")
            case StringLit():
                self.emit(TVar(expected), STRING, expr.span, expected, "lit")
            case BoolLit():
                self.emit(TVar(expected), BOOL, expr.span, expected, "lit")
            case VarRef(name=name):
                self.gen_var_ref(expr, name, expected, env)
            case ConRef(name=name):
                inst = self.ctor_schemes[name].instantiate(self.fresh)
                self.emit(TVar(expected), inst, expr.span, expected, "con")
            case Lambda(params=params, body=body):
                inner = dict(env)
                ptvs = []
                for p in params:
                    pv = self.fresh()
                    ptvs.append(pv)
                    inner[p.name] = TVar(pv)
                    self.binders.append(Binder(self.current, p.span, pv, "param"))
                body_tv = self.fresh()
                self.emit(
                    TVar(expected),
                    fn_chain([TVar(p) for p in ptvs], TVar(body_tv)),
                    expr.span,
                    expected,
                    "lambda",
                )
                self.gen_expr(body, body_tv, inner)
            case Apply(fn=fn, args=args):
                fv = self.fresh()
                avs = [self.fresh() for _ in args]
                self.emit(
                    TVar(fv),
                    fn_chain([TVar(a) for a in avs], TVar(expected)),
                    expr.span,
                    expected,
                    "apply-shape",
                )
                self.gen_expr(fn, fv, env)
                for a, av in zip(args, avs):
                    self.gen_expr(a, av, env)
            case Let(bindings=bindings, body=body):
                inner = dict(env)
                for b in bindings:
                    bv = self.fresh()
                    self.gen_expr(b.value, bv, dict(inner))
                    inner[b.name] = TVar(bv)
                self.gen_expr(body, expected, inner)
            case If(cond=cond, then=then, orelse=orelse):
                cv, tv, ev = self.fresh(), self.fresh(), self.fresh()
                self.emit(
                    t_tuple(TVar(cv), TVar(expected), TVar(expected)),
                    t_tuple(BOOL, TVar(tv), TVar(ev)),
                    expr.span,
                    expected,
                    "if",
                )
                self.gen_expr(cond, cv, env)
                self.gen_expr(then, tv, env)
                self.gen_expr(orelse, ev, env)
            case ListLit(elems=elems):
                ev = self.fresh()
                self.emit(TVar(expected), t_list(TVar(ev)), expr.span, expected, "list-shape")
                for e in elems:
                    self.gen_expr(e, ev, env)
            case TupleLit(elems=elems):
                tvs = [self.fresh() for _ in elems]
                self.emit(
                    TVar(expected), t_tuple(*(TVar(v) for v in tvs)), expr.span, expected, "tuple-shape"
                )
                for e, v in zip(elems, tvs):
                    self.gen_expr(e, v, env)
            case Case(scrutinee=scrut, alts=alts):
                sv = self.fresh()
                self.gen_expr(scrut, sv, env)
                for alt in alts:
                    inner = dict(env)
                    self.gen_pattern(alt.pattern, sv, inner)
                    self.gen_expr(alt.body, expected, inner)
            case _:
                raise AssertionError(f"unhandled expr {expr!r}")

    def gen_var_ref(self, expr: VarRef, name: str, expected: int, env: dict[str, TypeTerm]) -> None:
        target = self.program.resolution[(self.current[0], expr.span)]
        match target:
            case LocalTarget():
                self.emit(TVar(expected), env[name], expr.span, expected, "var")
            case TopLevelTarget(name=tname, module=tmod):
                callee = (tmod, tname)
                uid = self.emit(TVar(expected), TVar(self.principals[callee]), expr.span, expected, "var")
                self.links[uid] = callee
                self.call_edges.add((self.current, callee))
            case BuiltinTarget(name=bname):
                inst = BUILTINS[bname].instantiate(self.fresh)
                self.emit(TVar(expected), inst, expr.span, expected, "var")
            case _:
                raise AssertionError(f"bad var target {target!r}")

    def gen_pattern(self, pattern: ast.Pattern, scrutinee: int, env: dict[str, TypeTerm]) -> None:
        match pattern:
            case ConPattern(con_name=cname, binders=binders):
                inst = self.ctor_schemes[cname].instantiate(self.fresh)
                field_terms: list[TypeTerm] = []
                result = inst
                for _ in binders:
                    assert isinstance(result, TCon) and result.name == "->"
                    field_terms.append(result.args[0])
                    result = result.args[1]
                self.emit(TVar(scrutinee), result, pattern.span, scrutinee, "pattern-shape")
                for p, ft in zip(binders, field_terms):
                    if p.name != "_":
                        env[p.name] = ft
            case VarPattern(name=name):
                env[name] = TVar(scrutinee)
            case WildcardPattern():
                pass
            case IntPattern():
                self.emit(TVar(scrutinee), INT, pattern.span, scrutinee, "pattern-lit")
            case CharPattern():
                self.emit(TVar(scrutinee), CHAR, pattern.span, scrutinee, "pattern-lit")
            case BoolPattern():
                self.emit(TVar(scrutinee), BOOL, pattern.span, scrutinee, "pattern-lit")


def generate(program: Program) -> ConstraintSystem:
    """Translate a resolved program into a constraint system."""
    return _Gen(program).run()


# --- binding groups and expansion -------------------------------------------


def _strongly_connected(nodes: list[DeclKey], edges: set[tuple[DeclKey, DeclKey]]) -> list[list[DeclKey]]:
    """Tarjan's algorithm, iterative; components returned in node order."""
    adjacency: dict[DeclKey, list[DeclKey]] = {n: [] for n in nodes}
    for a, b in sorted(edges):
        if a in adjacency and b in adjacency and a != b:
            adjacency[a].append(b)
    index: dict[DeclKey, int] = {}
    low: dict[DeclKey, int] = {}
    on_stack: set[DeclKey] = set()
    stack: list[DeclKey] = []
    components: list[list[DeclKey]] = []
    counter = itertools.count()

    for root in nodes:
        if root in index:
            continue
        work: list[tuple[DeclKey, int]] = [(root, 0)]
        while work:
            node, ei = work[-1]
            if ei == 0:
                index[node] = low[node] = next(counter)
                stack.append(node)
                on_stack.add(node)
            if ei < len(adjacency[node]):
                work[-1] = (node, ei + 1)
                nxt = adjacency[node][ei]
                if nxt not in index:
                    work.append((nxt, 0))
                elif nxt in on_stack:
                    low[node] = min(low[node], index[nxt])
            else:
                work.pop()
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[node])
                if low[node] == index[node]:
                    comp = []
                    while True:
                        w = stack.pop()
                        on_stack.discard(w)
                        comp.append(w)
                        if w == node:
                            break
                    components.append(comp)

    first_pos = {n: i for i, n in enumerate(nodes)}
    for comp in components:
        comp.sort(key=lambda n: first_pos[n])
    components.sort(key=lambda comp: first_pos[comp[0]])
    return components


def _rename_compiled(term: CompiledTerm, mapping: dict[int, int]) -> CompiledTerm:
    if isinstance(term, int):
        return mapping[term]
    return (term[0],) + tuple(_rename_compiled(a, mapping) for a in term[1:])


def _finalize(
    program: Program,
    raw: tuple[_Raw, ...],
    links: dict[int, DeclKey],
    tvar_owner: dict[int, DeclKey],
    principals: dict[DeclKey, int],
    arg_tvars: dict[DeclKey, tuple[int, ...]],
    binders: tuple[Binder, ...],
    decl_order: tuple[DeclKey, ...],
    fresh_base: int,
) -> ConstraintSystem:
    call_edges = {(raw[uid].owner, callee) for uid, callee in links.items()}
    components = _strongly_connected(list(decl_order), call_edges)
    group_of: dict[DeclKey, int] = {}
    for gi, comp in enumerate(components):
        for k in comp:
            group_of[k] = gi

    group_uids: list[list[int]] = [[] for _ in components]
    group_calls: list[list[tuple[int, int]]] = [[] for _ in components]
    for uid, r in enumerate(raw):
        gi = group_of[r.owner]
        callee = links.get(uid)
        if callee is not None and group_of[callee] != gi:
            group_calls[gi].append((uid, group_of[callee]))
        else:
            group_uids[gi].append(uid)

    tvars_by_group: list[set[int]] = [set() for _ in components]
    for tv, owner in tvar_owner.items():
        if owner in group_of:
            tvars_by_group[group_of[owner]].add(tv)

    def is_mono(key: DeclKey) -> bool:
        mod, name = key
        has_sig = name in program.signatures and program.signatures[name][0] == mod
        return not arg_tvars.get(key, ()) and not has_sig

    groups = tuple(
        BindingGroup(
            gi,
            tuple(comp),
            frozenset(tvars_by_group[gi]),
            tuple(group_uids[gi]),
            tuple(group_calls[gi]),
            monomorphic=all(is_mono(k) for k in comp),
        )
        for gi, comp in enumerate(components)
    )

    soft: list[Constraint] = []
    hard: list[Constraint] = []
    sel_of_uid: dict[int, int | None] = {}
    for uid, r in enumerate(raw):
        if r.hardness == SOFT:
            sel_of_uid[uid] = len(soft)
            soft.append(
                Constraint(len(soft), r.lhs, r.rhs, r.spans, r.span_subjects, r.owner, r.subject, SOFT, r.origin)
            )
        else:
            sel_of_uid[uid] = None
            hard.append(
                Constraint(len(hard), r.lhs, r.rhs, r.spans, r.span_subjects, r.owner, r.subject, HARD, r.origin)
            )

    compiled: list[tuple[CompiledTerm, CompiledTerm]] = [
        (compile_term(r.lhs), compile_term(r.rhs)) for r in raw
    ]

    equations: list[Equation] = []
    counter = itertools.count(max(fresh_base, 1 + max(tvar_owner, default=0)))

    def instantiate(gi: int, mapping: dict[int, int] | None) -> None:
        g = groups[gi]
        for uid in g.constraint_uids:
            lhs, rhs = compiled[uid]
            if mapping is not None:
                lhs, rhs = _rename_compiled(lhs, mapping), _rename_compiled(rhs, mapping)
            equations.append((sel_of_uid[uid], lhs, rhs))
        for uid, callee_gi in g.calls:
            lhs, rhs = compiled[uid]
            assert isinstance(lhs, int) and isinstance(rhs, int), "link constraints relate two tvars"
            caller_lhs = lhs if mapping is None else mapping[lhs]
            if groups[callee_gi].monomorphic:
                # shared instantiation: link to the entry copy, already expanded
                equations.append((sel_of_uid[uid], caller_lhs, rhs))
                continue
            callee_map = {tv: next(counter) for tv in sorted(groups[callee_gi].tvars)}
            equations.append((sel_of_uid[uid], caller_lhs, callee_map[rhs]))
            instantiate(callee_gi, callee_map)

    for g in groups:
        instantiate(g.index, None)

    templates: dict[DeclKey, DeclTemplate] = {}
    for key in decl_order:
        ids = tuple(c.id for c in soft if c.owner_decl == key)
        templates[key] = DeclTemplate(key[1], key[0], principals[key], (principals[key],) + arg_tvars[key], ids)

    return ConstraintSystem(
        soft=tuple(soft),
        hard=tuple(hard),
        templates=templates,
        groups=groups,
        binders=binders,
        decl_order=decl_order,
        program=program,
        equations=tuple(equations),
        _raw=raw,
        _links=links,
        _principals=principals,
        _arg_tvars=arg_tvars,
        _fresh_base=fresh_base,
    )


def _rebuild(system: ConstraintSystem, raw: tuple[_Raw, ...], links: dict[int, DeclKey]) -> ConstraintSystem:
    tvar_owner: dict[int, DeclKey] = {}
    for g in system.groups:
        for tv in g.tvars:
            # any member works; ownership only matters at group granularity
            tvar_owner[tv] = g.members[0]
    return _finalize(
        system.program,
        raw,
        links,
        tvar_owner,
        system._principals,
        system._arg_tvars,
        system.binders,
        system.decl_order,
        system._fresh_base,
    )


# --- generation-time reductions ----------------------------------------------


def merge_signature_constraints(system: ConstraintSystem) -> ConstraintSystem:
    """Collapse all constraints of each type signature into a single one.

    The merged constraint is one composite equality over tuple-shaped
    terms; its span list keeps every merged span so causes and hints can
    still point at the signature's sub-nodes.
    """
    by_owner: dict[DeclKey, list[int]] = {}
    for uid, r in enumerate(system._raw):
        if r.origin == "sig" and r.hardness == SOFT:
            by_owner.setdefault(r.owner, []).append(uid)

    to_merge = {owner: uids for owner, uids in by_owner.items() if len(uids) > 1}
    if not to_merge:
        return system

    drop: set[int] = set()
    merged_at: dict[int, _Raw] = {}
    for owner, uids in to_merge.items():
        parts = [system._raw[u] for u in uids]
        k = len(parts)
        merged = _Raw(
            lhs=TCon(f"(,{k})", tuple(p.lhs for p in parts)),
            rhs=TCon(f"(,{k})", tuple(p.rhs for p in parts)),
            spans=tuple(s for p in parts for s in p.spans),
            span_subjects=tuple(s for p in parts for s in p.span_subjects),
            owner=owner,
            subject=parts[0].subject,
            hardness=SOFT,
            origin="sig-merged",
        )
        merged_at[uids[0]] = merged
        drop.update(uids[1:])

    new_raw: list[_Raw] = []
    uid_map: dict[int, int] = {}
    for uid, r in enumerate(system._raw):
        if uid in drop:
            continue
        uid_map[uid] = len(new_raw)
        new_raw.append(merged_at.get(uid, r))
    new_links = {uid_map[uid]: callee for uid, callee in system._links.items()}
    return _rebuild(system, tuple(new_raw), new_links)


def mark_structural_hard(system: ConstraintSystem) -> ConstraintSystem:
    """Reclassify structural-shell constraints as hard.

    Application shapes, case-pattern shapes and container shells never
    appear in a correction set afterwards; the leaf constraints
    (literals, variable references, function position, each argument,
    annotation atoms) stay retractable.
    """
    changed = False
    new_raw: list[_Raw] = []
    for r in system._raw:
        if r.hardness == SOFT and r.origin in STRUCTURAL_ORIGINS:
            new_raw.append(replace(r, hardness=HARD))
            changed = True
        else:
            new_raw.append(r)
    if not changed:
        return system
    return _rebuild(system, tuple(new_raw), dict(system._links))


# --- diagnostics dump ---------------------------------------------------------


def dump_clauses(system: ConstraintSystem) -> str:
    """Deterministic clause-style rendering of the generated system."""
    uid_rows: dict[DeclKey, list[str]] = {k: [] for k in system.decl_order}
    soft_seq = 0
    hard_seq = 0
    for uid, r in enumerate(system._raw):
        if r.hardness == SOFT:
            tag = f"s{soft_seq}"
            soft_seq += 1
        else:
            tag = f"h{hard_seq}"
            hard_seq += 1
        callee = system._links.get(uid)
        if callee is not None:
            assert isinstance(r.lhs, TVar)
            body = f"{callee[1]}(V{r.lhs.id}, _)"
        else:
            lhs = render_term(compile_term(r.lhs), lambda v: f"V{v}", lowercase_cons=True)
            rhs = render_term(compile_term(r.rhs), lambda v: f"V{v}", lowercase_cons=True)
            body = f"{lhs} = {rhs}"
        spans = ", ".join(str(s) for s in r.spans)
        uid_rows[r.owner].append(f"    {tag:<5} {r.hardness:<5} {body}  @ {spans}")

    lines: list[str] = []
    current_module = None
    for key in system.decl_order:
        if key[0] != current_module:
            current_module = key[0]
            lines.append(f"%% module {current_module}")
        lines.append(f"{key[1]}/2:")
        lines.extend(uid_rows[key])
    return "\n".join(lines) + ("\n" if lines else "")
