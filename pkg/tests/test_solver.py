"""Unification solver: verdicts, most-general unifiers, reconstruction."""

import itertools

import pytest

from mmlcheck.constraints import generate, mark_structural_hard, merge_signature_constraints
from mmlcheck.solver import reconstruct, solve, unify_equations
from mmlcheck.syntax import resolve_program
from mmlcheck.terms import render_term

from helpers import fixture_source


def build(src, imports=None, modules=None):
    system = generate(resolve_program(modules or [("main", src)], imports))
    return mark_structural_hard(merge_signature_constraints(system))


def test_unify_basics():
    INT = ("Int",)
    assert unify_equations([(0, INT)]) is not None
    assert unify_equations([(INT, ("Bool",))]) is None
    subst = unify_equations([(("->", 0, 1), ("->", INT, 2)), (2, ("Bool",))])
    assert subst.resolve(0) == INT
    assert subst.resolve(1) == ("Bool",)


def test_unify_occurs_check():
    assert unify_equations([(0, ("[]", 0))]) is None
    assert unify_equations([(0, ("->", 1, 2)), (1, 0)]) is None


def test_self_application_unsat_not_divergent():
    system = build("f x = f")
    assert not solve(system, system.all_soft_ids()).sat


def test_substitution_idempotent_and_satisfying():
    system = build(fixture_source("fig1.mml"))
    verdict = solve(system, frozenset())
    assert verdict.sat
    for active in (frozenset(), frozenset(range(3))):
        v = solve(system, active)
        assert v.sat
        subst = v.substitution
        for sel, lhs, rhs in system.equations:
            if sel is None or sel in active:
                left = subst.resolve(lhs)
                assert left == subst.resolve(rhs)
                # idempotence: resolving a resolved term changes nothing
                assert subst.resolve(left) == left


def test_fig9_subset_verdicts():
    system = build(fixture_source("fig9.mml"))
    all_ids = system.all_soft_ids()
    assert not solve(system, all_ids).sat
    # retracting the annotation alone in g restores satisfiability
    a_g = next(c.id for c in system.soft if c.owner_decl == ("main", "g") and "sig" in c.origin)
    assert solve(system, all_ids - {a_g}).sat
    assert solve(system, frozenset()).sat


def test_reconstruct_simple_value():
    system = build("x = 1")
    principal = system.templates[("main", "x")].principal
    rec = reconstruct(system, system.all_soft_ids(), [principal])
    assert rec.rendered[principal] == "Int"


def test_reconstruct_requires_sat():
    system = build(fixture_source("fig9.mml"))
    with pytest.raises(ValueError):
        reconstruct(system, system.all_soft_ids())


def test_reconstruct_canonical_free_names():
    system = build("pick x y = (x, y)")
    t = system.templates[("main", "pick")]
    rec = reconstruct(system, system.all_soft_ids(), [t.principal])
    assert rec.rendered[t.principal] == "a -> b -> (a, b)"


def test_rendering_precedence():
    arrow = ("->", ("->", ("Int",), ("Bool",)), ("[]", ("Int",)))
    assert render_term(arrow, lambda v: f"t{v}") == "(Int -> Bool) -> [Int]"
    nested_con = ("Opt", ("Opt", ("Int",)))
    assert render_term(nested_con, lambda v: f"t{v}") == "Opt (Opt Int)"
    tup = ("(,2)", ("Int",), ("->", ("Int",), ("Int",)))
    assert render_term(tup, lambda v: f"t{v}") == "(Int, Int -> Int)"


def test_determinism_of_verdicts_and_rendering():
    src = fixture_source("fig45.mml")
    r1 = build(src)
    r2 = build(src)
    for active in (r1.all_soft_ids(), frozenset(sorted(r1.all_soft_ids())[:3])):
        assert solve(r1, active).sat == solve(r2, active).sat
    t = r1.templates[("main", "size")]
    rec1 = reconstruct(r1, frozenset(), [t.principal])
    rec2 = reconstruct(r2, frozenset(), [t.principal])
    assert rec1.rendered == rec2.rendered


def _ground_instances(term, universe, bindings):
    """All ground instantiations of a compiled term over a tiny universe."""
    tvars = sorted(_vars_of(term))
    for combo in itertools.product(universe, repeat=len(tvars)):
        yield _apply(term, dict(zip(tvars, combo)) | bindings)


def _vars_of(term):
    if isinstance(term, int):
        return {term}
    out = set()
    for a in term[1:]:
        out |= _vars_of(a)
    return out


def _apply(term, mapping):
    if isinstance(term, int):
        return mapping.get(term, term)
    return (term[0],) + tuple(_apply(a, mapping) for a in term[1:])


def test_mgu_property_by_ground_enumeration():
    # every ground solution of the equations is an instance of the MGU
    universe = [("Int",), ("Bool",), ("->", ("Int",), ("Int",))]
    eqs = [(0, ("->", 1, 2)), (2, ("Int",))]
    subst = unify_equations(eqs)
    assert subst is not None

    free = sorted(set().union(*[_vars_of(l) | _vars_of(r) for l, r in eqs]))
    for combo in itertools.product(universe, repeat=len(free)):
        assignment = dict(zip(free, combo))
        if all(_apply(l, assignment) == _apply(r, assignment) for l, r in eqs):
            # the ground solution must factor through the MGU: applying the
            # assignment to the MGU-resolved form reproduces it
            for v in free:
                resolved = subst.resolve(v)
                assert _apply(resolved, assignment) == assignment[v]


def test_concurrent_solves_share_system():
    import concurrent.futures

    system = build(fixture_source("fig1.mml"))
    subsets = [frozenset(range(k)) for k in range(len(system.soft) + 1)]
    expected = [solve(system, s).sat for s in subsets]
    with concurrent.futures.ThreadPoolExecutor(max_workers=8) as pool:
        got = list(pool.map(lambda s: solve(system, s).sat, subsets * 4))
    assert got == (expected * 4)
