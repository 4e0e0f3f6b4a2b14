"""Satisfiability of constraint subsets via first-order unification.

Each call is stateless: the system's pre-expanded equation list is
filtered by the active soft-constraint set and unified from scratch
with an occurs check. Safe to call concurrently on a shared system.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .constraints import ConstraintSystem
from .terms import CanonicalNames, CompiledTerm, TypeTerm, render_term, uncompile_term


@dataclass(frozen=True)
class Substitution:
    """Most general unifier as raw bindings (tvar id -> compiled term)."""

    bindings: Mapping[int, CompiledTerm]

    def walk(self, term: CompiledTerm) -> CompiledTerm:
        while isinstance(term, int):
            nxt = self.bindings.get(term)
            if nxt is None:
                return term
            term = nxt
        return term

    def resolve(self, term: CompiledTerm) -> CompiledTerm:
        """Fully apply the substitution (result mentions only unbound vars)."""
        t = self.walk(term)
        if isinstance(t, int):
            return t
        return (t[0],) + tuple(self.resolve(a) for a in t[1:])

    def resolve_tvar(self, tvar: int) -> CompiledTerm:
        return self.resolve(tvar)

    def as_type_terms(self) -> dict[int, TypeTerm]:
        return {v: uncompile_term(self.resolve(v)) for v in self.bindings}


@dataclass(frozen=True)
class SolveVerdict:
    sat: bool
    substitution: Substitution | None = None

    def __bool__(self) -> bool:
        return self.sat


UNSAT = SolveVerdict(False)


def _occurs(var: int, term: CompiledTerm, bindings: dict[int, CompiledTerm]) -> bool:
    stack = [term]
    while stack:
        t = stack.pop()
        while isinstance(t, int):
            if t == var:
                return True
            nxt = bindings.get(t)
            if nxt is None:
                break
            t = nxt
        if not isinstance(t, int):
            stack.extend(t[1:])
    return False


def unify_equations(pairs: Iterable[tuple[CompiledTerm, CompiledTerm]]) -> Substitution | None:
    """Unify all pairs; None if impossible. Occurs check included."""
    bindings: dict[int, CompiledTerm] = {}
    stack: list[tuple[CompiledTerm, CompiledTerm]] = list(pairs)

    def walk(t: CompiledTerm) -> CompiledTerm:
        while isinstance(t, int):
            nxt = bindings.get(t)
            if nxt is None:
                return t
            t = nxt
        return t

    while stack:
        a, b = stack.pop()
        a, b = walk(a), walk(b)
        if isinstance(a, int):
            if isinstance(b, int):
                if a != b:
                    bindings[a] = b
                continue
            if _occurs(a, b, bindings):
                return None
            bindings[a] = b
            continue
        if isinstance(b, int):
            if _occurs(b, a, bindings):
                return None
            bindings[b] = a
            continue
        if a[0] != b[0] or len(a) != len(b):
            return None
        stack.extend(zip(a[1:], b[1:]))
    return Substitution(bindings)


def solve(system: ConstraintSystem, active_soft: frozenset[int] | set[int]) -> SolveVerdict:
    """SAT iff hard constraints plus the active soft subset are unifiable.

    Template instantiations are already expanded in the system; a soft
    id toggles its constraint in every instantiation at once.
    """
    pairs = [
        (lhs, rhs)
        for sel, lhs, rhs in system.equations
        if sel is None or sel in active_soft
    ]
    subst = unify_equations(pairs)
    if subst is None:
        return UNSAT
    return SolveVerdict(True, subst)


@dataclass(frozen=True)
class Reconstruction:
    """Most-general types for a satisfiable subset, rendered canonically."""

    substitution: Substitution
    rendered: dict[int, str]
    _resolved: dict[int, CompiledTerm]

    def free_vars(self, tvar: int) -> frozenset[int]:
        out: set[int] = set()
        stack = [self._resolved[tvar]]
        while stack:
            t = stack.pop()
            if isinstance(t, int):
                out.add(t)
            else:
                stack.extend(t[1:])
        return frozenset(out)


def reconstruct(
    system: ConstraintSystem,
    active_soft: frozenset[int] | set[int],
    tvars: Iterable[int] | None = None,
) -> Reconstruction:
    """Render most-general types for the given template tvars.

    Unbound variables are named a, b, c, ... in first-appearance order
    across the whole request, so one call yields a consistent view.
    Querying an unsatisfiable subset is a programming error.
    """
    verdict = solve(system, active_soft)
    if not verdict.sat:
        raise ValueError("reconstruct() called on an unsatisfiable subset")
    assert verdict.substitution is not None
    subst = verdict.substitution

    if tvars is None:
        requested = sorted({tv for g in system.groups for tv in g.tvars})
    else:
        requested = sorted(set(tvars))

    names = CanonicalNames()
    resolved: dict[int, CompiledTerm] = {}
    rendered: dict[int, str] = {}
    for tv in requested:
        resolved[tv] = subst.resolve(tv)
        rendered[tv] = render_term(resolved[tv], names)
    return Reconstruction(subst, rendered, resolved)
