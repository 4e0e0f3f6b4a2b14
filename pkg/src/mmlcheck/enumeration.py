"""Complete MUS/MCS/MSS enumeration over the soft constraint set.

Power-set exploration in the MARCO style: a small bespoke map solver
hands out set-maximal unexplored seeds; satisfiable seeds are maximal
satisfiable subsets immediately (grow doubles as a verification pass),
unsatisfiable seeds are shrunk to minimal unsatisfiable subsets.
Correction sets are the complements of the maximal satisfiable sets.

The enumerator consults the constraint system only through an oracle's
`is_sat`, so any monotone subset oracle can stand in for the solver.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Callable, Iterable, Protocol

from .constraints import ConstraintSystem
from .solver import solve


class SolveOracle(Protocol):
    n: int
    query_count: int

    def is_sat(self, subset: frozenset[int]) -> bool: ...


class SystemOracle:
    """Adapter from a ConstraintSystem to the subset-query interface."""

    def __init__(self, system: ConstraintSystem):
        self.system = system
        self.n = len(system.soft)
        self.query_count = 0

    def is_sat(self, subset: frozenset[int]) -> bool:
        self.query_count += 1
        return solve(self.system, subset).sat


class TableOracle:
    """Monotone truth table: SAT exactly on subsets of the given maximal sets."""

    def __init__(self, n: int, maximal_sat: Iterable[frozenset[int]]):
        self.n = n
        self.maximal_sat = [frozenset(m) for m in maximal_sat]
        self.query_count = 0

    def is_sat(self, subset: frozenset[int]) -> bool:
        self.query_count += 1
        return any(subset <= m for m in self.maximal_sat)


@dataclass(frozen=True)
class SubsetFamily:
    muses: tuple[frozenset[int], ...]
    mcses: tuple[frozenset[int], ...]
    msses: tuple[frozenset[int], ...]
    query_count: int
    partial: bool = False
    n: int = 0


def _sorted_family(sets: Iterable[frozenset[int]]) -> tuple[frozenset[int], ...]:
    return tuple(sorted(set(sets), key=sorted))


class MapSearchStopped(Exception):
    """Raised when the budget interrupts the map search mid-way."""


class ExplorationMap:
    """Clause store over one boolean selector per soft constraint.

    Satisfying assignments are exactly the subsets that are neither a
    subset of a found MSS (block-down) nor a superset of a found MUS
    (block-up).
    """

    def __init__(self, n: int):
        self.n = n
        self.pos_clauses: list[frozenset[int]] = []  # at least one selector true
        self.neg_clauses: list[frozenset[int]] = []  # at least one selector false

    def block_down(self, mss: frozenset[int]) -> None:
        self.pos_clauses.append(frozenset(range(self.n)) - mss)

    def block_up(self, mus: frozenset[int]) -> None:
        self.neg_clauses.append(frozenset(mus))

    # -- seed search

    def _clauses(self) -> list[tuple[bool, tuple[int, ...]]]:
        return [(True, tuple(sorted(c))) for c in self.pos_clauses] + [
            (False, tuple(sorted(c))) for c in self.neg_clauses
        ]

    def next_seed(self, should_stop: Callable[[], bool] | None = None) -> frozenset[int] | None:
        """A set-maximal unexplored subset, or None when exhausted.

        Raises MapSearchStopped if `should_stop` fires during the search,
        so budgeted runs stay responsive even on adversarial maps.
        """
        model = self._search(should_stop)
        if model is None:
            return None
        # Greedy augmentation: flip selectors back on while no block-up
        # clause becomes fully true. Positive clauses cannot break.
        for v in range(self.n):
            if not model[v] and self._can_enable(model, v):
                model[v] = True
        return frozenset(i for i in range(self.n) if model[i])

    def _can_enable(self, model: list[bool], v: int) -> bool:
        for clause in self.neg_clauses:
            if v in clause and all(model[u] for u in clause if u != v):
                return False
        return True

    def _search(self, should_stop: Callable[[], bool] | None = None) -> list[bool] | None:
        """Complete backtracking search, branching on unsatisfied clauses.

        Unassigned selectors default to True, biasing seeds maximal.
        """
        clauses = self._clauses()
        assign: list[bool | None] = [None] * self.n
        nodes = 0

        def clause_state(sign: bool, clause: tuple[int, ...]):
            unassigned: list[int] = []
            for v in clause:
                a = assign[v]
                if a is None:
                    unassigned.append(v)
                elif a == sign:
                    return None  # satisfied
            return unassigned

        def propagate(trail: list[int]) -> bool:
            changed = True
            while changed:
                changed = False
                for sign, clause in clauses:
                    unassigned = clause_state(sign, clause)
                    if unassigned is None:
                        continue
                    if not unassigned:
                        return False
                    if len(unassigned) == 1:
                        assign[unassigned[0]] = sign
                        trail.append(unassigned[0])
                        changed = True
            return True

        def pick_clause():
            # positive clauses are satisfied by the all-True default, so
            # an unsatisfied clause here is usually a short block-up one
            best = None
            for sign, clause in clauses:
                unassigned = clause_state(sign, clause)
                if unassigned is None:
                    continue
                if best is None or len(unassigned) < len(best[1]):
                    best = (sign, unassigned)
                    if len(unassigned) <= 2:
                        break
            return best

        def search() -> bool:
            nonlocal nodes
            nodes += 1
            if should_stop is not None and nodes % 256 == 0 and should_stop():
                raise MapSearchStopped()
            trail: list[int] = []
            if not propagate(trail):
                for v in trail:
                    assign[v] = None
                return False
            picked = pick_clause()
            if picked is None:
                return True  # every clause satisfied; the rest default to True
            sign, branch_vars = picked
            falsified: list[int] = []
            for v in branch_vars:
                assign[v] = sign
                if search():
                    return True
                # this literal cannot satisfy the clause; pin it the other
                # way and let the next literal try
                assign[v] = not sign
                falsified.append(v)
            for v in falsified:
                assign[v] = None
            for v in trail:
                assign[v] = None
            return False

        if not search():
            return None
        return [a if a is not None else True for a in assign]


def grow(
    oracle: SolveOracle,
    seed: frozenset[int],
    should_stop: Callable[[], bool] | None = None,
) -> frozenset[int] | None:
    """Extend a satisfiable seed to a maximal satisfiable subset.

    Seeds produced by the map's maximal models are already maximal, so
    every extension attempt fails and this is a verification pass.
    """
    current = set(seed)
    for i in sorted(set(range(oracle.n)) - current):
        if should_stop is not None and should_stop():
            return None
        if oracle.is_sat(frozenset(current | {i})):
            current.add(i)
    return frozenset(current)


def shrink(
    oracle: SolveOracle,
    seed: frozenset[int],
    should_stop: Callable[[], bool] | None = None,
) -> frozenset[int] | None:
    """Deletion-based minimization of an unsatisfiable seed to a MUS.

    Constraints are tried in descending id order (later-generated,
    usually more local constraints first) for deterministic output.
    """
    current = set(seed)
    for i in sorted(seed, reverse=True):
        if should_stop is not None and should_stop():
            return None
        trial = frozenset(current - {i})
        if not oracle.is_sat(trial):
            current.discard(i)
    return frozenset(current)


def enumerate_subsets(
    oracle: SolveOracle,
    max_solve_calls: int | None = None,
    timeout_ms: float | None = None,
) -> SubsetFamily:
    """Enumerate every MUS, MCS and MSS of the oracle's soft set.

    With a budget the result is a sound partial family flagged
    `partial`; only fully verified members are ever reported.
    """
    n = oracle.n
    full = frozenset(range(n))
    emap = ExplorationMap(n)
    muses: list[frozenset[int]] = []
    msses: list[frozenset[int]] = []
    partial = False
    started = time.perf_counter()

    def exhausted() -> bool:
        if max_solve_calls is not None and oracle.query_count >= max_solve_calls:
            return True
        if timeout_ms is not None and (time.perf_counter() - started) * 1000.0 >= timeout_ms:
            return True
        return False

    while True:
        if exhausted():
            partial = True
            break
        try:
            seed = emap.next_seed(should_stop=exhausted)
        except MapSearchStopped:
            partial = True
            break
        if seed is None:
            break
        if oracle.is_sat(seed):
            mss = grow(oracle, seed, should_stop=exhausted)
            if mss is None:
                partial = True
                break
            msses.append(mss)
            emap.block_down(mss)
        else:
            mus = shrink(oracle, seed, should_stop=exhausted)
            if mus is None:
                partial = True
                break
            muses.append(mus)
            emap.block_up(mus)

    mcses = [full - m for m in msses]
    return SubsetFamily(
        muses=_sorted_family(muses),
        mcses=_sorted_family(mcses),
        msses=_sorted_family(msses),
        query_count=oracle.query_count,
        partial=partial,
        n=n,
    )


def enumerate_system(
    system: ConstraintSystem,
    max_solve_calls: int | None = None,
    timeout_ms: float | None = None,
) -> SubsetFamily:
    """Enumerate the families of a constraint system's soft set."""
    return enumerate_subsets(
        SystemOracle(system), max_solve_calls=max_solve_calls, timeout_ms=timeout_ms
    )
