"""Post-analysis: turn raw subset families into user-facing diagnoses.

Related conflicts are grouped into one type error per connected
component of the MUS intersection graph; each group's localized
correction sets become ranked, star-rated causes; a greedy set cover
prunes causes that only recombine already-suggested locations; and
per-cause type hints are reconstructed from the fix's maximal
satisfiable subset.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .constraints import ConstraintSystem, DeclKey
from .enumeration import SubsetFamily
from .solver import reconstruct
from .syntax.ast import Span


@dataclass(frozen=True)
class RankWeights:
    location_count: float = 1.0
    span_decl_count: float = 0.5
    free_var_count: float = 0.25
    # Optional: reward constraints that appear in many MUSes (0 = off).
    mus_hit_count: float = 0.0


@dataclass(frozen=True)
class TypeErrorGroup:
    group_id: int
    member_muses: tuple[frozenset[int], ...]
    local_constraints: frozenset[int]
    local_mcses: tuple[frozenset[int], ...]
    spans: tuple[Span, ...]


@dataclass(frozen=True)
class CauseSpan:
    span: Span
    subject: int
    owner_decl: DeclKey
    expected_type: str


@dataclass(frozen=True)
class Cause:
    cause_id: str
    mcs: frozenset[int]
    spans: tuple[CauseSpan, ...]
    score: float
    stars: int
    score_breakdown: tuple[int, int, int]  # location, decl, free-var counts
    mus_hits: int


@dataclass(frozen=True)
class Hint:
    span: Span
    rendered_type: str
    kind: str  # "expected" | "inferred"


def _span_key(span: Span) -> tuple:
    return (span.module, span.start_line, span.start_col, span.end_line, span.end_col)


def group_errors(family: SubsetFamily, system: ConstraintSystem) -> list[TypeErrorGroup]:
    """Connected components of the MUS intersection graph, one per error.

    Each group carries the correction sets projected onto its local
    constraints, deduplicated and with strict supersets dropped.
    """
    muses = list(family.muses)
    if not muses:
        return []

    parent = list(range(len(muses)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(muses)):
        for j in range(i + 1, len(muses)):
            if muses[i] & muses[j]:
                parent[find(i)] = find(j)

    components: dict[int, list[int]] = {}
    for i in range(len(muses)):
        components.setdefault(find(i), []).append(i)

    groups: list[TypeErrorGroup] = []
    for comp in components.values():
        members = tuple(sorted((muses[i] for i in comp), key=sorted))
        local: frozenset[int] = frozenset().union(*members)
        projected = {m & local for m in family.mcses} - {frozenset()}
        minimal = [
            m for m in projected if not any(other < m for other in projected)
        ]
        local_mcses = tuple(sorted(minimal, key=sorted))
        spans = sorted(
            {s for cid in local for s in system.soft[cid].spans}, key=_span_key
        )
        groups.append(TypeErrorGroup(0, members, local, local_mcses, tuple(spans)))

    groups.sort(key=lambda g: _span_key(g.spans[0]) if g.spans else ("", 0, 0, 0, 0))
    return [replace(g, group_id=i) for i, g in enumerate(groups)]


def fix_active_set(
    system: ConstraintSystem,
    groups: list[TypeErrorGroup],
    group: TypeErrorGroup,
    mcs: frozenset[int],
) -> frozenset[int]:
    """Soft ids active under this fix: retract the cause, and set aside
    the other errors' local constraints so each error is judged alone."""
    others: frozenset[int] = frozenset()
    for g in groups:
        if g.group_id != group.group_id:
            others |= g.local_constraints
    return system.all_soft_ids() - mcs - others


def rank_causes(
    group: TypeErrorGroup,
    system: ConstraintSystem,
    family: SubsetFamily,
    weights: RankWeights = RankWeights(),
    all_groups: list[TypeErrorGroup] | None = None,
) -> list[Cause]:
    """Score and order the group's causes; best first, stars on the top three.

    score = w1 * locations + w2 * touched declarations + w3 * free type
    variables left in the touched declarations after the fix (fewer of
    each is better), minus the optional MUS-membership reward.
    """
    groups = all_groups if all_groups is not None else [group]
    scored: list[tuple[tuple, Cause]] = []
    for mcs in group.local_mcses:
        constraints = [system.soft[i] for i in sorted(mcs)]
        touched = sorted({c.owner_decl for c in constraints})
        active = fix_active_set(system, groups, group, mcs)

        subject_tvars = {
            c.subject
            for c in system.soft
            if c.owner_decl in touched
        }
        span_subjects = {s for c in constraints for s in c.span_subjects}
        rec = reconstruct(system, active, subject_tvars | span_subjects)

        free: set[int] = set()
        for tv in subject_tvars:
            free |= rec.free_vars(tv)

        cause_spans = tuple(
            CauseSpan(span, subj, c.owner_decl, rec.rendered[subj])
            for c in constraints
            for span, subj in zip(c.spans, c.span_subjects)
        )
        location_count = len(cause_spans)
        decl_count = len(touched)
        free_count = len(free)
        mus_hits = sum(1 for mus in family.muses for cid in mcs if cid in mus)
        score = (
            weights.location_count * location_count
            + weights.span_decl_count * decl_count
            + weights.free_var_count * free_count
            - weights.mus_hit_count * mus_hits
        )
        span_keys = tuple(sorted(_span_key(cs.span) for cs in cause_spans))
        sort_key = (score, span_keys[0], span_keys)
        cause = Cause(
            cause_id="",
            mcs=mcs,
            spans=cause_spans,
            score=score,
            stars=0,
            score_breakdown=(location_count, decl_count, free_count),
            mus_hits=mus_hits,
        )
        scored.append((sort_key, cause))

    scored.sort(key=lambda pair: pair[0])
    return assign_stars([c for _, c in scored])


def assign_stars(ranked: list[Cause]) -> list[Cause]:
    """3/2/1 stars for the three best-ranked causes, 0 for the rest."""
    return [replace(c, stars=max(0, 3 - i)) for i, c in enumerate(ranked)]


def reduce_causes(group: TypeErrorGroup, ranked: list[Cause]) -> list[Cause]:
    """Greedy set cover over cause spans, keeping rank order.

    A cause survives only if it contributes at least one span not
    covered by earlier kept causes; the kept causes still cover every
    potentially faulty span.
    """
    covered: set[tuple] = set()
    kept: list[Cause] = []
    for cause in ranked:
        keys = {_span_key(cs.span) for cs in cause.spans}
        if keys - covered:
            covered |= keys
            kept.append(cause)
    return assign_stars(kept)


def type_hints(
    group: TypeErrorGroup,
    selected_cause: Cause,
    system: ConstraintSystem,
    all_groups: list[TypeErrorGroup] | None = None,
) -> list[Hint]:
    """Hints under the selected fix: expected types at the cause spans,
    inferred types at binders of the declarations this error touches.

    Terms not involved in the error get no hint.
    """
    groups = all_groups if all_groups is not None else [group]
    active = fix_active_set(system, groups, group, selected_cause.mcs)

    touched = {system.soft[i].owner_decl for i in group.local_constraints}
    binders = [b for b in system.binders if b.decl in touched]
    wanted = {cs.subject for cs in selected_cause.spans} | {b.tvar for b in binders}
    rec = reconstruct(system, active, wanted)

    hints = [
        Hint(cs.span, rec.rendered[cs.subject], "expected") for cs in selected_cause.spans
    ]
    hints.extend(Hint(b.span, rec.rendered[b.tvar], "inferred") for b in binders)
    hints.sort(key=lambda h: (_span_key(h.span), h.kind))
    return hints
