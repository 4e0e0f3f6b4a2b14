"""End-to-end checking pipeline shared by the CLI and the HTTP service."""

from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

from .analysis import (
    Cause,
    RankWeights,
    TypeErrorGroup,
    group_errors,
    rank_causes,
    reduce_causes,
    type_hints,
)
from .constraints import (
    ConstraintSystem,
    generate,
    mark_structural_hard,
    merge_signature_constraints,
)
from .diagnosis import Diagnosis, build_error_doc
from .enumeration import SubsetFamily, SystemOracle, enumerate_subsets
from .solver import solve
from .syntax.ast import Program
from .syntax.resolve import resolve_program


@dataclass(frozen=True)
class Options:
    merge_signatures: bool = True
    structural_hard: bool = True
    reduce: bool = True
    top_k: int | None = None
    weights: RankWeights = RankWeights()
    max_solve_calls: int | None = None
    enum_timeout_ms: float | None = None
    with_hints: bool = True


@dataclass
class CheckResult:
    diagnosis: Diagnosis
    program: Program
    system: ConstraintSystem
    family: SubsetFamily | None = None
    groups: list[TypeErrorGroup] = field(default_factory=list)
    causes_by_group: dict[int, list[Cause]] = field(default_factory=dict)
    pre_reduction_by_group: dict[int, list[Cause]] = field(default_factory=dict)


def build_system(program: Program, options: Options = Options()) -> ConstraintSystem:
    system = generate(program)
    if options.merge_signatures:
        system = merge_signature_constraints(system)
    if options.structural_hard:
        system = mark_structural_hard(system)
    return system


def check_modules(
    modules: list[tuple[str, str]],
    imports: list[tuple[str, str]] | None = None,
    options: Options = Options(),
) -> CheckResult:
    """Check (module_id, source) pairs and assemble the diagnosis document."""
    timing: dict[str, float] = {}
    t0 = time.perf_counter()
    program = resolve_program(modules, imports)
    t1 = time.perf_counter()
    timing["parse_ms"] = (t1 - t0) * 1000.0

    system = build_system(program, options)
    t2 = time.perf_counter()
    timing["generate_ms"] = (t2 - t1) * 1000.0

    verdict = solve(system, system.all_soft_ids())
    diagnosis = Diagnosis()
    result = CheckResult(diagnosis, program, system)
    if verdict.sat:
        t3 = time.perf_counter()
        timing["enumerate_ms"] = 0.0
        timing["analyze_ms"] = 0.0
        timing["total_ms"] = (t3 - t0) * 1000.0
        diagnosis.timing = timing
        diagnosis.stats = {
            "query_count": 1,
            "soft_constraints": len(system.soft),
            "pre_reduction_causes": 0,
            "post_reduction_causes": 0,
        }
        return result

    oracle = SystemOracle(system)
    oracle.query_count = 1  # count the well-typedness probe above
    family = enumerate_subsets(
        oracle, max_solve_calls=options.max_solve_calls, timeout_ms=options.enum_timeout_ms
    )
    result.family = family
    t3 = time.perf_counter()
    timing["enumerate_ms"] = (t3 - t2) * 1000.0

    groups = group_errors(family, system)
    result.groups = groups
    diagnosis.partial = family.partial

    pre_total = 0
    post_total = 0
    for group in groups:
        ranked = rank_causes(group, system, family, options.weights, all_groups=groups)
        result.pre_reduction_by_group[group.group_id] = ranked
        pre_total += len(ranked)
        causes = reduce_causes(group, ranked) if options.reduce else ranked
        post_total += len(causes)
        result.causes_by_group[group.group_id] = causes

    for group in groups:
        error_id = f"E{group.group_id + 1}"
        causes = result.causes_by_group[group.group_id]
        if options.top_k is not None:
            causes = causes[: options.top_k]
        causes = [
            replace(c, cause_id=f"{error_id}.C{i + 1}") for i, c in enumerate(causes)
        ]
        result.causes_by_group[group.group_id] = causes
        hints = {}
        if options.with_hints:
            for cause in causes:
                try:
                    hints[cause.cause_id] = type_hints(group, cause, system, all_groups=groups)
                except ValueError:
                    # partial-enumeration artifact: complement not satisfiable
                    hints[cause.cause_id] = []
        diagnosis.errors.append(build_error_doc(error_id, group, causes, hints))

    t4 = time.perf_counter()
    timing["analyze_ms"] = (t4 - t3) * 1000.0
    timing["total_ms"] = (t4 - t0) * 1000.0
    diagnosis.timing = timing
    diagnosis.stats = {
        "query_count": family.query_count,
        "soft_constraints": len(system.soft),
        "pre_reduction_causes": pre_total,
        "post_reduction_causes": post_total,
    }
    return result
