"""mmlcheck: a type checker for Mini-ML that diagnoses type errors by
enumerating minimal correction subsets over the generated constraints."""

from .analysis import (
    Cause,
    Hint,
    RankWeights,
    TypeErrorGroup,
    group_errors,
    rank_causes,
    reduce_causes,
    type_hints,
)
from .constraints import (
    Constraint,
    ConstraintSystem,
    DeclTemplate,
    dump_clauses,
    generate,
    mark_structural_hard,
    merge_signature_constraints,
)
from .diagnosis import SCHEMA_VERSION, Diagnosis
from .enumeration import (
    ExplorationMap,
    SubsetFamily,
    SystemOracle,
    TableOracle,
    enumerate_subsets,
    enumerate_system,
    grow,
    shrink,
)
from .pipeline import CheckResult, Options, check_modules
from .solver import SolveVerdict, Substitution, reconstruct, solve
from .syntax import (
    Program,
    ResolutionError,
    Span,
    SyntaxErrorWithSpan,
    parse_expression,
    parse_module,
    resolve_program,
)

__version__ = "0.1.0"

__all__ = [
    "Cause",
    "CheckResult",
    "Constraint",
    "ConstraintSystem",
    "DeclTemplate",
    "Diagnosis",
    "ExplorationMap",
    "Hint",
    "Options",
    "Program",
    "RankWeights",
    "ResolutionError",
    "SCHEMA_VERSION",
    "SolveVerdict",
    "Span",
    "SubsetFamily",
    "Substitution",
    "SyntaxErrorWithSpan",
    "SystemOracle",
    "TableOracle",
    "TypeErrorGroup",
    "check_modules",
    "dump_clauses",
    "enumerate_subsets",
    "enumerate_system",
    "generate",
    "group_errors",
    "grow",
    "mark_structural_hard",
    "merge_signature_constraints",
    "parse_expression",
    "parse_module",
    "rank_causes",
    "reconstruct",
    "reduce_causes",
    "resolve_program",
    "shrink",
    "solve",
    "type_hints",
]
