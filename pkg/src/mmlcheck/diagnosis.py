"""The serializable diagnosis document: the single contract shared by
the CLI, the HTTP API and the browser UI."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .analysis import Cause, Hint, TypeErrorGroup

SCHEMA_VERSION = "1"


@dataclass
class CauseDoc:
    cause_id: str
    stars: int
    score: float
    score_breakdown: dict[str, int]
    spans: list[dict]  # {"span": ..., "expected_type": ...}
    module_decl_groups: list[dict]  # {"module", "decl", "span_indexes"}

    def to_json(self) -> dict:
        return {
            "cause_id": self.cause_id,
            "stars": self.stars,
            "score": round(self.score, 6),
            "score_breakdown": self.score_breakdown,
            "spans": self.spans,
            "module_decl_groups": self.module_decl_groups,
        }


@dataclass
class ErrorDoc:
    error_id: str
    spans: list[dict]
    causes: list[CauseDoc]
    hints_by_cause: dict[str, list[dict]]

    def to_json(self) -> dict:
        return {
            "error_id": self.error_id,
            "spans": self.spans,
            "causes": [c.to_json() for c in self.causes],
            "hints_by_cause": self.hints_by_cause,
        }


@dataclass
class Diagnosis:
    version: str = SCHEMA_VERSION
    partial: bool = False
    errors: list[ErrorDoc] = field(default_factory=list)
    timing: dict[str, float] = field(default_factory=dict)
    stats: dict[str, int] = field(default_factory=dict)

    def to_json_dict(self, include_timing: bool = True) -> dict:
        doc = {
            "version": self.version,
            "partial": self.partial,
            "errors": [e.to_json() for e in self.errors],
            "stats": self.stats,
        }
        if include_timing:
            doc["timing"] = {k: round(v, 3) for k, v in self.timing.items()}
        return doc

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_json_dict(include_timing), sort_keys=True, indent=2) + "\n"


def _hint_to_json(hint: Hint) -> dict:
    return {"span": hint.span.to_json(), "type": hint.rendered_type, "kind": hint.kind}


def build_error_doc(
    error_id: str,
    group: TypeErrorGroup,
    causes: list[Cause],
    hints: dict[str, list[Hint]],
) -> ErrorDoc:
    cause_docs = []
    for cause in causes:
        span_docs = [
            {"span": cs.span.to_json(), "expected_type": cs.expected_type} for cs in cause.spans
        ]
        # Cross-module presentation: bucket spans by (module, declaration).
        buckets: dict[tuple[str, str], list[int]] = {}
        order: list[tuple[str, str]] = []
        for i, cs in enumerate(cause.spans):
            key = cs.owner_decl
            if key not in buckets:
                buckets[key] = []
                order.append(key)
            buckets[key].append(i)
        groups_doc = [
            {"module": mod, "decl": name, "span_indexes": buckets[(mod, name)]}
            for mod, name in order
        ]
        lc, dc, fv = cause.score_breakdown
        cause_docs.append(
            CauseDoc(
                cause_id=cause.cause_id,
                stars=cause.stars,
                score=cause.score,
                score_breakdown={
                    "location_count": lc,
                    "span_decl_count": dc,
                    "free_var_count": fv,
                },
                spans=span_docs,
                module_decl_groups=groups_doc,
            )
        )
    return ErrorDoc(
        error_id=error_id,
        spans=[s.to_json() for s in group.spans],
        causes=cause_docs,
        hints_by_cause={cid: [_hint_to_json(h) for h in hs] for cid, hs in hints.items()},
    )
