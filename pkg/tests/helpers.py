"""Shared test utilities: fixture loading, the independent brute-force
subset classifier, and family well-formedness checks."""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

from mmlcheck.enumeration import SubsetFamily
from mmlcheck.syntax.ast import Span

TESTS_DIR = Path(__file__).parent
FIXTURES = TESTS_DIR / "fixtures"
CORPUS_DIR = TESTS_DIR.parent / "corpus"


def fixture_source(name: str) -> str:
    return (FIXTURES / name).read_text(encoding="utf-8")


def fixture_modules(name: str) -> list[tuple[str, str]]:
    return [(Path(name).stem, fixture_source(name))]


def fig6_modules() -> tuple[list[tuple[str, str]], list[tuple[str, str]]]:
    manifest = json.loads((FIXTURES / "fig6" / "manifest.json").read_text())
    modules = [
        (m["id"], (FIXTURES / "fig6" / m["path"]).read_text(encoding="utf-8"))
        for m in manifest["modules"]
    ]
    imports = [tuple(e) for e in manifest["imports"]]
    return modules, imports


# --- corpus ------------------------------------------------------------------


@dataclass(frozen=True)
class CorpusProgram:
    name: str
    modules: list[tuple[str, str]]
    imports: list[tuple[str, str]]
    well_typed: bool
    expected_miss: bool
    oracle_spans: tuple[Span, ...]
    description: str


def find_text_span(module_id: str, source: str, text: str, occurrence: int) -> Span:
    """Span of the nth occurrence of `text` in `source` (1-based columns)."""
    idx = -1
    for _ in range(occurrence):
        idx = source.find(text, idx + 1)
        if idx < 0:
            raise AssertionError(f"{text!r} (occurrence {occurrence}) not in {module_id}")
    line = source.count("\n", 0, idx) + 1
    col = idx - (source.rfind("\n", 0, idx) + 1) + 1
    lines = text.split("\n")
    if len(lines) == 1:
        return Span(module_id, line, col, line, col + len(text))
    return Span(module_id, line, col, line + len(lines) - 1, len(lines[-1]) + 1)


def load_corpus() -> list[CorpusProgram]:
    doc = json.loads((CORPUS_DIR / "corpus.json").read_text(encoding="utf-8"))
    programs = []
    for entry in doc["programs"]:
        modules = [
            (m["id"], (CORPUS_DIR / m["path"]).read_text(encoding="utf-8"))
            for m in entry["modules"]
        ]
        sources = dict(modules)
        oracle = entry.get("oracle", {})
        spans = tuple(
            find_text_span(m["module"], sources[m["module"]], m["text"], m["occurrence"])
            for m in oracle.get("matches", [])
        )
        programs.append(
            CorpusProgram(
                name=entry["name"],
                modules=modules,
                imports=[tuple(e) for e in entry.get("imports", [])],
                well_typed=entry["well_typed"],
                expected_miss=entry.get("expected_miss", False),
                oracle_spans=spans,
                description=oracle.get("description", ""),
            )
        )
    return programs


# --- independent brute-force classification ----------------------------------


def brute_force_families(is_sat, n: int) -> tuple[list[frozenset], list[frozenset], list[frozenset]]:
    """Classify all 2^n subsets by direct enumeration.

    Independent of the MARCO path: every subset is queried, maximality
    and minimality are checked by definition.
    """
    size = 1 << n

    def subset_of(mask: int) -> frozenset[int]:
        return frozenset(i for i in range(n) if mask >> i & 1)

    sat = [bool(is_sat(subset_of(m))) for m in range(size)]
    full = size - 1

    msses = [
        m
        for m in range(size)
        if sat[m] and all(not sat[m | (1 << i)] for i in range(n) if not m >> i & 1)
    ]
    muses = [
        m
        for m in range(size)
        if not sat[m] and all(sat[m & ~(1 << i)] for i in range(n) if m >> i & 1)
    ]
    mcses = [full ^ m for m in msses]

    def family(masks: list[int]) -> list[frozenset]:
        return sorted((subset_of(m) for m in masks), key=sorted)

    return family(muses), family(mcses), family(msses)


def families_equal(family: SubsetFamily, brute) -> bool:
    muses, mcses, msses = brute
    return (
        list(family.muses) == muses
        and list(family.mcses) == mcses
        and list(family.msses) == msses
    )


def minimal_hitting_sets(sets: list[frozenset]) -> list[frozenset]:
    """All inclusion-minimal hitting sets, by direct enumeration."""
    if not sets:
        return []
    universe = sorted(frozenset().union(*sets))
    hitting: list[frozenset] = []
    for r in range(1, len(universe) + 1):
        for combo in combinations(universe, r):
            s = frozenset(combo)
            if all(s & target for target in sets):
                if not any(h <= s for h in hitting):
                    hitting.append(s)
    return sorted(hitting, key=sorted)


def assert_family_wellformed(family: SubsetFamily, is_sat=None) -> None:
    """Duality, complement pairing and antichain checks for one family."""
    full = frozenset(range(family.n))

    for mus in family.muses:
        for mcs in family.mcses:
            assert mus & mcs, f"MUS {sorted(mus)} misses MCS {sorted(mcs)}"

    assert sorted(map(sorted, family.mcses)) == sorted(
        sorted(full - mss) for mss in family.msses
    ), "MCS/MSS complement pairing broken"

    for name, fam in (("MUS", family.muses), ("MCS", family.mcses), ("MSS", family.msses)):
        assert len(set(fam)) == len(fam), f"duplicate {name}"
        for a in fam:
            for b in fam:
                if a is not b:
                    assert not a < b, f"{name} family is not an antichain"

    if is_sat is not None and not family.partial:
        for mus in family.muses:
            assert not is_sat(mus)
            for c in mus:
                assert is_sat(mus - {c})
        for mss in family.msses:
            assert is_sat(mss)
            for c in full - mss:
                assert not is_sat(mss | {c})
