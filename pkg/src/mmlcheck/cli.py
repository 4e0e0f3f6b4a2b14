"""Command-line entry point.

Exit codes: 0 = well-typed, 1 = type errors diagnosed, 2 = I/O, parse,
manifest or name-resolution failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .analysis import RankWeights
from .constraints import dump_clauses
from .pipeline import CheckResult, Options, build_system, check_modules
from .syntax.lexer import SyntaxErrorWithSpan
from .syntax.resolve import ResolutionError

STAR = "★"


def load_manifest(path: Path) -> tuple[list[tuple[str, str]], list[tuple[str, str]]]:
    """Read a manifest file listing modules and import edges."""
    try:
        doc = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        raise ValueError(f"{path}: invalid manifest JSON: {e}") from e
    modules = []
    for entry in doc.get("modules", []):
        module_id = entry["id"]
        src_path = path.parent / entry["path"]
        modules.append((module_id, src_path.read_text(encoding="utf-8")))
    imports = [tuple(edge) for edge in doc.get("imports", [])]
    return modules, imports


def modules_from_paths(paths: list[str]) -> list[tuple[str, str]]:
    modules = []
    for p in paths:
        path = Path(p)
        modules.append((path.stem, path.read_text(encoding="utf-8")))
    return modules


def options_from_args(args: argparse.Namespace) -> Options:
    weights = RankWeights()
    if args.weights:
        parts = [float(x) for x in args.weights.split(",")]
        if len(parts) not in (3, 4):
            raise ValueError("--weights expects w1,w2,w3 or w1,w2,w3,w4")
        weights = RankWeights(*parts)
    return Options(
        merge_signatures=not args.no_merge_signatures,
        structural_hard=not args.no_structural_hard,
        reduce=not args.no_reduce,
        top_k=args.top_k,
        weights=weights,
        max_solve_calls=args.max_solve_calls,
        enum_timeout_ms=args.enum_timeout_ms,
        with_hints=not args.no_hints,
    )


def render_human(result: CheckResult, stats: bool) -> str:
    d = result.diagnosis
    lines: list[str] = []
    if not d.errors:
        lines.append("No type errors.")
    else:
        n = len(d.errors)
        lines.append(f"{n} type error{'s' if n != 1 else ''} found.")
    if d.partial:
        lines.append("note: enumeration budget exhausted; cause list may be incomplete")
    sources = {m.module_id: m.source for m in result.program.modules}

    for err in d.errors:
        first = err.spans[0]
        where = f"{first['module']}:{first['start_line']}:{first['start_col']}"
        lines.append("")
        lines.append(f"error {err.error_id} at {where} — {len(err.causes)} possible cause(s)")
        for cause in err.causes:
            stars = STAR * cause.stars if cause.stars else "   "
            parts = []
            for s in cause.spans:
                sp = s["span"]
                snippet = ""
                src = sources.get(sp["module"])
                if src is not None and sp["start_line"] == sp["end_line"]:
                    line = src.split("\n")[sp["start_line"] - 1]
                    snippet = line[sp["start_col"] - 1 : sp["end_col"] - 1]
                loc = f"{sp['module']}:{sp['start_line']}:{sp['start_col']}"
                parts.append(f"{snippet or '<expr>'} ({loc}) :: {s['expected_type']}")
            lines.append(f"  {stars:<3} {cause.cause_id}  change " + "; ".join(parts))
        top = next((c for c in err.causes if c.stars == 3), None)
        if top and err.hints_by_cause.get(top.cause_id):
            lines.append(f"  type hints under {top.cause_id}:")
            for h in err.hints_by_cause[top.cause_id]:
                sp = h["span"]
                loc = f"{sp['module']}:{sp['start_line']}:{sp['start_col']}"
                lines.append(f"    {loc} :: {h['type']} ({h['kind']})")
    if stats:
        lines.append("")
        lines.append(
            "stats: "
            + ", ".join(f"{k}={v}" for k, v in sorted(result.diagnosis.stats.items()))
        )
    return "\n".join(lines) + "\n"


def cmd_check(args: argparse.Namespace) -> int:
    try:
        options = options_from_args(args)
        if args.manifest:
            modules, imports = load_manifest(Path(args.manifest))
            modules += modules_from_paths(args.paths)
        else:
            if not args.paths:
                print("error: no input files", file=sys.stderr)
                return 2
            modules, imports = modules_from_paths(args.paths), []
    except (OSError, ValueError, KeyError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    try:
        if args.dump_constraints:
            from .syntax.resolve import resolve_program

            program = resolve_program(modules, imports)
            system = build_system(program, options)
            sys.stdout.write(dump_clauses(system))
            return 0
        result = check_modules(modules, imports, options)
    except SyntaxErrorWithSpan as e:
        print(f"syntax error: {e}", file=sys.stderr)
        return 2
    except ResolutionError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2

    if args.json:
        sys.stdout.write(result.diagnosis.to_json())
    else:
        sys.stdout.write(render_human(result, args.stats))
    return 1 if result.diagnosis.errors else 0


def cmd_serve(args: argparse.Namespace) -> int:
    from .service import serve

    root = Path(args.root)
    if not root.is_dir():
        print(f"error: root directory {root} does not exist", file=sys.stderr)
        return 2
    try:
        options = options_from_args(args)
        serve(root, args.port, options=options, ui_dir=args.ui_dir)
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return 0


def build_arg_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mmlcheck", description="Mini-ML type checker and type-error debugger")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_pipeline_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--no-merge-signatures", action="store_true", help="keep one constraint per signature sub-node")
        p.add_argument("--no-structural-hard", action="store_true", help="keep structural shells retractable")
        p.add_argument("--no-reduce", action="store_true", help="disable set-cover cause reduction")
        p.add_argument("--top-k", type=int, default=None, help="limit causes per error in output")
        p.add_argument("--weights", default=None, help="ranking weights w1,w2,w3[,w4]")
        p.add_argument("--max-solve-calls", type=int, default=None, help="enumeration budget (solver queries)")
        p.add_argument("--enum-timeout-ms", type=float, default=None, help="enumeration budget (wall clock)")
        p.add_argument("--no-hints", action="store_true", help="skip type-hint reconstruction")

    check = sub.add_parser("check", help="type check files and print a diagnosis")
    check.add_argument("paths", nargs="*", help=".mml source files")
    check.add_argument("--manifest", help="JSON manifest listing modules and import edges")
    check.add_argument("--json", action="store_true", help="emit the diagnosis document as JSON")
    check.add_argument("--dump-constraints", action="store_true", help="print the generated constraint clauses")
    check.add_argument("--stats", action="store_true", help="print enumeration statistics")
    add_pipeline_flags(check)

    serve_p = sub.add_parser("serve", help="serve the debugging UI and HTTP API")
    serve_p.add_argument("--root", required=True, help="directory with .mml sources")
    serve_p.add_argument("--port", type=int, default=int(os.environ.get("MMLCHECK_PORT", "8321")))
    serve_p.add_argument("--ui-dir", default=None, help="directory with built UI assets")
    add_pipeline_flags(serve_p)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_arg_parser().parse_args(argv)
    if args.command == "check":
        return cmd_check(args)
    return cmd_serve(args)


if __name__ == "__main__":
    sys.exit(main())
