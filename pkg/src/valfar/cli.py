"""Command-line entry point.

Exit codes: 0 clean, 1 errors or failed gates, 2 parse error, 3 usage error.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from valfar.concerns import (
    DEFAULT_MAX_DESC_WORDS,
    DEFAULT_OVERLAP_THRESHOLD,
    classify_concern_type,
    default_rules,
    lint_decomposition,
)
from valfar.gates import GateConfig, load_gate_config
from valfar.ingest import ParseError, import_arcade_xml, load_corpus, serialize_corpus
from valfar.matrices import build_aspect_dependency_matrix, build_crosscutting_matrix, build_theme_matrix
from valfar.model import Diagnostic, RequirementItem, Severity, ValfarError, has_errors
from valfar.report import (
    EXIT_FAILED,
    EXIT_OK,
    EXIT_PARSE,
    EXIT_USAGE,
    PipelineOptions,
    Report,
    render_report,
    run_pipeline,
    validate_corpus,
)
from valfar.themes import emit_clipped_view, extract_action_view, identify_crosscutting, load_lexicon


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # type: ignore[override]
        raise UsageError(f"{self.prog}: {message}")


def _gate_config(path: str | None) -> GateConfig:
    path = path or os.environ.get("VALFAR_CONFIG")
    if not path:
        return GateConfig()
    try:
        return load_gate_config(path)
    except ValueError as exc:
        raise UsageError(f"gate config {path}: {exc}") from None


def _read_requirements(path: str) -> list[RequirementItem]:
    text = Path(path).read_text(encoding="utf-8")
    if any(line.strip().startswith("[") for line in text.splitlines()):
        return list(load_corpus([path]).requirements)
    lines = [line.strip() for line in text.splitlines()]
    lines = [line for line in lines if line and not line.startswith("#")]
    return [RequirementItem(f"R{i}", line) for i, line in enumerate(lines, start=1)]


def _write(text: str, dest: str | None) -> None:
    if dest in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(dest).write_text(text, encoding="utf-8")


def _print_diagnostics(diags: list[Diagnostic]) -> None:
    for d in diags:
        print(d)


def cmd_validate(args: argparse.Namespace) -> int:
    options = PipelineOptions(
        gate_config=_gate_config(args.gate_config),
        lexicon=load_lexicon(args.lexicon) if args.lexicon else None,
        max_desc_words=args.max_desc_words,
        overlap_threshold=args.overlap_threshold,
        strict=args.strict,
    )
    report = run_pipeline(args.paths, options)
    sys.stdout.write(render_report(report, args.format))
    return report.exit_code()


def cmd_lint_decompose(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.paths)
    lexicon = load_lexicon(args.lexicon) if args.lexicon else None
    rules = default_rules(args.max_desc_words, args.overlap_threshold, lexicon)
    diags: list[Diagnostic] = []
    for concern in corpus.concerns:
        if lexicon:
            diags.extend(classify_concern_type(concern, lexicon))
        diags.extend(lint_decomposition(concern, corpus, rules))
    if args.strict:
        diags = [Diagnostic(d.code, Severity.ERROR, d.target, d.message) for d in diags]
    _print_diagnostics(diags)
    print(f"{sum(d.severity is Severity.ERROR for d in diags)} errors, "
          f"{sum(d.severity is Severity.WARNING for d in diags)} warnings")
    return EXIT_FAILED if has_errors(diags) else EXIT_OK


def cmd_mine_themes(args: argparse.Namespace) -> int:
    lexicon = load_lexicon(args.lexicon)
    view = identify_crosscutting(extract_action_view(_read_requirements(args.requirements), lexicon), args.k)
    for action in view.actions:
        mark = "crosscutting" if action in view.crosscutting else "base"
        reqs = ", ".join(view.requirements_of(action)) or "-"
        print(f"{action}: {mark} ({reqs})")
    if args.dot:
        _write(emit_clipped_view(view), args.dot)
    return EXIT_OK


def cmd_matrix(args: argparse.Namespace) -> int:
    corpus = load_corpus(args.paths)
    if args.kind == "crosscutting":
        matrix = build_crosscutting_matrix(corpus)
    else:
        matrix = build_aspect_dependency_matrix(corpus)
    render = matrix.to_csv if args.format == "csv" else matrix.to_text
    sys.stdout.write(render())
    if args.from_themes:
        if args.kind != "crosscutting":
            raise UsageError("--from-themes applies to --kind crosscutting only")
        view = identify_crosscutting(extract_action_view(corpus.requirements, load_lexicon(args.from_themes)), args.k)
        theme_matrix = build_theme_matrix(view, corpus)
        sys.stdout.write("\n" if args.format == "text" else "")
        sys.stdout.write(theme_matrix.to_csv() if args.format == "csv" else theme_matrix.to_text())
    return EXIT_OK


def cmd_import_xml(args: argparse.Namespace) -> int:
    diags: list[Diagnostic] = []
    corpus = import_arcade_xml(Path(args.file).read_bytes(), args.file, diags)
    for d in diags:
        print(d, file=sys.stderr)
    _write(serialize_corpus(corpus), args.output)
    return EXIT_OK


def cmd_check_gates(args: argparse.Namespace) -> int:
    ingest: list[Diagnostic] = []
    corpus = load_corpus(args.paths, ingest)
    report = validate_corpus(corpus, PipelineOptions(gate_config=_gate_config(args.gate_config)))
    gates_only = Report(counts=report.counts, gates=report.gates)
    sys.stdout.write(render_report(gates_only, args.format))
    return EXIT_OK if all(r.passed for _, _, r in report.gates) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="valfar", description="Validate aspect-oriented requirements artefacts.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def thresholds(p: argparse.ArgumentParser) -> None:
        p.add_argument("--max-desc-words", type=int, default=DEFAULT_MAX_DESC_WORDS)
        p.add_argument("--overlap-threshold", type=int, default=DEFAULT_OVERLAP_THRESHOLD)
        p.add_argument("--lexicon", help="action lexicon file, one stem per line")
        p.add_argument("--strict", action="store_true", help="treat warnings as errors")

    p = sub.add_parser("validate", help="run the full validation pipeline")
    p.add_argument("paths", nargs="+")
    p.add_argument("--gate-config")
    p.add_argument("--format", choices=("text", "json"), default="text")
    thresholds(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("lint-decompose", help="type and decomposition lints only")
    p.add_argument("paths", nargs="+")
    thresholds(p)
    p.set_defaults(func=cmd_lint_decompose)

    p = sub.add_parser("mine-themes", help="mine action themes from requirements")
    p.add_argument("requirements")
    p.add_argument("--lexicon", required=True)
    p.add_argument("-k", type=int, default=2)
    p.add_argument("--dot", help="write the clipped action view as DOT ('-' for stdout)")
    p.set_defaults(func=cmd_mine_themes)

    p = sub.add_parser("matrix", help="print a relation matrix")
    p.add_argument("paths", nargs="+")
    p.add_argument("--kind", choices=("crosscutting", "deps"), default="crosscutting")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("--from-themes", metavar="LEXICON", help="overlay mined crosscutting themes")
    p.add_argument("-k", type=int, default=2)
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("import-xml", help="convert viewpoint XML to the corpus format")
    p.add_argument("file")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_import_xml)

    p = sub.add_parser("check-gates", help="evaluate checklist gates only")
    p.add_argument("paths", nargs="+")
    p.add_argument("--gate-config")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_check_gates)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("valfar: a subcommand is required")
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except ValfarError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
