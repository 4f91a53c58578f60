"""End-to-end validation pipeline and report rendering."""

from __future__ import annotations

import json
from collections.abc import Iterable
from dataclasses import dataclass, field, replace
from pathlib import Path

from valfar.concerns import (
    DEFAULT_MAX_DESC_WORDS,
    DEFAULT_OVERLAP_THRESHOLD,
    classify_concern_type,
    default_rules,
    lint_decomposition,
    validate_concern_description,
)
from valfar.gates import (
    GateConfig,
    GateResult,
    Verdict,
    check_review_tracking,
    evaluate_aspect_checklist,
    evaluate_concern_checklist,
    validate_aspect_document,
    validate_nf_description,
)
from valfar.ingest import load_corpus
from valfar.matrices import (
    RelationMatrix,
    build_aspect_dependency_matrix,
    build_crosscutting_matrix,
    check_reference_integrity,
)
from valfar.model import (
    ChecklistKind,
    Corpus,
    Diagnostic,
    Severity,
    ValfarError,
    check_structural_integrity,
)
from valfar.themes import ActionLexicon, ActionView, extract_action_view, identify_crosscutting

# Stage keys, in the order the pipeline runs them.
STAGES = {
    "ingest": "Ingest",
    "structure": "Structural integrity",
    "phase1": "Phase 1: concern handling",
    "phase2": "Phase 2: concern validation",
    "phase3": "Phase 3: aspectual requirements",
    "matrices": "Matrices and traceability",
}

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_PARSE = 2
EXIT_USAGE = 3


@dataclass(frozen=True)
class PipelineOptions:
    gate_config: GateConfig = field(default_factory=GateConfig)
    lexicon: ActionLexicon | None = None
    max_desc_words: int = DEFAULT_MAX_DESC_WORDS
    overlap_threshold: int = DEFAULT_OVERLAP_THRESHOLD
    k: int = 2
    strict: bool = False
    mine_themes: bool = False


@dataclass
class Report:
    counts: dict[str, int] = field(default_factory=dict)
    diagnostics: dict[str, list[Diagnostic]] = field(default_factory=lambda: {s: [] for s in STAGES})
    gates: list[tuple[str, str, GateResult]] = field(default_factory=list)
    matrices: dict[str, RelationMatrix] = field(default_factory=dict)
    themes: ActionView | None = None

    def all_diagnostics(self) -> list[Diagnostic]:
        return [d for stage in STAGES for d in self.diagnostics.get(stage, [])]

    def count(self, severity: Severity) -> int:
        return sum(1 for d in self.all_diagnostics() if d.severity is severity)

    def exit_code(self) -> int:
        if self.count(Severity.ERROR):
            return EXIT_FAILED
        if any(not result.passed for _, _, result in self.gates):
            return EXIT_FAILED
        return EXIT_OK


class _Collector:
    """Routes diagnostics to stages, keeping only the first copy of each."""

    def __init__(self, report: Report, strict: bool) -> None:
        self.report = report
        self.strict = strict
        self.seen: set[Diagnostic] = set()

    def add(self, stage: str, diagnostics: Iterable[Diagnostic]) -> None:
        for d in diagnostics:
            if self.strict and d.severity is Severity.WARNING:
                d = replace(d, severity=Severity.ERROR)
            if d in self.seen:
                continue
            self.seen.add(d)
            self.report.diagnostics[stage].append(d)


def validate_corpus(
    corpus: Corpus, options: PipelineOptions | None = None, ingest: Iterable[Diagnostic] = ()
) -> Report:
    """Run every validation stage over an already parsed corpus."""
    options = options or PipelineOptions()
    report = Report(counts=corpus.counts())
    out = _Collector(report, options.strict)
    out.add("ingest", ingest)

    structural = check_structural_integrity(corpus)
    out.add("structure", structural)

    rules = default_rules(options.max_desc_words, options.overlap_threshold, options.lexicon)
    for concern in corpus.concerns:
        if options.lexicon:
            out.add("phase1", classify_concern_type(concern, options.lexicon))
        out.add("phase1", lint_decomposition(concern, corpus, rules))
        out.add("phase1", validate_concern_description(concern, corpus))

    for nf in corpus.nf_descriptions:
        out.add("phase2", validate_nf_description(nf, corpus))
    out.add("phase2", check_review_tracking(corpus))
    for resp in corpus.checklists:
        target = corpus.checklist_target(resp)
        if target is None:
            continue
        if resp.kind is ChecklistKind.CONCERN_EVALUATION:
            report.gates.append(("phase2", target.name, evaluate_concern_checklist(resp, options.gate_config)))

    for aspect in corpus.aspects:
        out.add("phase3", validate_aspect_document(aspect, corpus))
    for resp in corpus.checklists:
        target = corpus.checklist_target(resp)
        if target is not None and resp.kind is ChecklistKind.ASPECT_VALIDATION:
            result = evaluate_aspect_checklist(resp, options.gate_config, target)
            report.gates.append(("phase3", target.name, result))

    report.matrices["crosscutting"] = build_crosscutting_matrix(corpus)
    try:
        report.matrices["dependency"] = build_aspect_dependency_matrix(corpus)
    except ValfarError:
        pass  # already reported as SELF_DEPENDENCY by the structural check
    out.add("matrices", check_reference_integrity(corpus))

    if options.mine_themes and options.lexicon and corpus.requirements:
        report.themes = identify_crosscutting(extract_action_view(corpus.requirements, options.lexicon), options.k)
    return report


def run_pipeline(paths: Iterable[str | Path], options: PipelineOptions | None = None) -> Report:
    """Parse the corpus files and validate them in phase order.

    ParseError propagates; every later stage runs even when an earlier one
    reports problems.
    """
    paths = list(paths)
    if not paths:
        raise ValueError("at least one corpus path is required")
    ingest: list[Diagnostic] = []
    corpus = load_corpus(paths, ingest)
    return validate_corpus(corpus, options, ingest)


def _gate_line(name: str, result: GateResult) -> str:
    detail = ""
    if result.verdict is Verdict.FAIL:
        detail = f" [{', '.join(result.failing_questions)}]"
    elif result.verdict is Verdict.INCOMPLETE:
        detail = f" [unanswered {', '.join(result.unanswered)}]"
    return f"{name}: {result.verdict.value}{detail} (review {result.review_count})"


def _render_text(report: Report) -> str:
    lines = ["valfar validation report"]
    if report.counts:
        lines.append("corpus: " + ", ".join(f"{v} {k.replace('_', ' ')}" for k, v in report.counts.items()))
    for stage, title in STAGES.items():
        diags = report.diagnostics.get(stage, [])
        gates = [(name, r) for s, name, r in report.gates if s == stage]
        if not diags and not gates:
            continue
        lines.append("")
        lines.append(f"== {title}")
        lines.extend(f"  {_gate_line(name, r)}" for name, r in gates)
        lines.extend(f"  {d}" for d in diags)
    for key, matrix in report.matrices.items():
        if not matrix.row_labels:
            continue
        lines.append("")
        lines.append(f"== {key} matrix")
        lines.extend("  " + row if row else "" for row in matrix.to_text().rstrip("\n").split("\n"))
    if report.themes is not None:
        lines.append("")
        lines.append("== themes")
        lines.append("  crosscutting: " + ", ".join(a for a in report.themes.actions if a in report.themes.crosscutting))
        lines.append("  base: " + ", ".join(report.themes.base))
    lines.append("")
    lines.append(f"{report.count(Severity.ERROR)} errors, {report.count(Severity.WARNING)} warnings")
    return "\n".join(lines) + "\n"


def _render_json(report: Report) -> str:
    records = []
    for stage in STAGES:
        for d in report.diagnostics.get(stage, []):
            records.append(
                {
                    "record": "diagnostic",
                    "stage": stage,
                    "code": d.code,
                    "severity": d.severity.value,
                    "target": d.target,
                    "message": d.message,
                }
            )
    for stage, name, r in report.gates:
        records.append(
            {
                "record": "gate",
                "stage": stage,
                "target": r.target_id,
                "name": name,
                "kind": r.kind.value,
                "verdict": r.verdict.value,
                "failing_questions": list(r.failing_questions),
                "unanswered": list(r.unanswered),
                "review_count": r.review_count,
            }
        )
    return "".join(json.dumps(rec, sort_keys=True) + "\n" for rec in records)


def render_report(report: Report, format: str = "text") -> str:
    if format == "text":
        return _render_text(report)
    if format == "json":
        return _render_json(report)
    raise ValfarError("UNKNOWN_FORMAT", f"unknown report format {format!r}")
