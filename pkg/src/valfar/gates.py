"""Non-functional and aspect template validation, checklist gates, review tracking."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from valfar.model import (
    ASPECT_QUESTIONS,
    CONCERN_QUESTIONS,
    Answer,
    AspectDocument,
    ChecklistKind,
    ChecklistResponse,
    Concern,
    ConcernType,
    Corpus,
    Diagnostic,
    NfDescription,
    Priority,
    ValfarError,
    error,
    normalize_id,
    sort_diagnostics,
    warning,
)


def _default_expected() -> dict[str, Answer]:
    expected = {q: Answer.YES for q in (*CONCERN_QUESTIONS, *ASPECT_QUESTIONS)}
    # "Are there missing details or anything forgotten?" passes on No.
    expected["C2"] = Answer.NO
    return expected


@dataclass(frozen=True)
class GateConfig:
    expected_answers: dict[str, Answer] = field(default_factory=_default_expected)

    def __post_init__(self) -> None:
        missing = set(CONCERN_QUESTIONS) | set(ASPECT_QUESTIONS)
        missing -= set(self.expected_answers)
        if missing:
            raise ValueError(f"gate config lacks questions {sorted(missing)}")

    def with_overrides(self, overrides: dict[str, Answer]) -> GateConfig:
        return GateConfig({**self.expected_answers, **overrides})


_CONFIG_LINE = re.compile(r"^([A-Za-z][A-Za-z0-9_]*)\s*=\s*(\S+)\s*$")


def parse_gate_config(text: str, base: GateConfig | None = None) -> GateConfig:
    """``question = yes|no`` lines over the default expectations."""
    overrides: dict[str, Answer] = {}
    valid = set(CONCERN_QUESTIONS) | set(ASPECT_QUESTIONS)
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        match = _CONFIG_LINE.match(line)
        if match is None:
            raise ValueError(f"line {lineno}: expected 'question = yes|no'")
        question, value = match.group(1).upper(), match.group(2).casefold()
        if question not in valid:
            raise ValueError(f"line {lineno}: unknown question {match.group(1)!r}")
        if value not in ("yes", "no"):
            raise ValueError(f"line {lineno}: expected yes or no, got {match.group(2)!r}")
        overrides[question] = Answer(value)
    return (base or GateConfig()).with_overrides(overrides)


def load_gate_config(path: str | Path) -> GateConfig:
    return parse_gate_config(Path(path).read_text(encoding="utf-8"))


class Verdict(str, Enum):
    PASS = "Pass"
    FAIL = "Fail"
    INCOMPLETE = "Incomplete"


@dataclass(frozen=True)
class GateResult:
    target_id: str
    kind: ChecklistKind
    verdict: Verdict
    failing_questions: tuple[str, ...] = ()
    review_count: int = 0
    unanswered: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        return self.verdict is Verdict.PASS


def _evaluate(response: ChecklistResponse, config: GateConfig, kind: ChecklistKind) -> GateResult:
    if response.kind is not kind:
        raise ValfarError("WRONG_KIND", f"expected a {kind.value} checklist, got {response.kind.value}")
    questions = kind.questions
    unanswered = tuple(q for q in questions if q not in response.answers)
    if unanswered:
        return GateResult(response.target_id, kind, Verdict.INCOMPLETE, (), response.review_count, unanswered)
    failing = tuple(q for q in questions if response.answers[q] != config.expected_answers[q])
    verdict = Verdict.FAIL if failing else Verdict.PASS
    return GateResult(response.target_id, kind, verdict, failing, response.review_count)


def evaluate_concern_checklist(response: ChecklistResponse, config: GateConfig | None = None) -> GateResult:
    """Completeness and consistency gate for a concern.

    Incomplete while any of C1-C5/S1-S5 is unanswered; otherwise Fail naming
    each answer that differs from the expected one, else Pass.
    """
    return _evaluate(response, config or GateConfig(), ChecklistKind.CONCERN_EVALUATION)


def evaluate_aspect_checklist(
    response: ChecklistResponse, config: GateConfig | None = None, aspect: AspectDocument | None = None
) -> GateResult:
    """Validation gate for an aspectual requirement (A1-A5)."""
    if aspect is not None and response.kind is ChecklistKind.ASPECT_VALIDATION:
        if normalize_id(response.target_id) != normalize_id(aspect.id):
            raise ValueError(f"checklist targets {response.target_id!r}, not aspect {aspect.id!r}")
    return _evaluate(response, config or GateConfig(), ChecklistKind.ASPECT_VALIDATION)


def validate_nf_description(nf: NfDescription, corpus: Corpus) -> list[Diagnostic]:
    found: list[Diagnostic] = []
    target = nf.id or "?"
    for label, value in (("id", nf.id), ("name", nf.name), ("specification", nf.specification)):
        if not value.strip():
            found.append(error("MISSING_FIELD", target, f"{label} is missing"))
    if not nf.related_concerns:
        found.append(error("MISSING_FIELD", target, "related concerns are missing"))
    for ref in nf.related_concerns:
        hit = corpus.concern(ref)
        if hit is None:
            if corpus.nf_description(ref) is not None:
                found.append(error("TYPE_MISMATCH", target, f"related concern {ref!r} is non-functional"))
            else:
                found.append(error("REF_UNRESOLVED", target, f"related concern {ref!r} does not resolve"))
        elif hit.ctype is not ConcernType.FUNCTIONAL:
            found.append(error("TYPE_MISMATCH", target, f"related concern {ref!r} is non-functional"))
    same_name = corpus.concern(nf.name) if nf.name.strip() else None
    if same_name is not None and same_name.ctype is ConcernType.FUNCTIONAL:
        found.append(error("TYPE_MISMATCH", target,
                           f"describes {same_name.name!r}, which is declared functional"))
    return sort_diagnostics(found)


def validate_aspect_document(aspect: AspectDocument, corpus: Corpus) -> list[Diagnostic]:
    found: list[Diagnostic] = []
    target = aspect.id or "?"
    for label, value in (("id", aspect.id), ("name", aspect.name), ("description", aspect.description)):
        if not value.strip():
            found.append(error("MISSING_FIELD", target, f"{label} is missing"))
    if not aspect.concerns:
        found.append(error("MISSING_FIELD", target, "concerns are missing"))
    if not aspect.priority.strip():
        found.append(error("MISSING_FIELD", target, "priority is missing"))
    elif aspect.priority not in {p.value for p in Priority}:
        found.append(error("BAD_PRIORITY", target, f"priority {aspect.priority!r} is not High, Medium or Low"))
    if aspect.crosscuts_all:
        if not corpus.functional_concerns():
            found.append(error("EMPTY_EXPANSION", target, "ALL expands to no functional concern"))
    else:
        for ref in aspect.concerns:
            if corpus.concern(ref) is None and corpus.nf_description(ref) is None:
                found.append(error("REF_UNRESOLVED", target, f"concern {ref!r} does not resolve"))
    if not (aspect.precondition or "").strip() and not (aspect.postcondition or "").strip():
        found.append(error("MISSING_CONDITION", target, "neither pre-condition nor post-condition given"))
    return sort_diagnostics(found)


def check_review_tracking(corpus: Corpus) -> list[Diagnostic]:
    """Review-count bookkeeping across entities and their checklists."""
    found: list[Diagnostic] = []
    for resp in corpus.checklists:
        target = corpus.checklist_target(resp)
        # Aspect documents carry no review count of their own.
        if isinstance(target, (Concern, NfDescription)) and target.review_count != resp.review_count:
            found.append(
                warning(
                    "REVIEW_DRIFT",
                    target.id,
                    f"{resp.kind.value} checklist records review {resp.review_count}, "
                    f"entity records {target.review_count}",
                )
            )
    for entity in (*corpus.concerns, *corpus.nf_descriptions):
        if entity.review_count >= 1 and entity.revision_date is None:
            found.append(warning("STALE_DATE", entity.id,
                                 f"reviewed {entity.review_count} time(s) but no revision date"))
    return sort_diagnostics(found)
