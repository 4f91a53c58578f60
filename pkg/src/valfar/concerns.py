"""Concern handling: type determination, decomposition rules and template checks."""

from __future__ import annotations

import re
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field, replace
from enum import Enum

from valfar.model import (
    Concern,
    ConcernType,
    Corpus,
    Diagnostic,
    ValfarError,
    error,
    normalize_id,
    sort_diagnostics,
    warning,
)
from valfar.themes import ActionLexicon, tokenize

DEFAULT_MAX_DESC_WORDS = 60
DEFAULT_OVERLAP_THRESHOLD = 2

_DELEGATION_RE = re.compile(r"\bsee\s+(the\s+)?decomposition\b", re.IGNORECASE)
_SENTENCE_RE = re.compile(r"(?<=[.!?;])\s+")


class RuleMode(str, Enum):
    AUTOMATIC = "automatic"
    ANNOTATION_DRIVEN = "annotation_driven"


@dataclass(frozen=True)
class DecompositionRule:
    code: str
    mode: RuleMode
    text: str
    parameters: dict = field(default_factory=dict)


def default_rules(
    max_desc_words: int = DEFAULT_MAX_DESC_WORDS,
    overlap_threshold: int = DEFAULT_OVERLAP_THRESHOLD,
    lexicon: ActionLexicon | None = None,
) -> tuple[DecompositionRule, ...]:
    """The eight decomposition rules, in their canonical order."""
    auto, flag = RuleMode.AUTOMATIC, RuleMode.ANNOTATION_DRIVEN
    return (
        DecompositionRule("DEC01", flag, "part of the concern limits how a specific goal is achieved",
                          {"annotation": "limits_goal"}),
        DecompositionRule("DEC02", flag, "parts of the concern imply design constraints",
                          {"annotation": "design_constraint"}),
        DecompositionRule("DEC03", flag, "parts of the concern are not used by other concerns",
                          {"annotation": "unused_parts"}),
        DecompositionRule("DEC04", auto, "the description of the issue is too long",
                          {"max_desc_words": max_desc_words}),
        DecompositionRule("DEC05", auto, "the description refers to another concern"),
        DecompositionRule("DEC06", auto, "the concern requires information from different concerns"),
        DecompositionRule("DEC07", flag, "new concerns need to be derived from this concern",
                          {"annotation": "derive_new"}),
        DecompositionRule("DEC08", auto, "parts of the concern will be associated with other concerns",
                          {"overlap_threshold": overlap_threshold, "lexicon": lexicon}),
    )


def _sentences(text: str) -> list[str]:
    return [s for s in _SENTENCE_RE.split(text.strip()) if s.strip()]


def classify_concern_type(concern: Concern, lexicon: ActionLexicon) -> list[Diagnostic]:
    """Check the declared type against the presence of action verbs.

    Functional concerns should mention at least one action; non-functional
    ones should not be made mostly of action sentences.
    """
    text = concern.text()
    if concern.ctype is ConcernType.FUNCTIONAL:
        if not lexicon.actions_in(text):
            return [warning("TYPE_SUSPECT", concern.id,
                            f"functional concern {concern.name!r} mentions no action verb")]
        return []
    sentences = _sentences(text)
    with_verbs = sum(1 for s in sentences if lexicon.actions_in(s))
    if sentences and 2 * with_verbs >= len(sentences):
        return [warning("TYPE_SUSPECT", concern.id,
                        f"non-functional concern {concern.name!r} reads as behaviour: "
                        f"{with_verbs} of {len(sentences)} sentences carry an action verb")]
    return []


def _mentions(text: str, name: str) -> bool:
    words = tokenize(name)
    if not words:
        return False
    pattern = r"(?<![0-9a-z])" + r"[^0-9a-z]+".join(map(re.escape, words)) + r"(?![0-9a-z])"
    return re.search(pattern, text.casefold()) is not None


def mentioned_concerns(concern: Concern, corpus: Corpus) -> list[Concern]:
    """Other concerns whose name appears as a whole word in the description."""
    text = concern.text()
    own = normalize_id(concern.id)
    return [c for c in corpus.concerns if normalize_id(c.id) != own and _mentions(text, c.name)]


def lint_decomposition(
    concern: Concern, corpus: Corpus, rules: Sequence[DecompositionRule] | None = None
) -> list[Diagnostic]:
    """Decomposition warnings for one concern, one per triggered rule."""
    rules = default_rules() if rules is None else rules
    text = concern.text()
    found: list[Diagnostic] = []

    def fire(rule: DecompositionRule, detail: str) -> None:
        found.append(warning(rule.code, concern.id, f"{rule.text} ({detail})"))

    for rule in rules:
        if rule.mode is RuleMode.ANNOTATION_DRIVEN:
            flag = rule.parameters["annotation"]
            if flag in concern.annotations:
                fire(rule, f"annotated {flag}")
        elif rule.code == "DEC04":
            words = len(text.split())
            limit = rule.parameters.get("max_desc_words", DEFAULT_MAX_DESC_WORDS)
            if words > limit:
                fire(rule, f"{words} words, limit {limit}")
        elif rule.code in ("DEC05", "DEC06"):
            others = mentioned_concerns(concern, corpus)
            if rule.code == "DEC05" and len(others) == 1:
                fire(rule, f"mentions {others[0].name}")
            elif rule.code == "DEC06" and len(others) >= 2:
                fire(rule, "mentions " + ", ".join(c.name for c in others))
        elif rule.code == "DEC08":
            lexicon = rule.parameters.get("lexicon")
            threshold = rule.parameters.get("overlap_threshold", DEFAULT_OVERLAP_THRESHOLD)
            if not lexicon:
                continue
            mine = set(lexicon.actions_in(concern.successful_scenario))
            for other in corpus.concerns:
                if normalize_id(other.id) == normalize_id(concern.id):
                    continue
                shared = mine & set(lexicon.actions_in(other.successful_scenario))
                if len(shared) >= threshold:
                    fire(rule, f"shares {', '.join(sorted(shared))} with {other.name}")
    return found


def apply_decomposition(
    corpus: Corpus, parent: str, children: Iterable[tuple[str, str]]
) -> Corpus:
    """Split ``parent`` into the given ``(name, description)`` sub-concerns.

    Children inherit the parent's type and start unreviewed. The parent's
    scenario is replaced by a pointer to its decomposition and its review
    count goes up by one.
    """
    children = list(children)
    if not children:
        raise ValfarError("EMPTY_DECOMPOSITION", f"no sub-concerns supplied for {parent!r}")
    target = corpus.concern(parent)
    if target is None:
        raise ValfarError("UNKNOWN_PARENT", f"no concern {parent!r}")
    taken = {c.name.casefold() for c in corpus.concerns}
    taken_ids = {normalize_id(e.id) for e in (*corpus.concerns, *corpus.nf_descriptions, *corpus.aspects)}
    new: list[Concern] = []
    for name, description in children:
        if name.strip().casefold() in taken:
            raise ValfarError("DUP_NAME", f"a concern named {name!r} already exists")
        taken.add(name.strip().casefold())
        child_id = _fresh_id(f"{target.id}.{name.strip()}", taken_ids)
        new.append(
            Concern(
                id=child_id,
                name=name.strip(),
                ctype=target.ctype,
                objective=description,
                successful_scenario=description,
                review_count=0,
                parent=target.id,
            )
        )
    updated = replace(
        target,
        successful_scenario=f"See decomposition template for the {target.name} concern.",
        review_count=target.review_count + 1,
    )
    concerns = [updated if c is target else c for c in corpus.concerns] + new
    return replace(corpus, concerns=tuple(concerns))


def _fresh_id(base: str, taken: set[str]) -> str:
    candidate, n = base, 2
    while normalize_id(candidate) in taken:
        candidate, n = f"{base}{n}", n + 1
    taken.add(normalize_id(candidate))
    return candidate


def is_delegating(scenario: str) -> bool:
    return bool(_DELEGATION_RE.search(scenario))


def validate_concern_description(concern: Concern, corpus: Corpus | None = None) -> list[Diagnostic]:
    """Check the concern description template.

    A scenario that only points at a decomposition counts as present when the
    concern has sub-concerns in ``corpus``.
    """
    found: list[Diagnostic] = []
    for label, value in (("id", concern.id), ("name", concern.name), ("objective", concern.objective)):
        if not value.strip():
            found.append(error("MISSING_FIELD", concern.id or "?", f"{label} is missing"))
    scenario = concern.successful_scenario.strip()
    if not scenario:
        found.append(error("MISSING_FIELD", concern.id, "successful scenario is missing"))
    elif is_delegating(scenario):
        has_children = corpus is not None and bool(corpus.children(concern.id))
        if not has_children:
            found.append(error("MISSING_FIELD", concern.id,
                               "successful scenario defers to a decomposition that does not exist"))
    if not (concern.alternative_scenario or "").strip():
        found.append(warning("EMPTY_ALT", concern.id, "no alternative scenario"))
    if concern.review_count < 0:
        found.append(error("NEG_REVIEW", concern.id, f"review count {concern.review_count} is negative"))
    return sort_diagnostics(found)
