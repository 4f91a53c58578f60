"""Domain types for a requirements corpus and the corpus-wide integrity check."""

from __future__ import annotations

import re
from collections import defaultdict
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field
from datetime import date
from enum import Enum

ALL = "ALL"

CONCERN_QUESTIONS = ("C1", "C2", "C3", "C4", "C5", "S1", "S2", "S3", "S4", "S5")
ASPECT_QUESTIONS = ("A1", "A2", "A3", "A4", "A5")

ANNOTATION_FLAGS = ("limits_goal", "design_constraint", "unused_parts", "derive_new")


class ValfarError(Exception):
    """An operation refused its input. ``code`` is a diagnostic-registry token."""

    def __init__(self, code: str, message: str) -> None:
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


class ConcernType(str, Enum):
    FUNCTIONAL = "functional"
    NON_FUNCTIONAL = "nonfunctional"


class Priority(str, Enum):
    HIGH = "High"
    MEDIUM = "Medium"
    LOW = "Low"


class ChecklistKind(str, Enum):
    CONCERN_EVALUATION = "concern_evaluation"
    ASPECT_VALIDATION = "aspect_validation"

    @property
    def questions(self) -> tuple[str, ...]:
        if self is ChecklistKind.CONCERN_EVALUATION:
            return CONCERN_QUESTIONS
        return ASPECT_QUESTIONS


class Answer(str, Enum):
    YES = "yes"
    NO = "no"


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"
    INFO = "info"


# code -> one-line meaning. Diagnostic refuses anything not listed here.
DIAGNOSTIC_REGISTRY: dict[str, str] = {
    "DUP_ID": "two entities share an identifier",
    "DUP_NAME": "two entities of one kind share a name",
    "REF_UNRESOLVED": "a cross-entity reference names nothing",
    "PARENT_CYCLE": "the concern decomposition contains a cycle",
    "SELF_DEPENDENCY": "an aspect depends on itself",
    "BAD_NAME": "an entity name is empty or spans lines",
    "BAD_QUESTION": "a checklist answers a question outside its kind",
    "UNKNOWN_KEY": "a corpus block carries an unrecognised key",
    "UNKNOWN_ELEMENT": "an imported XML element was skipped",
    "TYPE_SUSPECT": "declared concern type disagrees with its wording",
    "DEC01": "part of the concern limits how a goal is achieved",
    "DEC02": "part of the concern implies design constraints",
    "DEC03": "part of the concern is unused by other concerns",
    "DEC04": "the description is too long",
    "DEC05": "the description refers to another concern",
    "DEC06": "the concern requires information from several concerns",
    "DEC07": "new concerns should be derived from this concern",
    "DEC08": "part of the concern will be associated with other concerns",
    "MISSING_FIELD": "a mandatory template field is absent",
    "EMPTY_ALT": "no alternative scenario is recorded",
    "NEG_REVIEW": "review count is negative",
    "TYPE_MISMATCH": "a non-functional concern constrains a non-functional concern",
    "BAD_PRIORITY": "aspect priority is not High, Medium or Low",
    "MISSING_CONDITION": "aspect has neither pre- nor post-condition",
    "EMPTY_EXPANSION": "ALL expands to no functional concern",
    "REVIEW_DRIFT": "checklist review count differs from its target",
    "STALE_DATE": "reviewed entity carries no revision date",
    "NO_STAKEHOLDER": "top-level concern is linked to no stakeholder",
    "GATE_FAIL": "a checklist gate did not pass",
    "WRONG_KIND": "checklist kind does not match the gate",
    "EMPTY_DECOMPOSITION": "decomposition supplies no children",
    "UNKNOWN_PARENT": "decomposition parent does not exist",
    "EMPTY_LEXICON": "theme mining needs a non-empty lexicon",
    "UNKNOWN_FORMAT": "unsupported output format",
}


@dataclass(frozen=True)
class Diagnostic:
    code: str
    severity: Severity
    target: str
    message: str

    def __post_init__(self) -> None:
        if self.code not in DIAGNOSTIC_REGISTRY:
            raise ValueError(f"unregistered diagnostic code {self.code!r}")

    def __str__(self) -> str:
        return f"{self.severity.value.upper()} {self.code} {self.target}: {self.message}"


def error(code: str, target: str, message: str) -> Diagnostic:
    return Diagnostic(code, Severity.ERROR, target, message)


def warning(code: str, target: str, message: str) -> Diagnostic:
    return Diagnostic(code, Severity.WARNING, target, message)


def normalize_id(ident: str) -> str:
    """Asp-01, ASP01 and asp01 are the same identifier."""
    return ident.replace("-", "").casefold()


def normalize_name(name: str) -> str:
    return re.sub(r"[\s\-_]+", "", name).casefold()


def natural_key(text: str) -> tuple:
    """Sort key placing R2 before R10."""
    return tuple(
        (0, int(part), "") if part.isdigit() else (1, 0, part.casefold())
        for part in re.split(r"(\d+)", text)
        if part
    ) + ((-1, 0, text),)


def sort_diagnostics(diagnostics: Iterable[Diagnostic]) -> list[Diagnostic]:
    return sorted(diagnostics, key=lambda d: (natural_key(d.target), d.code, d.message))


@dataclass(frozen=True)
class Concern:
    id: str
    name: str
    ctype: ConcernType
    objective: str = ""
    successful_scenario: str = ""
    alternative_scenario: str | None = None
    revision_date: date | None = None
    review_count: int = 0
    references: tuple[str, ...] = ()
    stakeholders: tuple[str, ...] = ()
    parent: str | None = None
    annotations: frozenset[str] = frozenset()

    def text(self) -> str:
        """Objective and scenarios joined; repeated parts appear once."""
        parts: list[str] = []
        for part in (self.objective, self.successful_scenario, self.alternative_scenario):
            if part and part not in parts:
                parts.append(part)
        return " ".join(parts)


@dataclass(frozen=True)
class NfDescription:
    id: str
    name: str
    related_concerns: tuple[str, ...] = ()
    specification: str = ""
    revision_date: date | None = None
    review_count: int = 0
    references: tuple[str, ...] = ()


@dataclass(frozen=True)
class AspectDocument:
    id: str
    name: str
    concerns: tuple[str, ...] = ()
    description: str = ""
    # Kept as text so an out-of-range value can be reported rather than rejected.
    priority: str = ""
    precondition: str | None = None
    postcondition: str | None = None
    depends_on: tuple[str, ...] = ()
    references: tuple[str, ...] = ()

    @property
    def crosscuts_all(self) -> bool:
        return tuple(c.strip().upper() for c in self.concerns) == (ALL,)


@dataclass(frozen=True)
class ChecklistResponse:
    target_id: str
    kind: ChecklistKind
    answers: dict[str, Answer] = field(default_factory=dict)
    review_count: int = 0


@dataclass(frozen=True)
class RequirementItem:
    id: str
    text: str
    concern: str | None = None


@dataclass(frozen=True)
class Stakeholder:
    id: str
    name: str
    role: str = ""


def _by_id(items: Iterable, attr: str = "id") -> tuple:
    # Stable, so duplicates keep their input order.
    return tuple(sorted(items, key=lambda x: natural_key(normalize_id(getattr(x, attr)))))


@dataclass(frozen=True)
class Corpus:
    """All entities of one requirements corpus.

    Every list is held sorted by identifier, so two corpora holding the same
    entities compare equal whatever order they were built in.
    """

    concerns: tuple[Concern, ...] = ()
    nf_descriptions: tuple[NfDescription, ...] = ()
    aspects: tuple[AspectDocument, ...] = ()
    checklists: tuple[ChecklistResponse, ...] = ()
    requirements: tuple[RequirementItem, ...] = ()
    stakeholders: tuple[Stakeholder, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "concerns", _by_id(self.concerns))
        object.__setattr__(self, "nf_descriptions", _by_id(self.nf_descriptions))
        object.__setattr__(self, "aspects", _by_id(self.aspects))
        object.__setattr__(
            self,
            "checklists",
            tuple(
                sorted(
                    self.checklists,
                    key=lambda c: (c.kind.value, natural_key(normalize_id(c.target_id))),
                )
            ),
        )
        object.__setattr__(self, "requirements", _by_id(self.requirements))
        object.__setattr__(self, "stakeholders", _by_id(self.stakeholders))

    def is_empty(self) -> bool:
        return not any(
            (
                self.concerns,
                self.nf_descriptions,
                self.aspects,
                self.checklists,
                self.requirements,
                self.stakeholders,
            )
        )

    def counts(self) -> dict[str, int]:
        return {
            "concerns": len(self.concerns),
            "nf_descriptions": len(self.nf_descriptions),
            "aspects": len(self.aspects),
            "checklists": len(self.checklists),
            "requirements": len(self.requirements),
            "stakeholders": len(self.stakeholders),
        }

    # Lookups. IDs are compared normalised; names case-insensitively.

    def concern(self, ref: str) -> Concern | None:
        """Resolve a concern by identifier, falling back to its name."""
        key = normalize_id(ref.strip())
        for c in self.concerns:
            if normalize_id(c.id) == key:
                return c
        name = ref.strip().casefold()
        for c in self.concerns:
            if c.name.casefold() == name:
                return c
        return None

    def nf_description(self, ref: str) -> NfDescription | None:
        key = normalize_id(ref.strip())
        for nf in self.nf_descriptions:
            if normalize_id(nf.id) == key:
                return nf
        name = ref.strip().casefold()
        for nf in self.nf_descriptions:
            if nf.name.casefold() == name:
                return nf
        return None

    def aspect(self, ref: str) -> AspectDocument | None:
        key = normalize_id(ref.strip())
        for a in self.aspects:
            if normalize_id(a.id) == key:
                return a
        return None

    def stakeholder(self, ref: str) -> Stakeholder | None:
        key = normalize_id(ref.strip())
        for s in self.stakeholders:
            if normalize_id(s.id) == key:
                return s
        return None

    def children(self, concern_id: str) -> list[Concern]:
        key = normalize_id(concern_id)
        return [c for c in self.concerns if c.parent and normalize_id(c.parent) == key]

    def functional_concerns(self) -> list[Concern]:
        return [c for c in self.concerns if c.ctype is ConcernType.FUNCTIONAL]

    def checklist_target(self, response: ChecklistResponse) -> Concern | NfDescription | AspectDocument | None:
        if response.kind is ChecklistKind.ASPECT_VALIDATION:
            return self.aspect(response.target_id)
        key = normalize_id(response.target_id.strip())
        for entity in (*self.nf_descriptions, *self.concerns):
            if normalize_id(entity.id) == key:
                return entity
        return None

    def expand_concerns(self, refs: Iterable[str]) -> list[Concern | NfDescription]:
        """Resolve concern references, expanding ALL to every functional concern.

        Unresolvable references are dropped; duplicates collapse.
        """
        out: list[Concern | NfDescription] = []
        for ref in refs:
            if ref.strip().upper() == ALL:
                targets: list[Concern | NfDescription] = list(self.functional_concerns())
            else:
                hit = self.concern(ref) or self.nf_description(ref)
                targets = [hit] if hit is not None else []
            for t in targets:
                if t not in out:
                    out.append(t)
        return out


# ---------------------------------------------------------------------------
# Structural integrity


def _shared_id_allowed(a, b) -> bool:
    # A non-functional description and its aspect document may carry the same
    # identifier: they are two templates of one conceptual entity.
    return type(a) is not type(b) and normalize_name(a.name) == normalize_name(b.name)


def _duplicate_ids(corpus: Corpus) -> Iterator[Diagnostic]:
    groups: dict[str, list] = defaultdict(list)
    for entity in (*corpus.concerns, *corpus.nf_descriptions, *corpus.aspects):
        groups[normalize_id(entity.id)].append(entity)
    for members in groups.values():
        for i, later in enumerate(members[1:], start=1):
            clash = [m for m in members[:i] if not _shared_id_allowed(m, later)]
            if clash:
                yield error(
                    "DUP_ID",
                    later.id,
                    f"identifier {later.id!r} already used by {clash[0].name!r}",
                )
    for kind, items in (("requirement", corpus.requirements), ("stakeholder", corpus.stakeholders)):
        seen: dict[str, str] = {}
        for item in items:
            key = normalize_id(item.id)
            if key in seen:
                yield error("DUP_ID", item.id, f"{kind} identifier {item.id!r} repeated")
            else:
                seen[key] = item.id


def _duplicate_names(corpus: Corpus) -> Iterator[Diagnostic]:
    for kind, items in (
        ("concern", corpus.concerns),
        ("non-functional description", corpus.nf_descriptions),
        ("aspect", corpus.aspects),
    ):
        seen: dict[str, str] = {}
        for item in items:
            key = item.name.strip().casefold()
            if not key:
                continue
            if key in seen:
                yield error(
                    "DUP_NAME",
                    item.id,
                    f"{kind} name {item.name!r} already used by {seen[key]}",
                )
            else:
                seen[key] = item.id


def _bad_names(corpus: Corpus) -> Iterator[Diagnostic]:
    # Empty template names are reported by the template validators instead.
    for entity in (*corpus.concerns, *corpus.nf_descriptions, *corpus.aspects, *corpus.stakeholders):
        if "\n" in entity.name or "\r" in entity.name:
            yield error("BAD_NAME", entity.id, "name contains a line break")


def dangling_references(corpus: Corpus) -> list[Diagnostic]:
    """One REF_UNRESOLVED Error per cross-entity link that names nothing."""
    out: list[Diagnostic] = []

    def missing(target: str, what: str, ref: str) -> None:
        out.append(error("REF_UNRESOLVED", target, f"{what} {ref!r} does not resolve"))

    for c in corpus.concerns:
        if c.parent is not None and corpus.concern(c.parent) is None:
            missing(c.id, "parent", c.parent)
        for sh in c.stakeholders:
            if corpus.stakeholder(sh) is None:
                missing(c.id, "stakeholder", sh)
    for nf in corpus.nf_descriptions:
        for ref in nf.related_concerns:
            if corpus.concern(ref) is None and corpus.nf_description(ref) is None:
                missing(nf.id, "related concern", ref)
    for a in corpus.aspects:
        if not a.crosscuts_all:
            for ref in a.concerns:
                if corpus.concern(ref) is None and corpus.nf_description(ref) is None:
                    missing(a.id, "concern", ref)
        for dep in a.depends_on:
            if corpus.aspect(dep) is None:
                missing(a.id, "aspect dependency", dep)
    for resp in corpus.checklists:
        if corpus.checklist_target(resp) is None:
            missing(resp.target_id, f"{resp.kind.value} checklist target", resp.target_id)
    for req in corpus.requirements:
        if req.concern is not None and corpus.concern(req.concern) is None:
            missing(req.id, "owning concern", req.concern)
    return out


def _parent_cycles(corpus: Corpus) -> Iterator[Diagnostic]:
    reported: set[str] = set()
    for start in corpus.concerns:
        path: list[str] = []
        node: Concern | None = start
        while node is not None and node.parent is not None:
            key = normalize_id(node.id)
            if key in path:
                cycle = path[path.index(key):]
                if not reported.intersection(cycle):
                    reported.update(cycle)
                    # Report at the smallest member so the result is order-free.
                    members = [c for c in corpus.concerns if normalize_id(c.id) in cycle]
                    anchor = min(members, key=lambda c: natural_key(normalize_id(c.id)))
                    names = " -> ".join(c.name for c in members)
                    yield error("PARENT_CYCLE", anchor.id, f"decomposition cycle among {names}")
                break
            path.append(key)
            node = corpus.concern(node.parent)


def _self_dependencies(corpus: Corpus) -> Iterator[Diagnostic]:
    for a in corpus.aspects:
        if any(normalize_id(d) == normalize_id(a.id) for d in a.depends_on):
            yield error("SELF_DEPENDENCY", a.id, f"aspect {a.name!r} depends on itself")


def _bad_questions(corpus: Corpus) -> Iterator[Diagnostic]:
    for resp in corpus.checklists:
        stray = sorted(set(resp.answers) - set(resp.kind.questions))
        if stray:
            yield error(
                "BAD_QUESTION",
                resp.target_id,
                f"{resp.kind.value} checklist answers unknown questions {', '.join(stray)}",
            )


def check_structural_integrity(corpus: Corpus) -> list[Diagnostic]:
    """Uniqueness, resolvable links and acyclic decomposition.

    Returns an empty list iff the corpus is structurally sound. Ordered by
    entity id, then code.
    """
    found: list[Diagnostic] = []
    found.extend(_duplicate_ids(corpus))
    found.extend(_duplicate_names(corpus))
    found.extend(_bad_names(corpus))
    found.extend(dangling_references(corpus))
    found.extend(_parent_cycles(corpus))
    found.extend(_self_dependencies(corpus))
    found.extend(_bad_questions(corpus))
    return sort_diagnostics(found)


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.severity is Severity.ERROR for d in diagnostics)
