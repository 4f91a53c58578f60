"""Reading and writing corpora.

The block format::

    # comment
    [concern]
    id = Con04
    name = TollGate
    type = functional
    objective = Passing fees payment

Blocks open with a header line and hold ``key = value`` lines; a value runs to
the end of its line. List-valued keys are comma separated.
"""

from __future__ import annotations

import re
from collections.abc import Iterable
from dataclasses import dataclass, field
from datetime import date, datetime
from pathlib import Path
from xml.parsers import expat

from valfar.model import (
    ALL,
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
    RequirementItem,
    Stakeholder,
    ValfarError,
    check_structural_integrity,
    has_errors,
    normalize_id,
    warning,
)


class ParseError(ValfarError):
    def __init__(self, file: str, line: int, message: str) -> None:
        ValfarError.__init__(self, "PARSE", message)
        self.file = file
        self.line = line
        self.args = (f"{file}:{line}: {message}",)

    def __str__(self) -> str:
        return f"{self.file}:{self.line}: {self.message}"


BLOCK_KINDS = ("concern", "nonfunctional", "aspect", "checklist", "requirement", "stakeholder")

_KEYS = {
    "concern": (
        "id", "name", "type", "objective", "successful_scenario", "alternative_scenario",
        "revision_date", "review_count", "references", "stakeholders", "parent", "annotations",
    ),
    "nonfunctional": (
        "id", "name", "related_concerns", "specification", "revision_date", "review_count",
        "references",
    ),
    "aspect": (
        "id", "name", "concerns", "description", "priority", "precondition", "postcondition",
        "depends_on", "references",
    ),
    "checklist": ("target", "kind", "review_count"),
    "requirement": ("id", "text", "concern"),
    "stakeholder": ("id", "name", "role"),
}

_REQUIRED = {
    "concern": ("id", "name", "type"),
    "nonfunctional": ("id",),
    "aspect": ("id",),
    "checklist": ("target", "kind"),
    "requirement": ("id",),
    "stakeholder": ("id",),
}

_HEADER_RE = re.compile(r"^\[([A-Za-z_-]+)\]$")
_KEY_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=(.*)$")
_ANSWER_KEY_RE = re.compile(r"^[CSA][1-5]$")


@dataclass
class _Block:
    kind: str
    file: str
    line: int
    values: dict[str, str] = field(default_factory=dict)
    lines: dict[str, int] = field(default_factory=dict)


def _enum_key(text: str) -> str:
    return re.sub(r"[\s_\-]", "", text).casefold()


_CTYPES = {_enum_key(t.value): t for t in ConcernType}
_CTYPES["nonfunctional"] = ConcernType.NON_FUNCTIONAL
_KINDS = {_enum_key(k.value): k for k in ChecklistKind}
_ANSWERS = {"yes": Answer.YES, "no": Answer.NO}

_ORDINAL_RE = re.compile(r"(\d+)\s*(st|nd|rd|th)\b", re.IGNORECASE)
_DATE_FORMATS = ("%Y-%m-%d", "%d %B %Y", "%B %d %Y", "%d %b %Y", "%b %d %Y")


def parse_date(text: str) -> date:
    """Accept ISO dates and the prose forms "1 st May, 2020" or "May 4, 2020"."""
    cleaned = _ORDINAL_RE.sub(r"\1", text.strip()).replace(",", " ")
    cleaned = " ".join(cleaned.split())
    for fmt in _DATE_FORMATS:
        try:
            return datetime.strptime(cleaned, fmt).date()
        except ValueError:
            continue
    raise ValueError(f"unrecognised date {text!r}")


def _split_list(value: str) -> tuple[str, ...]:
    return tuple(item.strip() for item in value.split(",") if item.strip())


def _read_blocks(text: str, path: str, diagnostics: list[Diagnostic] | None) -> list[_Block]:
    blocks: list[_Block] = []
    current: _Block | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        header = _HEADER_RE.match(line)
        if header:
            kind = header.group(1).lower()
            if kind not in BLOCK_KINDS:
                raise ParseError(path, lineno, f"unknown block header [{header.group(1)}]")
            current = _Block(kind, path, lineno)
            blocks.append(current)
            continue
        if line.startswith("["):
            raise ParseError(path, lineno, f"malformed block header {line!r}")
        match = _KEY_RE.match(line)
        if match is None:
            raise ParseError(path, lineno, f"expected 'key = value', got {line!r}")
        if current is None:
            raise ParseError(path, lineno, "key outside of any block")
        key, value = match.group(1), match.group(2).strip()
        if key in current.values:
            raise ParseError(path, lineno, f"duplicate key {key!r} in [{current.kind}] block")
        known = key in _KEYS[current.kind] or (
            current.kind == "checklist" and _ANSWER_KEY_RE.match(key)
        )
        if not known:
            if diagnostics is not None:
                diagnostics.append(
                    warning("UNKNOWN_KEY", f"{path}:{lineno}", f"unknown key {key!r} in [{current.kind}] block")
                )
            continue
        current.values[key] = value
        current.lines[key] = lineno
    for block in blocks:
        for key in _REQUIRED[block.kind]:
            if not block.values.get(key):
                raise ParseError(path, block.line, f"[{block.kind}] block lacks mandatory key {key!r}")
    return blocks


def _int(block: _Block, key: str) -> int:
    raw = block.values.get(key)
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise ParseError(block.file, block.lines[key], f"{key} must be an integer, got {raw!r}") from None


def _date(block: _Block, key: str) -> date | None:
    raw = block.values.get(key)
    if not raw:
        return None
    try:
        return parse_date(raw)
    except ValueError as exc:
        raise ParseError(block.file, block.lines[key], str(exc)) from None


def _optional(block: _Block, key: str) -> str | None:
    return block.values.get(key)


def _build(block: _Block):
    v = block.values
    if block.kind == "concern":
        ctype = _CTYPES.get(_enum_key(v["type"]))
        if ctype is None:
            raise ParseError(block.file, block.lines["type"], f"invalid concern type {v['type']!r}")
        return Concern(
            id=v["id"],
            name=v["name"],
            ctype=ctype,
            objective=v.get("objective", ""),
            successful_scenario=v.get("successful_scenario", ""),
            alternative_scenario=_optional(block, "alternative_scenario"),
            revision_date=_date(block, "revision_date"),
            review_count=_int(block, "review_count"),
            references=_split_list(v.get("references", "")),
            stakeholders=_split_list(v.get("stakeholders", "")),
            parent=v.get("parent") or None,
            annotations=frozenset(_split_list(v.get("annotations", ""))),
        )
    if block.kind == "nonfunctional":
        return NfDescription(
            id=v["id"],
            name=v.get("name", ""),
            related_concerns=_split_list(v.get("related_concerns", "")),
            specification=v.get("specification", ""),
            revision_date=_date(block, "revision_date"),
            review_count=_int(block, "review_count"),
            references=_split_list(v.get("references", "")),
        )
    if block.kind == "aspect":
        priority = v.get("priority", "")
        canonical = {p.value.casefold(): p.value for p in Priority}
        concerns = _split_list(v.get("concerns", ""))
        if tuple(c.upper() for c in concerns) == (ALL,):
            concerns = (ALL,)
        return AspectDocument(
            id=v["id"],
            name=v.get("name", ""),
            concerns=concerns,
            description=v.get("description", ""),
            priority=canonical.get(priority.casefold(), priority),
            precondition=_optional(block, "precondition"),
            postcondition=_optional(block, "postcondition"),
            depends_on=_split_list(v.get("depends_on", "")),
            references=_split_list(v.get("references", "")),
        )
    if block.kind == "checklist":
        kind = _KINDS.get(_enum_key(v["kind"]))
        if kind is None:
            raise ParseError(block.file, block.lines["kind"], f"invalid checklist kind {v['kind']!r}")
        answers: dict[str, Answer] = {}
        for key in sorted(v):
            if not _ANSWER_KEY_RE.match(key):
                continue
            if key not in kind.questions:
                raise ParseError(
                    block.file, block.lines[key], f"question {key} does not belong to a {kind.value} checklist"
                )
            answer = _ANSWERS.get(v[key].casefold())
            if answer is None:
                raise ParseError(block.file, block.lines[key], f"answer must be yes or no, got {v[key]!r}")
            answers[key] = answer
        return ChecklistResponse(
            target_id=v["target"], kind=kind, answers=answers, review_count=_int(block, "review_count")
        )
    if block.kind == "requirement":
        return RequirementItem(id=v["id"], text=v.get("text", ""), concern=v.get("concern") or None)
    return Stakeholder(id=v["id"], name=v.get("name", ""), role=v.get("role", ""))


_FIELD_OF = {
    "concern": "concerns",
    "nonfunctional": "nf_descriptions",
    "aspect": "aspects",
    "checklist": "checklists",
    "requirement": "requirements",
    "stakeholder": "stakeholders",
}


def _assemble(blocks: Iterable[_Block]) -> Corpus:
    buckets: dict[str, list] = {name: [] for name in _FIELD_OF.values()}
    for block in blocks:
        buckets[_FIELD_OF[block.kind]].append(_build(block))
    return Corpus(**buckets)


def parse_corpus(
    source: str, path: str = "<string>", diagnostics: list[Diagnostic] | None = None
) -> Corpus:
    """Parse one document in the block format.

    Unknown keys are appended to ``diagnostics`` as warnings when a list is
    supplied. Raises ParseError on malformed input.
    """
    return _assemble(_read_blocks(source, path, diagnostics))


def _block_key(block: _Block) -> tuple[str, str] | None:
    if block.kind == "checklist":
        return None
    return block.kind, normalize_id(block.values["id"])


def parse_documents(
    documents: Iterable[tuple[str, str]], diagnostics: list[Diagnostic] | None = None
) -> Corpus:
    """Parse and merge several ``(path, text)`` documents.

    An entity identifier declared in two different documents is a ParseError.
    """
    blocks: list[_Block] = []
    owner: dict[tuple[str, str], _Block] = {}
    for path, text in documents:
        local = _read_blocks(text, path, diagnostics)
        for block in local:
            key = _block_key(block)
            if key is None:
                continue
            first = owner.get(key)
            if first is not None and first.file != path:
                raise ParseError(
                    path, block.line, f"{block.kind} {block.values['id']!r} already declared in {first.file}:{first.line}"
                )
            owner.setdefault(key, block)
        blocks.extend(local)
    return _assemble(blocks)


def load_corpus(paths: Iterable[str | Path], diagnostics: list[Diagnostic] | None = None) -> Corpus:
    docs = [(str(p), Path(p).read_text(encoding="utf-8")) for p in paths]
    return parse_documents(docs, diagnostics)


# ---------------------------------------------------------------------------
# Serialisation


def _line(key: str, value) -> str:
    return f"{key} = {value}".rstrip() if value != "" else f"{key} ="


def _emit_block(kind: str, pairs: list[tuple[str, object]]) -> str:
    out = [f"[{kind}]"]
    for key, value in pairs:
        if value is None:
            continue
        if isinstance(value, (tuple, list, frozenset, set)):
            if not value:
                continue
            items = sorted(value) if isinstance(value, (frozenset, set)) else value
            value = ", ".join(items)
        out.append(_line(key, value))
    return "\n".join(out)


def serialize_corpus(corpus: Corpus) -> str:
    """Render a corpus in the block format; blocks are ordered by id.

    Refuses a corpus that has structural errors.
    """
    problems = [d for d in check_structural_integrity(corpus) if has_errors([d])]
    if problems:
        raise ValfarError(problems[0].code, f"cannot serialise a corpus with structural errors: {problems[0]}")
    blocks: list[str] = []
    for s in corpus.stakeholders:
        blocks.append(_emit_block("stakeholder", [("id", s.id), ("name", s.name), ("role", s.role or None)]))
    for c in corpus.concerns:
        blocks.append(
            _emit_block(
                "concern",
                [
                    ("id", c.id),
                    ("name", c.name),
                    ("type", c.ctype.value),
                    ("parent", c.parent),
                    ("objective", c.objective or None),
                    ("successful_scenario", c.successful_scenario or None),
                    ("alternative_scenario", c.alternative_scenario),
                    ("revision_date", c.revision_date.isoformat() if c.revision_date else None),
                    ("review_count", c.review_count),
                    ("references", c.references),
                    ("stakeholders", c.stakeholders),
                    ("annotations", c.annotations),
                ],
            )
        )
    for nf in corpus.nf_descriptions:
        blocks.append(
            _emit_block(
                "nonfunctional",
                [
                    ("id", nf.id),
                    ("name", nf.name or None),
                    ("related_concerns", nf.related_concerns),
                    ("specification", nf.specification or None),
                    ("revision_date", nf.revision_date.isoformat() if nf.revision_date else None),
                    ("review_count", nf.review_count),
                    ("references", nf.references),
                ],
            )
        )
    for a in corpus.aspects:
        blocks.append(
            _emit_block(
                "aspect",
                [
                    ("id", a.id),
                    ("name", a.name or None),
                    ("concerns", a.concerns),
                    ("description", a.description or None),
                    ("priority", a.priority or None),
                    ("precondition", a.precondition),
                    ("postcondition", a.postcondition),
                    ("depends_on", a.depends_on),
                    ("references", a.references),
                ],
            )
        )
    for resp in corpus.checklists:
        pairs: list[tuple[str, object]] = [
            ("target", resp.target_id),
            ("kind", resp.kind.value),
            ("review_count", resp.review_count),
        ]
        pairs.extend((q, resp.answers[q].value) for q in resp.kind.questions if q in resp.answers)
        blocks.append(_emit_block("checklist", pairs))
    for r in corpus.requirements:
        blocks.append(_emit_block("requirement", [("id", r.id), ("text", r.text or None), ("concern", r.concern)]))
    return "\n\n".join(blocks) + ("\n" if blocks else "")


# ---------------------------------------------------------------------------
# Viewpoint XML import


@dataclass
class _Node:
    tag: str
    attrs: dict[str, str]
    line: int
    children: list[_Node] = field(default_factory=list)
    text: str = ""


def _xml_tree(source: str | bytes, path: str) -> _Node:
    parser = expat.ParserCreate()
    stack: list[_Node] = []
    root: list[_Node] = []

    def start(tag, attrs):
        node = _Node(tag, dict(attrs), parser.CurrentLineNumber)
        if stack:
            stack[-1].children.append(node)
        else:
            root.append(node)
        stack.append(node)

    def end(tag):
        stack.pop()

    def chars(data):
        if stack:
            stack[-1].text += data

    parser.StartElementHandler = start
    parser.EndElementHandler = end
    parser.CharacterDataHandler = chars
    try:
        parser.Parse(source, True)
    except expat.ExpatError as exc:
        raise ParseError(path, exc.lineno, f"ill-formed XML: {expat.ErrorString(exc.code)}") from None
    return root[0]


def _skip(node: _Node, path: str, diagnostics: list[Diagnostic] | None) -> None:
    if diagnostics is not None:
        diagnostics.append(warning("UNKNOWN_ELEMENT", f"{path}:{node.line}", f"skipped <{node.tag}> element"))


def import_arcade_xml(
    source: str | bytes, path: str = "<xml>", diagnostics: list[Diagnostic] | None = None
) -> Corpus:
    """Import viewpoint XML: ``<aore>`` holding ``<Concern name=..>`` elements.

    A ``<Requirement>`` carrying a ``name`` becomes a child concern; one
    without a name becomes a requirement item owned by the nearest concern.
    Unrecognised elements are skipped with a warning.
    """
    root = _xml_tree(source, path)
    if root.tag != "aore":
        raise ParseError(path, root.line, f"root element must be <aore>, got <{root.tag}>")
    concerns: list[Concern] = []
    items: list[RequirementItem] = []

    def concern_from(node: _Node, parent: Concern | None) -> Concern:
        name = node.attrs.get("name", "").strip()
        if not name:
            raise ParseError(path, node.line, f"<{node.tag}> element without a name")
        raw_type = node.attrs.get("type")
        # Sub-concerns inherit their parent's type unless attributed.
        ctype = parent.ctype if parent is not None else ConcernType.FUNCTIONAL
        if raw_type is not None:
            ctype = _CTYPES.get(_enum_key(raw_type))
            if ctype is None:
                raise ParseError(path, node.line, f"invalid concern type {raw_type!r}")
        text = " ".join(node.text.split())
        return Concern(
            id=node.attrs.get("id", name).strip(),
            name=name,
            ctype=ctype,
            objective=text,
            successful_scenario=text,
            parent=parent.id if parent is not None else None,
        )

    def walk(node: _Node, owner: Concern) -> None:
        unnamed = 0
        for child in node.children:
            if child.tag != "Requirement":
                _skip(child, path, diagnostics)
                continue
            if child.attrs.get("name", "").strip():
                sub = concern_from(child, owner)
                concerns.append(sub)
                walk(child, sub)
            else:
                unnamed += 1
                rid = child.attrs.get("id", "").strip() or f"{owner.id}-R{unnamed}"
                items.append(RequirementItem(id=rid, text=" ".join(child.text.split()), concern=owner.id))
                walk(child, owner)

    for node in root.children:
        if node.tag != "Concern":
            _skip(node, path, diagnostics)
            continue
        top = concern_from(node, None)
        concerns.append(top)
        walk(node, top)
    return Corpus(concerns=tuple(concerns), requirements=tuple(items))
