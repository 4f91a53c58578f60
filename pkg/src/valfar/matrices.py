"""Crosscutting and aspect-dependency matrices, reference integrity."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

from valfar.model import (
    ConcernType,
    Corpus,
    Diagnostic,
    ValfarError,
    dangling_references,
    normalize_id,
    normalize_name,
    sort_diagnostics,
    warning,
)
from valfar.themes import ActionView


@dataclass(frozen=True)
class RelationMatrix:
    row_labels: tuple[str, ...]
    col_labels: tuple[str, ...]
    cells: frozenset[tuple[str, str]]

    def __post_init__(self) -> None:
        rows, cols = set(self.row_labels), set(self.col_labels)
        for r, c in self.cells:
            if r not in rows or c not in cols:
                raise ValueError(f"cell ({r}, {c}) references an unlisted label")

    def __getitem__(self, key: tuple[str, str]) -> bool:
        return key in self.cells

    def row(self, label: str) -> set[str]:
        return {c for r, c in self.cells if r == label}

    def induced_relation(self) -> set[tuple[str, str]]:
        """The symmetric entity x entity relation the cells imply."""
        return set(self.cells) | {(c, r) for r, c in self.cells}

    def to_text(self) -> str:
        width = max((len(r) for r in self.row_labels), default=0)
        header = " " * width + "".join(f"  {c}" for c in self.col_labels)
        lines = [header.rstrip()]
        for r in self.row_labels:
            cells = "".join(
                "  " + ("X" if (r, c) in self.cells else ".").ljust(len(c)) for c in self.col_labels
            )
            lines.append((r.ljust(width) + cells).rstrip())
        return "\n".join(lines) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["", *self.col_labels])
        for r in self.row_labels:
            writer.writerow([r, *("1" if (r, c) in self.cells else "0" for c in self.col_labels)])
        return buf.getvalue()


def _name_key(name: str) -> tuple[str, str]:
    return name.casefold(), name


def build_crosscutting_matrix(corpus: Corpus) -> RelationMatrix:
    """Non-functional descriptions and aspects against functional concerns.

    A description and an aspect with the same name share one row.
    """
    cols = sorted((c.name for c in corpus.functional_concerns()), key=_name_key)
    functional = {c.name for c in corpus.functional_concerns()}
    rows: dict[str, str] = {}
    cells: set[tuple[str, str]] = set()
    for entity, refs in [(nf, nf.related_concerns) for nf in corpus.nf_descriptions] + [
        (a, a.concerns) for a in corpus.aspects
    ]:
        label = rows.setdefault(normalize_name(entity.name), entity.name)
        for hit in corpus.expand_concerns(refs):
            if hit.name in functional and getattr(hit, "ctype", None) is ConcernType.FUNCTIONAL:
                cells.add((label, hit.name))
    return RelationMatrix(tuple(sorted(rows.values(), key=_name_key)), tuple(cols), frozenset(cells))


def build_aspect_dependency_matrix(corpus: Corpus) -> RelationMatrix:
    """Square aspect x aspect matrix; (A, B) is set when A depends on B."""
    for a in corpus.aspects:
        if any(normalize_id(d) == normalize_id(a.id) for d in a.depends_on):
            raise ValfarError("SELF_DEPENDENCY", f"aspect {a.name!r} depends on itself")
    labels = tuple(sorted((a.name for a in corpus.aspects), key=_name_key))
    cells = set()
    for a in corpus.aspects:
        for dep in a.depends_on:
            target = corpus.aspect(dep)
            if target is not None:
                cells.add((a.name, target.name))
    return RelationMatrix(labels, labels, frozenset(cells))


def build_theme_matrix(view: ActionView, corpus: Corpus) -> RelationMatrix:
    """Mined crosscutting actions against the concerns owning their requirements."""
    owner = {normalize_id(r.id): r.concern for r in corpus.requirements}
    cols: set[str] = set()
    cells: set[tuple[str, str]] = set()
    for action in sorted(view.crosscutting):
        for req in view.requirements_of(action):
            ref = owner.get(normalize_id(req))
            hit = corpus.concern(ref) if ref else None
            if hit is not None:
                cols.add(hit.name)
                cells.add((action, hit.name))
    return RelationMatrix(
        tuple(a for a in view.actions if a in view.crosscutting),
        tuple(sorted(cols, key=_name_key)),
        frozenset(cells),
    )


def check_reference_integrity(corpus: Corpus) -> list[Diagnostic]:
    """Dangling links plus top-level concerns with no stakeholder.

    Sub-concerns inherit their parent's stakeholders. Free-form reference
    strings are never resolved.
    """
    found = list(dangling_references(corpus))
    for c in corpus.concerns:
        if c.parent is None and not c.stakeholders:
            found.append(warning("NO_STAKEHOLDER", c.id, f"concern {c.name!r} is linked to no stakeholder"))
    return sort_diagnostics(found)
