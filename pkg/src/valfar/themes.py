"""Action-verb theme mining over raw requirements.

Requirements are scanned for lexicon action words; the resulting
action x requirement incidence is the "action view". An action sharing
requirements with enough other actions is a crosscutting theme.
"""

from __future__ import annotations

import re
from collections.abc import Iterable
from dataclasses import dataclass, replace
from pathlib import Path

from valfar.model import RequirementItem, ValfarError, natural_key

_TOKEN_RE = re.compile(r"[^0-9a-z]+")
_VOWELS = set("aeiou")
_SIBILANT_ES_RE = re.compile(r"..(?:s|x|z|ch|sh)es$")


def tokenize(text: str) -> list[str]:
    return [t for t in _TOKEN_RE.split(text.casefold()) if t]


def stem_candidates(token: str) -> list[str]:
    """The token plus its forms with one of s/es/ed/ing stripped.

    Doubled final consonants are undone ("logged" -> "log"), a dropped
    trailing e is restored ("giving" -> "give") and "es" after a sibilant
    is removed ("passes" -> "pass").
    """
    out = [token]
    if _SIBILANT_ES_RE.search(token):
        out.append(token[:-2])
    for suffix in ("ing", "ed", "s"):
        if not token.endswith(suffix):
            continue
        base = token[: -len(suffix)]
        if len(base) < 2:
            continue
        out.append(base)
        if suffix != "s":
            out.append(base + "e")
            if len(base) >= 3 and base[-1] == base[-2] and base[-1] not in _VOWELS:
                out.append(base[:-1])
    return out


@dataclass(frozen=True)
class ActionLexicon:
    entries: tuple[str, ...]

    def __post_init__(self) -> None:
        cleaned: list[str] = []
        for entry in self.entries:
            term = entry.strip().casefold()
            if not term:
                continue
            if len(tokenize(term)) != 1 or tokenize(term)[0] != term:
                raise ValueError(f"lexicon entry {entry!r} is not a single token")
            if term not in cleaned:
                cleaned.append(term)
        object.__setattr__(self, "entries", tuple(cleaned))

    def __len__(self) -> int:
        return len(self.entries)

    def match(self, token: str) -> str | None:
        """The lexicon stem a token inflects, if any."""
        for candidate in stem_candidates(token):
            if candidate in self.entries:
                return candidate
        return None

    def actions_in(self, text: str) -> list[str]:
        """Distinct lexicon actions occurring in ``text``, in lexicon order."""
        hits = {self.match(tok) for tok in tokenize(text)}
        return [e for e in self.entries if e in hits]


def parse_lexicon(text: str) -> ActionLexicon:
    """One stem per line; ``#`` starts a comment."""
    terms = [line.split("#", 1)[0].strip() for line in text.splitlines()]
    return ActionLexicon(tuple(t for t in terms if t))


def load_lexicon(path: str | Path) -> ActionLexicon:
    return parse_lexicon(Path(path).read_text(encoding="utf-8"))


@dataclass(frozen=True)
class ActionView:
    actions: tuple[str, ...]
    requirements: tuple[str, ...]
    incidence: tuple[tuple[str, str], ...]
    crosscutting: frozenset[str] = frozenset()

    def requirements_of(self, action: str) -> list[str]:
        return [r for a, r in self.incidence if a == action]

    def actions_of(self, requirement: str) -> list[str]:
        return [a for a, r in self.incidence if r == requirement]

    @property
    def base(self) -> tuple[str, ...]:
        return tuple(a for a in self.actions if a not in self.crosscutting)

    def co_occurring(self, action: str) -> set[str]:
        """Other actions sharing at least one requirement with ``action``."""
        out: set[str] = set()
        for req in self.requirements_of(action):
            out.update(self.actions_of(req))
        out.discard(action)
        return out


def extract_action_view(requirements: Iterable[RequirementItem], lexicon: ActionLexicon) -> ActionView:
    if not lexicon.entries:
        raise ValfarError("EMPTY_LEXICON", "theme mining needs at least one action term")
    reqs = sorted(requirements, key=lambda r: natural_key(r.id))
    hits = {r.id: set(lexicon.actions_in(r.text)) for r in reqs}
    incidence = tuple((a, r.id) for a in lexicon.entries for r in reqs if a in hits[r.id])
    return ActionView(
        actions=lexicon.entries,
        requirements=tuple(r.id for r in reqs),
        incidence=incidence,
    )


def identify_crosscutting(view: ActionView, k: int = 2) -> ActionView:
    """Mark actions co-occurring with at least ``k`` other actions.

    An action seen in fewer than two requirements spans nothing and is never
    marked, whatever ``k`` is. ``k`` must be at least 1.
    """
    if k < 1:
        raise ValueError(f"co-occurrence threshold must be at least 1, got {k}")
    marked = frozenset(
        a
        for a in view.actions
        if len(view.requirements_of(a)) >= 2 and len(view.co_occurring(a)) >= k
    )
    return replace(view, crosscutting=marked)


def _dot_id(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def emit_clipped_view(view: ActionView) -> str:
    """Graphviz DOT for the action view; crosscutting actions are filled grey."""
    lines = ["graph clipped_action_view {"]
    for req in view.requirements:
        lines.append(f"  {_dot_id('req:' + req)} [label={_dot_id(req)}, shape=box];")
    for action in view.actions:
        attrs = f"label={_dot_id(action)}, shape=ellipse"
        if action in view.crosscutting:
            attrs += ', style=filled, fillcolor=gray, crosscutting="true"'
        lines.append(f"  {_dot_id('action:' + action)} [{attrs}];")
    for action, req in view.incidence:
        lines.append(f"  {_dot_id('action:' + action)} -- {_dot_id('req:' + req)};")
    lines.append("}")
    return "\n".join(lines) + "\n"
