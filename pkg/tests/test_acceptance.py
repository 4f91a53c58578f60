"""Acceptance checks for the two worked case studies and the property suites.

Each test prints exactly one line of the form ``criterion N: PASS|FAIL  ...``
and then asserts, so ``pytest -rP tests/test_acceptance.py`` (or running
this file directly) shows the verdict table.
"""

from __future__ import annotations

import traceback
from collections.abc import Callable
from dataclasses import replace

from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import corpora, requirement_sets
from test_themes import oracle_crosscutting, oracle_incidence
from valfar.cli import main
from valfar.concerns import apply_decomposition, lint_decomposition
from valfar.fixtures import fixture_path
from valfar.gates import GateConfig, Verdict, evaluate_aspect_checklist, evaluate_concern_checklist
from valfar.ingest import import_arcade_xml, load_corpus, parse_corpus, serialize_corpus
from valfar.matrices import build_aspect_dependency_matrix, build_crosscutting_matrix
from valfar.model import (
    Answer,
    ChecklistKind,
    Concern,
    ConcernType,
    Corpus,
    Severity,
    check_structural_integrity,
    normalize_id,
)
from valfar.report import validate_corpus
from valfar.themes import ActionLexicon, extract_action_view, identify_crosscutting

COURSE_LEXICON = ("give", "register", "unregister", "log")
TOLLGATE_CHILDREN = [
    ("EntryToll", "Detects the installed gizmo on the vehicle."),
    ("SingleToll", "Turn the light into the green for authorized vehicles and display the amount of money to be paid."),
    ("PayToll", "Display the amount of money to be paid by authorized vehicles."),
    ("PlateCapture", "It captures the plate numbers of unauthorized vehicles."),
    ("ExitToll", "Checks the entrance of the vehicle through the gate whether it is a valid entrance or not."),
]


def _verdict(n: int, title: str, checks: list[tuple[str, bool]]) -> None:
    failed = [label for label, ok in checks if not ok]
    status = "FAIL" if failed else "PASS"
    detail = f" (failed: {'; '.join(failed)})" if failed else ""
    print(f"criterion {n}: {status}  {title}{detail}")
    assert not failed, failed


def _holds(prop: Callable[[], None]) -> bool:
    """Run a (possibly hypothesis-driven) property, reporting instead of raising."""
    try:
        prop()
    except Exception:
        traceback.print_exc()
        return False
    return True


def _quiet_main(argv: list[str], capsys) -> int:
    code = main(argv)
    capsys.readouterr()
    return code


def _dec_codes(diags) -> list[str]:
    return [d.code for d in diags if d.code.startswith("DEC")]


def test_criterion_1_toll_fixture(capsys):
    toll = load_corpus([fixture_path("toll.valfar")])
    code = _quiet_main(["validate", str(fixture_path("toll.valfar"))], capsys)
    crosscutting = build_crosscutting_matrix(toll)
    deps = build_aspect_dependency_matrix(toll)
    _verdict(1, "toll fixture validates; ResponseTime row exact; no aspect dependencies", [
        ("validate exits 0", code == 0),
        ("ResponseTime row", crosscutting.row("ResponseTime") == {"ATM", "Gizmo", "Vehicle", "TollGate"}),
        ("single crosscutting row", crosscutting.row_labels == ("ResponseTime",)),
        ("dependency matrix all false", deps.cells == frozenset() and deps.row_labels == ("ResponseTime",)),
    ])


def test_criterion_2_tollgate_decomposition():
    raw = load_corpus([fixture_path("toll_raw.valfar")])
    tollgate = raw.concern("TollGate")
    before = _dec_codes(lint_decomposition(tollgate, raw))
    after_corpus = apply_decomposition(raw, tollgate.id, TOLLGATE_CHILDREN)
    decomposed = after_corpus.concern(tollgate.id)
    after = _dec_codes(lint_decomposition(decomposed, after_corpus))
    _verdict(2, f"TollGate DEC diagnostics {len(before)} -> {len(after)}; review +1", [
        ("raw description triggers a DEC rule", len(before) >= 1),
        ("strictly fewer after decomposition", len(after) < len(before)),
        ("review_count incremented by 1", decomposed.review_count == tollgate.review_count + 1),
        ("five children attached", len(after_corpus.children(tollgate.id)) == 5),
    ])


def test_criterion_3_course_themes():
    course = load_corpus([fixture_path("course.valfar")])
    view = identify_crosscutting(extract_action_view(course.requirements, ActionLexicon(COURSE_LEXICON)), 2)
    pairs = oracle_incidence(course.requirements, COURSE_LEXICON)
    _verdict(3, "course themes at k=2: crosscutting {log}, base {give, register, unregister}", [
        ("crosscutting == {log}", view.crosscutting == {"log"}),
        ("base == {give, register, unregister}", set(view.base) == {"give", "register", "unregister"}),
        ("incidence matches brute-force oracle", set(view.incidence) == pairs),
        ("crosscutting matches brute-force oracle", view.crosscutting == oracle_crosscutting(pairs, COURSE_LEXICON, 2)),
    ])


def _single_flips(response, evaluate) -> list[bool]:
    outcomes = []
    for question in response.kind.questions:
        flipped = Answer.NO if response.answers[question] is Answer.YES else Answer.YES
        result = evaluate(replace(response, answers={**response.answers, question: flipped}))
        outcomes.append(result.verdict is Verdict.FAIL and result.failing_questions == (question,))
    return outcomes


def test_criterion_4_gate_semantics():
    config = GateConfig()
    checks: list[tuple[str, bool]] = []
    for fixture, label in (("toll.valfar", "toll"), ("course.valfar", "course")):
        corpus = load_corpus([fixture_path(fixture)])
        concern_sheet = next(r for r in corpus.checklists if r.kind is ChecklistKind.CONCERN_EVALUATION)
        aspect_sheet = next(r for r in corpus.checklists if r.kind is ChecklistKind.ASPECT_VALIDATION)
        evaluation = evaluate_concern_checklist(concern_sheet, config)
        validation = evaluate_aspect_checklist(aspect_sheet, config, corpus.checklist_target(aspect_sheet))
        flips = _single_flips(concern_sheet, lambda r: evaluate_concern_checklist(r, config))
        checks += [
            (f"{label} evaluation passes", evaluation.verdict is Verdict.PASS),
            (f"{label} all 10 single flips fail on that question", len(flips) == 10 and all(flips)),
            (f"{label} aspect validation passes", validation.verdict is Verdict.PASS),
            (f"{label} aspect review_count echoed as 2", validation.review_count == 2),
        ]
    _verdict(4, "evaluation sheets pass; every single flip fails on exactly that question", checks)


def test_criterion_5_round_trip_and_xml():
    @settings(max_examples=100, deadline=None, database=None)
    @given(corpora())
    def round_trip(corpus: Corpus) -> None:
        assert parse_corpus(serialize_corpus(corpus)) == corpus

    imported = import_arcade_xml(fixture_path("toll_viewpoints.xml").read_bytes())
    _verdict(5, "parse(serialize(c)) == c over 100 corpora; XML import yields 6 concerns", [
        ("round trip", _holds(round_trip)),
        ("six viewpoint concerns", len(imported.concerns) == 6),
        ("viewpoint names", {c.name for c in imported.concerns}
         == {"TollGate", "Vehicle", "ATM", "Police", "Gizmo", "DebitingSystem"}),
    ])


def _codes(corpus: Corpus) -> list[str]:
    return [d.code for d in check_structural_integrity(corpus) if d.severity is Severity.ERROR]


def test_criterion_6_invariant_suite(tmp_path, capsys):
    @settings(max_examples=60, deadline=None, database=None)
    @given(corpora())
    def uniqueness(corpus: Corpus) -> None:
        assert _codes(corpus) == []
        ids = [normalize_id(c.id) for c in corpus.concerns]
        assert len(ids) == len(set(ids))
        first = corpus.concerns[0]
        clash = Concern(first.id + "x", first.name.upper(), ConcernType.FUNCTIONAL)
        assert _codes(replace(corpus, concerns=corpus.concerns + (clash,))).count("DUP_NAME") == 1
        twin = Concern(first.id, first.name + "twin", ConcernType.FUNCTIONAL)
        assert _codes(replace(corpus, concerns=corpus.concerns + (twin,))).count("DUP_ID") == 1

    @settings(max_examples=60, deadline=None, database=None)
    @given(corpora())
    def references(corpus: Corpus) -> None:
        orphan = replace(corpus.concerns[0], stakeholders=("NoSuchStakeholder",))
        broken = replace(corpus, concerns=(orphan,) + corpus.concerns[1:])
        assert "REF_UNRESOLVED" in _codes(broken)

    @settings(max_examples=60, deadline=None, database=None)
    @given(corpora())
    def acyclic(corpus: Corpus) -> None:
        looped = replace(corpus.concerns[0], parent=corpus.concerns[0].id)
        assert _codes(replace(corpus, concerns=(looped,) + corpus.concerns[1:])).count("PARENT_CYCLE") == 1

    @settings(max_examples=60, deadline=None, database=None)
    @given(corpora())
    def matrix_laws(corpus: Corpus) -> None:
        relation = build_crosscutting_matrix(corpus).induced_relation()
        assert all((b, a) in relation for a, b in relation)
        assert all(r != c for r, c in build_aspect_dependency_matrix(corpus).cells)

    @settings(max_examples=100, deadline=None, database=None)
    @given(requirement_sets(), st.integers(1, 5))
    def k_monotone(reqs, k) -> None:
        view = extract_action_view(reqs, ActionLexicon(COURSE_LEXICON))
        assert identify_crosscutting(view, k + 1).crosscutting <= identify_crosscutting(view, k).crosscutting

    toll = str(fixture_path("toll.valfar"))
    dup = tmp_path / "dup.valfar"
    dup.write_text(fixture_path("toll.valfar").read_text(encoding="utf-8")
                   + "\n[concern]\nid = Con99\nname = TOLLGATE\ntype = functional\n", encoding="utf-8")
    bad = tmp_path / "bad.valfar"
    bad.write_text("[concern]\nid = A\nid = B\n", encoding="utf-8")
    flipped = tmp_path / "gates.cfg"
    flipped.write_text("C2 = yes\n", encoding="utf-8")
    course = load_corpus([fixture_path("course.valfar")])
    unanswered = tuple(
        replace(r, answers={q: a for q, a in r.answers.items() if q != "A3"})
        if r.kind is ChecklistKind.ASPECT_VALIDATION else r
        for r in course.checklists
    )
    exit_contract = [
        _quiet_main(["validate", toll], capsys) == 0,
        _quiet_main(["validate", str(dup)], capsys) == 1,
        _quiet_main(["check-gates", toll, "--gate-config", str(flipped)], capsys) == 1,
        validate_corpus(replace(course, checklists=unanswered)).exit_code() == 1,
        _quiet_main(["validate", str(bad)], capsys) == 2,
        _quiet_main(["validate"], capsys) == 3,
        _quiet_main(["validate", toll, "--strict"], capsys) == 1,
    ]
    _verdict(6, "uniqueness, references, acyclicity, matrix laws, k-monotonicity, exit codes", [
        ("id/name uniqueness", _holds(uniqueness)),
        ("reference resolution", _holds(references)),
        ("parent acyclicity", _holds(acyclic)),
        ("matrix symmetry and diagonal", _holds(matrix_laws)),
        ("k-monotonicity", _holds(k_monotone)),
        ("exit-code contract", all(exit_contract)),
    ])


if __name__ == "__main__":
    import sys

    import pytest

    sys.exit(pytest.main([__file__, "-q", "-rP", "-p", "no:cacheprovider"]))
