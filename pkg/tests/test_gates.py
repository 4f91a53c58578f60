from __future__ import annotations

from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import corpora
from valfar.gates import (
    GateConfig,
    Verdict,
    check_review_tracking,
    evaluate_aspect_checklist,
    evaluate_concern_checklist,
    parse_gate_config,
    validate_aspect_document,
    validate_nf_description,
)
from valfar.model import (
    ALL,
    ASPECT_QUESTIONS,
    CONCERN_QUESTIONS,
    Answer,
    AspectDocument,
    ChecklistKind,
    ChecklistResponse,
    Concern,
    ConcernType,
    Corpus,
    NfDescription,
    ValfarError,
)

Y, N = Answer.YES, Answer.NO
# The toll and course evaluation sheets carry the same answers.
EVALUATION_ANSWERS = {"C1": Y, "C2": N, "C3": Y, "C4": Y, "C5": Y, "S1": Y, "S2": Y, "S3": Y, "S4": Y, "S5": Y}
VALIDATION_ANSWERS = {q: Y for q in ASPECT_QUESTIONS}


def codes(diags):
    return sorted(d.code for d in diags)


def concern_response(answers, review=2):
    return ChecklistResponse("Asp-01", ChecklistKind.CONCERN_EVALUATION, dict(answers), review)


def test_default_config_covers_every_question():
    expected = GateConfig().expected_answers
    assert set(expected) == set(CONCERN_QUESTIONS) | set(ASPECT_QUESTIONS)
    assert [q for q, a in expected.items() if a is N] == ["C2"]


def test_evaluation_sheet_passes():
    result = evaluate_concern_checklist(concern_response(EVALUATION_ANSWERS))
    assert result.verdict is Verdict.PASS
    assert result.failing_questions == ()


def test_missing_details_answered_yes_fails():
    result = evaluate_concern_checklist(concern_response({**EVALUATION_ANSWERS, "C2": Y}))
    assert result.verdict is Verdict.FAIL
    assert result.failing_questions == ("C2",)


def test_unanswered_is_incomplete():
    answers = dict(EVALUATION_ANSWERS)
    del answers["S5"]
    result = evaluate_concern_checklist(concern_response(answers))
    assert result.verdict is Verdict.INCOMPLETE
    assert result.unanswered == ("S5",)


def test_all_yes_fails_on_c2_only():
    result = evaluate_concern_checklist(concern_response({q: Y for q in CONCERN_QUESTIONS}))
    assert result.failing_questions == ("C2",)


@pytest.mark.parametrize("question", CONCERN_QUESTIONS)
def test_single_flip_fails_on_that_question(question):
    flipped = {**EVALUATION_ANSWERS, question: N if EVALUATION_ANSWERS[question] is Y else Y}
    result = evaluate_concern_checklist(concern_response(flipped))
    assert (result.verdict, result.failing_questions) == (Verdict.FAIL, (question,))


def test_wrong_kind():
    with pytest.raises(ValfarError) as info:
        evaluate_concern_checklist(ChecklistResponse("A", ChecklistKind.ASPECT_VALIDATION, VALIDATION_ANSWERS))
    assert info.value.code == "WRONG_KIND"
    with pytest.raises(ValfarError):
        evaluate_aspect_checklist(concern_response(EVALUATION_ANSWERS))


def test_aspect_sheets_pass_and_echo_review(toll, course):
    for corpus, target in ((toll, "Asp01"), (course, "theme_a")):
        response = next(c for c in corpus.checklists if c.kind is ChecklistKind.ASPECT_VALIDATION)
        assert response.target_id == target
        result = evaluate_aspect_checklist(response, GateConfig(), corpus.aspect(target))
        assert (result.verdict, result.review_count) == (Verdict.PASS, 2)


def test_aspect_flip():
    response = ChecklistResponse("A1", ChecklistKind.ASPECT_VALIDATION, {**VALIDATION_ANSWERS, "A3": N}, 1)
    result = evaluate_aspect_checklist(response)
    assert (result.verdict, result.failing_questions, result.review_count) == (Verdict.FAIL, ("A3",), 1)


def test_aspect_checklist_must_match_aspect():
    response = ChecklistResponse("A1", ChecklistKind.ASPECT_VALIDATION, VALIDATION_ANSWERS)
    with pytest.raises(ValueError):
        evaluate_aspect_checklist(response, None, AspectDocument("A2", "Other"))


def test_config_overrides():
    config = parse_gate_config("# defect reading\nS3 = no\ns4 = No\n")
    result = evaluate_concern_checklist(concern_response(EVALUATION_ANSWERS), config)
    assert result.failing_questions == ("S3", "S4")
    with pytest.raises(ValueError):
        parse_gate_config("Q9 = yes")
    with pytest.raises(ValueError):
        parse_gate_config("C1 = maybe")
    with pytest.raises(ValueError):
        GateConfig({"C1": Y})


@settings(max_examples=50, deadline=None)
@given(st.dictionaries(st.sampled_from(CONCERN_QUESTIONS), st.sampled_from(Answer)))
def test_gate_is_pure_and_verdict_consistent(answers):
    a = evaluate_concern_checklist(concern_response(answers))
    assert a == evaluate_concern_checklist(concern_response(answers))
    complete = set(answers) == set(CONCERN_QUESTIONS)
    assert (a.verdict is Verdict.PASS) == (complete and not a.failing_questions)


# Non-functional template


def test_responsetime_description_is_clean(toll):
    assert validate_nf_description(toll.nf_description("ResponseTime"), toll) == []


def test_nonfunctional_related_concern_is_a_type_mismatch(toll):
    logged = Concern("Con09", "Logged", ConcernType.NON_FUNCTIONAL, objective="o", successful_scenario="s")
    corpus = replace(toll, concerns=toll.concerns + (logged,))
    nf = replace(toll.nf_description("ResponseTime"), related_concerns=("ATM", "Logged"))
    assert codes(validate_nf_description(nf, corpus)) == ["TYPE_MISMATCH"]


def test_related_nf_description_is_a_type_mismatch(course):
    nf = NfDescription("N9", "Speed", ("Logged",), "spec")
    assert codes(validate_nf_description(nf, course)) == ["TYPE_MISMATCH"]


def test_unknown_related_concern(toll):
    nf = replace(toll.nf_description("ResponseTime"), related_concerns=("ATM", "Foo"))
    assert codes(validate_nf_description(nf, toll)) == ["REF_UNRESOLVED"]


def test_nf_missing_fields():
    assert codes(validate_nf_description(NfDescription("N1", ""), Corpus())) == ["MISSING_FIELD"] * 3


def test_description_of_a_functional_concern(toll):
    nf = NfDescription("N9", "Vehicle", ("ATM",), "spec")
    assert codes(validate_nf_description(nf, toll)) == ["TYPE_MISMATCH"]


# Aspect document


def test_responsetime_aspect_is_clean(toll):
    aspect = toll.aspect("Asp01")
    assert aspect.priority == "High" and aspect.precondition
    assert validate_aspect_document(aspect, toll) == []


def test_logged_all_is_clean(course):
    aspect = course.aspect("Theme_a")
    assert aspect.crosscuts_all
    assert len(course.functional_concerns()) == 5
    assert validate_aspect_document(aspect, course) == []


def test_bad_priority(toll):
    aspect = replace(toll.aspect("Asp01"), priority="urgent")
    assert codes(validate_aspect_document(aspect, toll)) == ["BAD_PRIORITY"]


def test_aspect_field_checks(toll):
    bare = AspectDocument("A9", "", (), "", "")
    assert codes(validate_aspect_document(bare, toll)) == ["MISSING_CONDITION"] + ["MISSING_FIELD"] * 4
    dangling = replace(toll.aspect("Asp01"), concerns=("Nope",))
    assert codes(validate_aspect_document(dangling, toll)) == ["REF_UNRESOLVED"]
    post_only = replace(toll.aspect("Asp01"), precondition=None, postcondition="Responds in time.")
    assert validate_aspect_document(post_only, toll) == []


def test_all_with_no_functional_concern():
    aspect = AspectDocument("A1", "Logged", (ALL,), "d", "High", precondition="p")
    assert codes(validate_aspect_document(aspect, Corpus())) == ["EMPTY_EXPANSION"]


@settings(max_examples=50, deadline=None)
@given(corpora())
def test_all_expansion_equivalence(corpus):
    if not corpus.functional_concerns():
        return
    aspect = AspectDocument("AX", "Everything", (ALL,), "d", "Low", postcondition="p")
    explicit = replace(aspect, concerns=tuple(c.id for c in corpus.functional_concerns()))
    assert validate_aspect_document(aspect, corpus) == validate_aspect_document(explicit, corpus)
    assert corpus.expand_concerns(aspect.concerns) == corpus.expand_concerns(explicit.concerns)


# Review tracking


def test_tollgate_review_counts_agree(toll):
    assert check_review_tracking(toll) == []


def test_review_drift_and_stale_date():
    concern = Concern("C1", "A", ConcernType.FUNCTIONAL, review_count=0)
    drift = Corpus(concerns=(concern,), checklists=(ChecklistResponse("C1", ChecklistKind.CONCERN_EVALUATION, {}, 2),))
    assert codes(check_review_tracking(drift)) == ["REVIEW_DRIFT"]
    stale = Corpus(concerns=(replace(concern, review_count=1),))
    assert codes(check_review_tracking(stale)) == ["STALE_DATE"]
