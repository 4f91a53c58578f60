# Checklist gates
#
# A checklist answers a fixed set of yes/no questions about one concern or
# aspect. The gate passes when every answer matches the expected one.

from __future__ import annotations

from dataclasses import replace

from valfar import Answer, ChecklistKind, GateConfig, evaluate_concern_checklist, load_corpus
from valfar.fixtures import fixture_path

toll = load_corpus([fixture_path("toll.valfar")])
sheet = next(r for r in toll.checklists if r.kind is ChecklistKind.CONCERN_EVALUATION)
for question, answer in sorted(sheet.answers.items()):
    print(f"{question} = {answer.value}")

# Question C2 asks whether details are missing or forgotten, so the
# expected answer there is "no". Everything else expects "yes".

config = GateConfig()
print("\nverdict:", evaluate_concern_checklist(sheet, config).verdict.value)

# ## Flipping one answer
#
# Any single change fails the gate and names the question responsible.

for question in sheet.kind.questions:
    flipped = Answer.NO if sheet.answers[question] is Answer.YES else Answer.YES
    result = evaluate_concern_checklist(replace(sheet, answers={**sheet.answers, question: flipped}), config)
    print(f"flip {question}: {result.verdict.value} {list(result.failing_questions)}")

# ## A missing answer is not a failure
#
# Leaving a question blank gives Incomplete, which tells "not reviewed yet"
# apart from "reviewed and rejected".

partial = replace(sheet, answers={q: a for q, a in sheet.answers.items() if q != "S5"})
result = evaluate_concern_checklist(partial, config)
print(f"\nwithout S5: {result.verdict.value}, unanswered {list(result.unanswered)}")

# ## Changing the expectations
#
# A project that wants C2 answered "yes" can override it.

strict_c2 = config.with_overrides({"C2": Answer.YES})
print("with C2 expected yes:", evaluate_concern_checklist(sheet, strict_c2).verdict.value)
