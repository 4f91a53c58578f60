# Toll collection walkthrough
#
# This script follows the toll collection case study from raw concerns to a
# validated aspect. Run it from the repository root with `python demos/toll_walkthrough.py`.

from __future__ import annotations

from valfar import (
    ActionLexicon,
    PipelineOptions,
    apply_decomposition,
    build_aspect_dependency_matrix,
    build_crosscutting_matrix,
    lint_decomposition,
    load_corpus,
    render_report,
    validate_corpus,
)
from valfar.fixtures import fixture_path
from valfar.themes import load_lexicon

# ## The tangled TollGate concern
#
# Before decomposition the TollGate scenario mixes entry, payment, plate
# capture and exit behaviour in one long paragraph. The decomposition rules
# notice both its length and the other concerns it names.

raw = load_corpus([fixture_path("toll_raw.valfar")])
tollgate = raw.concern("TollGate")
print(f"{tollgate.name}: {len(tollgate.successful_scenario.split())} words, review {tollgate.review_count}")
for d in lint_decomposition(tollgate, raw):
    print(" ", d)

# ## Splitting it up
#
# Each child gets one responsibility. The parent keeps its objective, points
# its scenario at the new children and records one more review.

children = [
    ("EntryToll", "Detects the installed gizmo on the vehicle."),
    ("SingleToll", "Turn the light into the green for authorized vehicles and display the amount of money to be paid."),
    ("PayToll", "Display the amount of money to be paid by authorized vehicles."),
    ("PlateCapture", "It captures the plate numbers of unauthorized vehicles."),
    ("ExitToll", "Checks the entrance of the vehicle through the gate whether it is a valid entrance or not."),
]
split = apply_decomposition(raw, tollgate.id, children)
after = split.concern(tollgate.id)
print(f"\nafter decomposition: review {after.review_count}, scenario {after.successful_scenario!r}")
print("remaining DEC diagnostics:", len(lint_decomposition(after, split)))
print("children:", ", ".join(c.name for c in split.children(tollgate.id)))

# ## The finished corpus
#
# The curated fixture holds the decomposed concerns, the ResponseTime
# description with its evaluation sheet and the aspect with its validation
# sheet. The full pipeline reports no errors and both gates pass.

toll = load_corpus([fixture_path("toll.valfar")])
report = validate_corpus(toll)
print()
print(render_report(report))

# ## Where ResponseTime cuts across
#
# ResponseTime reaches four functional concerns. There is only one aspect,
# so the dependency matrix is a single empty cell.

print(build_crosscutting_matrix(toll).to_text())
print(build_aspect_dependency_matrix(toll).to_text())

# ## Checking concern types against an action lexicon
#
# With a lexicon, functional concerns that mention no action verb are flagged.
# Every toll concern names at least one.

lexicon: ActionLexicon = load_lexicon(fixture_path("toll.lexicon"))
typed = validate_corpus(toll, PipelineOptions(lexicon=lexicon))
print("TYPE_SUSPECT count:", sum(d.code == "TYPE_SUSPECT" for d in typed.all_diagnostics()))
