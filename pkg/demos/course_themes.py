# Mining themes from the course management requirements
#
# Action words are the starting point. Each requirement is scanned for
# lexicon verbs in any inflection, and an action that shares requirements
# with enough other actions is treated as crosscutting.

from __future__ import annotations

from valfar import extract_action_view, identify_crosscutting, load_corpus
from valfar.fixtures import fixture_path
from valfar.matrices import build_theme_matrix
from valfar.themes import emit_clipped_view, load_lexicon

course = load_corpus([fixture_path("course.valfar")])
lexicon = load_lexicon(fixture_path("course.lexicon"))

for req in course.requirements:
    print(f"{req.id}: {req.text}")

# ## The action view
#
# Which requirements mention which actions. "logged" counts as log and
# "giving" would count as give.

view = extract_action_view(course.requirements, lexicon)
for action in view.actions:
    print(f"{action:>10}: {', '.join(view.requirements_of(action))}")

# ## Crosscutting at different thresholds
#
# With k=2 only log shares requirements with two or more other actions.
# Lowering k to 1 pulls in the actions that appear next to log at least once.

for k in (1, 2, 3):
    marked = identify_crosscutting(view, k)
    print(f"k={k}: crosscutting={sorted(marked.crosscutting)} base={list(marked.base)}")

# ## The clipped action view as DOT
#
# Pipe this into `dot -Tpng` to draw it. Crosscutting actions are filled grey.

themed = identify_crosscutting(view, 2)
print(emit_clipped_view(themed))

# ## Mined themes against the documented aspect
#
# The overlay matrix marks which functional concerns each mined crosscutting
# theme touches, for comparison with the hand-written Logged aspect.

print(build_theme_matrix(themed, course).to_text())
