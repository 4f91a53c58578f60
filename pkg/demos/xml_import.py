# Importing viewpoint XML
#
# Viewpoint-style XML groups requirements under named concerns. Importing
# gives an ordinary corpus that the rest of the tool chain understands.

from __future__ import annotations

from valfar import import_arcade_xml, serialize_corpus
from valfar.fixtures import fixture_path

diagnostics = []
viewpoints = import_arcade_xml(fixture_path("toll_viewpoints.xml").read_bytes(), "toll_viewpoints.xml", diagnostics)
print("concerns:", ", ".join(c.name for c in viewpoints.concerns))
print("requirements:", len(viewpoints.requirements))

# Elements the importer does not model are skipped with a warning rather
# than dropped silently.

for d in diagnostics:
    print(" ", d)

# ## Named requirements become sub-concerns
#
# In the decomposition file every requirement carries a name, so each one
# becomes a child concern of TollGate.

decomposed = import_arcade_xml(fixture_path("tollgate_decomposition.xml").read_bytes())
for child in decomposed.children(decomposed.concern("TollGate").id):
    print(f"  {child.id}: {child.name}")

# ## Back to the block format

print(serialize_corpus(decomposed))
