"""Documents are canonical JSON; foreign templates are learned on load.

Saving the same state always yields the same bytes, so documents diff and
hash cleanly. A document may embed templates for component types this
installation has never seen; they load as opaque foreign components and
their names become speakable.
"""

import json
import tempfile
from pathlib import Path

from paramflow import Engine, Registry, export_obj, load, save
from paramflow.graph import Graph

engine = Engine()
for phrase in [
    "add slider with value four",
    "add component construct point",
    "connect node one output out to node two input x",
]:
    engine.apply_phrase(phrase)

data = engine.save_document()
print("document bytes:", data.decode())

# round trip: load(save(g)) re-saves to identical bytes
registry = Registry()
graph = load(data, registry)
assert save(graph, registry) == data
print("round trip is byte-identical")

# a document carrying an unknown component type plus its template
foreign = {
    "format_version": 1,
    "templates": [{
        "name": "Voronoi",
        "inputs": [{"name": "cells", "type": "number", "default": 10}],
        "intrinsics": [],
        "outputs": [{"name": "result", "type": "mesh"}],
    }],
    "nodes": [{"id": 1, "type": "Voronoi", "position": [0, 0, 0], "params": {}}],
    "edges": [],
}
other = Engine()
other.load_document(json.dumps(foreign).encode())
status = other.result.node_status[1]
print("foreign node status:", status.kind.value)
print("now speakable:", "Voronoi" in other.grammar.component_type_names())

# sink geometry exports as Wavefront OBJ
cube = Engine()
for phrase in ["add component box", "set value of node one to five"]:
    try:
        cube.apply_phrase(phrase)
    except Exception as exc:  # the box has no designated value port
        print("rejected as expected:", type(exc).__name__)
obj = cube.geometry_obj()
path = Path(tempfile.mkdtemp()) / "box.obj"
path.write_bytes(obj)
print(f"wrote {path} ({len(obj.splitlines())} lines)")
