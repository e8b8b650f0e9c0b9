"""Incremental re-evaluation: touch one slider, recompute only its cone.

The cache fingerprints each node's structure; changed nodes and everything
downstream recompute, everything else is reused, and the result is
bit-for-bit what a full evaluation would produce.
"""

from paramflow import Engine

engine = Engine()
for phrase in [
    "add slider with value zero",        # node 1: origin
    "add slider with value four",        # node 2: side length
    "add component addition",            # node 3
    "add component construct point",     # node 4: P1 (stays at origin)
    "add component construct point",     # node 5: P2
    "add component box",                 # node 6
    "connect node one output out to node three input a",
    "connect node two output out to node three input b",
    "connect node three output sum to node five input x",
    "connect node three output sum to node five input y",
    "connect node three output sum to node five input z",
    "connect node four output point to node six input a",
    "connect node five output point to node six input b",
]:
    engine.apply_phrase(phrase)

print("nodes:", len(engine.graph.nodes))

engine.apply_phrase("set value of node two to five")
print("recomputed after slider edit:", sorted(engine.result.recomputed))
print("untouched:", sorted(set(engine.graph.nodes) - set(engine.result.recomputed)))

mesh = engine.geometry_meshes()[0][1]
print("new cube corner:", max(p.x for p in mesh.vertices))

# moving a node is metadata only: nothing recomputes
engine.apply_phrase("move node six to eight two")
print("recomputed after move:", list(engine.result.recomputed))
