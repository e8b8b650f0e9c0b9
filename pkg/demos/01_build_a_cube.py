"""Build the classic parametric cube with the library API and evaluate it.

Two corner points define a box: P1 stays at the origin, P2 gets the same
"side length" slider added onto every coordinate, so one slider drives the
cube's size.
"""

from paramflow import Direction, Graph, PortRef, Registry, evaluate_full, sink_geometry


def out(node, port):
    return PortRef(node, Direction.OUT, port)


def inp(node, port):
    return PortRef(node, Direction.IN, port)


registry = Registry()
graph = Graph()

origin = graph.add_node(registry, "Number Slider", 0)
side = graph.add_node(registry, "Number Slider", 4)
adds = [graph.add_node(registry, "Addition") for _ in "xyz"]
p1 = graph.add_node(registry, "Construct Point")
p2 = graph.add_node(registry, "Construct Point")
box = graph.add_node(registry, "Box")

for coord, add in zip("xyz", adds):
    graph.add_edge(registry, out(origin, "out"), inp(add, "a"))
    graph.add_edge(registry, out(side, "out"), inp(add, "b"))
    graph.add_edge(registry, out(add, "sum"), inp(p2, coord))
for coord in "xyz":
    graph.add_edge(registry, out(origin, "out"), inp(p1, coord))
graph.add_edge(registry, out(p1, "point"), inp(box, "a"))
graph.add_edge(registry, out(p2, "point"), inp(box, "b"))

result = evaluate_full(graph, registry)
for node_id, mesh in sink_geometry(graph, result):
    xs = [p.x for p in mesh.vertices]
    print(f"sink node {node_id}: {len(mesh.vertices)} vertices, "
          f"{len(mesh.triangles)} triangles, x from {min(xs)} to {max(xs)}")

# the table-metaphor layout: node height encodes distance to the sink
for node_id, height in sorted(graph.compute_heights(0.5).items()):
    print(f"node {node_id}: height {height}")

# turn the slider and the cube follows
graph.set_param(registry, side, "value", 9)
mesh = sink_geometry(graph, evaluate_full(graph, registry))[0][1]
print("after setting side length to 9:", max(p.x for p in mesh.vertices))
