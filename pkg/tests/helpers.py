"""Shared test helpers: independent oracles, random graph machinery, and
bit-exact comparison of evaluation results."""

from __future__ import annotations

import dataclasses
import random
import struct

from paramflow import Direction, Graph, PortRef, Registry
from paramflow.components import Mesh, Point, Value, ValueType
from paramflow.errors import EngineError
from paramflow.evaluation import EvalResult


# independent cycle detection (the acceptance oracle; no engine imports
# beyond reading public graph state)

def find_cycle(graph: Graph) -> bool:
    """Plain three-color DFS over the edge list."""
    adjacency: dict[int, list[int]] = {nid: [] for nid in graph.nodes}
    for edge in graph.edges:
        adjacency[edge.source.node].append(edge.target.node)
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {nid: WHITE for nid in graph.nodes}

    def visit(nid: int) -> bool:
        color[nid] = GRAY
        for succ in adjacency[nid]:
            if color[succ] == GRAY:
                return True
            if color[succ] == WHITE and visit(succ):
                return True
        color[nid] = BLACK
        return False

    return any(color[nid] == WHITE and visit(nid) for nid in graph.nodes)


def reaches(graph: Graph, start: int, goal: int) -> bool:
    """Exhaustive DFS reachability, including the trivial start == goal path."""
    adjacency: dict[int, list[int]] = {nid: [] for nid in graph.nodes}
    for edge in graph.edges:
        adjacency[edge.source.node].append(edge.target.node)
    stack, seen = [start], set()
    while stack:
        nid = stack.pop()
        if nid == goal:
            return True
        if nid in seen:
            continue
        seen.add(nid)
        stack.extend(adjacency[nid])
    return False


def longest_path_to_sink(graph: Graph, start: int) -> int:
    """Brute-force enumeration of all directed paths from ``start``."""
    adjacency: dict[int, list[int]] = {nid: [] for nid in graph.nodes}
    for edge in graph.edges:
        adjacency[edge.source.node].append(edge.target.node)

    def walk(nid: int) -> int:
        if not adjacency[nid]:
            return 0
        return 1 + max(walk(succ) for succ in adjacency[nid])

    return walk(start)


# bit-exact value comparison

def value_bits(value: Value):
    if value is None:
        return ("empty",)
    if isinstance(value, bool):
        return ("bool", value)
    if isinstance(value, float):
        return ("num", struct.pack("<d", value))
    if isinstance(value, str):
        return ("text", value)
    if isinstance(value, Point):
        return ("point", value_bits(value.x), value_bits(value.y), value_bits(value.z))
    if isinstance(value, Mesh):
        return ("mesh", tuple(value_bits(p) for p in value.vertices), value.triangles)
    raise TypeError(f"not a value: {value!r}")


def results_bitwise_equal(a: EvalResult, b: EvalResult) -> bool:
    if set(a.port_values) != set(b.port_values):
        return False
    if a.node_status != b.node_status:
        return False
    return all(value_bits(a.port_values[k]) == value_bits(b.port_values[k])
               for k in a.port_values)


def mesh_bbox(mesh: Mesh) -> tuple[tuple[float, float, float], tuple[float, float, float]]:
    xs = [p.x for p in mesh.vertices]
    ys = [p.y for p in mesh.vertices]
    zs = [p.z for p in mesh.vertices]
    return (min(xs), min(ys), min(zs)), (max(xs), max(ys), max(zs))


# the reference cube model: two sliders (origin 0, side length 4), three
# additions, two construct points, one box

def build_cube(graph: Graph, registry: Registry) -> dict[str, int]:
    origin = graph.add_node(registry, "Number Slider", 0)
    side = graph.add_node(registry, "Number Slider", 4)
    adds = [graph.add_node(registry, "Addition") for _ in range(3)]
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
    return {"origin": origin, "side": side, "adds": adds, "p1": p1, "p2": p2, "box": box}


def out(node: int, port: str) -> PortRef:
    return PortRef(node, Direction.OUT, port)


def inp(node: int, port: str) -> PortRef:
    return PortRef(node, Direction.IN, port)


# random graphs and mutations, built strictly through the public API

NODE_TYPES = ("Number Slider", "Boolean Toggle", "Addition", "Multiplication",
              "Division", "Construct Point", "Box", "Panel")


def random_value(rng: random.Random, value_type: ValueType) -> Value:
    if value_type == ValueType.NUMBER:
        return rng.choice([float(rng.randint(-50, 150)), rng.uniform(-10, 10)])
    if value_type == ValueType.BOOLEAN:
        return rng.random() < 0.5
    if value_type == ValueType.TEXT:
        return rng.choice(["alpha", "beta", "gamma", "delta"])
    if value_type == ValueType.POINT:
        return Point(rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5))
    if value_type == ValueType.ANY:
        return random_value(rng, rng.choice(
            [ValueType.NUMBER, ValueType.BOOLEAN, ValueType.TEXT, ValueType.POINT]))
    raise ValueError(f"no random values of type {value_type}")


@dataclasses.dataclass
class EdgeAttempt:
    source: PortRef | None = None
    target: PortRef | None = None
    outcome: object = None
    error: EngineError | None = None


def try_random_edge(rng: random.Random, graph: Graph, registry: Registry) -> EdgeAttempt:
    """One random add_edge attempt, keeping what was attempted for oracles."""
    nodes = list(graph.nodes)
    if len(nodes) < 2:
        return EdgeAttempt()
    src = rng.choice(nodes)
    dst = rng.choice(nodes)
    src_t = registry.lookup(graph.nodes[src].type_name)
    dst_t = registry.lookup(graph.nodes[dst].type_name)
    if not src_t.outputs or not dst_t.inputs:
        return EdgeAttempt()
    source = out(src, rng.choice(src_t.outputs).name)
    target = inp(dst, rng.choice(dst_t.inputs).name)
    try:
        return EdgeAttempt(source, target, graph.add_edge(registry, source, target))
    except EngineError as exc:
        return EdgeAttempt(source, target, None, exc)


def random_graph(rng: random.Random, registry: Registry, max_nodes: int = 20) -> Graph:
    graph = Graph()
    for _ in range(rng.randint(1, max_nodes)):
        type_name = rng.choice(NODE_TYPES)
        initial = float(rng.randint(0, 100)) if type_name == "Number Slider" else None
        graph.add_node(registry, type_name, initial)
    for _ in range(len(graph.nodes) * 3):
        try_random_edge(rng, graph, registry)
    return graph


def random_mutation(rng: random.Random, graph: Graph, registry: Registry) -> set[int]:
    """Apply one random mutation through the public API.

    Returns the changed-node set under the same protocol the engine uses
    (structural edits report both endpoints).
    """
    choices = ["add_node", "add_edge"]
    if graph.nodes:
        choices += ["set_param", "move_node", "remove_node"]
    if graph.edges:
        choices += ["remove_edge"]
    op = rng.choice(choices)

    if op == "add_node":
        type_name = rng.choice(NODE_TYPES)
        initial = float(rng.randint(0, 100)) if type_name == "Number Slider" else None
        return {graph.add_node(registry, type_name, initial)}
    if op == "add_edge":
        attempt = try_random_edge(rng, graph, registry)
        if attempt.outcome is None:
            return set()
        edge = attempt.outcome.edge
        return {edge.source.node, edge.target.node}
    if op == "remove_edge":
        edge = rng.choice(graph.edges)
        graph.remove_edge(edge.source, edge.target)
        return {edge.source.node, edge.target.node}
    if op == "remove_node":
        victim = rng.choice(sorted(graph.nodes))
        removed = graph.remove_node(victim)
        return {e.target.node for e in removed if e.source.node == victim} & set(graph.nodes)
    if op == "move_node":
        nid = rng.choice(sorted(graph.nodes))
        from paramflow import Position

        graph.move_node(nid, Position(rng.uniform(-9, 9), rng.uniform(-9, 9), 0.0))
        return set()
    # set_param
    nid = rng.choice(sorted(graph.nodes))
    template = registry.lookup(graph.nodes[nid].type_name)
    settable = [p for p in template.inputs + template.intrinsics
                if p.value_type != ValueType.MESH]
    if not settable:
        return set()
    spec = rng.choice(settable)
    graph.set_param(registry, nid, spec.name, random_value(rng, spec.value_type))
    return {nid}
