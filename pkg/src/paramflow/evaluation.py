"""Dataflow evaluation: full, incremental, and sink geometry extraction.

Evaluation is pure over a graph snapshot; all per-node failures become
statuses, never exceptions. Incremental evaluation recomputes exactly the
changed nodes and everything downstream of them and is bitwise-equal to a
full evaluation.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from .components import Mesh, NodeStatus, Registry, Value, evaluate_component
from .errors import CycleDetected, StaleCache
from .graph import Direction, Graph, PortRef


def topo_order(graph: Graph) -> list[int]:
    """Edge-respecting order; ties broken by ascending node id."""
    indegree = {nid: 0 for nid in graph.nodes}
    for edge in graph.edges:
        indegree[edge.target.node] += 1
    ready = [nid for nid, deg in indegree.items() if deg == 0]
    heapq.heapify(ready)
    order: list[int] = []
    while ready:
        nid = heapq.heappop(ready)
        order.append(nid)
        for edge in graph.out_edges_of(nid):
            succ = edge.target.node
            indegree[succ] -= 1
            if indegree[succ] == 0:
                heapq.heappush(ready, succ)
    if len(order) != len(graph.nodes):
        raise CycleDetected("graph contains a directed cycle; invariant broken")
    return order


@dataclass
class EvalResult:
    port_values: dict[PortRef, Value]
    node_status: dict[int, NodeStatus]
    generation: int
    recomputed: tuple[int, ...] = ()

    def value(self, node_id: int, port: str) -> Value:
        return self.port_values.get(PortRef(node_id, Direction.OUT, port))


Fingerprint = tuple


def _fingerprint(graph: Graph, node_id: int) -> Fingerprint:
    """Structure that, when unchanged, makes a cached node value reusable
    as long as no upstream value changed."""
    node = graph.nodes[node_id]
    wires = tuple(
        (e.target.port, e.source.node, e.source.port) for e in graph.in_edges_of(node_id)
    )
    params = tuple(sorted(node.params.items()))
    return (node.type_name, wires, params)


@dataclass
class EvalCache:
    result: EvalResult
    fingerprints: dict[int, Fingerprint] = field(default_factory=dict)

    @classmethod
    def capture(cls, graph: Graph, result: EvalResult) -> "EvalCache":
        return cls(result, {nid: _fingerprint(graph, nid) for nid in graph.nodes})


def _evaluate_node(
    graph: Graph,
    registry: Registry,
    node_id: int,
    port_values: dict[PortRef, Value],
) -> tuple[dict[PortRef, Value], NodeStatus]:
    node = graph.nodes[node_id]
    template = registry.lookup(node.type_name)
    inputs: dict[str, Value] = {}
    for spec in template.inputs:
        edge = graph.in_edge(node_id, spec.name)
        if edge is not None:
            inputs[spec.name] = port_values.get(edge.source)
        elif spec.name in node.params:
            inputs[spec.name] = node.params[spec.name]
        else:
            inputs[spec.name] = spec.default
    intrinsics = {
        spec.name: node.params.get(spec.name, spec.default) for spec in template.intrinsics
    }
    outputs, status = evaluate_component(template.kind, inputs, intrinsics, template.outputs)
    values = {
        PortRef(node_id, Direction.OUT, spec.name): outputs.get(spec.name)
        for spec in template.outputs
    }
    return values, status


def evaluate_full(graph: Graph, registry: Registry) -> EvalResult:
    port_values: dict[PortRef, Value] = {}
    statuses: dict[int, NodeStatus] = {}
    order = topo_order(graph)
    for nid in order:
        values, status = _evaluate_node(graph, registry, nid, port_values)
        port_values.update(values)
        statuses[nid] = status
    return EvalResult(port_values, statuses, graph.generation, tuple(order))


def evaluate_incremental(
    graph: Graph,
    registry: Registry,
    cache: EvalCache,
    changed: set[int],
) -> EvalResult:
    """Recompute ``changed`` and everything reachable downstream of it.

    Raises StaleCache when the graph's structure differs from the cache in a
    way not covered by ``changed``; callers then fall back to evaluate_full.
    """
    live = set(graph.nodes)
    if not changed <= live:
        raise StaleCache(f"changed nodes {sorted(changed - live)} are not in the graph")
    for nid in live:
        if nid in changed:
            continue
        known = cache.fingerprints.get(nid)
        if known is None or known != _fingerprint(graph, nid):
            raise StaleCache(f"node {nid} changed without notification")

    dirty: set[int] = set()
    frontier = list(changed)
    while frontier:
        nid = frontier.pop()
        if nid in dirty:
            continue
        dirty.add(nid)
        frontier.extend(graph.successors(nid))

    port_values: dict[PortRef, Value] = {
        ref: v for ref, v in cache.result.port_values.items() if ref.node in live
    }
    statuses: dict[int, NodeStatus] = {
        nid: s for nid, s in cache.result.node_status.items() if nid in live
    }
    recomputed: list[int] = []
    for nid in topo_order(graph):
        if nid not in dirty:
            continue
        values, status = _evaluate_node(graph, registry, nid, port_values)
        port_values.update(values)
        statuses[nid] = status
        recomputed.append(nid)
    return EvalResult(port_values, statuses, graph.generation, tuple(recomputed))


def sink_geometry(graph: Graph, result: EvalResult) -> list[tuple[int, Mesh]]:
    """Every mesh produced by a sink node, in ascending node id order."""
    meshes: list[tuple[int, Mesh]] = []
    for nid in graph.sinks():
        for ref in _out_refs(graph, result, nid):
            value = result.port_values.get(ref)
            if isinstance(value, Mesh):
                meshes.append((nid, value))
    return meshes


def _out_refs(graph: Graph, result: EvalResult, node_id: int) -> list[PortRef]:
    return sorted(
        (ref for ref in result.port_values if ref.node == node_id),
        key=lambda r: r.port,
    )
