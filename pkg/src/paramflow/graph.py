"""The acyclic graph document: nodes, edges, and the edit actions.

The graph is a plain value with no internal locking; callers serialize
writers. Every mutation bumps ``generation`` so evaluation caches can tell
snapshots apart.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

from .components import (
    ComponentTemplate,
    Kind,
    Registry,
    Value,
    is_assignable,
    normalize_value,
    value_type_of,
)
from .errors import (
    DirectionMismatch,
    NonFinitePosition,
    SelfLoop,
    TypeMismatch,
    UnknownEdge,
    UnknownNode,
    UnknownPort,
    ValueTypeMismatch,
    WouldCreateCycle,
)


class Direction(Enum):
    IN = "in"
    OUT = "out"


@dataclass(frozen=True)
class Position:
    """Table-plane coordinates plus height above the table."""

    u: float = 0.0
    v: float = 0.0
    height: float = 0.0

    def __post_init__(self):
        for c in (self.u, self.v, self.height):
            if isinstance(c, bool) or not isinstance(c, (int, float)) or not math.isfinite(c):
                raise NonFinitePosition(f"position coordinates must be finite, got {c!r}")
        if self.height < 0:
            raise NonFinitePosition(f"height must be >= 0, got {self.height!r}")
        object.__setattr__(self, "u", float(self.u))
        object.__setattr__(self, "v", float(self.v))
        object.__setattr__(self, "height", float(self.height))


ORIGIN = Position(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class PortRef:
    node: int
    direction: Direction
    port: str


@dataclass(frozen=True)
class Edge:
    source: PortRef
    target: PortRef

    def sort_key(self) -> tuple:
        return (self.source.node, self.source.port, self.target.node, self.target.port)


@dataclass
class Node:
    id: int
    type_name: str
    position: Position = ORIGIN
    params: dict[str, Value] = field(default_factory=dict)


@dataclass(frozen=True)
class AddEdgeOutcome:
    """``replaced`` holds the edge that previously fed the target port."""

    edge: Edge
    replaced: Edge | None = None

    @property
    def added(self) -> bool:
        return self.replaced is None


class Graph:
    """Always-acyclic dataflow document."""

    def __init__(self):
        self.nodes: dict[int, Node] = {}
        self.next_id: int = 1
        self.generation: int = 0
        # Primary edge index: each In port holds at most one inbound edge.
        self._in_edges: dict[tuple[int, str], Edge] = {}
        self._out_edges: dict[int, set[Edge]] = {}

    # introspection

    @property
    def edges(self) -> list[Edge]:
        return sorted(self._in_edges.values(), key=Edge.sort_key)

    def node(self, node_id: int) -> Node:
        node = self.nodes.get(node_id)
        if node is None:
            raise UnknownNode(f"no node with id {node_id}")
        return node

    def in_edge(self, node_id: int, port: str) -> Edge | None:
        return self._in_edges.get((node_id, port))

    def in_edges_of(self, node_id: int) -> list[Edge]:
        return sorted(
            (e for (nid, _), e in self._in_edges.items() if nid == node_id),
            key=Edge.sort_key,
        )

    def out_edges_of(self, node_id: int) -> list[Edge]:
        return sorted(self._out_edges.get(node_id, ()), key=Edge.sort_key)

    def successors(self, node_id: int) -> set[int]:
        return {e.target.node for e in self._out_edges.get(node_id, ())}

    def sinks(self) -> list[int]:
        return sorted(nid for nid in self.nodes if not self._out_edges.get(nid))

    def param(self, registry: Registry, node_id: int, name: str) -> Value:
        """Effective param value: local override, else template default."""
        node = self.node(node_id)
        template = registry.lookup(node.type_name)
        spec = template.param_spec(name)
        if spec is None:
            raise UnknownPort(f"{node.type_name!r} has no input or intrinsic {name!r}")
        if name in node.params:
            return node.params[name]
        return spec.default

    # edit actions

    def add_node(
        self,
        registry: Registry,
        type_name: str,
        initial_value: Value = None,
        position: Position | None = None,
    ) -> int:
        template = registry.lookup(type_name)
        params: dict[str, Value] = {}
        if initial_value is not None:
            if template.value_param is None:
                raise ValueTypeMismatch(
                    f"{template.name!r} does not take an initial value"
                )
            try:
                params[template.value_param] = self._checked_param(
                    template, template.value_param, initial_value
                )
            except TypeMismatch as exc:
                raise ValueTypeMismatch(str(exc)) from None
        node_id = self.next_id
        self.next_id += 1
        self.nodes[node_id] = Node(node_id, template.name, position or ORIGIN, params)
        self._out_edges[node_id] = set()
        if template.kind == Kind.SLIDER:
            self._normalize_slider(self.nodes[node_id], template, template.value_param or "value")
        self.generation += 1
        return node_id

    def remove_node(self, node_id: int) -> list[Edge]:
        self.node(node_id)
        removed = sorted(
            set(self.in_edges_of(node_id)) | set(self.out_edges_of(node_id)),
            key=Edge.sort_key,
        )
        for edge in removed:
            self._drop_edge(edge)
        del self.nodes[node_id]
        del self._out_edges[node_id]
        self.generation += 1
        return removed

    def move_node(self, node_id: int, position: Position) -> None:
        node = self.node(node_id)
        node.position = position
        self.generation += 1

    def add_edge(self, registry: Registry, source: PortRef, target: PortRef) -> AddEdgeOutcome:
        if source.direction != Direction.OUT or target.direction != Direction.IN:
            raise DirectionMismatch(
                "edges run from an Out port to an In port, got "
                f"{source.direction.value} -> {target.direction.value}"
            )
        src_spec = self._port_spec(registry, source)
        dst_spec = self._port_spec(registry, target)
        if source.node == target.node:
            raise SelfLoop(f"node {source.node} cannot feed itself")
        if not is_assignable(src_spec.value_type, dst_spec.value_type):
            raise TypeMismatch(
                f"cannot connect {src_spec.value_type.value} output {source.port!r} "
                f"to {dst_spec.value_type.value} input {target.port!r}"
            )
        if self.would_create_cycle(source.node, target.node):
            raise WouldCreateCycle(
                f"edge {source.node} -> {target.node} would create a cycle"
            )
        replaced = self._in_edges.get((target.node, target.port))
        if replaced is not None:
            self._drop_edge(replaced)
        edge = Edge(source, target)
        self._in_edges[(target.node, target.port)] = edge
        self._out_edges[source.node].add(edge)
        self.generation += 1
        return AddEdgeOutcome(edge, replaced)

    def remove_edge(self, source: PortRef, target: PortRef) -> None:
        edge = self._in_edges.get((target.node, target.port))
        if edge is None or edge.source != source:
            raise UnknownEdge(
                f"no edge {source.node}.{source.port} -> {target.node}.{target.port}"
            )
        self._drop_edge(edge)
        self.generation += 1

    def would_create_cycle(self, source_node: int, target_node: int) -> bool:
        """True iff target already reaches source, so source->target closes a loop."""
        self.node(source_node)
        self.node(target_node)
        stack = [target_node]
        seen = set()
        while stack:
            current = stack.pop()
            if current == source_node:
                return True
            if current in seen:
                continue
            seen.add(current)
            stack.extend(self.successors(current))
        return False

    def set_param(self, registry: Registry, node_id: int, name: str, value: Value) -> None:
        node = self.node(node_id)
        template = registry.lookup(node.type_name)
        if template.param_spec(name) is None:
            raise UnknownPort(f"{node.type_name!r} has no input or intrinsic {name!r}")
        node.params[name] = self._checked_param(template, name, value)
        if template.kind == Kind.SLIDER:
            self._normalize_slider(node, template, name)
        self.generation += 1

    def compute_heights(self, step: float) -> dict[int, float]:
        """step x (longest directed path to any sink); never touches positions."""
        if not (isinstance(step, (int, float)) and step > 0 and math.isfinite(step)):
            raise ValueError(f"step must be a positive finite number, got {step!r}")
        levels: dict[int, int] = {}

        def level(nid: int) -> int:
            if nid not in levels:
                succ = self.successors(nid)
                levels[nid] = 1 + max(level(s) for s in succ) if succ else 0
            return levels[nid]

        return {nid: float(step) * level(nid) for nid in sorted(self.nodes)}

    # internals

    def _port_spec(self, registry: Registry, ref: PortRef):
        node = self.node(ref.node)
        template = registry.lookup(node.type_name)
        if ref.direction == Direction.OUT:
            spec = template.output_spec(ref.port)
            other = template.input_spec(ref.port)
        else:
            spec = template.input_spec(ref.port)
            other = template.output_spec(ref.port)
        if spec is None:
            if other is not None:
                raise DirectionMismatch(
                    f"port {ref.port!r} of {template.name!r} is not an "
                    f"{ref.direction.value} port"
                )
            raise UnknownPort(f"{template.name!r} has no port {ref.port!r}")
        return spec

    def _drop_edge(self, edge: Edge) -> None:
        del self._in_edges[(edge.target.node, edge.target.port)]
        self._out_edges[edge.source.node].discard(edge)

    def _checked_param(self, template: ComponentTemplate, name: str, value: Value) -> Value:
        spec = template.param_spec(name)
        value = normalize_value(value)
        if value is None:
            raise TypeMismatch(f"cannot store an empty value on {name!r}")
        vt = value_type_of(value)
        if not is_assignable(vt, spec.value_type):
            raise TypeMismatch(
                f"{name!r} of {template.name!r} takes {spec.value_type.value}, got {vt.value}"
            )
        return value

    def _normalize_slider(self, node: Node, template: ComponentTemplate, assigned: str) -> None:
        """Keep min <= value <= max, growing the range around an assigned value."""

        def effective(name: str) -> float:
            if name in node.params:
                return node.params[name]
            return template.intrinsic_spec(name).default

        lo, hi, value = effective("min"), effective("max"), effective("value")
        if assigned == "value":
            lo, hi = min(lo, value), max(hi, value)
        else:
            if lo > hi:
                if assigned == "min":
                    hi = lo
                else:
                    lo = hi
            value = min(max(value, lo), hi)
        for name, v in (("min", lo), ("max", hi), ("value", value)):
            if effective(name) != v or name in node.params:
                node.params[name] = v
