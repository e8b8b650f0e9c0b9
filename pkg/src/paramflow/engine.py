"""One editable document plus everything a front end needs around it:
registry, grammar, evaluation cache, and the ordered event log.

The REPL, the scenario runner, and every HTTP session drive the same class,
so a phrase behaves identically no matter where it was typed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from . import grammar as gr
from . import persistence
from .components import Mesh, Registry, StatusKind, Value, canonical_number
from .errors import EngineError, StaleCache
from .evaluation import EvalCache, EvalResult, evaluate_full, evaluate_incremental, sink_geometry
from .graph import Graph, Position


@dataclass(frozen=True)
class Event:
    seq: int
    kind: str  # graph_changed | geometry_changed | command_rejected
    payload: dict

    def to_json(self) -> dict:
        return {"seq": self.seq, "kind": self.kind, **self.payload}


def _position_out(position: Position) -> list:
    return [canonical_number(position.u), canonical_number(position.v),
            canonical_number(position.height)]


def _value_out(value: Value) -> Any:
    return persistence.value_out(value)


def command_to_action(command: gr.EditCommand) -> dict:
    """Structured-action wire form of an edit command."""
    if isinstance(command, gr.AddComponent):
        action: dict[str, Any] = {"kind": "add_component", "type": command.type_name}
        if command.value is not None:
            action["value"] = canonical_number(command.value)
        return action
    if isinstance(command, gr.RemoveNode):
        return {"kind": "remove_node", "node": command.node}
    if isinstance(command, gr.MoveNode):
        return {"kind": "move_node", "node": command.node,
                "position": _position_out(command.position)}
    if isinstance(command, gr.ConnectPorts):
        return {"kind": "connect", "src_node": command.src_node, "src_port": command.src_port,
                "dst_node": command.dst_node, "dst_port": command.dst_port}
    if isinstance(command, gr.DisconnectPorts):
        return {"kind": "disconnect", "src_node": command.src_node, "src_port": command.src_port,
                "dst_node": command.dst_node, "dst_port": command.dst_port}
    if isinstance(command, gr.SetValue):
        return {"kind": "set_value", "node": command.node, "value": canonical_number(command.value)}
    if isinstance(command, gr.SetText):
        return {"kind": "set_text", "node": command.node, "text": command.text}
    raise TypeError(f"not an edit command: {command!r}")


_ACTION_KEYS = {
    "add_component": ({"type"}, {"value"}),
    "remove_node": ({"node"}, set()),
    "move_node": ({"node", "position"}, set()),
    "connect": ({"src_node", "src_port", "dst_node", "dst_port"}, set()),
    "disconnect": ({"src_node", "src_port", "dst_node", "dst_port"}, set()),
    "set_value": ({"node", "value"}, set()),
    "set_text": ({"node", "text"}, set()),
}


class BadAction(EngineError):
    """A structured action that does not follow the documented schema."""


def action_to_command(action: Any) -> gr.EditCommand:
    """Parse the structured-action wire form; strict about fields."""
    if not isinstance(action, dict) or not isinstance(action.get("kind"), str):
        raise BadAction("action must be an object with a string 'kind'")
    kind = action["kind"]
    if kind not in _ACTION_KEYS:
        raise BadAction(f"unknown action kind {kind!r}")
    required, optional = _ACTION_KEYS[kind]
    fields = set(action) - {"kind"}
    if fields - required - optional:
        raise BadAction(f"unknown fields for {kind}: {sorted(fields - required - optional)}")
    if required - fields:
        raise BadAction(f"missing fields for {kind}: {sorted(required - fields)}")

    def number(name: str) -> float:
        v = action[name]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise BadAction(f"{name} must be a number")
        return float(v)

    def node_id(name: str) -> int:
        v = action[name]
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise BadAction(f"{name} must be a positive integer node id")
        return v

    def text(name: str) -> str:
        v = action[name]
        if not isinstance(v, str):
            raise BadAction(f"{name} must be a string")
        return v

    if kind == "add_component":
        value = number("value") if "value" in action else None
        return gr.AddComponent(text("type"), value)
    if kind == "remove_node":
        return gr.RemoveNode(node_id("node"))
    if kind == "move_node":
        raw = action["position"]
        if not (isinstance(raw, list) and len(raw) == 3
                and all(isinstance(c, (int, float)) and not isinstance(c, bool) for c in raw)):
            raise BadAction("position must be [u, v, height]")
        return gr.MoveNode(node_id("node"), Position(*(float(c) for c in raw)))
    if kind == "connect":
        return gr.ConnectPorts(node_id("src_node"), text("src_port"),
                               node_id("dst_node"), text("dst_port"))
    if kind == "disconnect":
        return gr.DisconnectPorts(node_id("src_node"), text("src_port"),
                                  node_id("dst_node"), text("dst_port"))
    if kind == "set_value":
        return gr.SetValue(node_id("node"), number("value"))
    return gr.SetText(node_id("node"), text("text"))


@dataclass
class ApplyOutcome:
    command: gr.EditCommand
    summary: gr.ChangeSummary
    result: EvalResult

    @property
    def created_id(self) -> int | None:
        return self.summary.created_id


class Engine:
    """A single document and its edit/evaluate/event loop."""

    def __init__(self, registry: Registry | None = None):
        self.registry = registry or Registry()
        self.graph = Graph()
        self.grammar = gr.build_grammar(self.registry)
        self.events: list[Event] = []
        self._seq = 0
        self.result = evaluate_full(self.graph, self.registry)
        self.cache = EvalCache.capture(self.graph, self.result)

    # events

    def _emit(self, kind: str, payload: dict) -> Event:
        event = Event(self._seq, kind, payload)
        self._seq += 1
        self.events.append(event)
        return event

    def _emit_geometry(self) -> None:
        meshes = [
            {"node": nid, **_value_out(mesh)["mesh"]}
            for nid, mesh in sink_geometry(self.graph, self.result)
        ]
        self._emit("geometry_changed", {"meshes": meshes})

    def reject(self, reason_code: str, message: str, phrase: str | None = None) -> Event:
        payload: dict[str, Any] = {"reason": {"code": reason_code, "message": message}}
        if phrase is not None:
            payload["phrase"] = phrase
        return self._emit("command_rejected", payload)

    # document lifecycle

    def load_document(self, data: bytes) -> None:
        """Replace the document; on any error the current state is untouched."""
        registry = self.registry.copy()
        graph = persistence.load(data, registry)
        self.registry = registry
        self.graph = graph
        self.grammar = gr.build_grammar(self.registry)
        self.result = evaluate_full(self.graph, self.registry)
        self.cache = EvalCache.capture(self.graph, self.result)
        self._emit("graph_changed", {
            "summary": {"op": "load", "document": json.loads(self.save_document())},
        })
        self._emit_geometry()

    def save_document(self) -> bytes:
        return persistence.save(self.graph, self.registry)

    # commands

    def apply_phrase(self, text: str) -> ApplyOutcome:
        try:
            command = gr.parse_command(self.grammar, text)
        except EngineError as exc:
            payload = getattr(exc, "hint", None)
            message = str(exc) + (f" (closest rule: {payload})" if payload else "")
            self.reject(exc.code, message, phrase=text)
            raise
        return self._apply(command, phrase=text)

    def apply_action(self, action: Any) -> ApplyOutcome:
        try:
            command = action_to_command(action)
        except BadAction as exc:
            self.reject(exc.code, str(exc))
            raise
        return self._apply(command)

    def _apply(self, command: gr.EditCommand, phrase: str | None = None) -> ApplyOutcome:
        try:
            summary = gr.apply_command(self.graph, self.registry, command)
        except EngineError as exc:
            self.reject(exc.code, str(exc), phrase=phrase)
            raise
        changed = self._changed_nodes(summary)
        try:
            self.result = evaluate_incremental(self.graph, self.registry, self.cache, changed)
        except StaleCache:
            self.result = evaluate_full(self.graph, self.registry)
        self.cache = EvalCache.capture(self.graph, self.result)
        event_summary: dict[str, Any] = {
            "op": "apply",
            "action": command_to_action(command),
            "result": self._summary_out(summary),
        }
        if phrase is not None:
            event_summary["phrase"] = phrase
        self._emit("graph_changed", {"summary": event_summary})
        self._emit_geometry()
        return ApplyOutcome(command, summary, self.result)

    def _changed_nodes(self, summary: gr.ChangeSummary) -> set[int]:
        command = summary.command
        live = set(self.graph.nodes)
        if isinstance(command, gr.AddComponent):
            return {summary.created_id}
        if isinstance(command, gr.RemoveNode):
            downstream = {
                e.target.node for e in summary.removed_edges if e.source.node == command.node
            }
            return downstream & live
        if isinstance(command, gr.MoveNode):
            return set()
        if isinstance(command, (gr.ConnectPorts, gr.DisconnectPorts)):
            return {command.src_node, command.dst_node} & live
        if isinstance(command, (gr.SetValue, gr.SetText)):
            return {command.node}
        raise TypeError(f"not an edit command: {command!r}")

    def _summary_out(self, summary: gr.ChangeSummary) -> dict:
        out: dict[str, Any] = {}
        if summary.created_id is not None:
            out["created"] = summary.created_id
        if summary.removed_edges:
            out["removed_edges"] = [
                {"src_node": e.source.node, "src_port": e.source.port,
                 "dst_node": e.target.node, "dst_port": e.target.port}
                for e in summary.removed_edges
            ]
        if summary.replaced_edge is not None:
            e = summary.replaced_edge
            out["replaced_edge"] = {"src_node": e.source.node, "src_port": e.source.port,
                                    "dst_node": e.target.node, "dst_port": e.target.port}
        return out

    # snapshots

    def graph_snapshot(self) -> dict:
        heights = self.graph.compute_heights(1.0) if self.graph.nodes else {}
        nodes = []
        for nid in sorted(self.graph.nodes):
            node = self.graph.nodes[nid]
            template = self.registry.lookup(node.type_name)
            status = self.result.node_status.get(nid)
            nodes.append({
                "id": nid,
                "type": node.type_name,
                "position": _position_out(node.position),
                "params": {k: _value_out(node.params[k]) for k in sorted(node.params)},
                "inputs": [{"name": p.name, "type": p.value_type.value} for p in template.inputs],
                "outputs": [{"name": p.name, "type": p.value_type.value} for p in template.outputs],
                "height": heights.get(nid, 0.0),
                "status": {
                    "kind": status.kind.value if status else StatusKind.OK.value,
                    "message": status.message if status else None,
                },
            })
        edges = [
            {"src_node": e.source.node, "src_port": e.source.port,
             "dst_node": e.target.node, "dst_port": e.target.port}
            for e in self.graph.edges
        ]
        return {"nodes": nodes, "edges": edges, "generation": self.graph.generation}

    def geometry_meshes(self) -> list[tuple[int, Mesh]]:
        return sink_geometry(self.graph, self.result)

    def geometry_json(self) -> list[dict]:
        return [{"node": nid, **_value_out(mesh)["mesh"]} for nid, mesh in self.geometry_meshes()]

    def geometry_obj(self) -> bytes:
        return persistence.export_obj(mesh for _, mesh in self.geometry_meshes())


def replay_events(events: list[dict]) -> Engine:
    """Rebuild an engine from graph_changed summaries (seq order)."""
    engine = Engine()
    for event in events:
        if event.get("kind") != "graph_changed":
            continue
        summary = event["summary"]
        if summary["op"] == "load":
            engine.load_document(
                json.dumps(summary["document"], separators=(",", ":")).encode("utf-8")
            )
        else:
            engine.apply_action(summary["action"])
    return engine
