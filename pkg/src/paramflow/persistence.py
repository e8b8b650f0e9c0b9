"""The on-disk document format (`.pfg.json`) and Wavefront OBJ export.

Saving is canonical: fixed key order, compact separators, sorted nodes and
edges, integral doubles written as plain integers. Equal documents always
serialize to identical bytes, so golden-file tests compare raw output.

Loading is strict: unknown keys, unresolved types, bad params, duplicate
inbound edges, or cycles reject the whole document. Foreign component
templates embedded in a document are learned (registered as opaque types)
before nodes are resolved.
"""

from __future__ import annotations

import json
import math
from typing import Any, Iterable

from .components import (
    ComponentTemplate,
    Kind,
    Mesh,
    Point,
    PortSpec,
    Registry,
    Value,
    ValueType,
    canonical_number,
    format_number,
    is_assignable,
    value_type_of,
)
from .errors import (
    ConflictsWithBuiltin,
    CycleDetected,
    CyclicDocument,
    DanglingEdge,
    MalformedDocument,
    MalformedTemplate,
    NonFinitePosition,
    UnsupportedVersion,
)
from .evaluation import topo_order
from .graph import Direction, Edge, Graph, Node, Position, PortRef

FORMAT_VERSION = 1


# saving


def _number_out(x: float) -> int | float:
    return canonical_number(float(x))


def value_out(value: Value) -> Any:
    if value is None:
        return None
    if isinstance(value, bool):
        return value
    if isinstance(value, (int, float)):
        return _number_out(value)
    if isinstance(value, str):
        return value
    if isinstance(value, Point):
        return {"point": [_number_out(value.x), _number_out(value.y), _number_out(value.z)]}
    if isinstance(value, Mesh):
        return {
            "mesh": {
                "vertices": [[_number_out(p.x), _number_out(p.y), _number_out(p.z)]
                             for p in value.vertices],
                "triangles": [list(t) for t in value.triangles],
            }
        }
    raise TypeError(f"not a storable value: {value!r}")


def _port_out(spec: PortSpec, with_default: bool) -> dict:
    out: dict[str, Any] = {"name": spec.name, "type": spec.value_type.value}
    if with_default:
        out["default"] = value_out(spec.default)
    return out


def _template_out(template: ComponentTemplate) -> dict:
    return {
        "name": template.name,
        "inputs": [_port_out(p, True) for p in template.inputs],
        "intrinsics": [_port_out(p, True) for p in template.intrinsics],
        "outputs": [_port_out(p, False) for p in template.outputs],
    }


def save(graph: Graph, registry: Registry) -> bytes:
    """Canonical UTF-8 JSON for the document.

    Only foreign templates actually referenced by nodes are embedded, so the
    bytes depend on document state alone.
    """
    used = {node.type_name for node in graph.nodes.values()}
    templates = [t for t in registry.foreign_templates() if t.name in used]
    nodes = []
    for nid in sorted(graph.nodes):
        node = graph.nodes[nid]
        nodes.append({
            "id": nid,
            "type": node.type_name,
            "position": [
                _number_out(node.position.u),
                _number_out(node.position.v),
                _number_out(node.position.height),
            ],
            "params": {k: value_out(node.params[k]) for k in sorted(node.params)},
        })
    edges = [
        {
            "src_node": e.source.node,
            "src_port": e.source.port,
            "dst_node": e.target.node,
            "dst_port": e.target.port,
        }
        for e in graph.edges
    ]
    document = {
        "format_version": FORMAT_VERSION,
        "templates": [_template_out(t) for t in templates],
        "nodes": nodes,
        "edges": edges,
    }
    return json.dumps(document, separators=(",", ":"), ensure_ascii=False).encode("utf-8")


# loading


def _require(condition: bool, reason: str, where: str) -> None:
    if not condition:
        raise MalformedDocument(reason, where)


def _check_keys(obj: Any, allowed: tuple[str, ...], required: tuple[str, ...], where: str) -> None:
    _require(isinstance(obj, dict), "expected an object", where)
    for key in obj:
        _require(key in allowed, f"unknown key {key!r}", where)
    for key in required:
        _require(key in obj, f"missing key {key!r}", where)


def _number_in(raw: Any, where: str) -> float:
    _require(isinstance(raw, (int, float)) and not isinstance(raw, bool), "expected a number", where)
    _require(math.isfinite(raw), "number must be finite", where)
    return float(raw)


def value_in(raw: Any, where: str) -> Value:
    if raw is None:
        return None
    if isinstance(raw, bool):
        return raw
    if isinstance(raw, (int, float)):
        return _number_in(raw, where)
    if isinstance(raw, str):
        return raw
    if isinstance(raw, dict):
        if set(raw) == {"point"}:
            coords = raw["point"]
            _require(isinstance(coords, list) and len(coords) == 3, "point needs 3 coordinates", where)
            return Point(*(_number_in(c, where) for c in coords))
        if set(raw) == {"mesh"}:
            body = raw["mesh"]
            _check_keys(body, ("vertices", "triangles"), ("vertices", "triangles"), where)
            vertices = []
            for v in body["vertices"]:
                _require(isinstance(v, list) and len(v) == 3, "vertex needs 3 coordinates", where)
                vertices.append(Point(*(_number_in(c, where) for c in v)))
            triangles = []
            for t in body["triangles"]:
                _require(
                    isinstance(t, list) and len(t) == 3
                    and all(isinstance(i, int) and not isinstance(i, bool) for i in t),
                    "triangle needs 3 integer indices", where,
                )
                triangles.append(tuple(t))
            try:
                return Mesh(tuple(vertices), tuple(triangles))
            except ValueError as exc:
                raise MalformedDocument(str(exc), where) from None
    raise MalformedDocument(f"not a value: {raw!r}", where)


def _port_in(raw: Any, with_default: bool, where: str) -> PortSpec:
    allowed = ("name", "type", "default") if with_default else ("name", "type")
    _check_keys(raw, allowed, ("name", "type"), where)
    _require(isinstance(raw["name"], str), "port name must be a string", where)
    try:
        value_type = ValueType(raw["type"])
    except ValueError:
        raise MalformedDocument(f"unknown value type {raw['type']!r}", where) from None
    default = value_in(raw.get("default"), f"{where}.default") if with_default else None
    return PortSpec(raw["name"], value_type, default)


def _template_in(raw: Any, where: str) -> ComponentTemplate:
    _check_keys(raw, ("name", "inputs", "intrinsics", "outputs"), ("name", "outputs"), where)
    _require(isinstance(raw["name"], str), "template name must be a string", where)
    for key in ("inputs", "intrinsics", "outputs"):
        _require(isinstance(raw.get(key, []), list), f"{key} must be a list", where)
    return ComponentTemplate(
        raw["name"],
        inputs=tuple(
            _port_in(p, True, f"{where}.inputs[{i}]") for i, p in enumerate(raw.get("inputs", []))
        ),
        intrinsics=tuple(
            _port_in(p, True, f"{where}.intrinsics[{i}]")
            for i, p in enumerate(raw.get("intrinsics", []))
        ),
        outputs=tuple(
            _port_in(p, False, f"{where}.outputs[{i}]") for i, p in enumerate(raw["outputs"])
        ),
        kind=Kind.OPAQUE,
    )


def load(data: bytes, registry: Registry) -> Graph:
    """Parse a document, learning embedded foreign templates into ``registry``."""
    try:
        raw = json.loads(data.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise MalformedDocument(f"not UTF-8: {exc}") from None
    except json.JSONDecodeError as exc:
        raise MalformedDocument(f"invalid JSON: {exc.msg}", f"offset {exc.pos}") from None

    _check_keys(
        raw,
        ("format_version", "templates", "nodes", "edges"),
        ("format_version", "templates", "nodes", "edges"),
        "document",
    )
    version = raw["format_version"]
    _require(isinstance(version, int) and not isinstance(version, bool) and version >= 1,
             "format_version must be a positive integer", "document")
    if version > FORMAT_VERSION:
        raise UnsupportedVersion(f"format_version {version} is newer than {FORMAT_VERSION}")

    _require(isinstance(raw["templates"], list), "templates must be a list", "document")
    for i, t in enumerate(raw["templates"]):
        where = f"templates[{i}]"
        template = _template_in(t, where)
        try:
            registry.register(template)
        except ConflictsWithBuiltin as exc:
            raise MalformedDocument(str(exc), where) from None
        except MalformedTemplate as exc:
            raise MalformedDocument(str(exc), where) from None

    graph = Graph()
    _require(isinstance(raw["nodes"], list), "nodes must be a list", "document")
    for i, n in enumerate(raw["nodes"]):
        where = f"nodes[{i}]"
        _check_keys(n, ("id", "type", "position", "params"), ("id", "type", "position", "params"), where)
        nid = n["id"]
        _require(isinstance(nid, int) and not isinstance(nid, bool) and nid >= 1,
                 "node id must be a positive integer", where)
        _require(nid not in graph.nodes, f"duplicate node id {nid}", where)
        template = registry.find(n["type"]) if isinstance(n["type"], str) else None
        _require(template is not None,
                 f"unknown component type {n['type']!r} and no embedded template", where)
        pos_raw = n["position"]
        _require(isinstance(pos_raw, list) and len(pos_raw) == 3, "position needs 3 numbers", where)
        try:
            position = Position(*(_number_in(c, f"{where}.position") for c in pos_raw))
        except NonFinitePosition as exc:
            raise MalformedDocument(str(exc), f"{where}.position") from None
        _require(isinstance(n["params"], dict), "params must be an object", where)
        params: dict[str, Value] = {}
        for name in sorted(n["params"]):
            pwhere = f"{where}.params.{name}"
            spec = template.param_spec(name)
            _require(spec is not None, f"{template.name!r} has no input or intrinsic {name!r}", pwhere)
            value = value_in(n["params"][name], pwhere)
            _require(value is not None, "params may not hold empty values", pwhere)
            vt = value_type_of(value)
            _require(is_assignable(vt, spec.value_type),
                     f"{name!r} takes {spec.value_type.value}, got {vt.value}", pwhere)
            params[name] = value
        node = Node(nid, template.name, position, params)
        if template.kind == Kind.SLIDER:
            lo = params.get("min", template.intrinsic_spec("min").default)
            hi = params.get("max", template.intrinsic_spec("max").default)
            value = params.get("value", template.intrinsic_spec("value").default)
            _require(lo <= value <= hi, f"slider value {value} outside [{lo}, {hi}]", where)
        graph.nodes[nid] = node
        graph._out_edges[nid] = set()
    graph.next_id = max(graph.nodes, default=0) + 1

    _require(isinstance(raw["edges"], list), "edges must be a list", "document")
    for i, e in enumerate(raw["edges"]):
        where = f"edges[{i}]"
        keys = ("src_node", "src_port", "dst_node", "dst_port")
        _check_keys(e, keys, keys, where)
        for id_key in ("src_node", "dst_node"):
            if not (isinstance(e[id_key], int) and not isinstance(e[id_key], bool)):
                raise MalformedDocument(f"{id_key} must be an integer", where)
            if e[id_key] not in graph.nodes:
                raise DanglingEdge(f"{where}: edge references missing node {e[id_key]}")
        for port_key in ("src_port", "dst_port"):
            _require(isinstance(e[port_key], str), f"{port_key} must be a string", where)
        source = PortRef(e["src_node"], Direction.OUT, e["src_port"])
        target = PortRef(e["dst_node"], Direction.IN, e["dst_port"])
        src_template = registry.lookup(graph.nodes[source.node].type_name)
        dst_template = registry.lookup(graph.nodes[target.node].type_name)
        if src_template.output_spec(source.port) is None:
            raise DanglingEdge(
                f"{where}: {src_template.name!r} has no output {source.port!r}"
            )
        if dst_template.input_spec(target.port) is None:
            raise DanglingEdge(
                f"{where}: {dst_template.name!r} has no input {target.port!r}"
            )
        if source.node == target.node:
            raise CyclicDocument(f"{where}: edge loops node {source.node} to itself")
        _require(
            is_assignable(
                src_template.output_spec(source.port).value_type,
                dst_template.input_spec(target.port).value_type,
            ),
            "incompatible port types", where,
        )
        _require((target.node, target.port) not in graph._in_edges,
                 f"input {target.node}.{target.port} already has an inbound edge", where)
        edge = Edge(source, target)
        graph._in_edges[(target.node, target.port)] = edge
        graph._out_edges[source.node].add(edge)

    try:
        topo_order(graph)
    except CycleDetected:
        raise CyclicDocument("document edges form a directed cycle") from None
    return graph


# OBJ export


def export_obj(meshes: Iterable[Mesh]) -> bytes:
    """Wavefront OBJ: per mesh, `v` lines then 1-based `f` lines, LF endings."""
    lines: list[str] = []
    offset = 0
    for mesh in meshes:
        for p in mesh.vertices:
            lines.append(f"v {format_number(p.x)} {format_number(p.y)} {format_number(p.z)}")
        for a, b, c in mesh.triangles:
            lines.append(f"f {a + 1 + offset} {b + 1 + offset} {c + 1 + offset}")
        offset += len(mesh.vertices)
    if not lines:
        return b""
    return ("\n".join(lines) + "\n").encode("utf-8")
