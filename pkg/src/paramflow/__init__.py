"""paramflow: a parametric dataflow graph engine.

A document is a directed acyclic graph of typed components (sliders,
arithmetic, points, boxes, panels). Evaluating it produces geometry at the
sink nodes. Edits arrive either as structured actions or as phrases in a
small directed-dialogue command language ("add slider with value seven").
"""

from .components import (
    ComponentTemplate,
    Kind,
    Mesh,
    NodeStatus,
    Point,
    PortSpec,
    Registry,
    StatusKind,
    Value,
    ValueType,
    box_mesh,
    evaluate_component,
)
from .engine import Engine, replay_events
from .evaluation import (
    EvalCache,
    EvalResult,
    evaluate_full,
    evaluate_incremental,
    sink_geometry,
    topo_order,
)
from .grammar import (
    AddComponent,
    CommandGrammar,
    ConnectPorts,
    DisconnectPorts,
    EditCommand,
    MoveNode,
    RemoveNode,
    SetText,
    SetValue,
    apply_command,
    build_grammar,
    parse_command,
    sample_phrase,
    tokenize,
)
from .graph import AddEdgeOutcome, Direction, Edge, Graph, Node, Position, PortRef
from .numerals import number_to_words, parse_number
from .persistence import export_obj, load, save

__version__ = "0.1.0"

__all__ = [
    "AddComponent",
    "AddEdgeOutcome",
    "CommandGrammar",
    "ComponentTemplate",
    "ConnectPorts",
    "Direction",
    "DisconnectPorts",
    "Edge",
    "EditCommand",
    "Engine",
    "EvalCache",
    "EvalResult",
    "Graph",
    "Kind",
    "Mesh",
    "MoveNode",
    "Node",
    "NodeStatus",
    "Point",
    "PortRef",
    "PortSpec",
    "Position",
    "Registry",
    "RemoveNode",
    "SetText",
    "SetValue",
    "StatusKind",
    "Value",
    "ValueType",
    "apply_command",
    "box_mesh",
    "build_grammar",
    "evaluate_component",
    "evaluate_full",
    "evaluate_incremental",
    "export_obj",
    "load",
    "number_to_words",
    "parse_command",
    "parse_number",
    "replay_events",
    "sample_phrase",
    "save",
    "sink_geometry",
    "tokenize",
    "topo_order",
]
