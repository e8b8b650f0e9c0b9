"""Component templates, values, and the built-in node semantics.

Values travelling along edges are plain Python data: ``float`` for numbers,
``bool`` for booleans, ``str`` for text, :class:`Point` / :class:`Mesh` for
geometry, and ``None`` for "no value".
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

from .errors import ConflictsWithBuiltin, MalformedTemplate, UnknownComponentType


class ValueType(Enum):
    NUMBER = "number"
    BOOLEAN = "boolean"
    POINT = "point"
    MESH = "mesh"
    TEXT = "text"
    ANY = "any"


@dataclass(frozen=True)
class Point:
    x: float
    y: float
    z: float

    def __post_init__(self):
        for c in (self.x, self.y, self.z):
            if not isinstance(c, (int, float)) or isinstance(c, bool) or not math.isfinite(c):
                raise ValueError(f"point coordinates must be finite numbers, got {c!r}")
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        object.__setattr__(self, "z", float(self.z))


@dataclass(frozen=True)
class Mesh:
    """Triangle mesh; immutable once produced."""

    vertices: tuple[Point, ...]
    triangles: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "triangles", tuple(tuple(t) for t in self.triangles))
        n = len(self.vertices)
        for tri in self.triangles:
            if len(tri) != 3 or any(not isinstance(i, int) or i < 0 or i >= n for i in tri):
                raise ValueError(f"triangle {tri!r} references out-of-range vertices")


Value = Union[float, bool, str, Point, Mesh, None]


def value_type_of(value: Value) -> ValueType | None:
    """Type tag of a value; None for the empty value."""
    if value is None:
        return None
    if isinstance(value, bool):
        return ValueType.BOOLEAN
    if isinstance(value, (int, float)):
        return ValueType.NUMBER
    if isinstance(value, str):
        return ValueType.TEXT
    if isinstance(value, Point):
        return ValueType.POINT
    if isinstance(value, Mesh):
        return ValueType.MESH
    raise TypeError(f"not a value: {value!r}")


def is_assignable(source: ValueType, target: ValueType) -> bool:
    """T flows to T, anything flows to an Any input; nothing else."""
    return source == target or target == ValueType.ANY


def normalize_value(value: Value) -> Value:
    """Coerce ints to floats and reject non-finite numbers."""
    if isinstance(value, bool) or value is None or isinstance(value, (str, Point, Mesh)):
        return value
    if isinstance(value, (int, float)):
        v = float(value)
        if not math.isfinite(v):
            raise ValueError(f"numbers must be finite, got {value!r}")
        return v
    raise TypeError(f"not a value: {value!r}")


def canonical_number(x: float) -> int | float:
    """Shortest round-trip form: integral doubles become ints (7.0 -> 7)."""
    if x == int(x) and abs(x) <= 2 ** 53:
        return int(x)
    return x


def format_number(x: float) -> str:
    return repr(canonical_number(float(x)))


def format_value(value: Value) -> str:
    """Panel-style display text for any value."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return format_number(value)
    if isinstance(value, str):
        return value
    if isinstance(value, Point):
        return f"({format_number(value.x)}, {format_number(value.y)}, {format_number(value.z)})"
    if isinstance(value, Mesh):
        return f"mesh({len(value.vertices)} vertices, {len(value.triangles)} triangles)"
    raise TypeError(f"not a value: {value!r}")


class Kind(Enum):
    """Evaluation kind of a component template."""

    SLIDER = "slider"
    TOGGLE = "toggle"
    ADD = "add"
    MULTIPLY = "multiply"
    DIVIDE = "divide"
    POINT = "point"
    BOX = "box"
    PANEL = "panel"
    OPAQUE = "opaque"


@dataclass(frozen=True)
class PortSpec:
    name: str
    value_type: ValueType
    default: Value = None


@dataclass(frozen=True)
class ComponentTemplate:
    """A node type: named, typed ports plus intrinsic (non-connectable) state.

    ``value_param`` names the input/intrinsic that a bare initial value (e.g.
    "add slider with value 7") or a spoken set-value/set-text lands on.
    """

    name: str
    inputs: tuple[PortSpec, ...] = ()
    intrinsics: tuple[PortSpec, ...] = ()
    outputs: tuple[PortSpec, ...] = ()
    kind: Kind = Kind.OPAQUE
    value_param: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "intrinsics", tuple(self.intrinsics))
        object.__setattr__(self, "outputs", tuple(self.outputs))

    def validate(self) -> None:
        if not self.name.strip():
            raise MalformedTemplate("template name must be non-empty")
        names = [p.name for p in self.inputs + self.intrinsics + self.outputs]
        if len(set(names)) != len(names):
            raise MalformedTemplate(f"duplicate port names in template {self.name!r}")
        for p in self.inputs + self.intrinsics + self.outputs:
            if not p.name or any(ch.isspace() for ch in p.name):
                raise MalformedTemplate(f"bad port name {p.name!r} in template {self.name!r}")
        for p in self.outputs:
            if p.value_type == ValueType.ANY:
                raise MalformedTemplate(f"output {p.name!r} of {self.name!r} may not be Any-typed")
        for p in self.inputs + self.intrinsics:
            if p.default is not None:
                t = value_type_of(p.default)
                if t is not None and not is_assignable(t, p.value_type):
                    raise MalformedTemplate(
                        f"default for {p.name!r} of {self.name!r} is {t.value}, "
                        f"port is {p.value_type.value}"
                    )
        if not self.outputs and self.kind != Kind.PANEL:
            raise MalformedTemplate(f"template {self.name!r} has no outputs")
        if self.value_param is not None and self.value_param not in {
            p.name for p in self.inputs + self.intrinsics
        }:
            raise MalformedTemplate(
                f"value_param {self.value_param!r} is not an input/intrinsic of {self.name!r}"
            )

    def input_spec(self, name: str) -> PortSpec | None:
        for p in self.inputs:
            if p.name == name:
                return p
        return None

    def intrinsic_spec(self, name: str) -> PortSpec | None:
        for p in self.intrinsics:
            if p.name == name:
                return p
        return None

    def output_spec(self, name: str) -> PortSpec | None:
        for p in self.outputs:
            if p.name == name:
                return p
        return None

    def param_spec(self, name: str) -> PortSpec | None:
        """Spec for a settable name (input or intrinsic)."""
        return self.input_spec(name) or self.intrinsic_spec(name)


def normalize_name(name: str) -> str:
    return " ".join(name.lower().split())


def _num(name: str, default: float = 0.0) -> PortSpec:
    return PortSpec(name, ValueType.NUMBER, default)


BUILTIN_TEMPLATES = (
    ComponentTemplate(
        "Number Slider",
        intrinsics=(_num("value"), _num("min"), _num("max", 100.0)),
        outputs=(PortSpec("out", ValueType.NUMBER),),
        kind=Kind.SLIDER,
        value_param="value",
    ),
    ComponentTemplate(
        "Boolean Toggle",
        intrinsics=(PortSpec("state", ValueType.BOOLEAN, False),),
        outputs=(PortSpec("out", ValueType.BOOLEAN),),
        kind=Kind.TOGGLE,
        value_param="state",
    ),
    ComponentTemplate(
        "Addition",
        inputs=(_num("a"), _num("b")),
        outputs=(PortSpec("sum", ValueType.NUMBER),),
        kind=Kind.ADD,
    ),
    ComponentTemplate(
        "Multiplication",
        inputs=(_num("a"), _num("b")),
        outputs=(PortSpec("product", ValueType.NUMBER),),
        kind=Kind.MULTIPLY,
    ),
    ComponentTemplate(
        "Division",
        inputs=(_num("a"), _num("b", 1.0)),
        outputs=(PortSpec("quotient", ValueType.NUMBER),),
        kind=Kind.DIVIDE,
    ),
    ComponentTemplate(
        "Construct Point",
        inputs=(_num("x"), _num("y"), _num("z")),
        outputs=(PortSpec("point", ValueType.POINT),),
        kind=Kind.POINT,
    ),
    ComponentTemplate(
        "Box",
        inputs=(
            PortSpec("a", ValueType.POINT, Point(0, 0, 0)),
            PortSpec("b", ValueType.POINT, Point(0, 0, 0)),
        ),
        outputs=(PortSpec("mesh", ValueType.MESH),),
        kind=Kind.BOX,
    ),
    ComponentTemplate(
        "Panel",
        inputs=(PortSpec("input", ValueType.ANY, None),),
        outputs=(PortSpec("text", ValueType.TEXT),),
        kind=Kind.PANEL,
        value_param="input",
    ),
)

BUILTIN_NAMES = frozenset(normalize_name(t.name) for t in BUILTIN_TEMPLATES)


class RegisterOutcome(Enum):
    REGISTERED = "registered"
    ALREADY_KNOWN = "already_known"


class Registry:
    """Case-insensitive template registry; built-ins are always present."""

    def __init__(self):
        self._templates: dict[str, ComponentTemplate] = {
            normalize_name(t.name): t for t in BUILTIN_TEMPLATES
        }

    def register(self, template: ComponentTemplate) -> RegisterOutcome:
        template.validate()
        key = normalize_name(template.name)
        existing = self._templates.get(key)
        if existing is not None:
            if existing == template:
                return RegisterOutcome.ALREADY_KNOWN
            if key in BUILTIN_NAMES:
                raise ConflictsWithBuiltin(
                    f"template {template.name!r} conflicts with a built-in component"
                )
        self._templates[key] = template
        return RegisterOutcome.REGISTERED

    def find(self, name: str) -> ComponentTemplate | None:
        return self._templates.get(normalize_name(name))

    def lookup(self, name: str) -> ComponentTemplate:
        template = self.find(name)
        if template is None:
            raise UnknownComponentType(f"unknown component type {name!r}")
        return template

    def names(self) -> list[str]:
        """Display names, built-ins first in declaration order, then learned."""
        builtin = [t.name for t in BUILTIN_TEMPLATES]
        learned = sorted(
            t.name for k, t in self._templates.items() if k not in BUILTIN_NAMES
        )
        return builtin + learned

    def foreign_templates(self) -> list[ComponentTemplate]:
        return [t for k, t in sorted(self._templates.items()) if k not in BUILTIN_NAMES]

    def copy(self) -> "Registry":
        clone = Registry()
        clone._templates = dict(self._templates)
        return clone


# Box corners are indexed by bit pattern: bit0 -> max x, bit1 -> max y,
# bit2 -> max z. The triangle table is fixed, outward-facing, counter-
# clockwise; it is part of the document/OBJ format contract.
BOX_TRIANGLES: tuple[tuple[int, int, int], ...] = (
    (0, 2, 1), (1, 2, 3),  # bottom (z = min)
    (4, 5, 6), (5, 7, 6),  # top (z = max)
    (0, 1, 5), (0, 5, 4),  # front (y = min)
    (2, 6, 7), (2, 7, 3),  # back (y = max)
    (0, 4, 6), (0, 6, 2),  # left (x = min)
    (1, 7, 5), (1, 3, 7),  # right (x = max)
)


def box_mesh(a: Point, b: Point) -> Mesh:
    """Axis-aligned box spanning the componentwise bounds of two corners."""
    lo = Point(min(a.x, b.x), min(a.y, b.y), min(a.z, b.z))
    hi = Point(max(a.x, b.x), max(a.y, b.y), max(a.z, b.z))
    vertices = tuple(
        Point(
            hi.x if i & 1 else lo.x,
            hi.y if i & 2 else lo.y,
            hi.z if i & 4 else lo.z,
        )
        for i in range(8)
    )
    return Mesh(vertices, BOX_TRIANGLES)


class StatusKind(Enum):
    OK = "ok"
    MISSING_INPUT = "missing_input"
    ERROR = "error"
    FOREIGN = "foreign_component"


@dataclass(frozen=True)
class NodeStatus:
    kind: StatusKind
    message: str | None = None

    @property
    def is_ok(self) -> bool:
        return self.kind == StatusKind.OK


OK = NodeStatus(StatusKind.OK)
FOREIGN = NodeStatus(StatusKind.FOREIGN)


def _missing(names: list[str]) -> NodeStatus:
    return NodeStatus(StatusKind.MISSING_INPUT, f"missing input: {', '.join(names)}")


def evaluate_component(
    kind: Kind,
    inputs: dict[str, Value],
    intrinsics: dict[str, Value],
    outputs: tuple[PortSpec, ...] = (),
) -> tuple[dict[str, Value], NodeStatus]:
    """Run one component; never raises, failures come back as the status.

    ``inputs`` must already be resolved (connected value, else local override,
    else template default). On any non-Ok status every output is empty.
    """
    empty = {p.name: None for p in outputs}

    if kind == Kind.OPAQUE:
        return empty, FOREIGN

    if kind == Kind.SLIDER:
        return {"out": intrinsics["value"]}, OK
    if kind == Kind.TOGGLE:
        return {"out": intrinsics["state"]}, OK

    if kind == Kind.PANEL:
        return {"text": format_value(inputs.get("input"))}, OK

    # Everything below requires all of its declared inputs.
    required = sorted(name for name, v in inputs.items() if v is None)
    if required:
        return empty, _missing(required)

    if kind == Kind.ADD:
        return {"sum": inputs["a"] + inputs["b"]}, OK
    if kind == Kind.MULTIPLY:
        return {"product": inputs["a"] * inputs["b"]}, OK
    if kind == Kind.DIVIDE:
        if inputs["b"] == 0:
            return empty, NodeStatus(StatusKind.ERROR, "division by zero")
        return {"quotient": inputs["a"] / inputs["b"]}, OK
    if kind == Kind.POINT:
        return {"point": Point(inputs["x"], inputs["y"], inputs["z"])}, OK
    if kind == Kind.BOX:
        return {"mesh": box_mesh(inputs["a"], inputs["b"])}, OK

    raise ValueError(f"unhandled component kind {kind!r}")
