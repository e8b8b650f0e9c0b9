"""Directed-dialogue command grammar.

A small SRGS-like rule AST with semantic tags maps transcript strings onto
edit commands. The component-type rule is regenerated from the registry, so
newly learned templates become speakable only after a rebuild. Matching is
whole-phrase: every token must be consumed, except that a trailing free-text
capture absorbs the rest of the utterance verbatim.
"""

from __future__ import annotations

import random
import string
from dataclasses import dataclass, replace
from typing import Callable, Union

from .components import Registry, normalize_name
from .errors import NoMatch, UnknownPort
from .graph import Direction, Graph, Position, PortRef
from . import numerals

# tokenization

_STRIP = string.punctuation


def tokenize(text: str) -> list[str]:
    """Lowercased words; outer punctuation stripped, hyphenated words split."""
    return [token for token, _ in _tokenize_spans(text)]


def _tokenize_spans(text: str) -> list[tuple[str, int]]:
    """(token, source-word index) pairs; one source word may yield several tokens."""
    spans: list[tuple[str, int]] = []
    for index, word in enumerate(text.split()):
        for piece in word.lower().split("-"):
            piece = piece.strip(_STRIP)
            if piece:
                spans.append((piece, index))
    return spans


# grammar AST


@dataclass(frozen=True)
class TokenLiteral:
    word: str


@dataclass(frozen=True)
class RuleRef:
    rule: str


@dataclass(frozen=True)
class Sequence:
    parts: tuple["GrammarNode", ...]

    def __init__(self, *parts: "GrammarNode"):
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True)
class Alternation:
    options: tuple["GrammarNode", ...]

    def __init__(self, *options: "GrammarNode"):
        object.__setattr__(self, "options", tuple(options))


@dataclass(frozen=True)
class Optional:
    part: "GrammarNode"


@dataclass(frozen=True)
class FreeTextCapture:
    """Absorbs the rest of the utterance; only valid at the end of a rule."""


# semantic actions: a fixed enum, never executable tag scripts


@dataclass(frozen=True)
class SetNumber:
    value: float


@dataclass(frozen=True)
class AddNumber:
    value: float


@dataclass(frozen=True)
class MultiplyNumber:
    factor: float


@dataclass(frozen=True)
class SetField:
    name: str
    value: str


@dataclass(frozen=True)
class CaptureComponentType:
    pass


@dataclass(frozen=True)
class CaptureNumber:
    pass


@dataclass(frozen=True)
class CaptureText:
    pass


SemanticAction = Union[
    SetNumber, AddNumber, MultiplyNumber, SetField,
    CaptureComponentType, CaptureNumber, CaptureText,
]


@dataclass(frozen=True)
class SemanticTag:
    part: "GrammarNode"
    action: SemanticAction


GrammarNode = Union[
    TokenLiteral, RuleRef, Sequence, Alternation, Optional, FreeTextCapture, SemanticTag
]

# Rule names resolved by the matcher itself rather than the rule table.
BUILTIN_RULES = ("number", "word")


@dataclass(frozen=True)
class MatchState:
    """Cursor plus the in-progress command record.

    ``scratch`` and ``pending_text`` play the role of the classic per-rule
    out-value: matched fragments write them, Capture* actions move them into
    the record proper.
    """

    cursor: int
    fields: tuple[tuple[str, str], ...] = ()
    numbers: tuple[float, ...] = ()
    texts: tuple[str, ...] = ()
    scratch: float | None = None
    pending_text: str | None = None

    def field_map(self) -> dict[str, str]:
        return dict(self.fields)


# edit commands


@dataclass(frozen=True)
class AddComponent:
    type_name: str
    value: float | None = None


@dataclass(frozen=True)
class RemoveNode:
    node: int


@dataclass(frozen=True)
class MoveNode:
    node: int
    position: Position


@dataclass(frozen=True)
class ConnectPorts:
    src_node: int
    src_port: str
    dst_node: int
    dst_port: str


@dataclass(frozen=True)
class DisconnectPorts:
    src_node: int
    src_port: str
    dst_node: int
    dst_port: str


@dataclass(frozen=True)
class SetValue:
    node: int
    value: float


@dataclass(frozen=True)
class SetText:
    node: int
    text: str


EditCommand = Union[
    AddComponent, RemoveNode, MoveNode, ConnectPorts, DisconnectPorts, SetValue, SetText
]


@dataclass(frozen=True)
class CommandRule:
    name: str
    template: str  # human-readable phrase shape, e.g. "add component <type>"
    node: GrammarNode
    build: Callable[["MatchState", "CommandGrammar"], EditCommand]


@dataclass
class CommandGrammar:
    """Immutable after build; rebuild from the registry to pick up new types."""

    rules: dict[str, GrammarNode]
    commands: tuple[CommandRule, ...]
    display_names: dict[str, str]  # normalized spoken form -> registry display name

    def phrase_templates(self) -> list[str]:
        return [rule.template for rule in self.commands]

    def component_type_names(self) -> list[str]:
        return sorted(self.display_names.values())


class _Matcher:
    def __init__(self, grammar: CommandGrammar, tokens: list[str], raw_words: list[str],
                 spans: list[tuple[str, int]]):
        self.grammar = grammar
        self.tokens = tokens
        self.raw_words = raw_words
        self.spans = spans
        self.furthest = 0

    def match(self, node: GrammarNode, state: MatchState) -> list[MatchState]:
        """All matches of ``node`` at the state's cursor, best-first.

        Best-first means longest consumption, then declaration order, which
        implements the grammar's ambiguity policy directly.
        """
        if isinstance(node, TokenLiteral):
            i = state.cursor
            if i < len(self.tokens) and self.tokens[i] == node.word:
                self.furthest = max(self.furthest, i + 1)
                return [replace(state, cursor=i + 1)]
            return []
        if isinstance(node, Sequence):
            states = [state]
            for part in node.parts:
                states = [after for s in states for after in self.match(part, s)]
                if not states:
                    return []
            return states
        if isinstance(node, Alternation):
            matches = [m for option in node.options for m in self.match(option, state)]
            matches.sort(key=lambda s: -s.cursor)  # stable: ties keep option order
            return matches
        if isinstance(node, Optional):
            return self.match(node.part, state) + [state]
        if isinstance(node, SemanticTag):
            return [
                self._apply(node.action, state, after)
                for after in self.match(node.part, state)
            ]
        if isinstance(node, FreeTextCapture):
            if state.cursor >= len(self.tokens):
                return []
            text = self._raw_remainder(state.cursor)
            self.furthest = len(self.tokens)
            return [replace(state, cursor=len(self.tokens), pending_text=text)]
        if isinstance(node, RuleRef):
            if node.rule == "number":
                candidates = numerals.parse_number_candidates(self.tokens, state.cursor)
                if candidates:
                    self.furthest = max(self.furthest, candidates[0][1])
                return [replace(state, cursor=end, scratch=value) for value, end in candidates]
            if node.rule == "word":
                i = state.cursor
                if i >= len(self.tokens):
                    return []
                self.furthest = max(self.furthest, i + 1)
                return [replace(state, cursor=i + 1, pending_text=self.tokens[i])]
            target = self.grammar.rules.get(node.rule)
            if target is None:
                raise KeyError(f"grammar references unknown rule {node.rule!r}")
            return self.match(target, state)
        raise TypeError(f"not a grammar node: {node!r}")

    def _apply(self, action: SemanticAction, before: MatchState, after: MatchState) -> MatchState:
        span = self.tokens[before.cursor:after.cursor]
        if isinstance(action, SetNumber):
            return replace(after, scratch=action.value)
        if isinstance(action, AddNumber):
            return replace(after, scratch=(after.scratch or 0.0) + action.value)
        if isinstance(action, MultiplyNumber):
            return replace(after, scratch=(after.scratch or 0.0) * action.factor)
        if isinstance(action, SetField):
            return replace(after, fields=after.fields + ((action.name, action.value),))
        if isinstance(action, CaptureComponentType):
            return replace(after, fields=after.fields + (("type_name", " ".join(span)),))
        if isinstance(action, CaptureNumber):
            if after.scratch is None:
                return after
            return replace(after, numbers=after.numbers + (after.scratch,), scratch=None)
        if isinstance(action, CaptureText):
            if after.pending_text is None:
                return after
            return replace(after, texts=after.texts + (after.pending_text,), pending_text=None)
        raise TypeError(f"not a semantic action: {action!r}")

    def _raw_remainder(self, cursor: int) -> str:
        start_word = self.spans[cursor][1]
        return " ".join(self.raw_words[start_word:])


def _number(tag: bool = True) -> GrammarNode:
    ref = RuleRef("number")
    return SemanticTag(ref, CaptureNumber()) if tag else ref


def _words(phrase: str) -> list[GrammarNode]:
    return [TokenLiteral(w) for w in phrase.split()]


def _seq(*parts) -> Sequence:
    flat: list[GrammarNode] = []
    for part in parts:
        flat.extend(part if isinstance(part, list) else [part])
    return Sequence(*flat)


def _node_id(value: float, what: str = "node id") -> int:
    if value != int(value) or value < 1:
        raise NoMatch(f"{what} must be a positive whole number, got {value}")
    return int(value)


def _build_add_component(state: MatchState, grammar: CommandGrammar) -> AddComponent:
    spoken = state.field_map()["type_name"]
    return AddComponent(grammar.display_names[spoken])


def _build_add_slider(state: MatchState, grammar: CommandGrammar) -> AddComponent:
    return AddComponent("Number Slider", state.numbers[0])


def _build_remove(state: MatchState, grammar: CommandGrammar) -> RemoveNode:
    return RemoveNode(_node_id(state.numbers[0]))


def _build_move(state: MatchState, grammar: CommandGrammar) -> MoveNode:
    node, u, v = state.numbers
    return MoveNode(_node_id(node), Position(u, v, 0.0))


def _build_connect(state: MatchState, grammar: CommandGrammar) -> ConnectPorts:
    src, dst = state.numbers
    return ConnectPorts(_node_id(src), state.texts[0], _node_id(dst), state.texts[1])


def _build_disconnect(state: MatchState, grammar: CommandGrammar) -> DisconnectPorts:
    src, dst = state.numbers
    return DisconnectPorts(_node_id(src), state.texts[0], _node_id(dst), state.texts[1])


def _build_set_value(state: MatchState, grammar: CommandGrammar) -> SetValue:
    return SetValue(_node_id(state.numbers[0]), state.numbers[1])


def _build_set_text(state: MatchState, grammar: CommandGrammar) -> SetText:
    return SetText(_node_id(state.numbers[0]), state.texts[0])


def build_grammar(registry: Registry) -> CommandGrammar:
    """Snapshot the registry into a command grammar.

    The component-type alternation mirrors the registry at build time; types
    registered later stay unmatchable until the grammar is rebuilt.
    """
    display_names: dict[str, str] = {}
    options = []
    for name in registry.names():
        spoken = normalize_name(name)
        display_names[spoken] = name
        options.append(Sequence(*_words(spoken)))
    component_type = Alternation(*options)

    rules: dict[str, GrammarNode] = {"component_type": component_type}
    type_ref = SemanticTag(RuleRef("component_type"), CaptureComponentType())
    word_ref = SemanticTag(RuleRef("word"), CaptureText())
    free_text = SemanticTag(FreeTextCapture(), CaptureText())

    commands = (
        CommandRule(
            "add_slider_with_value",
            "add slider with value <number>",
            _seq(_words("add slider with value"), _number()),
            _build_add_slider,
        ),
        CommandRule(
            "add_component",
            "add component <type>",
            _seq(_words("add component"), type_ref),
            _build_add_component,
        ),
        CommandRule(
            "remove_node",
            "remove node <number>",
            _seq(_words("remove node"), _number()),
            _build_remove,
        ),
        CommandRule(
            "move_node",
            "move node <number> to <number> <number>",
            _seq(_words("move node"), _number(), _words("to"), _number(), _number()),
            _build_move,
        ),
        CommandRule(
            "connect_ports",
            "connect node <number> output <word> to node <number> input <word>",
            _seq(
                _words("connect node"), _number(), _words("output"), word_ref,
                _words("to node"), _number(), _words("input"), word_ref,
            ),
            _build_connect,
        ),
        CommandRule(
            "disconnect_ports",
            "disconnect node <number> output <word> from node <number> input <word>",
            _seq(
                _words("disconnect node"), _number(), _words("output"), word_ref,
                _words("from node"), _number(), _words("input"), word_ref,
            ),
            _build_disconnect,
        ),
        CommandRule(
            "set_value",
            "set value of node <number> to <number>",
            _seq(_words("set value of node"), _number(), _words("to"), _number()),
            _build_set_value,
        ),
        CommandRule(
            "set_text",
            "set text of node <number> to <free text>",
            _seq(_words("set text of node"), _number(), _words("to"), free_text),
            _build_set_text,
        ),
    )
    return CommandGrammar(rules, commands, display_names)


def parse_command(grammar: CommandGrammar, text: str) -> EditCommand:
    """Whole-phrase parse; raises NoMatch with a longest-prefix hint."""
    spans = _tokenize_spans(text)
    tokens = [t for t, _ in spans]
    raw_words = text.split()
    if not tokens:
        raise NoMatch("empty phrase")
    best_hint: str | None = None
    best_consumed = -1
    for rule in grammar.commands:
        matcher = _Matcher(grammar, tokens, raw_words, spans)
        for state in matcher.match(rule.node, MatchState(0)):
            if state.cursor == len(tokens):
                return rule.build(state, grammar)
        if matcher.furthest > best_consumed:
            best_consumed = matcher.furthest
            best_hint = rule.template
    raise NoMatch(
        f"phrase does not match any command: {text!r}",
        hint=best_hint,
        consumed=max(best_consumed, 0),
    )


# sampling, for generate-then-parse round trips

_PORT_WORDS = ("out", "sum", "product", "quotient", "point", "mesh", "text",
               "a", "b", "x", "y", "z", "input", "value")
_FREE_WORDS = ("hello", "world", "side", "length", "cube", "alpha", "beta", "table")


def sample_phrase(grammar: CommandGrammar, rng: random.Random) -> str:
    rule = rng.choice(grammar.commands)
    return " ".join(_sample(grammar, rule.node, rng))


def _sample(grammar: CommandGrammar, node: GrammarNode, rng: random.Random) -> list[str]:
    if isinstance(node, TokenLiteral):
        return [node.word]
    if isinstance(node, Sequence):
        return [w for part in node.parts for w in _sample(grammar, part, rng)]
    if isinstance(node, Alternation):
        return _sample(grammar, rng.choice(node.options), rng)
    if isinstance(node, Optional):
        return _sample(grammar, node.part, rng) if rng.random() < 0.5 else []
    if isinstance(node, SemanticTag):
        return _sample(grammar, node.part, rng)
    if isinstance(node, FreeTextCapture):
        return [rng.choice(_FREE_WORDS) for _ in range(rng.randint(1, 3))]
    if isinstance(node, RuleRef):
        if node.rule == "number":
            return numerals.number_to_words(rng.randint(1, 9999)).split()
        if node.rule == "word":
            return [rng.choice(_PORT_WORDS)]
        return _sample(grammar, grammar.rules[node.rule], rng)
    raise TypeError(f"not a grammar node: {node!r}")


# command dispatch


@dataclass(frozen=True)
class ChangeSummary:
    """What a dispatched command did, for events and UI feedback."""

    command: EditCommand
    created_id: int | None = None
    removed_edges: tuple = ()
    replaced_edge: object = None


def apply_command(graph: Graph, registry: Registry, command: EditCommand) -> ChangeSummary:
    """Dispatch an edit command to the graph; graph errors pass through."""
    if isinstance(command, AddComponent):
        template = registry.lookup(command.type_name)  # normalizes spoken names
        node_id = graph.add_node(registry, template.name, command.value)
        return ChangeSummary(command, created_id=node_id)
    if isinstance(command, RemoveNode):
        removed = graph.remove_node(command.node)
        return ChangeSummary(command, removed_edges=tuple(removed))
    if isinstance(command, MoveNode):
        graph.move_node(command.node, command.position)
        return ChangeSummary(command)
    if isinstance(command, ConnectPorts):
        outcome = graph.add_edge(
            registry,
            PortRef(command.src_node, Direction.OUT, command.src_port),
            PortRef(command.dst_node, Direction.IN, command.dst_port),
        )
        return ChangeSummary(command, replaced_edge=outcome.replaced)
    if isinstance(command, DisconnectPorts):
        graph.remove_edge(
            PortRef(command.src_node, Direction.OUT, command.src_port),
            PortRef(command.dst_node, Direction.IN, command.dst_port),
        )
        return ChangeSummary(command)
    if isinstance(command, SetValue):
        _set_designated(graph, registry, command.node, command.value)
        return ChangeSummary(command)
    if isinstance(command, SetText):
        _set_designated(graph, registry, command.node, command.text)
        return ChangeSummary(command)
    raise TypeError(f"not an edit command: {command!r}")


def _set_designated(graph: Graph, registry: Registry, node_id: int, value) -> None:
    node = graph.node(node_id)
    template = registry.lookup(node.type_name)
    if template.value_param is None:
        raise UnknownPort(f"{template.name!r} has no designated value port")
    graph.set_param(registry, node_id, template.value_param, value)
