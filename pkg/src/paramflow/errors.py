"""Structured errors shared across the engine.

Every error carries a stable machine-readable ``code`` (its class name) so the
service and CLI can surface rejections without string matching.
"""

from __future__ import annotations


class EngineError(Exception):
    """Base class for all structured engine errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# graph-core

class UnknownNode(EngineError):
    pass


class UnknownPort(EngineError):
    pass


class DirectionMismatch(EngineError):
    pass


class TypeMismatch(EngineError):
    pass


class SelfLoop(EngineError):
    pass


class WouldCreateCycle(EngineError):
    pass


class UnknownEdge(EngineError):
    pass


class NonFinitePosition(EngineError):
    pass


# components / registry

class UnknownComponentType(EngineError):
    pass


class ValueTypeMismatch(EngineError):
    pass


class ConflictsWithBuiltin(EngineError):
    pass


class MalformedTemplate(EngineError):
    pass


# evaluation

class CycleDetected(EngineError):
    """Defensive: the acyclicity invariant was broken by outside mutation."""


class StaleCache(EngineError):
    """The document structure changed without the cache being told."""


# persistence

class MalformedDocument(EngineError):
    def __init__(self, reason: str, where: str = ""):
        super().__init__(f"{where}: {reason}" if where else reason)
        self.reason = reason
        self.where = where


class UnsupportedVersion(EngineError):
    pass


class CyclicDocument(EngineError):
    pass


class DanglingEdge(EngineError):
    pass


# grammar

class NoMatch(EngineError):
    """A phrase did not match any command rule.

    ``hint`` names the rule that consumed the longest prefix, so UIs can
    suggest what the user probably meant.
    """

    def __init__(self, message: str, hint: str | None = None, consumed: int = 0):
        super().__init__(message)
        self.hint = hint
        self.consumed = consumed
