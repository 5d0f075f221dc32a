"""Finite positions: sequences of naturals that address nodes of a tree."""

from __future__ import annotations

import enum
from typing import Iterable


class PrefixRelation(enum.Enum):
    NOT_PREFIX = "not-prefix"
    PREFIX = "prefix"  # q == p
    PROPER_PREFIX = "proper-prefix"  # q extends p by two or more steps
    IMMEDIATE_PREFIX = "immediate-prefix"  # q extends p by exactly one step


class Position(tuple):
    """An immutable finite sequence of natural numbers.

    ``Position()`` is the empty position, printed as ``ε``.  Concatenation is
    available as ``p + q`` and always yields a ``Position``.
    """

    __slots__ = ()

    def __new__(cls, entries: Iterable[int] = ()):
        entries = tuple(entries)
        for e in entries:
            if not isinstance(e, int) or isinstance(e, bool) or e < 0:
                raise ValueError(f"position entries must be naturals, got {e!r}")
        return super().__new__(cls, entries)

    @classmethod
    def parse(cls, text: str) -> Position:
        text = text.strip()
        if text in ("ε", "", "<>"):
            return cls()
        try:
            return cls(int(part) for part in text.split("."))
        except ValueError:
            raise ValueError(f"not a position: {text!r}") from None

    @classmethod
    def _trusted(cls, entries: tuple[int, ...]) -> Position:
        return tuple.__new__(cls, entries)

    def __add__(self, other) -> Position:
        if isinstance(other, Position):
            return tuple.__new__(Position, tuple.__add__(self, other))
        return Position(tuple.__add__(self, tuple(other)))

    def child(self, i: int) -> Position:
        if type(i) is not int or i < 0:
            raise ValueError(f"position entries must be naturals, got {i!r}")
        return tuple.__new__(Position, tuple.__add__(self, (i,)))

    def parent(self) -> Position | None:
        return Position(self[:-1]) if self else None

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        """Length-lexicographic ordering key."""
        return (len(self), tuple(self))

    def __str__(self) -> str:
        return ".".join(map(str, self)) if self else "ε"

    def __repr__(self) -> str:
        return f"Position({str(self)!r})"


EMPTY = Position()


def concat(p: Iterable[int], q: Iterable[int]) -> Position:
    return Position(p) + Position(q)


def prefix_relation(p: Iterable[int], q: Iterable[int]) -> PrefixRelation:
    rest = strip_prefix(p, q)
    if rest is None:
        return PrefixRelation.NOT_PREFIX
    if len(rest) == 0:
        return PrefixRelation.PREFIX
    if len(rest) == 1:
        return PrefixRelation.IMMEDIATE_PREFIX
    return PrefixRelation.PROPER_PREFIX


def is_prefix(p: Iterable[int], q: Iterable[int]) -> bool:
    return strip_prefix(p, q) is not None


def strip_prefix(p: Iterable[int], q: Iterable[int]) -> Position | None:
    """Return ``t`` with ``q == p + t``, or ``None`` when ``p`` is not a prefix of ``q``."""
    p, q = tuple(p), tuple(q)
    if len(p) > len(q) or q[: len(p)] != p:
        return None
    return Position(q[len(p):])


def length_lex_sorted(positions: Iterable[Iterable[int]]) -> list[Position]:
    return sorted((Position(p) for p in positions), key=Position.sort_key)
