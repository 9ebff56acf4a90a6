"""Weighted two-player game arenas.

An arena is a finite directed graph whose nodes are split between two
players.  Every edge carries an integer weight and may be flagged *fair*;
fair edges express a liveness obligation: any node that is visited
infinitely often must take each of its fair edges infinitely often.

This module defines the arena data model, the line-based text format, the
validator, DOT export, and the shift-and-scale transformation used to
reduce threshold questions to questions about zero.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property


class Owner(Enum):
    """The player controlling a node."""

    P1 = 1
    P2 = 2

    def opponent(self) -> "Owner":
        return Owner.P2 if self is Owner.P1 else Owner.P1

    def __str__(self) -> str:
        return "p1" if self is Owner.P1 else "p2"


@dataclass(frozen=True)
class Edge:
    """A directed weighted edge; ``fair`` marks a fairness obligation."""

    src: int
    dst: int
    weight: int
    fair: bool = False


class ArenaError(ValueError):
    """Malformed arena text or inconsistent arena construction."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", col {col}" if col is not None else "")
            message = f"{loc}: {message}"
        super().__init__(message)
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Violation:
    """A structural defect found by :func:`validate`."""

    kind: str  # "dead-end" | "mixed-fairness"
    node: int | None
    detail: str


@dataclass(frozen=True)
class Arena:
    """An immutable two-player weighted game arena.

    Nodes are dense integer ids ``0..n-1``; ``names`` gives each node a
    unique printable name.  Edges are stored sorted by ``(src, dst)`` and
    there is at most one edge per ordered node pair.
    """

    names: tuple[str, ...]
    owners: tuple[Owner, ...]
    edges: tuple[Edge, ...]

    # -- construction -------------------------------------------------

    @staticmethod
    def from_parts(
        nodes: list[tuple[str, Owner]],
        edges: list[tuple[str, str, int, bool]],
    ) -> "Arena":
        """Build an arena from named parts.

        Raises :class:`ArenaError` on duplicate names, dangling endpoints
        or parallel edges.  Dead ends and mixed fairness are representable
        (see :func:`validate`).
        """
        names = tuple(name for name, _ in nodes)
        if len(set(names)) != len(names):
            dup = next(n for i, n in enumerate(names) if n in names[:i])
            raise ArenaError(f"duplicate node name {dup!r}")
        index = {name: i for i, name in enumerate(names)}
        built: list[Edge] = []
        seen: set[tuple[int, int]] = set()
        for src, dst, weight, fair in edges:
            for endpoint in (src, dst):
                if endpoint not in index:
                    raise ArenaError(f"edge endpoint {endpoint!r} is not a node")
            key = (index[src], index[dst])
            if key in seen:
                raise ArenaError(f"parallel edge {src!r} -> {dst!r}")
            seen.add(key)
            built.append(Edge(key[0], key[1], int(weight), bool(fair)))
        built.sort(key=lambda e: (e.src, e.dst))
        return Arena(names, tuple(o for _, o in nodes), tuple(built))

    # -- derived data --------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.names)

    @cached_property
    def W(self) -> int:
        """Largest absolute edge weight (0 for an edgeless arena)."""
        return max((abs(e.weight) for e in self.edges), default=0)

    @cached_property
    def fairness_side(self) -> Owner | None:
        """The single owner of all fair-edge sources, or ``None``.

        ``None`` means either no fair edges or mixed ownership; the latter
        is reported by :func:`validate`.
        """
        sides = {self.owners[e.src] for e in self.edges if e.fair}
        return sides.pop() if len(sides) == 1 else None

    @cached_property
    def _out(self) -> tuple[tuple[Edge, ...], ...]:
        out: list[list[Edge]] = [[] for _ in range(self.n)]
        for e in self.edges:
            out[e.src].append(e)
        return tuple(tuple(es) for es in out)

    def out_edges(self, q: int) -> tuple[Edge, ...]:
        return self._out[q]

    def fair_out(self, q: int) -> tuple[Edge, ...]:
        return tuple(e for e in self._out[q] if e.fair)

    def is_fair_node(self, q: int) -> bool:
        return any(e.fair for e in self._out[q])

    @cached_property
    def fair_nodes(self) -> tuple[int, ...]:
        return tuple(q for q in range(self.n) if self.is_fair_node(q))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no node named {name!r}") from None


def validate(a: Arena) -> list[Violation]:
    """Return structural violations: dead ends and mixed fairness."""
    found = [
        Violation("dead-end", q, f"node {a.names[q]!r} has no outgoing edge")
        for q in range(a.n)
        if not a.out_edges(q)
    ]
    sides = {a.owners[e.src] for e in a.edges if e.fair}
    if len(sides) > 1:
        found.append(
            Violation("mixed-fairness", None, "fair edges leave nodes of both players")
        )
    return found


# -- text format -------------------------------------------------------

_HEADER = "arena v1"
_NAME_RE = re.compile(r"^[^\s#]+$")
_INT_RE = re.compile(r"^[+-]?\d+$")


def parse_arena(text: str) -> Arena:
    """Parse the line-based arena format and return a validated arena.

    Format::

        arena v1
        node <name> p1|p2
        edge <src> <dst> <weight> [fair]

    ``#`` starts a comment.  Raises :class:`ArenaError` (with line/col)
    on syntax errors, duplicates, dangling endpoints, dead ends, or fair
    edges owned by both players.
    """
    nodes: list[tuple[str, Owner]] = []
    edges: list[tuple[str, str, int, bool]] = []
    header_seen = False

    def err(msg: str, lineno: int, line: str, token: str | None = None) -> ArenaError:
        col = line.find(token) + 1 if token and token in line else None
        return ArenaError(msg, lineno, col)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if not header_seen:
            if tokens != _HEADER.split():
                raise err(f"expected {_HEADER!r} header", lineno, raw, tokens[0])
            header_seen = True
            continue
        kind = tokens[0]
        if kind == "node":
            if len(tokens) != 3:
                raise err("node line needs: node <name> p1|p2", lineno, raw)
            name, owner = tokens[1], tokens[2]
            if not _NAME_RE.match(name):
                raise err(f"bad node name {name!r}", lineno, raw, name)
            if owner not in ("p1", "p2"):
                raise err(f"owner must be p1 or p2, got {owner!r}", lineno, raw, owner)
            if any(name == existing for existing, _ in nodes):
                raise err(f"duplicate node {name!r}", lineno, raw, name)
            nodes.append((name, Owner.P1 if owner == "p1" else Owner.P2))
        elif kind == "edge":
            if len(tokens) not in (4, 5) or (len(tokens) == 5 and tokens[4] != "fair"):
                raise err("edge line needs: edge <src> <dst> <weight> [fair]", lineno, raw)
            src, dst, weight = tokens[1], tokens[2], tokens[3]
            if not _INT_RE.match(weight):
                raise err(f"bad integer weight {weight!r}", lineno, raw, weight)
            known = {name for name, _ in nodes}
            for endpoint in (src, dst):
                if endpoint not in known:
                    raise err(f"unknown node {endpoint!r}", lineno, raw, endpoint)
            if any(src == s and dst == d for s, d, _, _ in edges):
                raise err(f"parallel edge {src!r} -> {dst!r}", lineno, raw, dst)
            edges.append((src, dst, int(weight), len(tokens) == 5))
        else:
            raise err(f"unknown directive {kind!r}", lineno, raw, kind)

    if not header_seen:
        raise ArenaError(f"missing {_HEADER!r} header", 1)
    a = Arena.from_parts(nodes, edges)
    problems = validate(a)
    if problems:
        raise ArenaError("; ".join(v.detail for v in problems))
    return a


def serialize_arena(a: Arena) -> str:
    """Render an arena in the text format (inverse of :func:`parse_arena`)."""
    lines = [_HEADER]
    for name, owner in zip(a.names, a.owners):
        lines.append(f"node {name} {owner}")
    for e in a.edges:
        fair = " fair" if e.fair else ""
        lines.append(f"edge {a.names[e.src]} {a.names[e.dst]} {e.weight}{fair}")
    return "\n".join(lines) + "\n"


def export_dot(a: Arena) -> str:
    """Render the arena as Graphviz DOT.

    Player-1 nodes are circles, player-2 nodes are boxes; fair edges are
    dashed; edge labels are the weights.
    """
    lines = ["digraph arena {"]
    for name, owner in zip(a.names, a.owners):
        shape = "circle" if owner is Owner.P1 else "box"
        lines.append(f'  "{name}" [shape={shape}];')
    for e in a.edges:
        style = ", style=dashed" if e.fair else ""
        lines.append(
            f'  "{a.names[e.src]}" -> "{a.names[e.dst]}" [label="{e.weight}"{style}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


# -- rationals ---------------------------------------------------------

_RAT_RE = re.compile(r"^([+-]?\d+)(?:/(\d+))?$")


def parse_rational(text: str) -> Fraction:
    """Parse ``<int>`` or ``<int>/<posint>`` into a Fraction."""
    m = _RAT_RE.match(text.strip())
    if not m or (m.group(2) is not None and int(m.group(2)) == 0):
        raise ValueError(f"bad rational {text!r}; expected <int> or <int>/<posint>")
    return Fraction(int(m.group(1)), int(m.group(2)) if m.group(2) else 1)


def format_rational(v: Fraction) -> str:
    """Render a Fraction as ``a`` or ``a/b`` in lowest terms."""
    v = Fraction(v)
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


# -- transformations ---------------------------------------------------


def shift_and_scale(a: Arena, v: Fraction | int) -> Arena:
    """Map every weight ``w`` to ``b*w - a`` for threshold ``v = a/b``.

    A play has mean weight ``>= v`` in the original arena exactly when it
    has mean weight ``>= 0`` afterwards; energy questions scale the same
    way.  Structure, names, owners and fair flags are unchanged.
    """
    v = Fraction(v)
    num, den = v.numerator, v.denominator
    edges = tuple(
        Edge(e.src, e.dst, den * e.weight - num, e.fair) for e in a.edges
    )
    return Arena(a.names, a.owners, edges)
