"""Weighted Graph Core
-------------------
Data model for continuous-variable weighted graph states: vertices 1..n, a
symmetric matrix of exact rational weights with zero diagonal, canonical
byte encoding for deduplication, and the `cvgraph v1` text format.

File format (UTF-8, one item per line, `#` starts a comment line):

    cvgraph v1
    n 5
    e 1 2 1
    e 1 3 3/4

Usage:
    from src.graph_core import new_graph, set_edge, serialize_graph

    g = set_edge(new_graph(3), 1, 2, Fraction(3, 4))
    text = serialize_graph(g)
"""

from __future__ import annotations
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Sequence, Tuple, Union
import logging
import re

logger = logging.getLogger(__name__)

Scalar = Fraction
ScalarLike = Union[Fraction, int, str]

FORMAT_HEADER = "cvgraph v1"
_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$", re.ASCII)
_LABEL = re.compile(r"^\d+$", re.ASCII)
_ZERO = Fraction(0)


class GraphError(ValueError):
    """Invalid vertex, weight, or graph shape."""


class GraphFormatError(GraphError):
    """Parse error in a graph file; `line` is 1-based."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def is_label(text: str) -> bool:
    """True for an ASCII decimal vertex label or count."""
    return bool(_LABEL.match(text))


def to_scalar(value: ScalarLike) -> Fraction:
    """Exact rational from a Fraction, int or `p/q` literal. Floats are refused."""
    if isinstance(value, bool):
        raise GraphError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not _RATIONAL.match(text):
            raise GraphError(f"unparseable rational: {value!r}")
        if "/" in text and int(text.split("/")[1]) == 0:
            raise GraphError(f"zero denominator: {value!r}")
        return Fraction(text)
    raise GraphError(f"not an exact rational: {value!r}")


def format_scalar(x: Fraction) -> str:
    # Fraction.__str__ is already reduced with a positive denominator
    return str(x)


# ----------  Graph value  ----------

@dataclass(frozen=True)
class WeightedGraph:
    n: int
    weights: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise GraphError(f"vertex count must be >= 1, got {self.n!r}")
        if len(self.weights) != self.n or any(len(row) != self.n for row in self.weights):
            raise GraphError(f"weights must be {self.n}x{self.n}")
        for u in range(self.n):
            for v in range(self.n):
                if not isinstance(self.weights[u][v], Fraction):
                    raise GraphError(f"weight ({u + 1},{v + 1}) is not a Fraction: {self.weights[u][v]!r}")
            if self.weights[u][u] != 0:
                raise GraphError(f"self-loop at vertex {u + 1}")
            for v in range(u + 1, self.n):
                w = self.weights[u][v]
                if w != self.weights[v][u]:
                    raise GraphError(f"asymmetric weight at ({u + 1},{v + 1})")

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence[ScalarLike]]) -> "WeightedGraph":
        """Build from a 0-indexed square matrix (lists or numpy rows)."""
        n = len(rows)
        weights = tuple(tuple(to_scalar(rows[u][v]) for v in range(n)) for u in range(n))
        return cls(n=n, weights=weights)

    def check_vertex(self, a: int) -> None:
        if not isinstance(a, int) or not 1 <= a <= self.n:
            raise GraphError(f"vertex {a!r} out of range 1..{self.n}")

    def weight(self, u: int, v: int) -> Fraction:
        self.check_vertex(u)
        self.check_vertex(v)
        return self.weights[u - 1][v - 1]

    def to_matrix(self) -> List[List[Fraction]]:
        """Mutable 0-indexed copy of the weights."""
        return [list(row) for row in self.weights]

    def edges(self) -> List[Tuple[int, int, Fraction]]:
        """Present edges as (u, v, w) with u < v, sorted by (u, v)."""
        return [
            (u + 1, v + 1, self.weights[u][v])
            for u in range(self.n)
            for v in range(u + 1, self.n)
            if self.weights[u][v] != 0
        ]

    def neighborhood(self, a: int) -> List[int]:
        return neighborhood(self, a)

    def __str__(self) -> str:
        body = ", ".join(f"({u},{v})={format_scalar(w)}" for u, v, w in self.edges())
        return f"WeightedGraph(n={self.n}; {body or 'no edges'})"


# ----------  Operations  ----------

def new_graph(n: int) -> WeightedGraph:
    if not isinstance(n, int) or n < 1:
        raise GraphError(f"vertex count must be >= 1, got {n!r}")
    row = tuple(_ZERO for _ in range(n))
    return WeightedGraph(n=n, weights=tuple(row for _ in range(n)))


def set_edge(g: WeightedGraph, u: int, v: int, w: ScalarLike) -> WeightedGraph:
    """Return g with weight w on (u, v); w = 0 removes the edge."""
    g.check_vertex(u)
    g.check_vertex(v)
    if u == v:
        raise GraphError(f"self-loop at vertex {u}")
    m = g.to_matrix()
    m[u - 1][v - 1] = m[v - 1][u - 1] = to_scalar(w)
    return WeightedGraph.from_matrix(m)


def graph_from_edges(n: int, edges: Sequence[Tuple[int, int, ScalarLike]]) -> WeightedGraph:
    g = new_graph(n)
    for u, v, w in edges:
        g = set_edge(g, u, v, w)
    return g


def neighborhood(g: WeightedGraph, a: int) -> List[int]:
    g.check_vertex(a)
    row = g.weights[a - 1]
    return [v + 1 for v in range(g.n) if row[v] != 0]


def canonical_bytes(g: WeightedGraph) -> bytes:
    """Deterministic key: n, then the upper triangle row-major as reduced rationals."""
    upper = ",".join(
        format_scalar(g.weights[u][v]) for u in range(g.n) for v in range(u + 1, g.n)
    )
    return f"n={g.n};{upper}".encode("ascii")


# ----------  Text format  ----------

def serialize_graph(g: WeightedGraph) -> str:
    lines = [FORMAT_HEADER, f"n {g.n}"]
    lines += [f"e {u} {v} {format_scalar(w)}" for u, v, w in g.edges()]
    return "\n".join(lines) + "\n"


def parse_graph(text: str) -> WeightedGraph:
    content = [
        (lineno, raw.strip())
        for lineno, raw in enumerate(text.splitlines(), start=1)
        if raw.strip() and not raw.strip().startswith("#")
    ]
    if not content:
        raise GraphFormatError("empty graph file", 1)

    lineno, header = content[0]
    if header.split() != FORMAT_HEADER.split():
        raise GraphFormatError(f"expected header '{FORMAT_HEADER}', got '{header}'", lineno)
    if len(content) < 2:
        raise GraphFormatError("missing 'n <count>' line", lineno)

    lineno, count_line = content[1]
    parts = count_line.split()
    if len(parts) != 2 or parts[0] != "n" or not is_label(parts[1]) or int(parts[1]) < 1:
        raise GraphFormatError(f"expected 'n <count>' with count >= 1, got '{count_line}'", lineno)
    n = int(parts[1])

    m = [[_ZERO] * n for _ in range(n)]
    seen = {}
    for lineno, line in content[2:]:
        parts = line.split()
        if len(parts) != 4 or parts[0] != "e":
            raise GraphFormatError(f"expected 'e <u> <v> <weight>', got '{line}'", lineno)
        if not (is_label(parts[1]) and is_label(parts[2])):
            raise GraphFormatError(f"vertex labels must be positive integers: '{line}'", lineno)
        u, v = int(parts[1]), int(parts[2])
        if u == v:
            raise GraphFormatError(f"self-loop at vertex {u}", lineno)
        if u > v:
            raise GraphFormatError(f"edge ({u},{v}) must be written with u < v", lineno)
        if not (1 <= u <= n and 1 <= v <= n):
            raise GraphFormatError(f"edge ({u},{v}) out of range 1..{n}", lineno)
        try:
            w = to_scalar(parts[3])
        except GraphError as e:
            raise GraphFormatError(str(e), lineno) from None
        if (u, v) in seen and seen[(u, v)] != w:
            raise GraphFormatError(
                f"duplicate edge ({u},{v}) with conflicting weight "
                f"{format_scalar(seen[(u, v)])} vs {format_scalar(w)}",
                lineno,
            )
        seen[(u, v)] = w
        m[u - 1][v - 1] = m[v - 1][u - 1] = w
    return WeightedGraph.from_matrix(m)


def read_graph(path: Union[str, Path]) -> WeightedGraph:
    path = Path(path)
    g = parse_graph(path.read_text(encoding="utf-8"))
    logger.info(f"READ    | file={path.name} | n={g.n} | edges={len(g.edges())}")
    return g


def write_graph(g: WeightedGraph, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize_graph(g))
    logger.info(f"WRITE   | file={path.name} | n={g.n} | edges={len(g.edges())}")
    return path
