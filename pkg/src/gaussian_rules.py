"""Graph Rewrite Rules
-------------------
The three purely graph-theoretic local rules and their sequencing:

    lg <a> <delta>      neighborhood pairs {b_i, b_j} of a get
                        W'(b_i,b_j) = W(b_i,b_j) - W(a,b_i) W(a,b_j) delta
    f2 <a>              every weight at a changes sign
    scale <a> <lambda>  every weight at a is multiplied by lambda > 0

The same one-op-per-line syntax is used for op scripts and trace files.
"""

from __future__ import annotations
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import List, Optional, Sequence
import logging

try:
    from src.graph_core import (
        GraphError, WeightedGraph, canonical_bytes, format_scalar, is_label, neighborhood, to_scalar,
    )
except ImportError:
    from graph_core import (
        GraphError, WeightedGraph, canonical_bytes, format_scalar, is_label, neighborhood, to_scalar,
    )

logger = logging.getLogger(__name__)


class RuleError(ValueError):
    """Invalid rule op. `index` is the 0-based position in a sequence, if any."""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message if index is None else f"op #{index + 1}: {message}")
        self.index = index


class OpScriptError(RuleError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class RuleKind(str, Enum):
    LG = "lg"
    F2 = "f2"
    SCALE = "scale"


@dataclass(frozen=True)
class RuleOp:
    kind: RuleKind
    vertex: int
    param: Optional[Fraction] = None   # delta for LG, lambda for SCALE

    def __post_init__(self):
        if self.param is not None:
            try:
                object.__setattr__(self, "param", to_scalar(self.param))
            except GraphError as e:
                raise RuleError(str(e)) from None
        if not isinstance(self.vertex, int) or self.vertex < 1:
            raise RuleError(f"vertex must be a positive integer, got {self.vertex!r}")
        if self.kind is RuleKind.F2:
            if self.param is not None:
                raise RuleError("f2 takes no parameter")
        elif self.param is None:
            raise RuleError(f"{self.kind.value} needs a parameter")
        elif self.kind is RuleKind.SCALE and self.param <= 0:
            raise RuleError(f"scale factor must be > 0, got {format_scalar(self.param)}")

    @classmethod
    def lg(cls, a: int, delta) -> "RuleOp":
        return cls(RuleKind.LG, a, to_scalar(delta))

    @classmethod
    def f2(cls, a: int) -> "RuleOp":
        return cls(RuleKind.F2, a)

    @classmethod
    def scale(cls, a: int, lam) -> "RuleOp":
        return cls(RuleKind.SCALE, a, to_scalar(lam))

    def __str__(self) -> str:
        return format_rule_op(self)


# ----------  Op syntax  ----------

def format_rule_op(op: RuleOp) -> str:
    if op.kind is RuleKind.F2:
        return f"f2 {op.vertex}"
    return f"{op.kind.value} {op.vertex} {format_scalar(op.param)}"


def parse_rule_op(text: str) -> RuleOp:
    parts = text.split()
    if not parts:
        raise RuleError("empty op")
    try:
        kind = RuleKind(parts[0])
    except ValueError:
        raise RuleError(f"unknown op '{parts[0]}' (expected lg, f2 or scale)") from None
    expected = 2 if kind is RuleKind.F2 else 3
    if len(parts) != expected:
        raise RuleError(f"'{text.strip()}': {kind.value} takes {expected - 1} argument(s)")
    if not is_label(parts[1]):
        raise RuleError(f"'{text.strip()}': vertex must be a positive integer")
    vertex = int(parts[1])
    try:
        param = None if kind is RuleKind.F2 else to_scalar(parts[2])
    except GraphError as e:
        raise RuleError(f"'{text.strip()}': {e}") from None
    return RuleOp(kind, vertex, param)


def parse_op_script(text: str) -> List[RuleOp]:
    ops = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            ops.append(parse_rule_op(line))
        except RuleError as e:
            raise OpScriptError(str(e), lineno) from None
    return ops


def format_op_script(ops: Sequence[RuleOp]) -> str:
    return "".join(format_rule_op(op) + "\n" for op in ops)


def inverse_op(op: RuleOp) -> RuleOp:
    """The op undoing `op`: LG(a,-delta), F2(a), Scale(a, 1/lambda)."""
    if op.kind is RuleKind.LG:
        return RuleOp(RuleKind.LG, op.vertex, -op.param)
    if op.kind is RuleKind.SCALE:
        return RuleOp(RuleKind.SCALE, op.vertex, 1 / op.param)
    return op


def validate_op(op: RuleOp, n: int) -> None:
    if op.vertex > n:
        raise RuleError(f"'{format_rule_op(op)}': vertex {op.vertex} out of range 1..{n}")


# ----------  Rules  ----------

def apply_lg_rule(g: WeightedGraph, a: int, delta) -> WeightedGraph:
    delta = to_scalar(delta)
    nbrs = neighborhood(g, a)
    if delta == 0 or len(nbrs) < 2:
        return g
    m = g.to_matrix()
    row = g.weights[a - 1]
    # unordered pairs once each; absent edges read as 0 and may appear
    for bi, bj in combinations(nbrs, 2):
        w = m[bi - 1][bj - 1] - row[bi - 1] * row[bj - 1] * delta
        m[bi - 1][bj - 1] = m[bj - 1][bi - 1] = w
    return WeightedGraph.from_matrix(m)


def apply_f2_rule(g: WeightedGraph, a: int) -> WeightedGraph:
    g.check_vertex(a)
    m = g.to_matrix()
    for v in range(g.n):
        m[a - 1][v] = -m[a - 1][v]
        m[v][a - 1] = -m[v][a - 1]
    return WeightedGraph.from_matrix(m)


def apply_scale_rule(g: WeightedGraph, a: int, lam) -> WeightedGraph:
    g.check_vertex(a)
    lam = to_scalar(lam)
    if lam <= 0:
        raise RuleError(f"scale factor must be > 0, got {format_scalar(lam)}")
    m = g.to_matrix()
    for v in range(g.n):
        m[a - 1][v] = m[a - 1][v] * lam
        m[v][a - 1] = m[v][a - 1] * lam
    return WeightedGraph.from_matrix(m)


def apply_rule(g: WeightedGraph, op: RuleOp) -> WeightedGraph:
    validate_op(op, g.n)
    if op.kind is RuleKind.LG:
        return apply_lg_rule(g, op.vertex, op.param)
    if op.kind is RuleKind.F2:
        return apply_f2_rule(g, op.vertex)
    return apply_scale_rule(g, op.vertex, op.param)


@dataclass
class SequenceResult:
    graph: WeightedGraph
    trace: List[bytes] = field(default_factory=list)          # canonical bytes after each op
    graphs: List[WeightedGraph] = field(default_factory=list)  # intermediate graphs, same order


def apply_sequence(g: WeightedGraph, ops: Sequence[RuleOp]) -> SequenceResult:
    """Left-to-right fold of the rules. The first invalid op aborts with its index."""
    result = SequenceResult(graph=g)
    for i, op in enumerate(ops):
        try:
            result.graph = apply_rule(result.graph, op)
        except (RuleError, GraphError) as e:
            raise RuleError(str(e), index=i) from None
        result.trace.append(canonical_bytes(result.graph))
        result.graphs.append(result.graph)
        logger.info(f"RULE    | step={i + 1} | op={format_rule_op(op)} | edges={len(result.graph.edges())}")
    return result
