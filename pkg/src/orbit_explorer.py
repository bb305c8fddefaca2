"""Orbit Explorer
--------------
Bounded breadth-first enumeration of the graphs reachable from a root under
the three local rules, and a bidirectional search for a rule sequence
connecting two graphs.

The true orbit is infinite; a run only sees the finite delta/lambda samples
in its OrbitConfig, up to max_depth moves and max_nodes graphs. Nothing
returned here is a statement about inequivalence.
"""

from __future__ import annotations
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple, Union
import logging

import pandas as pd

try:
    from src.graph_core import WeightedGraph, canonical_bytes, to_scalar
    from src.gaussian_rules import RuleOp, apply_rule, apply_sequence, format_rule_op, inverse_op
except ImportError:
    from graph_core import WeightedGraph, canonical_bytes, to_scalar
    from gaussian_rules import RuleOp, apply_rule, apply_sequence, format_rule_op, inverse_op

logger = logging.getLogger(__name__)


# ----------  Static limits (frozen config)  ----------

@dataclass(frozen=True)
class StaticLimits:
    default_depth: int = 3
    default_max_nodes: int = 10_000
    default_xi: Fraction = Fraction(1)   # xi used for stabilizer listings

S_limits = StaticLimits()


@dataclass(frozen=True)
class OrbitConfig:
    delta_set: Tuple[Fraction, ...] = (Fraction(1), Fraction(-1))
    lambda_set: Tuple[Fraction, ...] = ()
    max_depth: int = S_limits.default_depth
    max_nodes: int = S_limits.default_max_nodes
    include_lg: bool = True
    include_f2: bool = False
    include_scale: bool = False

    def __post_init__(self):
        object.__setattr__(self, "delta_set", tuple(to_scalar(d) for d in self.delta_set))
        object.__setattr__(self, "lambda_set", tuple(to_scalar(x) for x in self.lambda_set))
        if self.include_lg and not self.delta_set:
            raise ValueError("delta_set must be nonempty when LG moves are enabled")
        if self.include_scale and not self.lambda_set:
            raise ValueError("lambda_set must be nonempty when scale moves are enabled")
        if any(x <= 0 for x in self.lambda_set):
            raise ValueError("every lambda must be > 0")
        if self.max_depth < 0:
            raise ValueError(f"max_depth must be >= 0, got {self.max_depth}")
        if self.max_nodes < 1:
            raise ValueError(f"max_nodes must be >= 1, got {self.max_nodes}")


def moves(n: int, cfg: OrbitConfig) -> Iterator[RuleOp]:
    """Vertices ascending; per vertex LG (delta_set order), then F2, then Scale."""
    for a in range(1, n + 1):
        if cfg.include_lg:
            for delta in cfg.delta_set:
                yield RuleOp.lg(a, delta)
        if cfg.include_f2:
            yield RuleOp.f2(a)
        if cfg.include_scale:
            for lam in cfg.lambda_set:
                yield RuleOp.scale(a, lam)


# ----------  Exploration  ----------

@dataclass(frozen=True)
class OrbitNode:
    graph: WeightedGraph
    depth: int
    parent: Optional[bytes] = None
    via: Optional[RuleOp] = None


@dataclass
class OrbitResult:
    root: bytes
    nodes: Dict[bytes, OrbitNode] = field(default_factory=dict)   # insertion = BFS order
    truncated: bool = False


def explore(g: WeightedGraph, cfg: OrbitConfig) -> OrbitResult:
    root = canonical_bytes(g)
    result = OrbitResult(root=root, nodes={root: OrbitNode(g, 0)})
    frontier = [root]
    ops = list(moves(g.n, cfg))
    depth = 0
    while frontier:
        # collect the whole next layer first, in move order
        layer: List[Tuple[bytes, OrbitNode]] = []
        pending = set()
        for key in frontier:
            node = result.nodes[key]
            for op in ops:
                h = apply_rule(node.graph, op)
                hk = canonical_bytes(h)
                if hk in result.nodes or hk in pending:
                    continue
                pending.add(hk)
                layer.append((hk, OrbitNode(h, depth + 1, key, op)))
        if not layer:
            break
        if depth == cfg.max_depth:
            result.truncated = True
            break
        room = cfg.max_nodes - len(result.nodes)
        if len(layer) > room:
            layer = layer[:room]
            result.truncated = True
        for hk, node in layer:
            result.nodes[hk] = node
        depth += 1
        logger.info(f"ORBIT   | depth={depth} | added={len(layer)} | nodes={len(result.nodes)} | "
                    f"truncated={result.truncated}")
        if result.truncated:
            break
        frontier = [hk for hk, _ in layer]
    return result


def path_to(result: OrbitResult, key: bytes) -> List[RuleOp]:
    """Ops leading from the root to the node `key`."""
    path = []
    node = result.nodes[key]
    while node.parent is not None:
        path.append(node.via)
        node = result.nodes[node.parent]
    return path[::-1]


# ----------  Bidirectional search  ----------

@dataclass(frozen=True)
class NotFoundWithinBudget:
    explored: int
    depth: int

    def describe(self) -> str:
        return (f"no connecting sequence within budget (explored {self.explored} graphs, "
                f"depth {self.depth}); this is not a proof of inequivalence")


def find_sequence(g1: WeightedGraph, g2: WeightedGraph, cfg: OrbitConfig) -> Union[List[RuleOp], NotFoundWithinBudget]:
    """Meet-in-the-middle BFS; the backward side steps through inverse ops."""
    if g1.n != g2.n:
        raise ValueError(f"vertex count mismatch: {g1.n} vs {g2.n}")
    k1, k2 = canonical_bytes(g1), canonical_bytes(g2)
    if k1 == k2:
        return []
    ops = list(moves(g1.n, cfg))
    graphs = {k1: g1, k2: g2}
    fwd: Dict[bytes, Tuple[Optional[bytes], Optional[RuleOp]]] = {k1: (None, None)}  # key -> (parent, op)
    bwd: Dict[bytes, Tuple[Optional[bytes], Optional[RuleOp]]] = {k2: (None, None)}  # key -> (child, op)
    fwd_frontier, bwd_frontier = [k1], [k2]
    depth = 0
    meet = None
    exhausted = False
    while meet is None and not exhausted and fwd_frontier and bwd_frontier and depth < cfg.max_depth:
        forward = len(fwd_frontier) <= len(bwd_frontier)
        frontier = fwd_frontier if forward else bwd_frontier
        seen, other = (fwd, bwd) if forward else (bwd, fwd)
        nxt = []
        for key in frontier:
            for op in ops:
                step = op if forward else inverse_op(op)
                h = apply_rule(graphs[key], step)
                hk = canonical_bytes(h)
                if hk in seen:
                    continue
                if hk not in other and len(graphs) >= cfg.max_nodes:
                    exhausted = True
                    break
                seen[hk] = (key, op)
                graphs[hk] = h
                nxt.append(hk)
                if hk in other:
                    meet = hk
                    break
            if meet is not None or exhausted:
                break
        if forward:
            fwd_frontier = nxt
        else:
            bwd_frontier = nxt
        depth += 1
    if meet is None:
        logger.info(f"CONNECT | found=False | explored={len(graphs)} | depth={depth}")
        return NotFoundWithinBudget(len(graphs), depth)

    head = []
    key = meet
    while fwd[key][0] is not None:
        parent, op = fwd[key]
        head.append(op)
        key = parent
    tail = []
    key = meet
    while bwd[key][0] is not None:
        child, op = bwd[key]
        tail.append(op)
        key = child
    sequence = head[::-1] + tail

    if apply_sequence(g1, sequence).graph != g2:
        raise RuntimeError("connecting sequence failed replay; search bookkeeping is broken")
    logger.info(f"CONNECT | found=True | length={len(sequence)} | explored={len(graphs)}")
    return sequence


# ----------  Analysis  ----------

def orbit_frame(result: OrbitResult) -> pd.DataFrame:
    """One row per node in BFS order."""
    records = []
    for key, node in result.nodes.items():
        mags = [abs(w) for _, _, w in node.graph.edges()]
        records.append({
            "key": key,
            "depth": node.depth,
            "via": format_rule_op(node.via) if node.via is not None else None,
            "parent": node.parent,
            "edges": len(mags),
            "min_abs_weight": min(mags) if mags else None,
            "max_abs_weight": max(mags) if mags else None,
        })
    return pd.DataFrame.from_records(
        records,
        columns=["key", "depth", "via", "parent", "edges", "min_abs_weight", "max_abs_weight"],
    )


@dataclass
class OrbitStats:
    node_count: int
    depth_histogram: Dict[int, int]
    truncated: bool
    min_abs_weight: Optional[Fraction]
    max_abs_weight: Optional[Fraction]

    def render(self) -> str:
        hist = " ".join(f"{d}:{c}" for d, c in sorted(self.depth_histogram.items()))
        lo = "-" if self.min_abs_weight is None else str(self.min_abs_weight)
        hi = "-" if self.max_abs_weight is None else str(self.max_abs_weight)
        return (f"nodes={self.node_count} depths={{{hist}}} truncated={self.truncated} "
                f"min|w|={lo} max|w|={hi}")


def orbit_stats(result: OrbitResult) -> OrbitStats:
    frame = orbit_frame(result)
    counts = frame["depth"].value_counts().sort_index()
    lows = [w for w in frame["min_abs_weight"].tolist() if pd.notna(w)]
    highs = [w for w in frame["max_abs_weight"].tolist() if pd.notna(w)]
    return OrbitStats(
        node_count=len(frame),
        depth_histogram={int(d): int(c) for d, c in counts.items()},
        truncated=result.truncated,
        min_abs_weight=min(lows) if lows else None,
        max_abs_weight=max(highs) if highs else None,
    )
