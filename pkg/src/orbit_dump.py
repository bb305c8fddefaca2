"""
Orbit Dump and Trace Files
--------------------------
Writes explorer results to disk, verifies them, and reads them back. Each dump
has one line per node,

    <depth> <hash> <via-op or root> <parent-hash or ->

a sidecar directory `<dump>.graphs/` holding every node's serialized graph as
`<hash>.cvg`, and a companion `<dump>.json` metadata file with a SHA256 digest
of the dump for integrity checking.

Usage:
    from src import orbit_dump

    orbit_dump.write_orbit_dump(result, "orbit.txt")
    nodes = orbit_dump.load_orbit_dump("orbit.txt")
"""

import hashlib
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Union

import pandas as pd

try:
    from src.graph_core import WeightedGraph, read_graph, write_graph
    from src.gaussian_rules import RuleOp, format_rule_op, parse_rule_op
    from src.orbit_explorer import OrbitResult, orbit_frame
except ImportError:
    from graph_core import WeightedGraph, read_graph, write_graph
    from gaussian_rules import RuleOp, format_rule_op, parse_rule_op
    from orbit_explorer import OrbitResult, orbit_frame

logger = logging.getLogger(__name__)

HASH_CHARS = 16


def node_hash(key: bytes) -> str:
    """Short SHA256 name for a canonical-bytes key."""
    return hashlib.sha256(key).hexdigest()[:HASH_CHARS]


def _hash_file(path: Path) -> str:
    """Return SHA256 hash of file content."""
    h = hashlib.sha256()
    with open(path, "rb") as f:
        for chunk in iter(lambda: f.read(8192), b""):
            h.update(chunk)
    return h.hexdigest()


def _sidecar(dump_path: Path) -> Path:
    return dump_path.with_name(dump_path.name + ".graphs")


def _meta_path(dump_path: Path) -> Path:
    return dump_path.with_name(dump_path.name + ".json")


def dump_lines(result: OrbitResult) -> List[str]:
    frame = orbit_frame(result)
    lines = []
    for row in frame.itertuples(index=False):
        via = row.via if pd.notna(row.via) else "root"
        parent = node_hash(row.parent) if pd.notna(row.parent) else "-"
        lines.append(f"{row.depth} {node_hash(row.key)} {via} {parent}")
    return lines


def write_orbit_dump(result: OrbitResult, path: Union[str, Path]) -> Path:
    """
    Write the dump, its sidecar graphs and the metadata file. No timestamps are
    recorded, so equal results give byte-identical files.
    """
    dump_path = Path(path)
    dump_path.parent.mkdir(parents=True, exist_ok=True)
    graphs_dir = _sidecar(dump_path)
    graphs_dir.mkdir(parents=True, exist_ok=True)

    lines = dump_lines(result)
    dump_path.write_text("".join(line + "\n" for line in lines), encoding="utf-8")
    for key, node in result.nodes.items():
        write_graph(node.graph, graphs_dir / f"{node_hash(key)}.cvg")

    metadata = {
        "path": dump_path.name,
        "graphs": graphs_dir.name,
        "nodes": len(result.nodes),
        "truncated": result.truncated,
        "sha256": _hash_file(dump_path),
    }
    with open(_meta_path(dump_path), "w", encoding="utf-8") as f:
        json.dump(metadata, f, indent=2)

    logger.info(f"DUMP    | path={dump_path.name} | nodes={len(result.nodes)} | truncated={result.truncated}")
    return dump_path


def verify_orbit_dump(path: Union[str, Path]) -> bool:
    """Validate dump integrity using its .json metadata hash."""
    dump_path = Path(path)
    meta_path = _meta_path(dump_path)
    if not meta_path.exists():
        logger.warning(f"DUMP    | path={dump_path.name} | metadata missing")
        return False

    with open(meta_path, "r", encoding="utf-8") as f:
        meta = json.load(f)

    if _hash_file(dump_path) != meta.get("sha256"):
        logger.warning(f"DUMP    | path={dump_path.name} | hash mismatch")
        return False
    return True


@dataclass(frozen=True)
class DumpEntry:
    depth: int
    hash: str
    via: Optional[RuleOp]
    parent: Optional[str]
    graph: WeightedGraph


def load_orbit_dump(path: Union[str, Path]) -> List[DumpEntry]:
    """Read a dump and its sidecar graphs back, refusing corrupted dumps."""
    dump_path = Path(path)
    if not dump_path.exists():
        raise FileNotFoundError(f"Orbit dump not found: {dump_path}")
    if not verify_orbit_dump(dump_path):
        raise ValueError(f"Integrity check failed for {dump_path}")

    graphs_dir = _sidecar(dump_path)
    entries = []
    for lineno, raw in enumerate(dump_path.read_text(encoding="utf-8").splitlines(), start=1):
        # the via op itself contains spaces: "lg 1 -1/2"
        parts = raw.split()
        if len(parts) < 4:
            raise ValueError(f"line {lineno}: malformed dump line {raw!r}")
        depth, h, parent = int(parts[0]), parts[1], parts[-1]
        via_text = " ".join(parts[2:-1])
        via = None if via_text == "root" else parse_rule_op(via_text)
        entries.append(DumpEntry(
            depth=depth,
            hash=h,
            via=via,
            parent=None if parent == "-" else parent,
            graph=read_graph(graphs_dir / f"{h}.cvg"),
        ))
    return entries


def write_trace(directory: Union[str, Path], ops: Sequence[RuleOp], graphs: Sequence[WeightedGraph]) -> Path:
    """
    Per-step graphs of a sequence: step_000.cvg is the input, step_k.cvg the
    graph after op k; ops.txt lists the ops in order.
    """
    if len(graphs) != len(ops) + 1:
        raise ValueError(f"expected {len(ops) + 1} graphs for {len(ops)} ops, got {len(graphs)}")
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    for k, g in enumerate(graphs):
        write_graph(g, out / f"step_{k:03d}.cvg")
    (out / "ops.txt").write_text("".join(format_rule_op(op) + "\n" for op in ops), encoding="utf-8")
    logger.info(f"TRACE   | dir={out} | steps={len(ops)}")
    return out
