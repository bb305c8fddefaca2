"""CVGS: continuous-variable weighted graph states from the command line.

    python src/CVGS.py apply -i g.cvg -s ops.txt [-e "lg 1 1"] [-o out.cvg] [--trace DIR]
    python src/CVGS.py stabilizers -i g.cvg [--xi 1]
    python src/CVGS.py verify -i g.cvg -s ops.txt [--pauli-level] [--xi 1]
    python src/CVGS.py orbit -i g.cvg --delta 1,-1 [--lambda 2] [--f2] [--depth 3] [--max-nodes N] -o dump.txt
    python src/CVGS.py connect -a g1.cvg -b g2.cvg [budget flags] [-o seq.txt]
    python src/CVGS.py export-dot -i g.cvg [-o g.dot]

Exit status: 0 success or agreement, 1 mismatch / not graph form / no sequence
within budget, 2 usage or parse error.
"""

from __future__ import annotations
from typing import List, Optional, Sequence
import argparse
import logging
import sys
from pathlib import Path

try:
    from src.graph_core import GraphError, WeightedGraph, format_scalar, read_graph, serialize_graph, to_scalar, write_graph
    from src.gaussian_rules import RuleError, RuleOp, apply_sequence, format_op_script, parse_op_script, parse_rule_op
    from src.pauli_algebra import PauliError, stabilizer_text
    from src.orbit_explorer import NotFoundWithinBudget, OrbitConfig, S_limits, explore, find_sequence, orbit_stats
    from src.orbit_dump import write_orbit_dump, write_trace
    from src.shadow_eval import enforce_conventions, resolve_scale_convention, run_shadow_eval
    from src.symplectic_oracle import DependentRowsError
except ImportError:
    from graph_core import GraphError, WeightedGraph, format_scalar, read_graph, serialize_graph, to_scalar, write_graph
    from gaussian_rules import RuleError, RuleOp, apply_sequence, format_op_script, parse_op_script, parse_rule_op
    from pauli_algebra import PauliError, stabilizer_text
    from orbit_explorer import NotFoundWithinBudget, OrbitConfig, S_limits, explore, find_sequence, orbit_stats
    from orbit_dump import write_orbit_dump, write_trace
    from shadow_eval import enforce_conventions, resolve_scale_convention, run_shadow_eval
    from symplectic_oracle import DependentRowsError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

LOG_FORMAT = '[%(asctime)s] %(message)s'
LOG_DATEFMT = '%Y-%m-%d %H:%M:%S'

DUMP_HELP = (
    "orbit dump: one line per node, '<depth> <hash> <via-op or root> <parent-hash or ->', "
    "graphs in '<dump>.graphs/<hash>.cvg', metadata with sha256 in '<dump>.json'"
)


class UsageError(ValueError):
    """Bad combination of flags that argparse cannot express."""


# ----------  Helpers  ----------

def _rational_list(text: str) -> List:
    try:
        return [to_scalar(item.strip()) for item in text.split(",") if item.strip()]
    except GraphError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _rational(text: str):
    try:
        return to_scalar(text)
    except GraphError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _collect_ops(args) -> List[RuleOp]:
    """Script ops first, then inline -e ops in the order given."""
    if args.script is None and not args.expr:
        raise UsageError("give an op script (-s) or inline ops (-e)")
    ops: List[RuleOp] = []
    if args.script is not None:
        ops += parse_op_script(Path(args.script).read_text(encoding="utf-8"))
    for text in args.expr:
        ops.append(parse_rule_op(text))
    return ops


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")


def _orbit_config(args) -> OrbitConfig:
    return OrbitConfig(
        delta_set=tuple(args.delta),
        lambda_set=tuple(args.lam),
        max_depth=args.depth,
        max_nodes=args.max_nodes,
        include_lg=bool(args.delta),
        include_f2=args.f2,
        include_scale=bool(args.lam),
    )


def graph_to_dot(g: WeightedGraph) -> str:
    lines = ["graph G {"]
    lines += [f"  {v};" for v in range(1, g.n + 1)]
    lines += [f'  {u} -- {v} [label="{format_scalar(w)}"];' for u, v, w in g.edges()]
    lines.append("}")
    return "\n".join(lines) + "\n"


# ----------  Subcommands  ----------

def cmd_apply(args) -> int:
    g = read_graph(args.input)
    ops = _collect_ops(args)
    result = apply_sequence(g, ops)
    if args.trace is not None:
        write_trace(args.trace, ops, [g] + result.graphs)
    if args.output is None:
        sys.stdout.write(serialize_graph(result.graph))
    else:
        write_graph(result.graph, args.output)
    return EXIT_OK


def cmd_stabilizers(args) -> int:
    g = read_graph(args.input)
    lines = [f"G{a}: {stabilizer_text(g, a, args.xi)}" for a in range(1, g.n + 1)]
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_verify(args) -> int:
    enforce_conventions()
    g = read_graph(args.input)
    ops = _collect_ops(args)
    report = run_shadow_eval(g, ops, pauli_level=args.pauli_level, xi=args.xi)
    sys.stdout.write(report.render())
    resolved = resolve_scale_convention()
    sign, other = ("+", "-") if resolved.exponent_sign > 0 else ("-", "+")
    sys.stdout.write(
        f"oracle: Scale(a, lambda) matches S(r) with lambda = e^{{{sign}r}}; "
        f"a rule quoted as 'multiply by e^{{{other}r}}' under S(r) holds for S(-r)\n"
    )
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_orbit(args) -> int:
    g = read_graph(args.input)
    cfg = _orbit_config(args)
    result = explore(g, cfg)
    write_orbit_dump(result, args.output)
    sys.stdout.write(orbit_stats(result).render() + "\n")
    return EXIT_OK


def cmd_connect(args) -> int:
    g1 = read_graph(args.graph_a)
    g2 = read_graph(args.graph_b)
    if g1.n != g2.n:
        raise UsageError(f"vertex count mismatch: {g1.n} vs {g2.n}")
    found = find_sequence(g1, g2, _orbit_config(args))
    if isinstance(found, NotFoundWithinBudget):
        sys.stderr.write(found.describe() + "\n")
        return EXIT_FAIL
    _emit(format_op_script(found), args.output)
    return EXIT_OK


def cmd_export_dot(args) -> int:
    _emit(graph_to_dot(read_graph(args.input)), args.output)
    return EXIT_OK


# ----------  Parser  ----------

def _add_budget_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--delta", type=_rational_list, default=[to_scalar(1), to_scalar(-1)],
                   help="comma-separated LG deltas (write negatives as --delta=-1,1); default 1,-1")
    p.add_argument("--lambda", dest="lam", type=_rational_list, default=[],
                   help="comma-separated positive scale factors; enables scale moves")
    p.add_argument("--f2", action="store_true", help="enable f2 moves")
    p.add_argument("--depth", type=int, default=S_limits.default_depth)
    p.add_argument("--max-nodes", type=int, default=S_limits.default_max_nodes)


def _add_op_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("-s", "--script", help="op script: one of 'lg <a> <delta>', 'f2 <a>', 'scale <a> <lambda>' per line")
    p.add_argument("-e", "--expr", action="append", default=[], help="inline op, repeatable")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="CVGS", description="Continuous-variable weighted graph states")
    parser.add_argument("--log-file", help="append INFO log lines to this file")
    parser.add_argument("-v", "--verbose", action="store_true", help="log INFO lines to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("apply", help="apply rule ops to a graph")
    p.add_argument("-i", "--input", required=True)
    _add_op_flags(p)
    p.add_argument("-o", "--output")
    p.add_argument("--trace", help="directory for per-step graphs")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("stabilizers", help="list the stabilizer generators G_a(xi)")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--xi", type=_rational, default=S_limits.default_xi)
    p.set_defaults(func=cmd_stabilizers)

    p = sub.add_parser("verify", help="check rule ops against the symplectic oracle")
    p.add_argument("-i", "--input", required=True)
    _add_op_flags(p)
    p.add_argument("--pauli-level", action="store_true", help="also replay stabilizer transport")
    p.add_argument("--xi", type=_rational, default=S_limits.default_xi)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("orbit", help="bounded orbit enumeration", epilog=DUMP_HELP)
    p.add_argument("-i", "--input", required=True)
    _add_budget_flags(p)
    p.add_argument("-o", "--output", required=True, help="orbit dump path")
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("connect", help="search for a rule sequence from graph a to graph b")
    p.add_argument("-a", dest="graph_a", required=True)
    p.add_argument("-b", dest="graph_b", required=True)
    _add_budget_flags(p)
    p.add_argument("-o", "--output", help="sequence file (op script)")
    p.set_defaults(func=cmd_connect)

    p = sub.add_parser("export-dot", help="render a graph as Graphviz DOT text")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_dot)
    return parser


def configure_logging(log_file: Optional[str], verbose: bool) -> None:
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        logging.basicConfig(filename=log_file, level=logging.INFO,
                            format=LOG_FORMAT, datefmt=LOG_DATEFMT, force=True)
    else:
        logging.basicConfig(stream=sys.stderr, level=logging.INFO if verbose else logging.WARNING,
                            format=LOG_FORMAT, datefmt=LOG_DATEFMT, force=True)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    configure_logging(args.log_file, args.verbose)
    try:
        return args.func(args)
    except (GraphError, RuleError, PauliError, DependentRowsError, UsageError, ValueError, OSError) as e:
        sys.stderr.write(f"error: {e}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
