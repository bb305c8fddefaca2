"""Shadow Evaluation Framework
---------------------------
Runs the symplectic oracle in the shadow of the rule engine: every rule op is
applied twice, once by the graph rule and once by transporting nullifiers
through the op's gate realization, and the two graphs must agree exactly.
Optionally the Pauli-level stabilizer transport is replayed as well.
"""

from __future__ import annotations
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Union
import logging

try:
    from src import gaussian_rules as rules
    from src.conventions import S_conventions
    from src.graph_core import WeightedGraph, graph_from_edges
    from src.pauli_algebra import GaussianGate, TransportReport, realize_op, verify_rule_transport
    from src.symplectic_oracle import (
        NotGraphForm, NullifierMatrix, gate_symplectic, graph_nullifier_matrix,
        identity_matrix, oracle_transform, recover_graph,
    )
except ImportError:
    import gaussian_rules as rules
    from conventions import S_conventions
    from graph_core import WeightedGraph, graph_from_edges
    from pauli_algebra import GaussianGate, TransportReport, realize_op, verify_rule_transport
    from symplectic_oracle import (
        NotGraphForm, NullifierMatrix, gate_symplectic, graph_nullifier_matrix,
        identity_matrix, oracle_transform, recover_graph,
    )

logger = logging.getLogger(__name__)


def oracle_apply(g: WeightedGraph, op: rules.RuleOp) -> Union[WeightedGraph, NotGraphForm]:
    rules.validate_op(op, g.n)
    return oracle_transform(g, realize_op(g, op))


@dataclass
class StepReport:
    index: int
    op: rules.RuleOp
    rule_graph: WeightedGraph
    oracle_result: Union[WeightedGraph, NotGraphForm]
    transport: Optional[TransportReport] = None

    @property
    def oracle_agrees(self) -> bool:
        return isinstance(self.oracle_result, WeightedGraph) and self.oracle_result == self.rule_graph

    @property
    def agree(self) -> bool:
        return self.oracle_agrees and (self.transport is None or self.transport.ok)

    def render(self) -> List[str]:
        lines = [f"step {self.index + 1}: {rules.format_rule_op(self.op)}"]
        if self.agree:
            note = "" if self.transport is None else ", stabilizer transport ok"
            lines.append(f"  agree: yes ({len(self.rule_graph.edges())} edges{note})")
            return lines
        lines.append("  agree: NO")
        lines.append(f"  rule:   {self.rule_graph}")
        if isinstance(self.oracle_result, NotGraphForm):
            lines.append(f"  oracle: {self.oracle_result.describe()}")
        else:
            lines.append(f"  oracle: {self.oracle_result}")
        if self.transport is not None and not self.transport.ok:
            lines.append(f"  {self.transport.describe()}")
        return lines


@dataclass
class VerificationReport:
    steps: List[StepReport] = field(default_factory=list)
    final_graph: Optional[WeightedGraph] = None
    scale_note: Optional[str] = None

    @property
    def ok(self) -> bool:
        return all(step.agree for step in self.steps)

    @property
    def not_graph_form(self) -> bool:
        return any(isinstance(step.oracle_result, NotGraphForm) for step in self.steps)

    def render(self) -> str:
        lines = []
        for step in self.steps:
            lines += step.render()
        if self.scale_note:
            lines.append(f"scale convention: {self.scale_note}")
        verdict = "AGREE" if self.ok else "MISMATCH"
        lines.append(f"result: {verdict} ({len(self.steps)} step(s) checked)")
        return "\n".join(lines) + "\n"


def run_shadow_eval(g: WeightedGraph, ops: Sequence[rules.RuleOp],
                    pauli_level: bool = False, xi=1) -> VerificationReport:
    """Check every op against the oracle; stops at the first disagreement."""
    report = VerificationReport(final_graph=g)
    current = g
    for i, op in enumerate(ops):
        try:
            rules.validate_op(op, current.n)
        except rules.RuleError as e:
            raise rules.RuleError(str(e), index=i) from None
        rule_graph = rules.apply_rule(current, op)
        oracle_result = oracle_apply(current, op)
        transport = verify_rule_transport(current, op, xi) if pauli_level else None
        step = StepReport(i, op, rule_graph, oracle_result, transport)
        report.steps.append(step)
        if op.kind is rules.RuleKind.SCALE and report.scale_note is None:
            report.scale_note = S_conventions.scale_convention_text()
        logger.info(f"VERIFY  | step={i + 1} | op={rules.format_rule_op(op)} | agree={step.agree}")
        if not step.agree:
            break
        current = rule_graph
    report.final_graph = current
    return report


# ----------  Scale sign resolution  ----------

@dataclass(frozen=True)
class ScaleConvention:
    exponent_sign: int          # +1: rule lambda = e^{r}, -1: rule lambda = e^{-r}
    gate_matches_squeezer: bool  # Scale(a, e^{r}) has the same matrix as S(r)


def resolve_scale_convention(stretch: Fraction = Fraction(2)) -> ScaleConvention:
    """Read off which power of e^{r} the oracle multiplies edges by under S(r).

    S(r) is built from its Heisenberg action x -> e^{r} x, p -> e^{-r} p with
    the rational stand-in e^{r} = stretch, then a unit edge is transported.
    """
    g = graph_from_edges(2, [(1, 2, 1)])
    S = identity_matrix(4)
    S[0, 0] = stretch
    S[2, 2] = 1 / stretch
    rows = graph_nullifier_matrix(g).rows.dot(S)
    result = recover_graph(NullifierMatrix(2, rows))
    if isinstance(result, NotGraphForm):
        raise RuntimeError(f"squeezer left graph form: {result.describe()}")
    w = result.weight(1, 2)
    if w == stretch:
        sign = +1
    elif w == 1 / stretch:
        sign = -1
    else:
        raise RuntimeError(f"unexpected squeezed weight {w} for stretch {stretch}")
    gate = gate_symplectic(GaussianGate.scale(1, stretch), 2)
    matches = bool((gate.m == S).all())
    logger.info(f"CONVENT | scale lambda = e^({'+' if sign > 0 else '-'}r) | gate_matches={matches}")
    return ScaleConvention(sign, matches)


def enforce_conventions() -> None:
    resolved = resolve_scale_convention()
    if resolved.exponent_sign != S_conventions.scale_lambda_exponent_sign or not resolved.gate_matches_squeezer:
        raise RuntimeError("Sign conventions misconfigured: oracle disagrees with S_conventions.")
