"""CV Pauli Algebra
----------------
n-mode Pauli-group elements with exact phase tracking, conjugation by the
Gaussian gate set, and the stabilizer generators of weighted graph states.

Conventions (see conventions.py):
    X(s) = exp(-i s p), Z(t) = exp(i t x), X(s) Z(t) = exp(-i s t) Z(t) X(s)
    element = exp(i phase) * prod_j Z_j(t_j) * prod_j X_j(s_j)
    conjugation by a gate U means U R U^-1
"""

from __future__ import annotations
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple
import logging

try:
    from src.graph_core import WeightedGraph, format_scalar, neighborhood, to_scalar
    from src.gaussian_rules import RuleKind, RuleOp, apply_lg_rule, apply_rule
except ImportError:
    from graph_core import WeightedGraph, format_scalar, neighborhood, to_scalar
    from gaussian_rules import RuleKind, RuleOp, apply_lg_rule, apply_rule

logger = logging.getLogger(__name__)

_ZERO = Fraction(0)


class PauliError(ValueError):
    """Mode mismatch, bad gate, or a nullifier outside graph-normal form."""


def _zeros(n: int) -> Tuple[Fraction, ...]:
    return tuple(_ZERO for _ in range(n))


def _unit(n: int, j: int, value: Fraction) -> Tuple[Fraction, ...]:
    return tuple(value if k == j - 1 else _ZERO for k in range(n))


# ----------  Pauli elements  ----------

@dataclass(frozen=True)
class PauliElement:
    n: int
    s: Tuple[Fraction, ...]    # X translation per mode
    t: Tuple[Fraction, ...]    # Z translation per mode
    phase: Fraction = _ZERO    # global factor exp(i phase), no modular reduction

    def __post_init__(self):
        if len(self.s) != self.n or len(self.t) != self.n:
            raise PauliError(f"translation vectors must have length {self.n}")

    @classmethod
    def identity(cls, n: int) -> "PauliElement":
        return cls(n, _zeros(n), _zeros(n))

    @classmethod
    def scalar(cls, n: int, phase) -> "PauliElement":
        return cls(n, _zeros(n), _zeros(n), to_scalar(phase))

    @classmethod
    def x(cls, n: int, j: int, s) -> "PauliElement":
        _check_mode(j, n)
        return cls(n, _unit(n, j, to_scalar(s)), _zeros(n))

    @classmethod
    def z(cls, n: int, j: int, t) -> "PauliElement":
        _check_mode(j, n)
        return cls(n, _zeros(n), _unit(n, j, to_scalar(t)))

    def is_identity(self) -> bool:
        return self == PauliElement.identity(self.n)

    def render(self) -> str:
        """Debug form, e.g. `exp(i -2) Z1(2) X1(2)`; not meant to be parsed."""
        parts = [f"exp(i {format_scalar(self.phase)})"] if self.phase != 0 else []
        parts += [f"Z{j + 1}({format_scalar(v)})" for j, v in enumerate(self.t) if v != 0]
        parts += [f"X{j + 1}({format_scalar(v)})" for j, v in enumerate(self.s) if v != 0]
        return " ".join(parts) or "I"

    def __str__(self) -> str:
        return self.render()


def _check_mode(j: int, n: int) -> None:
    if not isinstance(j, int) or not 1 <= j <= n:
        raise PauliError(f"mode {j!r} out of range 1..{n}")


def pauli_mul(P: PauliElement, Q: PauliElement) -> PauliElement:
    """Normal-form product P*Q; moving X_j(s) past Z_j(t) costs phase -s*t."""
    if P.n != Q.n:
        raise PauliError(f"mode count mismatch: {P.n} vs {Q.n}")
    cross = sum((ps * qt for ps, qt in zip(P.s, Q.t)), _ZERO)
    return PauliElement(
        P.n,
        tuple(a + b for a, b in zip(P.s, Q.s)),
        tuple(a + b for a, b in zip(P.t, Q.t)),
        P.phase + Q.phase - cross,
    )


def pauli_inverse(P: PauliElement) -> PauliElement:
    cross = sum((s * t for s, t in zip(P.s, P.t)), _ZERO)
    return PauliElement(
        P.n,
        tuple(-s for s in P.s),
        tuple(-t for t in P.t),
        -P.phase - cross,
    )


def pauli_product(factors: Sequence[PauliElement], n: int) -> PauliElement:
    out = PauliElement.identity(n)
    for f in factors:
        out = pauli_mul(out, f)
    return out


# ----------  Nullifiers  ----------

@dataclass(frozen=True)
class Nullifier:
    n: int
    cx: Tuple[Fraction, ...]   # coefficients of x_1..x_n
    cp: Tuple[Fraction, ...]   # coefficients of p_1..p_n

    def graph_vertex(self) -> Optional[int]:
        """The vertex a if cp is the unit vector e_a, else None."""
        support = [j for j, c in enumerate(self.cp) if c != 0]
        if len(support) == 1 and self.cp[support[0]] == 1:
            return support[0] + 1
        return None

    def render(self) -> str:
        terms = [(c, f"p{j + 1}") for j, c in enumerate(self.cp) if c != 0]
        terms += [(c, f"x{j + 1}") for j, c in enumerate(self.cx) if c != 0]
        if not terms:
            return "0"
        out = []
        for i, (c, sym) in enumerate(terms):
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else f"{format_scalar(abs(c))} "
            if i == 0:
                out.append(f"{'-' if c < 0 else ''}{mag}{sym}")
            else:
                out.append(f"{sign} {mag}{sym}")
        return " ".join(out)

    def __str__(self) -> str:
        return self.render()


def stabilizer_generator(g: WeightedGraph, a: int) -> Nullifier:
    """g_a = p_a - sum_b W(a,b) x_b."""
    g.check_vertex(a)
    return Nullifier(
        g.n,
        tuple(-w for w in g.weights[a - 1]),
        _unit(g.n, a, Fraction(1)),
    )


def nullifier_to_pauli(f: Nullifier, xi) -> PauliElement:
    """exp(-i xi f) in normal form.

    exp(-i xi f) = exp(i(t.x - s.p)) with t = -xi cx, s = xi cp, and
    exp(i(t.x - s.p)) = exp(-i t.s / 2) Z(t) X(s).
    For a graph generator t.s = 0, giving X_a(xi) prod_b Z_b(W_ab xi) with phase 0.
    """
    if f.graph_vertex() is None:
        raise PauliError(f"nullifier '{f.render()}' is not in graph-normal form")
    xi = to_scalar(xi)
    t = tuple(-xi * c for c in f.cx)
    s = tuple(xi * c for c in f.cp)
    ts = sum((a * b for a, b in zip(t, s)), _ZERO)
    return PauliElement(f.n, s, t, -ts / 2)


def stabilizer_element(g: WeightedGraph, a: int, xi) -> PauliElement:
    """G_a(xi) of the graph state of g."""
    return nullifier_to_pauli(stabilizer_generator(g, a), xi)


def stabilizer_text(g: WeightedGraph, a: int, xi) -> str:
    """Generator in the factor order X_a(xi) prod_b Z_b(W_ab xi), e.g. `X1(1) Z2(1)`."""
    xi = to_scalar(xi)
    parts = [f"X{a}({format_scalar(xi)})"]
    parts += [f"Z{b}({format_scalar(g.weight(a, b) * xi)})" for b in neighborhood(g, a)]
    return " ".join(parts)


# ----------  Gaussian gates  ----------

class GateKind(str, Enum):
    PHASE_Z = "PhaseZ"
    PHASE_X = "PhaseX"
    FOURIER = "Fourier"
    FOURIER_SQUARED = "FourierSquared"
    SCALE = "Scale"
    CONTROLLED_Z = "ControlledZ"
    PAULI_X = "PauliX"
    PAULI_Z = "PauliZ"
    LOCAL_GAUSSIAN = "LocalGaussian"


_UNPARAMETERIZED = {GateKind.FOURIER, GateKind.FOURIER_SQUARED}


@dataclass(frozen=True)
class GaussianGate:
    kind: GateKind
    modes: Tuple[int, ...]
    param: Optional[Fraction] = None

    def __post_init__(self):
        width = 2 if self.kind is GateKind.CONTROLLED_Z else 1
        if len(self.modes) != width or any(not isinstance(m, int) or m < 1 for m in self.modes):
            raise PauliError(f"{self.kind.value} needs {width} positive mode index(es), got {self.modes!r}")
        if width == 2 and self.modes[0] == self.modes[1]:
            raise PauliError(f"ControlledZ needs distinct modes, got {self.modes!r}")
        if self.kind in _UNPARAMETERIZED:
            if self.param is not None:
                raise PauliError(f"{self.kind.value} takes no parameter")
            return
        if self.param is None:
            raise PauliError(f"{self.kind.value} needs a parameter")
        object.__setattr__(self, "param", to_scalar(self.param))
        if self.kind is GateKind.SCALE and self.param <= 0:
            raise PauliError(f"Scale needs lambda > 0, got {format_scalar(self.param)}")

    @classmethod
    def phase_z(cls, m: int, eta) -> "GaussianGate":
        return cls(GateKind.PHASE_Z, (m,), eta)

    @classmethod
    def phase_x(cls, m: int, eta) -> "GaussianGate":
        return cls(GateKind.PHASE_X, (m,), eta)

    @classmethod
    def fourier(cls, m: int) -> "GaussianGate":
        return cls(GateKind.FOURIER, (m,))

    @classmethod
    def fourier_squared(cls, m: int) -> "GaussianGate":
        return cls(GateKind.FOURIER_SQUARED, (m,))

    @classmethod
    def scale(cls, m: int, lam) -> "GaussianGate":
        return cls(GateKind.SCALE, (m,), lam)

    @classmethod
    def controlled_z(cls, m1: int, m2: int, omega) -> "GaussianGate":
        return cls(GateKind.CONTROLLED_Z, (m1, m2), omega)

    @classmethod
    def pauli_x(cls, m: int, s) -> "GaussianGate":
        return cls(GateKind.PAULI_X, (m,), s)

    @classmethod
    def pauli_z(cls, m: int, t) -> "GaussianGate":
        return cls(GateKind.PAULI_Z, (m,), t)

    @classmethod
    def local_gaussian(cls, pivot: int, delta) -> "GaussianGate":
        return cls(GateKind.LOCAL_GAUSSIAN, (pivot,), delta)

    def check_modes(self, n: int) -> None:
        for m in self.modes:
            _check_mode(m, n)

    def __str__(self) -> str:
        args = [str(m) for m in self.modes]
        if self.param is not None:
            args.append(format_scalar(self.param))
        return f"{self.kind.value}({', '.join(args)})"


def _image_x(gate: GaussianGate, j: int, s: Fraction, n: int) -> PauliElement:
    """U X_j(s) U^-1."""
    k, p = gate.kind, gate.param
    if j not in gate.modes:
        return PauliElement.x(n, j, s)
    if k is GateKind.PHASE_Z:
        # exp(-i s^2 eta / 2) Z(s eta) X(s)
        return pauli_product(
            [PauliElement.scalar(n, -s * s * p / 2), PauliElement.z(n, j, s * p), PauliElement.x(n, j, s)], n
        )
    if k is GateKind.FOURIER:
        return PauliElement.z(n, j, s)
    if k is GateKind.FOURIER_SQUARED:
        return PauliElement.x(n, j, -s)
    if k is GateKind.SCALE:
        return PauliElement.x(n, j, s / p)
    if k is GateKind.CONTROLLED_Z:
        other = gate.modes[1] if j == gate.modes[0] else gate.modes[0]
        return pauli_mul(PauliElement.x(n, j, s), PauliElement.z(n, other, p * s))
    if k is GateKind.PAULI_Z:
        return pauli_mul(PauliElement.scalar(n, p * s), PauliElement.x(n, j, s))
    # PhaseX and PauliX fix X
    return PauliElement.x(n, j, s)


def _image_z(gate: GaussianGate, j: int, t: Fraction, n: int) -> PauliElement:
    """U Z_j(t) U^-1."""
    k, p = gate.kind, gate.param
    if j not in gate.modes:
        return PauliElement.z(n, j, t)
    if k is GateKind.PHASE_X:
        # exp(-i t^2 eta / 2) X(-t eta) Z(t)
        return pauli_product(
            [PauliElement.scalar(n, -t * t * p / 2), PauliElement.x(n, j, -t * p), PauliElement.z(n, j, t)], n
        )
    if k is GateKind.FOURIER:
        return PauliElement.x(n, j, -t)
    if k is GateKind.FOURIER_SQUARED:
        return PauliElement.z(n, j, -t)
    if k is GateKind.SCALE:
        return PauliElement.z(n, j, p * t)
    if k is GateKind.PAULI_X:
        return pauli_mul(PauliElement.scalar(n, -p * t), PauliElement.z(n, j, t))
    # PhaseZ, ControlledZ and PauliZ fix Z
    return PauliElement.z(n, j, t)


def conjugate_pauli(gate: GaussianGate, P: PauliElement, graph: Optional[WeightedGraph] = None) -> PauliElement:
    """U P U^-1 in normal form with exact phase.

    A LocalGaussian gate is only meaningful relative to a graph; pass `graph`
    or expand it with expand_lg first.
    """
    if gate.kind is GateKind.LOCAL_GAUSSIAN:
        if graph is None:
            raise PauliError(f"{gate} must be expanded with a graph (expand_lg) before conjugation")
        if graph.n != P.n:
            raise PauliError(f"mode count mismatch: graph has {graph.n}, element has {P.n}")
        return conjugate_sequence(expand_lg(graph, gate.modes[0], gate.param), P)
    gate.check_modes(P.n)
    out = PauliElement.scalar(P.n, P.phase)
    for j, t in enumerate(P.t, start=1):
        if t != 0:
            out = pauli_mul(out, _image_z(gate, j, t, P.n))
    for j, s in enumerate(P.s, start=1):
        if s != 0:
            out = pauli_mul(out, _image_x(gate, j, s, P.n))
    return out


def conjugate_sequence(gates: Sequence[GaussianGate], P: PauliElement) -> PauliElement:
    """Conjugate by gates applied in list order (first gate acts first)."""
    for gate in gates:
        P = conjugate_pauli(gate, P)
    return P


def expand_lg(g: WeightedGraph, a: int, delta) -> List[GaussianGate]:
    """U_LG(a, delta) = P_X,a(-delta) prod_{b in N_a} P_b(W_ab^2 delta), modes ascending."""
    delta = to_scalar(delta)
    gates = [GaussianGate.phase_x(a, -delta)]
    for b in neighborhood(g, a):
        w = g.weight(a, b)
        gates.append(GaussianGate.phase_z(b, w * w * delta))
    return gates


def preparation_gates(g: WeightedGraph) -> List[GaussianGate]:
    """C_Z(W_uv) for every edge, sorted by (u, v); all of them commute."""
    return [GaussianGate.controlled_z(u, v, w) for u, v, w in g.edges()]


def realize_op(g: WeightedGraph, op: RuleOp) -> List[GaussianGate]:
    """Gate sequence whose action on the graph state of g is the rule op."""
    if op.kind is RuleKind.LG:
        return expand_lg(g, op.vertex, op.param)
    g.check_vertex(op.vertex)
    if op.kind is RuleKind.F2:
        return [GaussianGate.fourier_squared(op.vertex)]
    return [GaussianGate.scale(op.vertex, op.param)]


# ----------  Stabilizer transport  ----------

@dataclass
class TransportReport:
    ok: bool
    vertex: Optional[int] = None
    got: Optional[PauliElement] = None
    expected: Optional[PauliElement] = None

    def __bool__(self) -> bool:
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "stabilizer transport ok"
        return (f"stabilizer transport mismatch at G{self.vertex}: "
                f"got {self.got.render()}, expected {self.expected.render()}")


def verify_stabilizer_transport(g: WeightedGraph, a: int, delta, xi) -> TransportReport:
    """Pauli-level replay of the LG stabilizer derivation.

    Each G_v(xi) is conjugated by the expanded LG gates; for v != a the stray
    X_a / Z_N(a) factors are absorbed by multiplying with G'_a(-W_av delta xi)
    of the new graph. The result must equal G'_v(xi), phase included.
    """
    delta, xi = to_scalar(delta), to_scalar(xi)
    new = apply_lg_rule(g, a, delta)
    gates = expand_lg(g, a, delta)
    for v in range(1, g.n + 1):
        got = conjugate_sequence(gates, stabilizer_element(g, v, xi))
        if v != a:
            correction = stabilizer_element(new, a, -new.weight(a, v) * delta * xi)
            got = pauli_mul(got, correction)
        expected = stabilizer_element(new, v, xi)
        if got != expected:
            logger.warning(f"TRANSP  | op=lg {a} {format_scalar(delta)} | vertex={v} | MISMATCH")
            return TransportReport(False, v, got, expected)
    return TransportReport(True)


def verify_rule_transport(g: WeightedGraph, op: RuleOp, xi) -> TransportReport:
    """Stabilizer-level check for any rule op.

    F2 at a sends G_a(xi) to G'_a(-xi), Scale(a, lambda) sends it to
    G'_a(xi / lambda); every other generator goes to G'_v(xi).
    """
    if op.kind is RuleKind.LG:
        return verify_stabilizer_transport(g, op.vertex, op.param, xi)
    xi = to_scalar(xi)
    new = apply_rule(g, op)
    gates = realize_op(g, op)
    a = op.vertex
    for v in range(1, g.n + 1):
        got = conjugate_sequence(gates, stabilizer_element(g, v, xi))
        xi_v = xi
        if v == a:
            xi_v = -xi if op.kind is RuleKind.F2 else xi / op.param
        expected = stabilizer_element(new, v, xi_v)
        if got != expected:
            return TransportReport(False, v, got, expected)
    return TransportReport(True)
