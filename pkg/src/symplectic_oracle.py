"""Symplectic Oracle
-----------------
Independent check on the graph rules. Every Gaussian gate becomes an exact
2n x 2n rational matrix S with U r U^-1 = S r on r = (x_1..x_n, p_1..p_n);
nullifier rows are transported by right-multiplication and the graph is read
back by exact row reduction.

Matrices are numpy object arrays of Fraction, so every product and every
elimination step is exact.
"""

from __future__ import annotations
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Union
import logging

import numpy as np

try:
    from src.graph_core import WeightedGraph
    from src.pauli_algebra import GateKind, GaussianGate, PauliElement, PauliError
except ImportError:
    from graph_core import WeightedGraph
    from pauli_algebra import GateKind, GaussianGate, PauliElement, PauliError

logger = logging.getLogger(__name__)

_ZERO = Fraction(0)
_ONE = Fraction(1)


def fraction_matrix(rows) -> np.ndarray:
    """Object array of Fractions from nested sequences."""
    out = np.array([[Fraction(v) for v in row] for row in rows], dtype=object)
    return out.reshape(len(rows), -1) if len(rows) else out


def identity_matrix(size: int) -> np.ndarray:
    return np.array([[_ONE if i == j else _ZERO for j in range(size)] for i in range(size)], dtype=object)


def zero_matrix(rows: int, cols: int) -> np.ndarray:
    return np.array([[_ZERO] * cols for _ in range(rows)], dtype=object).reshape(rows, cols)


def symplectic_form(n: int) -> np.ndarray:
    """J = [[0, I], [-I, 0]]."""
    J = zero_matrix(2 * n, 2 * n)
    for j in range(n):
        J[j, n + j] = _ONE
        J[n + j, j] = -_ONE
    return J


def _frozen(m: np.ndarray) -> np.ndarray:
    m = m.copy()
    m.setflags(write=False)
    return m


# ----------  Exact elimination  ----------

def row_reduce(m: np.ndarray):
    """Reduced row echelon form; returns (rref, pivot columns). Pivot = first exact nonzero."""
    a = m.copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = next((i for i in range(r, rows) if a[i, c] != 0), None)
        if k is None:
            continue
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r, :] = a[r, :] / a[r, c]
        for i in range(rows):
            if i != r and a[i, c] != 0:
                a[i, :] = a[i, :] - a[i, c] * a[r, :]
        pivots.append(c)
        r += 1
    return a, pivots


def rank(m: np.ndarray) -> int:
    return len(row_reduce(m)[1])


def inverse(m: np.ndarray) -> Optional[np.ndarray]:
    """Exact inverse of a square matrix, or None if singular."""
    size = m.shape[0]
    rref, pivots = row_reduce(np.hstack([m, identity_matrix(size)]))
    if pivots[:size] != list(range(size)):
        return None
    return rref[:, size:]


# ----------  Symplectic matrices  ----------

@dataclass(frozen=True, eq=False)
class SymplecticMatrix:
    n: int
    m: np.ndarray

    def __post_init__(self):
        if self.m.shape != (2 * self.n, 2 * self.n):
            raise ValueError(f"symplectic matrix must be {2 * self.n}x{2 * self.n}, got {self.m.shape}")
        object.__setattr__(self, "m", _frozen(self.m))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymplecticMatrix):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.m, other.m))

    def __matmul__(self, other: "SymplecticMatrix") -> "SymplecticMatrix":
        return SymplecticMatrix(self.n, self.m @ other.m)

    def is_symplectic(self) -> bool:
        J = symplectic_form(self.n)
        return bool(np.array_equal(self.m.T @ J @ self.m, J)) and bool(np.array_equal(self.m @ J @ self.m.T, J))


def gate_symplectic(gate: GaussianGate, n: int) -> SymplecticMatrix:
    """S with U r_i U^-1 = sum_j S_ij r_j (linear part; Pauli translations are identity)."""
    if gate.kind is GateKind.LOCAL_GAUSSIAN:
        raise PauliError(f"{gate} must be expanded with a graph (expand_lg) first")
    gate.check_modes(n)
    S = identity_matrix(2 * n)
    k, p = gate.kind, gate.param
    x = gate.modes[0] - 1
    px = n + x
    if k is GateKind.PHASE_Z:
        S[px, x] = -p                       # p -> p - eta x
    elif k is GateKind.PHASE_X:
        S[x, px] = p                        # x -> x + eta p
    elif k is GateKind.FOURIER:
        S[x, x], S[x, px] = _ZERO, _ONE     # x -> p
        S[px, px], S[px, x] = _ZERO, -_ONE  # p -> -x
    elif k is GateKind.FOURIER_SQUARED:
        S[x, x] = S[px, px] = -_ONE
    elif k is GateKind.SCALE:
        S[x, x], S[px, px] = p, 1 / p       # x -> lambda x, p -> p / lambda
    elif k is GateKind.CONTROLLED_Z:
        y = gate.modes[1] - 1
        S[px, y] = -p                       # p1 -> p1 - Omega x2
        S[n + y, x] = -p                    # p2 -> p2 - Omega x1
    return SymplecticMatrix(n, S)


def sequence_symplectic(gates: Sequence[GaussianGate], n: int) -> SymplecticMatrix:
    """Composite for gates applied in list order: S_1 S_2 ... S_k."""
    out = SymplecticMatrix(n, identity_matrix(2 * n))
    for gate in gates:
        out = out @ gate_symplectic(gate, n)
    return out


def pauli_action(S: SymplecticMatrix, P: PauliElement) -> PauliElement:
    """Image of P under the linear gate with matrix S.

    t' = S_xx^T t - S_px^T s,  s' = S_pp^T s - S_xp^T t,
    phase' = phase + (t.s - t'.s') / 2.
    """
    n = S.n
    m = S.m
    t = np.array(P.t, dtype=object)
    s = np.array(P.s, dtype=object)
    xx, xp, px, pp = m[:n, :n], m[:n, n:], m[n:, :n], m[n:, n:]
    t2 = xx.T.dot(t) - px.T.dot(s)
    s2 = pp.T.dot(s) - xp.T.dot(t)
    before = sum((a * b for a, b in zip(t, s)), _ZERO)
    after = sum((a * b for a, b in zip(t2, s2)), _ZERO)
    return PauliElement(
        n,
        tuple(Fraction(v) for v in s2),
        tuple(Fraction(v) for v in t2),
        P.phase + (before - after) / 2,
    )


# ----------  Nullifier matrices  ----------

class DependentRowsError(ValueError):
    """Nullifier rows are not linearly independent."""


class GraphFormDefect(str, Enum):
    SINGULAR_P_BLOCK = "singular p-block"
    ASYMMETRIC = "asymmetric"
    NONZERO_DIAGONAL = "nonzero diagonal"


@dataclass(frozen=True)
class NotGraphForm:
    defect: GraphFormDefect
    detail: str = ""

    def describe(self) -> str:
        return f"not in graph form ({self.defect.value})" + (f": {self.detail}" if self.detail else "")


@dataclass(frozen=True, eq=False)
class NullifierMatrix:
    n: int
    rows: np.ndarray   # n x 2n, row v = coefficients of nullifier v over (x, p)

    def __post_init__(self):
        if self.rows.shape != (self.n, 2 * self.n):
            raise ValueError(f"nullifier matrix must be {self.n}x{2 * self.n}, got {self.rows.shape}")
        object.__setattr__(self, "rows", _frozen(self.rows))

    def __eq__(self, other) -> bool:
        if not isinstance(other, NullifierMatrix):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.rows, other.rows))


def graph_nullifier_matrix(g: WeightedGraph) -> NullifierMatrix:
    """Rows [-A | I]."""
    A = fraction_matrix(g.weights)
    return NullifierMatrix(g.n, np.hstack([-A, identity_matrix(g.n)]))


def _touched_columns(gate: GaussianGate, n: int) -> List[int]:
    return sorted({m - 1 for m in gate.modes} | {n + m - 1 for m in gate.modes})


def transport(nm: NullifierMatrix, gates: Sequence[GaussianGate]) -> NullifierMatrix:
    """Rows of U g U^-1 for the composite U, gates applied in list order."""
    rows = nm.rows.copy()
    for gate in gates:
        S = gate_symplectic(gate, nm.n).m
        # S is the identity outside the gate's own columns
        cols = _touched_columns(gate, nm.n)
        rows[:, cols] = rows.dot(S[:, cols])
    return NullifierMatrix(nm.n, rows)


def recover_graph(nm: NullifierMatrix) -> Union[WeightedGraph, NotGraphForm]:
    """A = -M_p^-1 M_x when the p-block is invertible and A is a valid weight matrix."""
    n = nm.n
    if rank(nm.rows) != n:
        raise DependentRowsError(f"nullifier rows have rank {rank(nm.rows)} < {n}")
    Mx, Mp = nm.rows[:, :n], nm.rows[:, n:]
    Mp_inv = inverse(Mp)
    if Mp_inv is None:
        return NotGraphForm(GraphFormDefect.SINGULAR_P_BLOCK, f"p-block rank {rank(Mp)} < {n}")
    A = -Mp_inv.dot(Mx)
    for u in range(n):
        for v in range(u + 1, n):
            if A[u, v] != A[v, u]:
                return NotGraphForm(GraphFormDefect.ASYMMETRIC, f"A[{u + 1},{v + 1}]={A[u, v]} vs A[{v + 1},{u + 1}]={A[v, u]}")
    for u in range(n):
        if A[u, u] != 0:
            return NotGraphForm(GraphFormDefect.NONZERO_DIAGONAL, f"A[{u + 1},{u + 1}]={A[u, u]}")
    return WeightedGraph.from_matrix(A)


def oracle_transform(g: WeightedGraph, gates: Sequence[GaussianGate]) -> Union[WeightedGraph, NotGraphForm]:
    """Graph reached from g through the gate sequence, as the oracle sees it."""
    result = recover_graph(transport(graph_nullifier_matrix(g), gates))
    if isinstance(result, NotGraphForm):
        logger.info(f"ORACLE  | gates={len(gates)} | {result.describe()}")
    return result
