"""Tests for the symplectic oracle and its agreement with the graph rules"""

import random
import unittest
from fractions import Fraction

import numpy as np

from src.graph_core import graph_from_edges, new_graph
from src.gaussian_rules import apply_f2_rule, apply_lg_rule, apply_scale_rule
from src.pauli_algebra import (
    GateKind, GaussianGate, PauliError, conjugate_pauli, conjugate_sequence, expand_lg, preparation_gates,
)
from src.symplectic_oracle import (
    DependentRowsError, GraphFormDefect, NotGraphForm, NullifierMatrix, SymplecticMatrix,
    fraction_matrix, gate_symplectic, graph_nullifier_matrix, identity_matrix, inverse,
    oracle_transform, pauli_action, rank, recover_graph, sequence_symplectic, transport,
)
from tests.fixtures import DELTAS, LAMBDAS, five_mode_graph, random_graph, random_rational
from tests.test_pauli_algebra import LINEAR_KINDS, random_gate, random_pauli


class TestExactLinearAlgebra(unittest.TestCase):

    def test_rank_and_inverse(self):
        m = fraction_matrix([[2, 1], [4, 2]])
        self.assertEqual(rank(m), 1)
        self.assertIsNone(inverse(m))
        m = fraction_matrix([[2, 1], [1, 1]])
        inv = inverse(m)
        self.assertTrue(np.array_equal(m.dot(inv), identity_matrix(2)))
        self.assertEqual(inv[0, 0], Fraction(1))
        self.assertEqual(inv[0, 1], Fraction(-1))

    def test_matrices_are_read_only(self):
        S = gate_symplectic(GaussianGate.fourier(1), 1)
        with self.assertRaises(ValueError):
            S.m[0, 0] = Fraction(7)


class TestGateMatrices(unittest.TestCase):

    def setUp(self):
        self.rng = random.Random(31)

    def test_every_gate_is_symplectic(self):
        for kind in LINEAR_KINDS + [GateKind.PAULI_X, GateKind.PAULI_Z]:
            for _ in range(50):
                n = self.rng.randint(2, 4)
                gate = random_gate(self.rng, kind, n)
                with self.subTest(gate=str(gate)):
                    self.assertTrue(gate_symplectic(gate, n).is_symplectic())

    def test_not_symplectic_detected(self):
        m = identity_matrix(2)
        m[0, 0] = Fraction(2)
        self.assertFalse(SymplecticMatrix(1, m).is_symplectic())

    def test_fourier_squared_is_fourier_twice(self):
        F = gate_symplectic(GaussianGate.fourier(1), 2)
        self.assertEqual(F @ F, gate_symplectic(GaussianGate.fourier_squared(1), 2))
        self.assertEqual(sequence_symplectic([GaussianGate.fourier(1)] * 4, 2),
                         SymplecticMatrix(2, identity_matrix(4)))

    def test_two_gate_sequences_compose(self):
        for _ in range(200):
            n = self.rng.randint(2, 4)
            g1 = random_gate(self.rng, self.rng.choice(LINEAR_KINDS), n)
            g2 = random_gate(self.rng, self.rng.choice(LINEAR_KINDS), n)
            S = sequence_symplectic([g1, g2], n)
            with self.subTest(gates=(str(g1), str(g2))):
                self.assertEqual(S.m.tolist(), gate_symplectic(g1, n).m.dot(gate_symplectic(g2, n).m).tolist())
                self.assertTrue(S.is_symplectic())
                P = random_pauli(self.rng, n)
                self.assertEqual(pauli_action(S, P), conjugate_sequence([g1, g2], P))

    def test_local_gaussian_must_be_expanded(self):
        with self.assertRaises(PauliError):
            gate_symplectic(GaussianGate.local_gaussian(1, 1), 3)

    def test_pauli_action_matches_conjugation(self):
        for kind in LINEAR_KINDS:
            for _ in range(50):
                n = self.rng.randint(2, 4)
                gate = random_gate(self.rng, kind, n)
                P = random_pauli(self.rng, n)
                with self.subTest(gate=str(gate)):
                    self.assertEqual(pauli_action(gate_symplectic(gate, n), P), conjugate_pauli(gate, P))


class TestRecovery(unittest.TestCase):

    def test_graph_round_trip(self):
        g = five_mode_graph()
        self.assertEqual(recover_graph(graph_nullifier_matrix(g)), g)

    def test_preparation_circuit(self):
        """C_Z per edge on the edgeless state rebuilds the graph"""
        g = five_mode_graph()
        nm = transport(graph_nullifier_matrix(new_graph(g.n)), preparation_gates(g))
        self.assertEqual(recover_graph(nm), g)

    def test_singular_p_block(self):
        g = graph_from_edges(2, [(1, 2, 1)])
        result = oracle_transform(g, [GaussianGate.fourier(1)])
        self.assertIsInstance(result, NotGraphForm)
        self.assertEqual(result.defect, GraphFormDefect.SINGULAR_P_BLOCK)

    def test_nonzero_diagonal(self):
        g = graph_from_edges(2, [(1, 2, 1)])
        result = oracle_transform(g, [GaussianGate.phase_x(1, 1)])
        self.assertIsInstance(result, NotGraphForm)
        self.assertEqual(result.defect, GraphFormDefect.NONZERO_DIAGONAL)
        self.assertIn("A[2,2]=1", result.describe())

    def test_asymmetric(self):
        rows = fraction_matrix([[0, -1, 1, 0], [-2, 0, 0, 1]])
        result = recover_graph(NullifierMatrix(2, rows))
        self.assertIsInstance(result, NotGraphForm)
        self.assertEqual(result.defect, GraphFormDefect.ASYMMETRIC)

    def test_dependent_rows(self):
        rows = fraction_matrix([[0, -1, 1, 0], [0, -1, 1, 0]])
        with self.assertRaises(DependentRowsError):
            recover_graph(NullifierMatrix(2, rows))

    def test_transport_matches_composite_matrix(self):
        g = five_mode_graph()
        gates = expand_lg(g, 1, 1) + [GaussianGate.fourier_squared(3), GaussianGate.scale(2, 3)]
        nm = graph_nullifier_matrix(g)
        by_steps = transport(nm, gates)
        composite = nm.rows.dot(sequence_symplectic(gates, g.n).m)
        self.assertEqual(by_steps, NullifierMatrix(g.n, composite))


class TestRuleOracleEquivalence(unittest.TestCase):
    """Every rule output must equal nullifier transport plus recovery, exactly."""

    CASES = 500

    def setUp(self):
        self.rng = random.Random(2024)

    def test_five_mode_lg(self):
        g = five_mode_graph()
        self.assertEqual(oracle_transform(g, expand_lg(g, 1, 1)), apply_lg_rule(g, 1, 1))

    def test_lg_rule(self):
        for _ in range(self.CASES):
            g = random_graph(self.rng)
            a, delta = self.rng.randint(1, g.n), self.rng.choice(DELTAS)
            self.assertEqual(oracle_transform(g, expand_lg(g, a, delta)), apply_lg_rule(g, a, delta))

    def test_f2_rule(self):
        for _ in range(self.CASES):
            g = random_graph(self.rng)
            a = self.rng.randint(1, g.n)
            self.assertEqual(oracle_transform(g, [GaussianGate.fourier_squared(a)]), apply_f2_rule(g, a))

    def test_scale_rule(self):
        for _ in range(self.CASES):
            g = random_graph(self.rng)
            a, lam = self.rng.randint(1, g.n), self.rng.choice(LAMBDAS)
            self.assertEqual(oracle_transform(g, [GaussianGate.scale(a, lam)]), apply_scale_rule(g, a, lam))

    def test_random_circuit_through_preparation(self):
        """Preparing g and then running the LG gates lands on the rule's graph"""
        for _ in range(50):
            g = random_graph(self.rng)
            a, delta = self.rng.randint(1, g.n), random_rational(self.rng)
            gates = preparation_gates(g) + expand_lg(g, a, delta)
            self.assertEqual(oracle_transform(new_graph(g.n), gates), apply_lg_rule(g, a, delta))


if __name__ == "__main__":
    unittest.main()
