"""Shared graphs and random generators for the test suite"""

import random
from fractions import Fraction

from src.graph_core import WeightedGraph, graph_from_edges, new_graph, set_edge

# Five-mode example with numeric weights on the six edges of the worked example
FIVE_MODE_EDGES = [(1, 2, 1), (1, 3, 2), (1, 5, 3), (2, 5, 1), (3, 4, 1), (4, 5, 2)]

# Expected result of `lg 1 1` on the five-mode example
FIVE_MODE_AFTER_LG = [
    (1, 2, 1), (1, 3, 2), (1, 5, 3), (2, 3, -2), (2, 5, -2),
    (3, 4, 1), (3, 5, -6), (4, 5, 2),
]

DELTAS = [Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 2), Fraction(2)]
LAMBDAS = [Fraction(1, 2), Fraction(2), Fraction(3)]


def five_mode_graph() -> WeightedGraph:
    return graph_from_edges(5, FIVE_MODE_EDGES)


def unit_triangle() -> WeightedGraph:
    return graph_from_edges(3, [(1, 2, 1), (1, 3, 1), (2, 3, 1)])


def random_rational(rng: random.Random, bound: int = 9) -> Fraction:
    num = 0
    while num == 0:
        num = rng.randint(-bound, bound)
    return Fraction(num, rng.randint(1, bound))


def random_graph(rng: random.Random, n_min: int = 2, n_max: int = 8, density: float = 0.5) -> WeightedGraph:
    n = rng.randint(n_min, n_max)
    g = new_graph(n)
    for u in range(1, n + 1):
        for v in range(u + 1, n + 1):
            if rng.random() < density:
                g = set_edge(g, u, v, random_rational(rng))
    return g
