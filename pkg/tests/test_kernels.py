from __future__ import annotations

import random
from fractions import Fraction as F
from itertools import combinations, permutations

import pytest
from hypothesis import given, strategies as st

from deltatour.coverage import is_delta_tour
from deltatour.discrete import exact_shortest_tour
from deltatour.generators import all_connected_up_to
from deltatour.graph import Graph, Point
from deltatour.kernels import (
    EulerError,
    WeightedGraph,
    chinese_postman_tour,
    christofides_tsp,
    connect_points_tour,
    euler_tour,
    held_karp_tsp,
    matching_blossom,
    matching_dp,
    min_weight_perfect_matching,
    minimum_spanning_tree,
    spanning_double_tour,
    vertex_tjoin,
)
from deltatour.tours import tour_length
from helpers import connected_graphs


def random_metric(rng: random.Random, n: int) -> WeightedGraph:
    """Shortest-path closure of random positive rational weights: always metric."""
    w = [[F(0)] * n for _ in range(n)]
    for i, j in combinations(range(n), 2):
        w[i][j] = w[j][i] = F(rng.randrange(1, 40), rng.choice([1, 2, 3, 4]))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if w[i][k] + w[k][j] < w[i][j]:
                    w[i][j] = w[i][k] + w[k][j]
    return WeightedGraph.from_matrix(w)


def brute_tsp(wg: WeightedGraph) -> F:
    if wg.n <= 1:
        return F(0)
    return min(wg.cycle_length([0, *p]) for p in permutations(range(1, wg.n)))


def test_euler_examples():
    assert euler_tour([(0, 1), (1, 2), (0, 2)], start=0) in ([0, 1, 2, 0], [0, 2, 1, 0])
    assert euler_tour([(0, 1), (0, 1)], start=0) == [0, 1, 0]
    assert euler_tour([(0, 1), (1, 2), (0, 1), (1, 2)], start=0) == [0, 1, 2, 1, 0]
    with pytest.raises(EulerError):
        euler_tour([(0, 1), (1, 2)], start=0)


def test_matching_examples():
    assert min_weight_perfect_matching([[0, 5], [5, 0]]) == ([(0, 1)], 5)
    w = [[0, 1, 9, 9], [1, 0, 9, 9], [9, 9, 0, 2], [9, 9, 2, 0]]
    pairs, cost = min_weight_perfect_matching(w)
    assert sorted(pairs) == [(0, 1), (2, 3)] and cost == 3
    unit = [[0 if i == j else 1 for j in range(4)] for i in range(4)]
    assert min_weight_perfect_matching(unit)[1] == 2


def test_postman_examples():
    assert tour_length(chinese_postman_tour(Graph(3, [(0, 1), (1, 2), (0, 2)]))) == 3
    assert tour_length(chinese_postman_tour(Graph(3, [(0, 1), (1, 2)]))) == 4
    k4 = Graph(4, list(combinations(range(4), 2)))
    assert tour_length(chinese_postman_tour(k4)) == 8


def test_postman_equals_exact_zero_tour_on_small_graphs():
    for g in all_connected_up_to(4):
        assert tour_length(chinese_postman_tour(g)) == exact_shortest_tour(g, 0).length


def test_tsp_examples():
    tri = WeightedGraph.from_matrix([[0, 2, 3], [2, 0, 4], [3, 4, 0]])
    assert held_karp_tsp(tri)[1] == 9
    assert held_karp_tsp(WeightedGraph.from_matrix([[0]]))[1] == 0
    assert christofides_tsp(WeightedGraph.from_matrix([[0]])) == ([0], 0)
    k5 = WeightedGraph.from_matrix([[0 if i == j else 1 for j in range(5)] for i in range(5)])
    assert christofides_tsp(k5)[1] == 5


def test_held_karp_matches_permutations_on_seven_points():
    rng = random.Random(7)
    for _ in range(5):
        wg = random_metric(rng, 7)
        assert held_karp_tsp(wg)[1] == brute_tsp(wg)


@given(st.integers(0, 10**6), st.integers(1, 5))
def test_blossom_agrees_with_dp(seed, half):
    rng = random.Random(seed)
    n = 2 * half
    w = [[F(0)] * n for _ in range(n)]
    for i, j in combinations(range(n), 2):
        w[i][j] = w[j][i] = F(rng.randrange(0, 30), rng.choice([1, 2, 5]))
    assert matching_blossom(w)[1] == matching_dp(w)[1]


@given(st.integers(0, 10**6), st.integers(1, 10))
def test_christofides_within_three_halves(seed, n):
    wg = random_metric(random.Random(seed), n)
    order, length = christofides_tsp(wg)
    assert sorted(order) == list(range(n))
    assert length == wg.cycle_length(order)
    assert length <= F(3, 2) * held_karp_tsp(wg)[1]


def test_mst_is_lexicographic_on_ties():
    unit = WeightedGraph.from_matrix([[0 if i == j else 1 for j in range(4)] for i in range(4)])
    assert minimum_spanning_tree(unit) == [(0, 1), (0, 2), (0, 3)]


def test_tjoin_fixes_parity():
    edges = [(0, 1), (1, 2), (2, 3)]
    join, size = vertex_tjoin(edges, [0, 3])
    assert size == 3 and sorted(join) == edges


def test_spanning_double_tour_examples():
    assert tour_length(spanning_double_tour(Graph(3, [(0, 1), (1, 2)]))) == 4
    assert tour_length(spanning_double_tour(Graph(4, list(combinations(range(4), 2))))) == 6


@given(connected_graphs(max_n=9))
def test_spanning_double_tour_is_half_tour(g):
    t = spanning_double_tour(g)
    assert tour_length(t) <= 2 * g.n - 2
    assert is_delta_tour(t, F(1, 2))


def test_connect_points_examples():
    path = Graph(5, [(i, i + 1) for i in range(4)])
    assert tour_length(connect_points_tour([Point.vertex(2)], path)) == 0
    assert tour_length(connect_points_tour([Point.vertex(0), Point.vertex(3)], path)) == 6
    assert tour_length(connect_points_tour([Point.vertex(v) for v in range(5)], path)) == 8
