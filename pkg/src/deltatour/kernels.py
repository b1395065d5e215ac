"""Combinatorial building blocks: matching, T-joins, TSP and tree doubling."""

from __future__ import annotations

import math
from fractions import Fraction
from functools import reduce
from itertools import combinations
from typing import Callable, Hashable, Sequence

import networkx as nx

from .graph import Graph, Point, point_distance, shortest_walk
from .multigraph import EulerError, euler_tour
from .tours import Tour

__all__ = [
    "EulerError",
    "WeightedGraph",
    "chinese_postman_tour",
    "christofides_tsp",
    "connect_points_tour",
    "euler_tour",
    "held_karp_tsp",
    "matching_blossom",
    "matching_dp",
    "min_weight_perfect_matching",
    "minimum_spanning_tree",
    "spanning_double_tour",
    "tour_through_points",
    "vertex_tjoin",
]

DP_LIMIT = 12


class WeightedGraph:
    """Complete weighted graph on ``len(labels)`` vertices addressed by index.

    ``labels`` may be anything hashable (vertex ids, Points).  Weights are
    exact and symmetric.
    """

    def __init__(self, labels: Sequence[Hashable], weight: Callable[[int, int], Fraction]):
        self.labels = list(labels)
        n = len(self.labels)
        self.w = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i + 1, n):
                x = Fraction(weight(i, j))
                if x < 0:
                    raise ValueError("weights must be non-negative")
                self.w[i][j] = self.w[j][i] = x

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence], labels=None) -> "WeightedGraph":
        n = len(matrix)
        return cls(labels if labels is not None else list(range(n)), lambda i, j: Fraction(matrix[i][j]))

    @classmethod
    def metric_closure(cls, points: Sequence[Point], g: Graph) -> "WeightedGraph":
        pts = list(points)
        return cls(pts, lambda i, j: point_distance(pts[i], pts[j], g))

    @property
    def n(self) -> int:
        return len(self.labels)

    def cycle_length(self, order: Sequence[int]) -> Fraction:
        if len(order) < 2:
            return Fraction(0)
        return sum((self.w[a][b] for a, b in zip(order, list(order[1:]) + [order[0]])), Fraction(0))


# -- matching -------------------------------------------------------------


def matching_dp(w: Sequence[Sequence[Fraction]]) -> tuple[list[tuple[int, int]], Fraction]:
    """Exact minimum-weight perfect matching by dynamic programming over subsets."""
    n = len(w)
    if n % 2:
        raise ValueError("perfect matching needs an even number of vertices")
    full = (1 << n) - 1
    best: dict[int, tuple[Fraction, int]] = {0: (Fraction(0), -1)}
    # process masks in order of popcount via recursion with memo
    order = sorted(range(full + 1), key=lambda m: bin(m).count("1"))
    for mask in order:
        if mask == 0 or bin(mask).count("1") % 2:
            continue
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        cand = None
        j = rest
        while j:
            low = j & -j
            k = low.bit_length() - 1
            j ^= low
            sub = rest & ~(1 << k)
            if sub in best:
                val = best[sub][0] + w[i][k]
                if cand is None or val < cand[0]:
                    cand = (val, k)
        if cand is not None:
            best[mask] = cand
    pairs = []
    mask = full
    while mask:
        i = (mask & -mask).bit_length() - 1
        k = best[mask][1]
        pairs.append((i, k))
        mask &= ~((1 << i) | (1 << k))
    return pairs, best[full][0]


def matching_blossom(w: Sequence[Sequence[Fraction]]) -> tuple[list[tuple[int, int]], Fraction]:
    """Exact minimum-weight perfect matching via networkx's blossom implementation.

    Weights are scaled to integers so the max-weight solver runs without
    floating point error.
    """
    n = len(w)
    if n % 2:
        raise ValueError("perfect matching needs an even number of vertices")
    if n == 0:
        return [], Fraction(0)
    scale = reduce(math.lcm, (w[i][j].denominator for i in range(n) for j in range(n)), 1)
    ints = [[int(w[i][j] * scale) for j in range(n)] for i in range(n)]
    top = max(max(row) for row in ints) + 1
    h = nx.Graph()
    for i, j in combinations(range(n), 2):
        h.add_edge(i, j, weight=top - ints[i][j])
    mate = nx.max_weight_matching(h, maxcardinality=True)
    pairs = sorted(tuple(sorted(p)) for p in mate)
    if len(pairs) * 2 != n:
        raise AssertionError("blossom returned an imperfect matching")
    return pairs, sum((w[i][j] for i, j in pairs), Fraction(0))


def min_weight_perfect_matching(wg: WeightedGraph | Sequence[Sequence]) -> tuple[list[tuple[int, int]], Fraction]:
    w = wg.w if isinstance(wg, WeightedGraph) else [[Fraction(x) for x in row] for row in wg]
    if len(w) % 2:
        raise ValueError("perfect matching needs an even number of vertices")
    if len(w) < DP_LIMIT:
        return matching_dp(w)
    return matching_blossom(w)


# -- T-joins and postman tours ---------------------------------------------


def _bfs_path(adj: dict, a, b) -> list:
    prev = {a: None}
    frontier = [a]
    while frontier and b not in prev:
        nxt = []
        for x in frontier:
            for y in adj[x]:
                if y not in prev:
                    prev[y] = x
                    nxt.append(y)
        frontier = nxt
    path = [b]
    while path[-1] != a:
        path.append(prev[path[-1]])
    return path[::-1]


def vertex_tjoin(edges: Sequence[tuple[int, int]], odd: Sequence[int]) -> tuple[list[tuple[int, int]], int]:
    """Minimum T-join inside the (connected) graph spanned by ``edges``.

    Returns the join as a list of edges (each used once) and its size.
    """
    odd = sorted(odd)
    if not odd:
        return [], 0
    adj: dict = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    for x in adj:
        adj[x].sort()
    paths = {}
    w = [[Fraction(0)] * len(odd) for _ in odd]
    for i, j in combinations(range(len(odd)), 2):
        p = _bfs_path(adj, odd[i], odd[j])
        paths[i, j] = p
        w[i][j] = w[j][i] = Fraction(len(p) - 1)
    pairs, _ = min_weight_perfect_matching(w)
    join: set = set()
    for i, j in pairs:
        p = paths[min(i, j), max(i, j)]
        for a, b in zip(p, p[1:]):
            join ^= {(a, b) if a < b else (b, a)}
    return sorted(join), len(join)


def chinese_postman_tour(g: Graph) -> Tour:
    """Shortest closed walk traversing every edge at least once."""
    if g.m == 0:
        return Tour(g, [Point.vertex(0)])
    odd = [v for v in range(g.n) if g.degree(v) % 2]
    join, _ = vertex_tjoin(g.edges, odd)
    walk = euler_tour(list(g.edges) + join, start=0)
    return Tour.from_vertices(g, walk)


# -- TSP ------------------------------------------------------------------


def held_karp_tsp(wg: WeightedGraph) -> tuple[list[int], Fraction]:
    """Exact TSP by subset dynamic programming; returns a cyclic order and its length."""
    n = wg.n
    if n > 16:
        raise ValueError("held_karp_tsp is limited to 16 vertices")
    if n <= 1:
        return list(range(n)), Fraction(0)
    if n == 2:
        return [0, 1], 2 * wg.w[0][1]
    w = wg.w
    m = n - 1
    dp: dict[tuple[int, int], tuple[Fraction, int]] = {}
    for k in range(m):
        dp[1 << k, k] = (w[0][k + 1], -1)
    for mask in range(1, 1 << m):
        for k in range(m):
            if not mask & (1 << k) or (mask, k) not in dp:
                continue
            base = dp[mask, k][0]
            for j in range(m):
                if mask & (1 << j):
                    continue
                key = (mask | (1 << j), j)
                val = base + w[k + 1][j + 1]
                if key not in dp or val < dp[key][0]:
                    dp[key] = (val, k)
    full = (1 << m) - 1
    best_k = min(range(m), key=lambda k: (dp[full, k][0] + w[k + 1][0], k))
    length = dp[full, best_k][0] + w[best_k + 1][0]
    order = []
    mask, k = full, best_k
    while k != -1:
        order.append(k + 1)
        prev = dp[mask, k][1]
        mask &= ~(1 << k)
        k = prev
    return [0] + order[::-1], length


def minimum_spanning_tree(wg: WeightedGraph) -> list[tuple[int, int]]:
    """Kruskal with ties broken by lexicographic edge order."""
    n = wg.n
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    out = []
    for wt, i, j in sorted((wg.w[i][j], i, j) for i, j in combinations(range(n), 2)):
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[ri] = rj
            out.append((i, j))
    return out


def _shortcut(walk: Sequence[int]) -> list[int]:
    seen = set()
    order = []
    for x in walk:
        if x not in seen:
            seen.add(x)
            order.append(x)
    return order


def christofides_tsp(wg: WeightedGraph) -> tuple[list[int], Fraction]:
    """Christofides' 3/2-approximation for metric TSP; returns a cyclic order and its length."""
    n = wg.n
    if n <= 1:
        return list(range(n)), Fraction(0)
    tree = minimum_spanning_tree(wg)
    deg = [0] * n
    for i, j in tree:
        deg[i] += 1
        deg[j] += 1
    odd = [v for v in range(n) if deg[v] % 2]
    sub = [[wg.w[a][b] for b in odd] for a in odd]
    pairs, _ = min_weight_perfect_matching(sub)
    multi = list(tree) + [(odd[a], odd[b]) for a, b in pairs]
    order = _shortcut(euler_tour(multi, start=0))
    return order, wg.cycle_length(order)


# -- tours built from point sets -------------------------------------------


def tour_through_points(order: Sequence[Point], g: Graph) -> Tour:
    """Closed tour visiting ``order`` cyclically along shortest walks."""
    order = list(order)
    if len(order) == 1:
        return Tour(g, order)
    stops: list[Point] = [order[0]]
    for p, q in zip(order, order[1:] + order[:1]):
        if p == q:
            continue
        stops.extend(shortest_walk(p, q, g)[1:])
    if len(stops) == 1:
        return Tour(g, stops)
    return Tour(g, stops)


def spanning_double_tour(g: Graph) -> Tour:
    """Walk around a BFS spanning tree; stops at every vertex, length 2n - 2."""
    if g.n == 1:
        return Tour(g, [Point.vertex(0)])
    seen = {0}
    tree = []
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for y in g.adj[x]:
                if y not in seen:
                    seen.add(y)
                    tree.append((x, y))
                    nxt.append(y)
        frontier = nxt
    return Tour.from_vertices(g, euler_tour(tree + tree, start=0))


def connect_points_tour(points, g: Graph) -> Tour:
    """Tour stopping at all ``points``: doubled metric-closure MST expanded into walks."""
    pts = sorted(set(points))
    if not pts:
        raise ValueError("need at least one point")
    if len(pts) == 1:
        return Tour(g, pts)
    wg = WeightedGraph.metric_closure(pts, g)
    tree = minimum_spanning_tree(wg)
    walk = euler_tour(tree + tree, start=0)
    stops: list[Point] = [pts[walk[0]]]
    for a, b in zip(walk, walk[1:]):
        stops.extend(shortest_walk(pts[a], pts[b], g)[1:])
    return Tour(g, stops)
