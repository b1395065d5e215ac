"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

import heapq
import random
from fractions import Fraction

from hypothesis import strategies as st

from deltatour.graph import Graph, Point, make_point, shortest_walk
from deltatour.large_delta import candidate_stop_points
from deltatour.tours import Tour

GRID = 12


def random_connected_graph(rng: random.Random, n: int, extra: float = 0.3) -> Graph:
    edges = {(rng.randrange(i), i) for i in range(1, n)}
    for a in range(n):
        for b in range(a + 1, n):
            if rng.random() < extra:
                edges.add((a, b))
    return Graph(n, sorted(edges))


@st.composite
def connected_graphs(draw, min_n: int = 1, max_n: int = 8) -> Graph:
    n = draw(st.integers(min_n, max_n))
    parents = [draw(st.integers(0, i - 1)) for i in range(1, n)]
    edges = {(p, i) for i, p in enumerate(parents, start=1)}
    pairs = [(a, b) for a in range(n) for b in range(a + 1, n) if (a, b) not in edges]
    if pairs:
        edges |= set(draw(st.lists(st.sampled_from(pairs), max_size=len(pairs), unique=True)))
    return Graph(n, sorted(edges))


def grid_point(rng: random.Random, g: Graph, denominators=(GRID,)) -> Point:
    """Random point whose position is a multiple of ``1/GRID``."""
    a, b = rng.choice(g.edges)
    k = rng.choice(denominators)
    return make_point(g, a, b, Fraction(rng.randrange(0, k + 1), k))


def random_tour(rng: random.Random, g: Graph, steps: int = 8) -> Tour:
    """Random closed tour with stops on the 1/GRID grid; deliberately often not nice."""
    start = Point.vertex(rng.randrange(g.n))
    if g.m == 0 or steps == 0 or rng.random() < 0.05:
        return Tour(g, [start])
    seq = [start]
    for _ in range(steps):
        cur = seq[-1]
        if cur.is_vertex:
            y = rng.choice(g.adj[cur.u])
            if rng.random() < 0.5:
                nxt = Point.vertex(y)
            else:
                nxt = make_point(g, cur.u, y, Fraction(rng.randrange(1, GRID), GRID))
        else:
            choice = rng.random()
            if choice < 0.4:
                nxt = make_point(g, cur.u, cur.v, Fraction(rng.randrange(1, GRID), GRID))
            else:
                nxt = Point.vertex(cur.u if choice < 0.7 else cur.v)
        if nxt != cur:
            seq.append(nxt)
    if seq[-1] != start:
        seq.extend(shortest_walk(seq[-1], start, g)[1:])
    if len(seq) == 2:
        seq.append(start)
    return Tour(g, seq)


# -- subdivision oracle --------------------------------------------------------


class Subdivision:
    """Each edge cut into ``k`` pieces of length ``1/k``; exact Dijkstra on the result.

    Any point at a multiple of ``1/k`` is a node, so distances between such
    points are exact.
    """

    def __init__(self, g: Graph, k: int):
        self.g, self.k = g, k
        self.adj: dict = {}
        step = Fraction(1, k)
        for a, b in g.edges:
            nodes = [self.node(a, b, i) for i in range(k + 1)]
            for x, y in zip(nodes, nodes[1:]):
                self.adj.setdefault(x, []).append((y, step))
                self.adj.setdefault(y, []).append((x, step))

    def node(self, a: int, b: int, i: int):
        if i == 0:
            return ("v", a)
        if i == self.k:
            return ("v", b)
        return ("e", a, b, i) if a < b else ("e", b, a, self.k - i)

    def node_of(self, p: Point):
        if p.is_vertex:
            return ("v", p.u)
        i = p.lam * self.k
        if i.denominator != 1:
            raise ValueError(f"{p} is not on the 1/{self.k} grid")
        return self.node(p.u, p.v, int(i))

    def distances(self, sources) -> dict:
        dist = {s: Fraction(0) for s in sources}
        heap = [(Fraction(0), i, s) for i, s in enumerate(sources)]
        heapq.heapify(heap)
        tie = len(heap)
        while heap:
            d, _, x = heapq.heappop(heap)
            if d > dist[x]:
                continue
            for y, w in self.adj.get(x, []):
                nd = d + w
                if y not in dist or nd < dist[y]:
                    dist[y] = nd
                    tie += 1
                    heapq.heappush(heap, (nd, tie, y))
        return dist

    def passed_nodes(self, t: Tour) -> list:
        out = {self.node_of(t.stops[0])}
        for a, b, lo, hi in t.segments():
            i, j = lo * self.k, hi * self.k
            if i.denominator != 1 or j.denominator != 1:
                raise ValueError("tour stops are off the grid")
            for s in range(int(i), int(j) + 1):
                out.add(self.node(a, b, s))
        return sorted(out, key=repr)

    def max_edge_distance(self, t: Tour, edge) -> Fraction:
        dist = self.distances(self.passed_nodes(t))
        a, b = edge
        return max(dist[self.node(a, b, i)] for i in range(self.k + 1))


def oracle_radius(t: Tour) -> Fraction:
    """Coverage radius of a tour with stops on the 1/GRID grid, from a 1/(2 GRID) subdivision."""
    sub = Subdivision(t.graph, 2 * GRID)
    dist = sub.distances(sub.passed_nodes(t))
    return max(dist.values())


def random_candidate_tour(rng: random.Random, g: Graph, delta, k: int) -> Tour:
    """A closed walk through ``k`` random candidate stop points, joined by shortest walks."""
    pts = candidate_stop_points(g, delta)
    chosen = [rng.choice(pts) for _ in range(k)]
    if len(set(chosen)) == 1:
        return Tour(g, [chosen[0]])
    stops = [chosen[0]]
    for a, b in zip(chosen, chosen[1:] + chosen[:1]):
        if a != b:
            stops.extend(shortest_walk(a, b, g)[1:])
    return Tour(g, stops)
