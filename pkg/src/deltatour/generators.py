"""Graph families for tests, benchmarks and the ``gen`` command, plus two hand-built fixtures."""

from __future__ import annotations

import random
from fractions import Fraction
from functools import lru_cache

import networkx as nx

from .graph import Graph, Point, make_point
from .tours import Tour

FAMILIES = ("path", "cycle", "star", "tree", "gnp-connected", "all-connected-n")
ATLAS_MAX = 7


def path_graph(n: int) -> Graph:
    if n < 1:
        raise ValueError("path needs n >= 1")
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ValueError("cycle needs n >= 3")
    return Graph(n, [(i, i + 1) for i in range(n - 1)] + [(0, n - 1)])


def star_graph(n: int) -> Graph:
    """Star with ``n`` vertices in total (centre 0)."""
    if n < 1:
        raise ValueError("star needs n >= 1")
    return Graph(n, [(0, i) for i in range(1, n)])


def random_tree(n: int, seed: int = 0) -> Graph:
    """Each vertex ``i > 0`` attaches to a uniformly random earlier vertex."""
    if n < 1:
        raise ValueError("tree needs n >= 1")
    rng = random.Random(seed)
    return Graph(n, [(rng.randrange(i), i) for i in range(1, n)])


def _connected(n: int, edges) -> bool:
    adj = {v: [] for v in range(n)}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen, stack = {0}, [0]
    while stack:
        for y in adj[stack.pop()]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return len(seen) == n


def gnp_connected(n: int, p, seed: int = 0, max_tries: int = 10_000) -> Graph:
    """Erdős–Rényi sample with exact rational edge probability, resampled until connected."""
    p = Fraction(p)
    if n < 1 or not 0 <= p <= 1:
        raise ValueError("gnp needs n >= 1 and 0 <= p <= 1")
    rng = random.Random(seed)
    for _ in range(max_tries):
        edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.randrange(p.denominator) < p.numerator]
        if _connected(n, edges):
            return Graph(n, edges)
    raise ValueError(f"no connected sample after {max_tries} tries; raise p")


@lru_cache(maxsize=None)
def all_connected_graphs(n: int) -> tuple[Graph, ...]:
    """One representative per isomorphism class of connected graphs on ``n`` vertices."""
    if not 1 <= n <= ATLAS_MAX:
        raise ValueError(f"all-connected-n is available for 1 <= n <= {ATLAS_MAX}")
    out = []
    for h in nx.graph_atlas_g():
        if h.number_of_nodes() == n and nx.is_connected(h):
            out.append(Graph(n, sorted(tuple(sorted(e)) for e in h.edges())))
    return tuple(out)


def all_connected_up_to(n: int) -> list[Graph]:
    return [g for k in range(1, n + 1) for g in all_connected_graphs(k)]


def generate(family: str, n: int, p=None, seed: int = 0) -> list[Graph]:
    if family == "path":
        return [path_graph(n)]
    if family == "cycle":
        return [cycle_graph(n)]
    if family == "star":
        return [star_graph(n)]
    if family == "tree":
        return [random_tree(n, seed)]
    if family == "gnp-connected":
        if p is None:
            raise ValueError("gnp-connected needs p")
        return [gnp_connected(n, p, seed)]
    if family == "all-connected-n":
        return list(all_connected_graphs(n))
    raise ValueError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


# -- fixtures ----------------------------------------------------------------

# vertex ids of the 18-vertex ring fixture
_RING = ["a1", "v1", "x1", "y1", "z1", "a2", "v2", "x2", "y2", "z2", "a3", "v3", "x3", "y3", "z3"]
_HUB = ["c1", "c2", "c3"]
SPOKED_RING_NAMES = _RING + _HUB


def spoked_ring_graph() -> Graph:
    """A 15-cycle through a1..z3, a triangle c1 c2 c3, and spokes a_i c_i."""
    idx = {name: i for i, name in enumerate(SPOKED_RING_NAMES)}
    edges = [(i, (i + 1) % 15) for i in range(15)]
    edges += [(idx["c1"], idx["c2"]), (idx["c2"], idx["c3"]), (idx["c1"], idx["c3"])]
    edges += [(idx[f"a{i}"], idx[f"c{i}"]) for i in (1, 2, 3)]
    return Graph(18, edges)


def spoked_ring_tour(g: Graph | None = None) -> Tour:
    """Around the ring once, peeking from each a_i to the midpoint of a_i c_i: length 18, a 1-tour."""
    g = g or spoked_ring_graph()
    idx = {name: i for i, name in enumerate(SPOKED_RING_NAMES)}
    stops: list[Point] = []
    for i in range(15):
        stops.append(Point.vertex(i))
        name = SPOKED_RING_NAMES[i]
        if name.startswith("a"):
            stops.append(make_point(g, i, idx["c" + name[1]], Fraction(1, 2)))
            stops.append(Point.vertex(i))
    stops.append(Point.vertex(0))
    return Tour(g, stops)


TAILED_TRIANGLE_NAMES = ["u", "v", "x", "y", "z"]


def tailed_triangle_graph() -> Graph:
    """Path u v x glued to the triangle x y z."""
    return Graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 4)])


def tailed_triangle_tour(g: Graph | None = None) -> Tour:
    """Back and forth between the points at 1/6 and 1/3 from x on edge v x; shortest at delta 5/3."""
    g = g or tailed_triangle_graph()
    p = make_point(g, 2, 1, Fraction(1, 6))
    q = make_point(g, 2, 1, Fraction(1, 3))
    return Tour(g, [p, q, p])
