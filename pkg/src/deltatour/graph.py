"""Graphs, points on edges and the continuous shortest-path metric.

Every edge has unit length and every point of an edge is a valid location.
A point is written ``Point(u, v, lam)`` with ``u < v`` and ``0 < lam < 1``;
vertices use the form ``Point(x, x, 0)``.  All quantities are ``Fraction``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable


class GraphError(ValueError):
    """Raised for malformed or disconnected graphs."""


class ParseError(ValueError):
    """Raised when an input file or value cannot be parsed."""


def to_fraction(value) -> Fraction:
    """Parse ``p/q``, a terminating decimal, an int or a Fraction exactly."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise ParseError("floats are not accepted, pass a string like '0.25' or '1/4'")
    try:
        return Fraction(str(value).strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"cannot parse {value!r} as an exact fraction") from exc


class Graph:
    """Simple connected undirected graph on vertices ``0..n-1``.

    Hop distances are computed once with a BFS per vertex and stored as ints
    in ``self.dist``.
    """

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 1:
            raise GraphError("a graph needs at least one vertex")
        seen: set[tuple[int, int]] = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) outside vertex range 0..{n - 1}")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise GraphError(f"parallel edge {e}")
            seen.add(e)
        self.n = n
        self.edges: tuple[tuple[int, int], ...] = tuple(sorted(seen))
        self.edge_index = {e: i for i, e in enumerate(self.edges)}
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(a)) for a in adj)
        self.dist = self._all_pairs()

    def _all_pairs(self) -> list[list[int]]:
        rows = []
        for s in range(self.n):
            row = [-1] * self.n
            row[s] = 0
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self.adj[x]:
                    if row[y] < 0:
                        row[y] = row[x] + 1
                        queue.append(y)
            if min(row) < 0:
                raise GraphError("graph is not connected")
            rows.append(row)
        return rows

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self.edge_index

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def leaves(self) -> list[int]:
        return [v for v in range(self.n) if len(self.adj[v]) == 1]

    def relabel(self, perm: list[int]) -> "Graph":
        """Copy of the graph with vertex ``v`` renamed to ``perm[v]``."""
        return Graph(self.n, [(perm[u], perm[v]) for u, v in self.edges])

    def __eq__(self, other) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.n, self.edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={list(self.edges)})"


@dataclass(frozen=True, order=True)
class Point:
    u: int
    v: int
    lam: Fraction

    @classmethod
    def vertex(cls, x: int) -> "Point":
        return cls(x, x, Fraction(0))

    @property
    def is_vertex(self) -> bool:
        return self.u == self.v

    @property
    def edge(self) -> tuple[int, int] | None:
        return None if self.u == self.v else (self.u, self.v)

    def ends(self) -> tuple[tuple[int, Fraction], ...]:
        """Endpoints of the host edge with the distance to each."""
        if self.u == self.v:
            return ((self.u, Fraction(0)),)
        return ((self.u, self.lam), (self.v, 1 - self.lam))

    def position_on(self, a: int, b: int) -> Fraction:
        """Coordinate of this point along edge ``a -> b`` (0 at ``a``)."""
        if self.u == self.v:
            if self.u == a:
                return Fraction(0)
            if self.u == b:
                return Fraction(1)
        elif (self.u, self.v) == (a, b):
            return self.lam
        elif (self.u, self.v) == (b, a):
            return 1 - self.lam
        raise GraphError(f"{self} is not on edge ({a}, {b})")

    def __str__(self) -> str:
        if self.u == self.v:
            return f"{self.u}"
        return f"p({self.u},{self.v},{self.lam})"


def canonicalize_point(p: Point, g: Graph) -> Point:
    """Bring ``p`` to canonical form on ``g``; endpoints collapse to vertices."""
    lam = to_fraction(p.lam)
    if p.u == p.v:
        if not 0 <= p.u < g.n:
            raise GraphError(f"vertex {p.u} not in graph")
        if lam != 0:
            raise GraphError("vertex points carry lambda 0")
        return Point.vertex(p.u)
    if not g.has_edge(p.u, p.v):
        raise GraphError(f"({p.u}, {p.v}) is not an edge")
    if lam < 0 or lam > 1:
        raise GraphError(f"lambda {lam} outside [0, 1]")
    if lam == 0:
        return Point.vertex(p.u)
    if lam == 1:
        return Point.vertex(p.v)
    if p.u > p.v:
        return Point(p.v, p.u, 1 - lam)
    return Point(p.u, p.v, lam)


def make_point(g: Graph, u: int, v: int, lam) -> Point:
    """The point at distance ``lam`` from ``u`` along edge ``uv``."""
    return canonicalize_point(Point(u, v, to_fraction(lam)), g)


def vertex_distances(g: Graph) -> dict[tuple[int, int], Fraction]:
    return {(a, b): Fraction(g.dist[a][b]) for a in range(g.n) for b in range(g.n)}


def same_edge(p: Point, q: Point) -> tuple[int, int] | None:
    """The edge containing both points, if any (vertices count as on their edges)."""
    if p.is_vertex and q.is_vertex:
        return None
    if p.is_vertex:
        p, q = q, p
    if q.is_vertex:
        return p.edge if q.u in (p.u, p.v) else None
    return p.edge if p.edge == q.edge else None


def common_edge(p: Point, q: Point, g: Graph) -> tuple[int, int] | None:
    """Edge on which both points lie, or None; two vertices need adjacency."""
    if p.is_vertex and q.is_vertex:
        a, b = sorted((p.u, q.u))
        return (a, b) if a != b and g.has_edge(a, b) else None
    return same_edge(p, q)


def point_distance(p: Point, q: Point, g: Graph) -> Fraction:
    best = None
    for a, da in p.ends():
        row = g.dist[a]
        for b, db in q.ends():
            d = da + row[b] + db
            if best is None or d < best:
                best = d
    e = same_edge(p, q)
    if e is not None:
        direct = abs(p.position_on(*e) - q.position_on(*e))
        if direct < best:
            best = direct
    return Fraction(best)


def vertex_to_point(x: int, p: Point, g: Graph) -> Fraction:
    row = g.dist[x]
    return min(row[a] + da for a, da in p.ends())


def shortest_walk(p: Point, q: Point, g: Graph) -> list[Point]:
    """Stops of a shortest walk from ``p`` to ``q``, both ends included.

    Consecutive stops share an edge; the walk length equals the distance.
    """
    if p == q:
        return [p]
    target = point_distance(p, q, g)
    e = same_edge(p, q)
    if e is not None and abs(p.position_on(*e) - q.position_on(*e)) == target:
        return [p, q]
    for a, da in p.ends():
        for b, db in q.ends():
            if da + g.dist[a][b] + db == target:
                path = _vertex_path(g, a, b)
                walk = [p] + [Point.vertex(x) for x in path] + [q]
                out: list[Point] = []
                for s in walk:
                    if not out or out[-1] != s:
                        out.append(s)
                return out
    raise AssertionError("no routing attains the distance")


def _vertex_path(g: Graph, a: int, b: int) -> list[int]:
    path = [a]
    while path[-1] != b:
        x = path[-1]
        for y in g.adj[x]:
            if g.dist[y][b] == g.dist[x][b] - 1:
                path.append(y)
                break
    return path


def read_graph(path) -> Graph:
    with open(path) as fh:
        return parse_graph(fh.read())


def parse_graph(text: str) -> Graph:
    """Parse the ``n m`` header plus ``m`` lines of 1-based ``u v`` pairs."""
    rows = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            rows.append(line.split())
    if not rows:
        raise ParseError("empty graph file")
    try:
        n, m = (int(x) for x in rows[0])
        edges = [(int(a) - 1, int(b) - 1) for a, b in rows[1:]]
    except ValueError as exc:
        raise ParseError(f"malformed graph file: {exc}") from exc
    if len(edges) != m:
        raise ParseError(f"header announces {m} edges but {len(edges)} were given")
    try:
        return Graph(n, edges)
    except GraphError as exc:
        raise ParseError(str(exc)) from exc


def format_graph(g: Graph, comment: str | None = None) -> str:
    lines = [f"# {comment}"] if comment else []
    lines.append(f"{g.n} {g.m}")
    lines += [f"{u + 1} {v + 1}" for u, v in g.edges]
    return "\n".join(lines) + "\n"
