"""Closed tours on the continuous graph and their normalization to nice tours."""

from __future__ import annotations

import json
from collections import Counter
from fractions import Fraction
from typing import Iterable, Sequence

from .graph import (
    Graph,
    ParseError,
    Point,
    canonicalize_point,
    common_edge,
    make_point,
    point_distance,
    to_fraction,
)
from .multigraph import euler_tour


class TourError(ValueError):
    pass


class NicenessUndefined(TourError):
    """Niceness is only defined for tours with at least three stops."""


class Tour:
    """Stops ``p_0 .. p_z`` with ``p_0 == p_z``, or a single stop.

    Consecutive stops are distinct and share an edge.
    """

    __slots__ = ("graph", "stops")

    def __init__(self, g: Graph, stops: Iterable[Point]):
        stops = tuple(canonicalize_point(p, g) for p in stops)
        if not stops:
            raise TourError("a tour needs at least one stop")
        if len(stops) > 1:
            if stops[0] != stops[-1]:
                raise TourError("tour is not closed")
            for a, b in zip(stops, stops[1:]):
                if a == b:
                    raise TourError(f"repeated consecutive stop {a}")
                if common_edge(a, b, g) is None:
                    raise TourError(f"stops {a} and {b} do not share an edge")
        self.graph = g
        self.stops = stops

    @classmethod
    def from_cycle(cls, g: Graph, cycle: Sequence[Point]) -> "Tour":
        cycle = list(cycle)
        if len(cycle) <= 1:
            return cls(g, cycle)
        return cls(g, cycle + [cycle[0]])

    @classmethod
    def from_vertices(cls, g: Graph, walk: Sequence[int]) -> "Tour":
        return cls(g, [Point.vertex(x) for x in walk])

    @property
    def cycle(self) -> tuple[Point, ...]:
        return self.stops if len(self.stops) == 1 else self.stops[:-1]

    @property
    def z(self) -> int:
        return len(self.stops) - 1

    def segments(self):
        """Yield ``(a, b, lo, hi)``: the tour passes positions ``lo..hi`` of edge ``a-b``."""
        g = self.graph
        for p, q in zip(self.stops, self.stops[1:]):
            a, b = common_edge(p, q, g)
            x, y = p.position_on(a, b), q.position_on(a, b)
            yield (a, b, min(x, y), max(x, y))

    def stop_set(self) -> frozenset[Point]:
        return frozenset(self.stops)

    def vertex_stops(self) -> frozenset[int]:
        return frozenset(p.u for p in self.stops if p.is_vertex)

    def __eq__(self, other) -> bool:
        return isinstance(other, Tour) and self.stops == other.stops and self.graph == other.graph

    def __hash__(self) -> int:
        return hash(self.stops)

    def __len__(self) -> int:
        return len(self.stops)

    def __repr__(self) -> str:
        return "Tour(" + ", ".join(str(p) for p in self.stops) + ")"


def tour_length(t: Tour) -> Fraction:
    return sum((hi - lo for _, _, lo, hi in t.segments()), Fraction(0))


def discrete_length(t: Tour) -> int:
    return t.z


def passes(t: Tour, p: Point) -> bool:
    if len(t.stops) == 1:
        return t.stops[0] == p
    for a, b, lo, hi in t.segments():
        if p.is_vertex:
            if p.u not in (a, b):
                continue
        elif p.edge != (a, b):
            continue
        if lo <= p.position_on(a, b) <= hi:
            return True
    return False


def distance_to_tour(p: Point, t: Tour) -> Fraction:
    """Distance from ``p`` to the set of passed points (min over stops if not passed)."""
    if passes(t, p):
        return Fraction(0)
    return min(point_distance(p, q, t.graph) for q in t.stop_set())


def traversal_counts(t: Tour) -> Counter:
    """How often each edge is walked end to end."""
    return Counter(_vertex_pairs(t.cycle))


def _vertex_pairs(cycle: Sequence[Point]) -> Iterable[tuple[int, int]]:
    z = len(cycle)
    if z < 2:
        return
    for i in range(z):
        p, q = cycle[i], cycle[(i + 1) % z]
        if p.is_vertex and q.is_vertex:
            yield (p.u, q.u) if p.u < q.u else (q.u, p.u)


def extension(t: Tour) -> Tour:
    """Widen every peek ``<u, p(u,v,lam), u>`` to the full detour ``<u, v, u>``."""
    cyc = list(t.cycle)
    z = len(cyc)
    out = []
    for i, p in enumerate(cyc):
        if p.is_vertex:
            out.append(p)
            continue
        if z < 2:
            raise TourError("single interior stop has no extension")
        prev, nxt = cyc[i - 1], cyc[(i + 1) % z]
        if not (prev.is_vertex and prev == nxt):
            raise TourError("interior stop is not a peek; normalize with make_nice first")
        out.append(Point.vertex(p.v if prev.u == p.u else p.u))
    return Tour.from_cycle(t.graph, out)


def is_nice(t: Tour) -> bool:
    cyc = t.cycle
    z = len(cyc)
    if z < 3:
        raise NicenessUndefined("niceness needs at least three stops")
    for i in range(z):
        p, q = cyc[i], cyc[(i + 1) % z]
        if not (p.is_vertex or q.is_vertex):
            return False
    interior_edges = []
    for i, p in enumerate(cyc):
        if not p.is_vertex:
            if cyc[i - 1] != cyc[(i + 1) % z]:
                return False
            interior_edges.append(p.edge)
    if len(set(interior_edges)) != len(interior_edges):
        return False
    counts = traversal_counts(t)
    if any(e in counts for e in interior_edges):
        return False
    return all(c <= 2 for c in counts.values())


# -- normalization rules; each takes and returns a cyclic stop list --------


def _drop_peek(cyc: list, k: int) -> list:
    """Remove the interior stop at ``k`` together with the following copy of its base."""
    z = len(cyc)
    gone = {k, (k + 1) % z}
    return [p for i, p in enumerate(cyc) if i not in gone]


def _rule_no_consecutive_interior(cyc: list, g: Graph):
    z = len(cyc)
    pairs = [i for i in range(z) if not cyc[i].is_vertex and not cyc[(i + 1) % z].is_vertex]
    if not pairs:
        return None
    if all(not p.is_vertex for p in cyc):
        a, b = cyc[0].edge
        lo = min(cyc, key=lambda p: p.position_on(a, b))
        hi = max(cyc, key=lambda p: p.position_on(a, b))
        return [lo, hi]
    start = next(i for i in pairs if cyc[i - 1].is_vertex)
    rot = cyc[start:] + cyc[:start]
    k = 0
    while not rot[k + 1].is_vertex:
        k += 1
    run = rot[: k + 1]
    before, after = rot[-1], rot[k + 1]
    if before == after:
        w = before.u
        a, b = run[0].edge
        other = b if w == a else a
        far = max(run, key=lambda p: p.position_on(w, other))
        return [far] + rot[k + 1 :]
    return rot[k + 1 :]


def _rule_no_intermediate(cyc: list, g: Graph):
    z = len(cyc)
    for i, p in enumerate(cyc):
        if not p.is_vertex and cyc[i - 1] != cyc[(i + 1) % z]:
            return cyc[:i] + cyc[i + 1 :]
    return None


def _rule_one_stop_per_edge(cyc: list, g: Graph):
    first: dict = {}
    for j, p in enumerate(cyc):
        if p.is_vertex:
            continue
        if p.edge not in first:
            first[p.edge] = j
            continue
        i = first[p.edge]
        bi, bj = cyc[i - 1].u, cyc[j - 1].u
        if bi == bj:
            a, b = p.edge
            other = b if bi == a else a
            di, dj = cyc[i].position_on(bi, other), cyc[j].position_on(bi, other)
            return _drop_peek(cyc, j if di >= dj else i)
        u, v = bi, bj
        lam1 = cyc[i].position_on(u, v)
        lam2 = cyc[j].position_on(u, v)
        out = list(cyc)
        if lam1 > lam2:
            out[i] = Point.vertex(v)
        else:
            out[i] = make_point(g, u, v, 1 - (lam2 - lam1))
        return _drop_peek(out, j)
    return None


def _rule_no_peek_on_traversed(cyc: list, g: Graph):
    traversed = set(_vertex_pairs(cyc))
    for i, p in enumerate(cyc):
        if not p.is_vertex and p.edge in traversed:
            return _drop_peek(cyc, i)
    return None


def _rule_traverse_at_most_twice(cyc: list, g: Graph):
    counts = Counter(_vertex_pairs(cyc))
    heavy = [e for e, c in counts.items() if c >= 3]
    if not heavy:
        return None
    order = {e: i for i, e in reversed(list(enumerate(_vertex_pairs(cyc))))}
    target = min(heavy, key=order.get)
    z = len(cyc)
    links = []
    removed = 0
    for i in range(z):
        p, q = cyc[i], cyc[(i + 1) % z]
        key = tuple(sorted((p.u, q.u))) if p.is_vertex and q.is_vertex else None
        if key == target and removed < 2:
            removed += 1
            continue
        links.append((p, q))
    walk = euler_tour(links, start=cyc[0] if any(cyc[0] in l for l in links) else Point.vertex(target[0]))
    return walk[:-1]


_RULES = (
    _rule_no_consecutive_interior,
    _rule_no_intermediate,
    _rule_one_stop_per_edge,
    _rule_no_peek_on_traversed,
    _rule_traverse_at_most_twice,
)


def make_nice(t: Tour) -> Tour:
    """Rewrite ``t`` into a nice tour (or one with at most two stops).

    Length never grows, every rule removes stops, and any radius ``delta`` for
    which ``t`` covers the graph is still covered afterwards.
    """
    cyc = list(t.cycle)
    while len(cyc) >= 3:
        for rule in _RULES:
            nxt = rule(cyc, t.graph)
            if nxt is not None:
                cyc = nxt
                break
        else:
            break
    return Tour.from_cycle(t.graph, cyc)


def insert_peek(t: Tour, base: int, target: Point) -> Tour:
    """Insert ``<base, target, base>`` at the first visit of vertex ``base``."""
    cyc = list(t.cycle)
    vb = Point.vertex(base)
    idx = cyc.index(vb)
    if t.z == 0:
        return Tour(t.graph, [vb, target, vb])
    return Tour.from_cycle(t.graph, cyc[: idx + 1] + [target, vb] + cyc[idx + 1 :])


# -- serialization ---------------------------------------------------------


def tour_to_records(t: Tour) -> list[dict]:
    """JSON-ready stops with 1-based vertex ids, matching the graph file format."""
    out = []
    for p in t.stops:
        if p.is_vertex:
            out.append({"vertex": p.u + 1})
        else:
            out.append({"edge": [p.u + 1, p.v + 1], "lambda": str(p.lam)})
    return out


def tour_from_records(records, g: Graph) -> Tour:
    if not isinstance(records, list) or not records:
        raise ParseError("tour must be a non-empty JSON array")
    stops = []
    try:
        for rec in records:
            if "vertex" in rec:
                stops.append(Point.vertex(int(rec["vertex"]) - 1))
            else:
                u, v = rec["edge"]
                stops.append(make_point(g, int(u) - 1, int(v) - 1, to_fraction(rec["lambda"])))
        return Tour(g, stops)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed tour: {exc}") from exc


def read_tour(path, g: Graph) -> Tour:
    with open(path) as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"tour file is not JSON: {exc}") from exc
    return tour_from_records(data, g)
