"""Tours for large delta via dominating sets of an auxiliary graph.

The auxiliary graph has one vertex per candidate stop point and one per edge
segment.  Edge segments are the pieces left after cutting every edge at the
points lying at distance exactly delta from some candidate.  A set of
candidate points is the stop set of a delta-tour exactly when it dominates
every segment vertex (the candidates form a clique).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .coverage import is_delta_tour
from .discrete import stop_position_set
from .graph import Graph, Point, make_point, point_distance, shortest_walk
from .kernels import WeightedGraph, minimum_spanning_tree
from .multigraph import euler_tour
from .tours import Tour, tour_length


@dataclass(frozen=True)
class Segment:
    """Piece ``[lo, hi]`` of edge ``edge`` (positions measured from ``edge[0]``)."""

    edge: tuple[int, int]
    lo: Fraction
    hi: Fraction


@dataclass
class GammaGraph:
    graph: Graph
    delta: Fraction
    points: list[Point]
    segments: list[Segment]
    # seg_adj[i] = indices into ``points`` adjacent to segment i
    seg_adj: list[frozenset] = field(default_factory=list)

    @property
    def vertex_count(self) -> int:
        return len(self.points) + len(self.segments)

    def point_index(self) -> dict:
        return {p: i for i, p in enumerate(self.points)}

    def weight(self, a: Point, b: Point | Segment) -> Fraction:
        """Edge weight for the weighted variant: distances on the clique, ``n^3`` to segments."""
        if isinstance(b, Segment):
            return Fraction(self.graph.n ** 3)
        return point_distance(a, b, self.graph)


def _require_above_one(delta: Fraction) -> None:
    if delta <= 1:
        raise ValueError("the segment graph construction needs delta > 1")


def candidate_stop_points(g: Graph, delta) -> list[Point]:
    positions = stop_position_set(delta)
    pts = {Point.vertex(v) for v in range(g.n)}
    for u, v in g.edges:
        for lam in positions:
            pts.add(make_point(g, u, v, lam))
    return sorted(pts)


def _vertex_reach(p: Point, g: Graph) -> list[Fraction]:
    return [min(g.dist[a][x] + da for a, da in p.ends()) for x in range(g.n)]


def exact_distance_points(g: Graph, delta) -> set[Point]:
    """Vertices plus every point at distance exactly ``delta`` from a candidate."""
    delta = Fraction(delta)
    _require_above_one(delta)
    out = {Point.vertex(v) for v in range(g.n)}
    for p in candidate_stop_points(g, delta):
        reach = _vertex_reach(p, g)
        for u, v in g.edges:
            for lam in (delta - reach[u], 1 - (delta - reach[v])):
                if 0 < lam < 1:
                    q = make_point(g, u, v, lam)
                    if point_distance(p, q, g) == delta:
                        out.add(q)
    return out


def build_gamma(g: Graph, delta) -> GammaGraph:
    delta = Fraction(delta)
    _require_above_one(delta)
    pts = candidate_stop_points(g, delta)
    cuts: dict = {e: {Fraction(0), Fraction(1)} for e in g.edges}
    for q in exact_distance_points(g, delta):
        if not q.is_vertex:
            cuts[q.edge].add(q.lam)
    segments = []
    for e in g.edges:
        lams = sorted(cuts[e])
        segments += [Segment(e, a, b) for a, b in zip(lams, lams[1:])]
    reach = [_vertex_reach(p, g) for p in pts]

    def dist_to(i: int, e, lam) -> Fraction:
        p = pts[i]
        if not p.is_vertex and p.edge == e:
            return abs(p.lam - lam)
        return min(reach[i][e[0]] + lam, reach[i][e[1]] + 1 - lam)

    seg_adj = []
    for s in segments:
        seg_adj.append(frozenset(
            i for i in range(len(pts)) if dist_to(i, s.edge, s.lo) < delta or dist_to(i, s.edge, s.hi) < delta
        ))
    return GammaGraph(g, delta, pts, segments, seg_adj)


def dominates(gamma: GammaGraph, stops) -> bool:
    idx = gamma.point_index()
    chosen = set()
    for p in stops:
        if p not in idx:
            raise ValueError(f"{p} is not a candidate point")
        chosen.add(idx[p])
    if not chosen:
        return False
    return all(adj & chosen for adj in gamma.seg_adj)


def domination_equivalence_check(t: Tour, gamma: GammaGraph, delta) -> bool:
    """Whether the stop set of ``t`` dominates the segment graph."""
    _require_above_one(Fraction(delta))
    return dominates(gamma, t.stop_set())


def greedy_dominating_set(gamma: GammaGraph) -> list[Point]:
    """Greedy by new coverage over all vertices, then swap segment picks for candidate points."""
    np_ = len(gamma.points)
    ns = len(gamma.segments)
    # vertex ids: points 0..np_-1, segments np_..np_+ns-1
    closed: list[set] = []
    for i in range(np_):
        closed.append(set(range(np_)))
    for j, adj in enumerate(gamma.seg_adj):
        for i in adj:
            closed[i].add(np_ + j)
    for j, adj in enumerate(gamma.seg_adj):
        closed.append({np_ + j} | set(adj))
    uncovered = set(range(np_ + ns))
    picks = []
    while uncovered:
        best = max(range(np_ + ns), key=lambda x: (len(closed[x] & uncovered), -x))
        picks.append(best)
        uncovered -= closed[best]
    chosen = set()
    for x in picks:
        if x < np_:
            chosen.add(x)
        else:
            chosen.add(min(gamma.seg_adj[x - np_]))
    out = [gamma.points[i] for i in sorted(chosen)]
    if not dominates(gamma, out):
        raise AssertionError("greedy selection does not dominate")
    return out


def _tree_tour(points: list[Point], tree: list[tuple[int, int]], g: Graph) -> Tour:
    if len(points) == 1:
        return Tour(g, points)
    walk = euler_tour(tree + tree, start=0)
    stops = [points[walk[0]]]
    for a, b in zip(walk, walk[1:]):
        stops.extend(shortest_walk(points[a], points[b], g)[1:])
    return Tour(g, stops)


def connection_tree(points: list[Point], g: Graph, delta) -> list[tuple[int, int]]:
    """Spanning tree of the graph joining points at distance at most ``2 delta``."""
    wg = WeightedGraph.metric_closure(points, g)
    tree = minimum_spanning_tree(wg)
    if any(wg.w[a][b] > 2 * delta for a, b in tree):
        raise AssertionError("points at distance at most 2*delta do not form a connected graph")
    return tree


@dataclass
class LargeDeltaResult:
    tour: Tour
    gamma_vertices: int
    domset_size: int
    tree_weight: Fraction | None = None


def fixed_delta(g: Graph, delta) -> LargeDeltaResult:
    delta = Fraction(delta)
    if delta < Fraction(3, 2):
        raise ValueError("fixed_delta_tour needs delta >= 3/2")
    gamma = build_gamma(g, delta)
    ys = greedy_dominating_set(gamma)
    t = _tree_tour(ys, connection_tree(ys, g, delta), g)
    if tour_length(t) > 4 * delta * len(ys):
        raise AssertionError("connected tour exceeds 4*delta per dominating point")
    if not is_delta_tour(t, delta):
        raise AssertionError(f"dominating set tour is not a delta-tour: {t}")
    return LargeDeltaResult(t, gamma.vertex_count, len(ys))


def fixed_delta_tour(g: Graph, delta) -> Tour:
    """Greedy dominating set of the segment graph joined into a tour of length at most ``4 delta |Y|``."""
    return fixed_delta(g, delta).tour


def _distance_aware_domset(gamma: GammaGraph) -> list[int]:
    g = gamma.graph
    todo = set(range(len(gamma.segments)))
    covers = [set() for _ in gamma.points]
    for j, adj in enumerate(gamma.seg_adj):
        for i in adj:
            covers[i].add(j)
    chosen: list[int] = []
    gap = [None] * len(gamma.points)
    while todo:
        def score(i):
            new = len(covers[i] & todo)
            cost = 1 + (gap[i] if gap[i] is not None else 0)
            return (Fraction(new) / cost, -i)

        best = max((i for i in range(len(gamma.points)) if covers[i] & todo), key=score)
        chosen.append(best)
        todo -= covers[best]
        pb = gamma.points[best]
        for i, p in enumerate(gamma.points):
            d = point_distance(p, pb, g)
            if gap[i] is None or d < gap[i]:
                gap[i] = d
    return chosen or [0]


def input_delta(g: Graph, delta) -> LargeDeltaResult:
    delta = Fraction(delta)
    _require_above_one(delta)
    gamma = build_gamma(g, delta)
    pts = [gamma.points[i] for i in sorted(_distance_aware_domset(gamma))]
    wg = WeightedGraph.metric_closure(pts, g)
    tree = minimum_spanning_tree(wg)
    weight = sum((wg.w[a][b] for a, b in tree), Fraction(0))
    t = _tree_tour(pts, tree, g)
    if tour_length(t) > 2 * weight:
        raise AssertionError("tree doubling exceeded twice the tree weight")
    if not is_delta_tour(t, delta):
        raise AssertionError(f"dominating tree tour is not a delta-tour: {t}")
    return LargeDeltaResult(t, gamma.vertex_count, len(pts), weight)


def input_delta_tour(g: Graph, delta) -> Tour:
    """Dominating tree of the weighted segment graph, doubled into a tour of length at most ``2 w(U)``."""
    return input_delta(g, delta).tour


def _extras(r: LargeDeltaResult) -> dict:
    out = {"gamma_vertices": r.gamma_vertices, "domset_size": r.domset_size}
    if r.tree_weight is not None:
        out["tree_weight"] = r.tree_weight
    return out


def fixed_delta_tour_report(g: Graph, delta) -> tuple[Tour, dict]:
    r = fixed_delta(g, delta)
    return r.tour, _extras(r)


def input_delta_tour_report(g: Graph, delta) -> tuple[Tour, dict]:
    r = input_delta(g, delta)
    return r.tour, _extras(r)
