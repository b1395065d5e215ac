"""Finite candidate sets for stopping points and exact shortest delta-tours.

Some shortest delta-tour always stops only at edge positions drawn from a small
set determined by ``delta``, and is either nice or has at most two stops.  The
exact solver enumerates that normal form structurally instead of walking over
stop sequences:

* a set ``V_T`` of vertices the tour stops at;
* a connected set of traversed edges inside ``V_T`` (each walked once or twice,
  the doubled ones forming a minimum T-join);
* peeks ``<u, p(u, v, lam), u>`` from stopped vertices into edges that are not
  traversed.

For each structure the per-edge coverage rules for nice tours give exact
feasibility conditions, so the search is a clean optimisation over integers
(all positions scaled by a common denominator).  A naive depth-first search
over stop sequences, :func:`brute_force_shortest_tour`, is kept as an
independent oracle for tiny graphs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import combinations

from .coverage import is_delta_tour
from .graph import Graph, Point, common_edge, make_point, point_distance
from .kernels import vertex_tjoin
from .multigraph import euler_tour
from .tours import Tour, tour_length


def _frac(x) -> Fraction:
    return x - math.floor(x)


def stop_position_set(delta) -> set[Fraction]:
    """Edge positions that suffice for some shortest delta-tour, closed under ``lam -> 1 - lam``."""
    delta = Fraction(delta)
    if delta < 0:
        raise ValueError("delta must be non-negative")
    base = {Fraction(0), _frac(delta), _frac(delta + Fraction(1, 2)), _frac(2 * delta)}
    if delta >= Fraction(1, 2):
        k = math.floor(2 * delta)
        base |= {Fraction(0), Fraction(k + 1 - 2 * delta, 2), k + 1 - 2 * delta, Fraction(k + 2 - 2 * delta, 2)}
    out = set()
    for lam in base:
        for x in (lam, 1 - lam):
            if 0 <= x <= 1:
                out.add(x)
    return out


def base_positions(delta) -> set[Fraction]:
    """The four-element formula set, before complement closure."""
    delta = Fraction(delta)
    return {Fraction(0), _frac(delta), _frac(delta + Fraction(1, 2)), _frac(2 * delta)}


def min_gap(positions) -> Fraction:
    canon = sorted({min(p, 1 - p) for p in positions})
    if len(canon) < 2:
        return Fraction(1)
    return min(b - a for a, b in zip(canon, canon[1:]))


@dataclass(frozen=True)
class CandidateSet:
    positions: frozenset
    points: frozenset
    min_gap: Fraction

    def stop_cap(self, length: Fraction) -> int:
        """Largest number of stops a tour of this length over these points can have."""
        return math.ceil(Fraction(length) / self.min_gap)


def candidate_points(g: Graph, delta) -> CandidateSet:
    positions = stop_position_set(delta)
    pts = {Point.vertex(v) for v in range(g.n)}
    for u, v in g.edges:
        for lam in positions:
            pts.add(make_point(g, u, v, lam))
    return CandidateSet(frozenset(positions), frozenset(pts), min_gap(positions))


def stop_count_bound(t: Tour, delta) -> int:
    """``ceil(length / s_delta)``, the stop bound for tours over candidate points."""
    return math.ceil(tour_length(t) / min_gap(stop_position_set(delta)))


# -- exact solver ------------------------------------------------------------


@dataclass
class ExactResult:
    tour: Tour | None
    length: Fraction | None
    stops: int | None
    max_stops: int | None
    cap_binding: bool = False
    structures: int = 0
    notes: list = field(default_factory=list)


@lru_cache(maxsize=64)
def _skeletons(g: Graph, vt: frozenset) -> tuple:
    """All connected traversal patterns spanning ``vt``.

    Each entry is ``(mask, size, join)``: ``mask`` selects inner edges,
    ``size`` is the closed-walk length (edges plus a minimum T-join), ``join``
    the doubled edges.
    """
    inner = [e for e in g.edges if e[0] in vt and e[1] in vt]
    if len(vt) == 1:
        return ((0, 0, ()),)
    out = []
    for mask in range(1, 1 << len(inner)):
        chosen = [inner[i] for i in range(len(inner)) if mask >> i & 1]
        if len(chosen) < len(vt) - 1:
            continue
        if not _spans(vt, chosen):
            continue
        deg: dict = {}
        for a, b in chosen:
            deg[a] = deg.get(a, 0) + 1
            deg[b] = deg.get(b, 0) + 1
        odd = [x for x in sorted(deg) if deg[x] % 2]
        join, extra = vertex_tjoin(chosen, odd)
        out.append((mask, len(chosen) + extra, tuple(join)))
    return tuple(out)


def _spans(vt: frozenset, edges) -> bool:
    start = next(iter(vt))
    seen = {start}
    stack = [start]
    adj: dict = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    while stack:
        x = stack.pop()
        for y in adj.get(x, ()):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen == set(vt)


class _Scaled:
    """Integer view of delta and the candidate depths."""

    def __init__(self, delta: Fraction, positions):
        self.scale = reduce(math.lcm, [delta.denominator] + [p.denominator for p in positions], 1)
        self.delta2 = int(2 * delta * self.scale)
        self.depths = sorted(int(p * self.scale) for p in positions if 0 < p < 1)

    def min_depth(self, need: int) -> int | None:
        """Smallest peek depth reaching ``need`` (0 means no peek)."""
        if need <= 0:
            return 0
        for d in self.depths:
            if d >= need:
                return d
        return None


def _best_short_tour(g: Graph, delta: Fraction, cands: CandidateSet) -> tuple[Tour | None, Fraction | None]:
    """Shortest delta-tour with at most two stops over the candidate points."""
    # a tour inside edge ab is at least min(d(x,a), d(x,b)) away from each vertex x
    near_edges = {
        (a, b) for a, b in g.edges if all(min(g.dist[x][a], g.dist[x][b]) <= delta for x in range(g.n))
    }
    if g.n == 1:
        return Tour(g, [Point.vertex(0)]), Fraction(0)
    pts = [p for p in sorted(cands.points) if _on_near_edge(p, near_edges)]
    best, best_len = None, None
    for p in pts:
        t = Tour(g, [p])
        if is_delta_tour(t, delta):
            return t, Fraction(0)
    pairs = []
    for p, q in combinations(pts, 2):
        if common_edge(p, q, g) in near_edges:
            pairs.append((2 * point_distance(p, q, g), p, q))
    for length, p, q in sorted(pairs):
        t = Tour(g, [p, q, p])
        if is_delta_tour(t, delta):
            return t, length
    return best, best_len


def _on_near_edge(p: Point, near_edges) -> bool:
    if p.is_vertex:
        return any(p.u in e for e in near_edges)
    return p.edge in near_edges


def exact_shortest_tour(g: Graph, delta, max_stops: int | None = None) -> ExactResult:
    """A shortest delta-tour, optionally restricted to at most ``max_stops`` stops.

    Returns an :class:`ExactResult` whose ``tour`` is ``None`` when no tour
    exists within the cap.  ``cap_binding`` records that a shorter tour with
    more stops was seen.
    """
    delta = Fraction(delta)
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if max_stops is not None and max_stops < 0:
        raise ValueError("max_stops must be non-negative")
    cap = math.inf if max_stops is None else max_stops
    cands = candidate_points(g, delta)
    res = ExactResult(None, None, None, max_stops)

    short, short_len = _best_short_tour(g, delta, cands)
    best_cost = None
    best_plan = None
    if short is not None and short.z <= cap:
        res.tour, res.length, res.stops = short, short_len, short.z
    sc = _Scaled(delta, cands.positions)
    if short is not None:
        best_cost = int(short_len * sc.scale) if short.z <= cap else None

    for size in range(1, g.n + 1):
        for vt_tuple in combinations(range(g.n), size):
            vt = frozenset(vt_tuple)
            res.structures += 1
            plan = _best_for_stop_set(g, vt, sc, cap, best_cost, res)
            if plan is not None:
                best_cost, best_plan = plan[0], plan
    if best_plan is not None:
        tour = _build_tour(g, best_plan, sc)
        if not is_delta_tour(tour, delta):
            raise AssertionError(f"exact solver built an invalid tour {tour}")
        if res.tour is None or tour_length(tour) < res.length:
            res.tour, res.length, res.stops = tour, tour_length(tour), tour.z
    return res


def _best_for_stop_set(g: Graph, vt: frozenset, sc: _Scaled, cap, incumbent, res: ExactResult):
    """Cheapest normal-form tour stopping exactly at vertex set ``vt``.

    Returns ``(cost, vt, skeleton, inner_peeks, boundary_peeks)`` if it beats
    ``incumbent`` (scaled cost), else ``None``.
    """
    n, D = g.n, sc.scale
    dist = g.dist
    # inner edges not traversed need a peek of depth >= 1 - 2 delta (or none once delta >= 1/2)
    inner_need = sc.min_depth(D - sc.delta2)
    # edges inside V \ vt can only be covered from afar; with delta < 1/2 that is impossible
    outside = [v for v in range(n) if v not in vt]
    out_set = set(outside)
    outer_edges = [(a, b) for a, b in g.edges if a in out_set and b in out_set]
    d_vt = [min(dist[x][v] for v in vt) for x in range(n)]
    best_tip = D - (sc.depths[-1] if sc.depths else 0)
    for a, b in outer_edges:
        # optimistic: every tip peeks as deep as possible
        lo_a = max(0, D * d_vt[a] - D) + (best_tip if d_vt[a] >= 1 else 0)
        lo_b = max(0, D * d_vt[b] - D) + (best_tip if d_vt[b] >= 1 else 0)
        lo_a = min(lo_a, D * d_vt[a])
        lo_b = min(lo_b, D * d_vt[b])
        if lo_a + lo_b + D > sc.delta2:
            return None

    # traversal part
    skel_options = []
    inner = [e for e in g.edges if e[0] in vt and e[1] in vt]
    for mask, size, join in _skeletons(g, vt):
        extra_cost, extra_peeks = 0, 0
        ok = True
        for i, e in enumerate(inner):
            if mask >> i & 1:
                continue
            if inner_need is None:
                ok = False
                break
            if inner_need > 0:
                extra_cost += 2 * inner_need
                extra_peeks += 1
        if not ok:
            continue
        skel_options.append((size * D + extra_cost, size + 2 * extra_peeks, mask, join))
    if not skel_options:
        return None
    skel_options = _pareto(skel_options)
    skel_min_cost = min(o[0] for o in skel_options)
    skel_min_stops = min(o[1] for o in skel_options)

    # peek part: every outside vertex with a stopped neighbour gets a max depth r_b
    frontier = [b for b in outside if any(a in vt for a in g.adj[b])]
    options = []
    for b in frontier:
        nb = [a for a in g.adj[b] if a in vt]
        opts = []
        for r in [0] + sc.depths:
            need = 2 * D - sc.delta2 - r
            if need > r:
                continue
            m = sc.min_depth(need)
            if m is None or m > r:
                continue
            cost = 2 * r + 2 * m * (len(nb) - 1)
            peeks = (1 if r > 0 else 0) + (len(nb) - 1 if m > 0 else 0)
            opts.append((cost, 2 * peeks, r, m, nb))
        opts = _dominance_filter(opts)
        if not opts:
            return None
        options.append((b, opts))
    options.sort(key=lambda x: len(x[1]))
    rest_min = [0] * (len(options) + 1)
    for i in range(len(options) - 1, -1, -1):
        rest_min[i] = rest_min[i + 1] + min(o[0] for o in options[i][1])

    best = [incumbent, None]
    choice: dict = {}

    def finish(cost_b, stops_b):
        # check outer edges with the chosen tips
        tips = {b: o[2] for b, o in choice.items() if o[2] > 0}
        if outer_edges:
            dd = {}
            for x in outside:
                v = D * d_vt[x]
                for y, r in tips.items():
                    v = min(v, D * dist[x][y] + D - r)
                dd[x] = v
            for a, b in outer_edges:
                if dd[a] + dd[b] + D > sc.delta2:
                    return
        for cost_s, stops_s, mask, join in skel_options:
            total = cost_s + cost_b
            stops = stops_s + stops_b
            if best[0] is not None and total >= best[0]:
                continue
            if stops > cap:
                res.cap_binding = True
                continue
            best[0] = total
            best[1] = (total, vt, mask, join, dict(choice))

    def search(i, cost_b, stops_b):
        if best[0] is not None and cost_b + rest_min[i] + skel_min_cost >= best[0]:
            return
        if stops_b + skel_min_stops > cap:
            res.cap_binding = True
            return
        if i == len(options):
            finish(cost_b, stops_b)
            return
        b, opts = options[i]
        for o in opts:
            choice[b] = o
            search(i + 1, cost_b + o[0], stops_b + o[1])
        del choice[b]

    search(0, 0, 0)
    return best[1]


def _pareto(opts):
    opts = sorted(opts, key=lambda o: (o[0], o[1]))
    out = []
    best_stops = math.inf
    for o in opts:
        if o[1] < best_stops:
            out.append(o)
            best_stops = o[1]
    return out


def _dominance_filter(opts):
    """Drop options beaten in cost, stops and reach by another one."""
    keep = []
    for o in opts:
        if any(p is not o and p[0] <= o[0] and p[1] <= o[1] and p[2] >= o[2] and p[:3] != o[:3] for p in opts):
            continue
        if any(p[:3] == o[:3] for p in keep):
            continue
        keep.append(o)
    return keep


def _build_tour(g: Graph, plan, sc: _Scaled) -> Tour:
    _, vt, mask, join, choice = plan
    D = sc.scale
    inner = [e for e in g.edges if e[0] in vt and e[1] in vt]
    traversed = [e for i, e in enumerate(inner) if mask >> i & 1]
    start = min(vt)
    if traversed:
        walk = euler_tour(traversed + list(join), start=start)
    else:
        walk = [start]
    peeks = []
    inner_need = sc.min_depth(D - sc.delta2)
    for i, (a, b) in enumerate(inner):
        if not mask >> i & 1 and inner_need:
            peeks.append((a, b, Fraction(inner_need, D)))
    for b in sorted(choice):
        cost, _, r, m, nb = choice[b]
        if r == 0:
            continue
        main = nb[0]
        peeks.append((main, b, Fraction(r, D)))
        if m > 0:
            for a in nb[1:]:
                peeks.append((a, b, Fraction(m, D)))
    closed = [Point.vertex(x) for x in walk]
    for base, tip, lam in peeks:
        vb = Point.vertex(base)
        idx = closed.index(vb)
        closed[idx + 1 : idx + 1] = [make_point(g, base, tip, lam), vb]
    return Tour(g, closed)


# -- brute force oracle -----------------------------------------------------


def brute_force_shortest_tour(g: Graph, delta, max_stops: int) -> tuple[Tour | None, Fraction | None]:
    """Depth-first search over closed stop sequences of candidate points.

    Exponential; meant only as a cross-check on graphs with a handful of
    edges.  Sequences are enumerated with their smallest stop first, so each
    cyclic tour is seen at least once.
    """
    delta = Fraction(delta)
    pts = sorted(candidate_points(g, delta).points)
    nbrs = {p: [q for q in pts if q != p and common_edge(p, q, g) is not None] for p in pts}
    best: list = [None, None]

    for p in pts:
        t = Tour(g, [p])
        if is_delta_tour(t, delta):
            return t, Fraction(0)

    def dfs(seq, length):
        if best[1] is not None and length >= best[1]:
            return
        last = seq[-1]
        for q in nbrs[last]:
            step = point_distance(last, q, g)
            if q == seq[0]:
                if len(seq) >= 2:
                    total = length + step
                    if best[1] is None or total < best[1]:
                        t = Tour(g, seq + [q])
                        if is_delta_tour(t, delta):
                            best[0], best[1] = t, total
            if q < seq[0] or len(seq) >= max_stops:
                continue
            seq.append(q)
            dfs(seq, length + step)
            seq.pop()

    for p in pts:
        dfs([p], Fraction(0))
    return best[0], best[1]
