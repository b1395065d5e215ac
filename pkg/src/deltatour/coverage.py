"""Deciding whether a tour keeps every point of the graph within distance delta.

Two independent routes are provided.  The geometric route splits each edge at
the tour's stops and evaluates the farthest point of every unpassed gap in
closed form; it works for any tour and is authoritative.  The case-analysis
route checks the three characterization conditions (neither, one, or both edge
endpoints stopped at) and is only sound for nice tours or tours with at most
two stops.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph, GraphError, Point, make_point
from .tours import Tour, TourError, distance_to_tour, is_nice, make_nice, traversal_counts

TRAVERSED = "traversed"
PEEKED = "peeked"
ENDPOINT_COVERED = "endpoint-covered"
UNCOVERED = "uncovered-at-δ"


@dataclass(frozen=True)
class CoverageVerdict:
    edge: tuple[int, int]
    max_distance: Fraction
    witness: Point
    mode: str


def _edge_key(g: Graph, edge) -> tuple[int, int]:
    a, b = edge
    e = (a, b) if a < b else (b, a)
    if e not in g.edge_index:
        raise GraphError(f"{edge} is not an edge")
    return e


def max_edge_distance(edge, t: Tour) -> CoverageVerdict:
    """Farthest distance from ``t`` over all points of ``edge``, with a witness."""
    g = t.graph
    a, b = _edge_key(g, edge)
    passed = [(lo, hi) for x, y, lo, hi in t.segments() if (x, y) == (a, b)]
    cuts = {Fraction(0), Fraction(1)}
    on_edge = False
    for p in t.stop_set():
        if not p.is_vertex and p.edge == (a, b):
            cuts.add(p.lam)
            on_edge = True
    cuts = sorted(cuts)

    def dist_at(pos: Fraction) -> Fraction:
        return distance_to_tour(make_point(g, a, b, pos), t)

    best = None
    witness = Fraction(0)
    ends = [dist_at(c) for c in cuts]
    for k, (s, e) in enumerate(zip(cuts, cuts[1:])):
        if any(lo <= s and e <= hi for lo, hi in passed):
            val, where = Fraction(0), s
        else:
            d_left, d_right = ends[k], ends[k + 1]
            length = e - s
            val = (d_left + d_right + length) / 2
            where = s + (d_right - d_left + length) / 2
        if best is None or val > best:
            best, witness = val, where
    if traversal_counts(t).get((a, b)):
        mode = TRAVERSED
    elif on_edge:
        mode = PEEKED
    else:
        mode = ENDPOINT_COVERED
    return CoverageVerdict((a, b), best, make_point(g, a, b, witness), mode)


def edge_verdicts(t: Tour, delta) -> list[CoverageVerdict]:
    out = []
    for e in t.graph.edges:
        v = max_edge_distance(e, t)
        if v.max_distance > delta:
            v = CoverageVerdict(v.edge, v.max_distance, v.witness, UNCOVERED)
        out.append(v)
    return out


def coverage_radius(t: Tour) -> Fraction:
    """Smallest delta for which ``t`` is a delta-tour."""
    return max((max_edge_distance(e, t).max_distance for e in t.graph.edges), default=Fraction(0))


# -- case analysis on the stop pattern of an edge --------------------------


def _oriented_stops(t: Tour):
    """Every stop written as ``(u, v, lam)`` with ``lam`` in [0, 1) measured from ``u``.

    Interior stops appear in both orientations; a vertex stop ``w`` appears as
    ``(w, y, 0)`` for each neighbour ``y``.
    """
    g = t.graph
    for p in t.stop_set():
        if p.is_vertex:
            for y in g.adj[p.u]:
                yield (p.u, y, Fraction(0))
        else:
            yield (p.u, p.v, p.lam)
            yield (p.v, p.u, 1 - p.lam)


def _covers_no_endpoint_stop(x1, x2, t, delta) -> bool:
    g = t.graph
    oriented = list(_oriented_stops(t))
    reach1 = max(lam - g.dist[x1][v] for _, v, lam in oriented)
    reach2 = max(lam - g.dist[x2][v] for _, v, lam in oriented)
    if reach1 + reach2 >= 3 - 2 * delta:
        return True
    near = [lam for u, v, lam in oriented if (u, v) == (x1, x2) and lam > 0]
    return any(0 < l1 <= delta for l1 in near) and any(1 - delta <= l2 < 1 for l2 in near)


def _covers_one_endpoint_stop(x1, x2, t, delta) -> bool:
    oriented = list(_oriented_stops(t))
    g = t.graph
    from_x1 = [lam for u, v, lam in oriented if (u, v) == (x1, x2)]
    toward_x2 = [lam for u, v, lam in oriented if v == x2 and g.has_edge(u, x2)]
    if any(lam >= 1 - delta for lam in from_x1):
        return True
    if from_x1 and toward_x2 and max(from_x1) + max(toward_x2) >= 2 - 2 * delta:
        return True
    return False


def _covers_both_endpoint_stops(x1, x2, t, delta) -> bool:
    e = (x1, x2) if x1 < x2 else (x2, x1)
    if traversal_counts(t).get(e):
        return True
    if delta >= Fraction(1, 2):
        return True
    cyc = t.cycle
    z = len(cyc)
    for i, p in enumerate(cyc):
        if p.is_vertex or p.edge != e or z < 2:
            continue
        base = cyc[i - 1]
        if base.is_vertex and base == cyc[(i + 1) % z]:
            other = x2 if base.u == x1 else x1
            if p.position_on(base.u, other) >= 1 - 2 * delta:
                return True
    return False


def covers_edge(edge, t: Tour, delta) -> bool:
    """Case-analysis coverage test; ``t`` must be nice or have at most two stops."""
    if t.z >= 3 and not is_nice(t):
        raise TourError("coverage by case analysis needs a nice tour; apply make_nice first")
    g = t.graph
    x1, x2 = _edge_key(g, edge)
    stopped = t.vertex_stops()
    s1, s2 = x1 in stopped, x2 in stopped
    if s1 and s2:
        return _covers_both_endpoint_stops(x1, x2, t, delta)
    if s1:
        return _covers_one_endpoint_stop(x1, x2, t, delta)
    if s2:
        return _covers_one_endpoint_stop(x2, x1, t, delta)
    return _covers_no_endpoint_stop(x1, x2, t, delta)


def is_delta_tour(t: Tour, delta, route: str = "geometric") -> bool:
    """Whether every point of the graph lies within ``delta`` of the tour.

    ``route="geometric"`` evaluates the original tour directly.  ``route="cases"``
    normalizes a copy with :func:`make_nice` and runs the case analysis; the two
    agree whenever the original tour is a delta-tour.
    """
    delta = Fraction(delta)
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if route == "geometric":
        return all(max_edge_distance(e, t).max_distance <= delta for e in t.graph.edges)
    if route == "cases":
        nice = make_nice(t)
        return all(covers_edge(e, nice, delta) for e in t.graph.edges)
    raise ValueError(f"unknown route {route!r}")
