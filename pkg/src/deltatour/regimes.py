"""Approximation algorithms for each range of delta and the dispatcher that picks one.

Every tour returned by :func:`solve` is checked with the geometric coverage
test before it leaves this module.  Lower bounds attached to a report are
sound for every input; the ratio fields say whether a guarantee is proven for
the shipped algorithm or only measured.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .coverage import is_delta_tour
from .discrete import _best_short_tour, candidate_points, exact_shortest_tour, min_gap, stop_position_set
from .graph import Graph, Point, make_point
from .kernels import WeightedGraph, chinese_postman_tour, christofides_tsp, held_karp_tsp, tour_through_points
from .lp import is_vertex_cover, solve_tour_lp, vertex_cover_tour
from .tours import Tour, insert_peek, make_nice, tour_length, tour_to_records

SIXTH = Fraction(1, 6)
QUARTER = Fraction(1, 4)
HALF = Fraction(1, 2)
LIFT_END = Fraction(33, 40)
THREE_HALVES = Fraction(3, 2)
SHIPPED_TSP = Fraction(3, 2)

# exact TSP on the auxiliary graph is used as a lower bound up to this size
EXACT_TSP_LIMIT = 10
# the cut LP is only attempted on graphs with at most this many edges
LP_EDGE_LIMIT = 120

MEASURED = "measured-only"


class ValidationFailure(AssertionError):
    """A regime produced a tour that fails the coverage check (an internal bug)."""


@dataclass
class SolveReport:
    delta: Fraction
    regime: str
    tour: Tour
    length: Fraction
    lower_bounds: list[tuple[str, Fraction]] = field(default_factory=list)
    theoretical_ratio: Fraction | str = MEASURED
    ratio_basis: str = "shipped bound"
    extras: dict = field(default_factory=dict)

    @property
    def best_lower_bound(self) -> Fraction | None:
        return max((v for _, v in self.lower_bounds), default=None)

    @property
    def certified_ratio(self) -> Fraction | None:
        lb = self.best_lower_bound
        if lb is None or lb <= 0:
            return None
        return self.length / lb

    def to_json(self) -> dict:
        ratio = self.certified_ratio
        theo = self.theoretical_ratio
        return {
            "delta": str(self.delta),
            "regime": self.regime,
            "length": str(self.length),
            "stops": self.tour.z,
            "tour": tour_to_records(self.tour),
            "lower_bounds": [{"source": s, "value": str(v)} for s, v in self.lower_bounds],
            "theoretical_ratio": theo if isinstance(theo, str) else str(theo),
            "ratio_basis": self.ratio_basis,
            "certified_ratio": None if ratio is None else str(ratio),
            **{k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.extras.items()},
        }


def _check_range(delta: Fraction, lo, hi, lo_closed: bool, hi_closed: bool, name: str) -> None:
    ok_lo = delta >= lo if lo_closed else delta > lo
    ok_hi = delta <= hi if hi_closed else delta < hi
    if not (ok_lo and ok_hi):
        left = "[" if lo_closed else "("
        right = "]" if hi_closed else ")"
        raise ValueError(f"{name} needs delta in {left}{lo}, {hi}{right}, got {delta}")


# -- delta in (0, 1/6] -------------------------------------------------------


def approx_small_delta(g: Graph, delta) -> Tour:
    """Chinese postman tour; within factor ``1/(1-2 delta)`` of the optimum."""
    delta = Fraction(delta)
    _check_range(delta, 0, SIXTH, False, True, "approx_small_delta")
    return chinese_postman_tour(g)


# -- delta in (1/6, 1/2) -----------------------------------------------------


@dataclass
class AuxTsp:
    """Weighted auxiliary graph whose TSP tours map to delta-tours of ``g``.

    ``points[i]`` is the point of ``g`` behind vertex ``i`` of ``wg``;
    ``edges`` lists the graph edges of the auxiliary graph (by index).
    """

    wg: WeightedGraph
    points: list[Point]
    edges: list[tuple[int, int]]


def build_aux_tsp(g: Graph, delta) -> AuxTsp:
    delta = Fraction(delta)
    _check_range(delta, SIXTH, HALF, False, False, "build_aux_tsp")
    if g.n < 3:
        raise ValueError("build_aux_tsp needs at least three vertices")
    inner = [v for v in range(g.n) if g.degree(v) >= 2]
    points: list[Point] = [Point.vertex(v) for v in inner]
    index = {p: i for i, p in enumerate(points)}
    edges: list[tuple[int, int]] = []

    def add(p: Point) -> int:
        if p not in index:
            index[p] = len(points)
            points.append(p)
        return index[p]

    for u, v in g.edges:
        du, dv = g.degree(u), g.degree(v)
        if du == 1 or dv == 1:
            hub, leaf = (u, v) if dv == 1 else (v, u)
            p = add(make_point(g, hub, leaf, 1 - delta))
            edges.append((index[Point.vertex(hub)], p))
        elif delta < QUARTER:
            p1 = add(make_point(g, u, v, 2 * delta))
            p2 = add(make_point(g, v, u, 2 * delta))
            edges += [(index[Point.vertex(u)], p1), (p1, p2), (p2, index[Point.vertex(v)])]
        else:
            p = add(make_point(g, u, v, 2 * delta))
            edges += [(index[Point.vertex(u)], p), (p, index[Point.vertex(v)])]
    return AuxTsp(WeightedGraph.metric_closure(points, g), points, edges)


def approx_mid_delta(g: Graph, delta) -> Tour:
    """Christofides on the auxiliary graph, expanded into a walk of ``g``."""
    aux = build_aux_tsp(g, delta)
    order, _ = christofides_tsp(aux.wg)
    return tour_through_points([aux.points[i] for i in order], g)


# -- delta = 1/2 and the lift to (1/2, 33/40) ---------------------------------


def _inner_tsp(g: Graph) -> tuple[list[Point], WeightedGraph]:
    inner = [Point.vertex(v) for v in range(g.n) if g.degree(v) >= 2]
    return inner, WeightedGraph.metric_closure(inner, g)


def approx_half(g: Graph) -> Tour:
    """TSP through the non-leaf vertices plus a half-edge peek toward every leaf."""
    if g.n < 3:
        raise ValueError("approx_half needs at least three vertices")
    inner, wg = _inner_tsp(g)
    order, _ = christofides_tsp(wg)
    t = tour_through_points([inner[i] for i in order], g)
    for leaf in g.leaves():
        hub = g.adj[leaf][0]
        t = insert_peek(t, hub, make_point(g, hub, leaf, HALF))
    return t


def lift_half_to_delta(t_half: Tour, delta) -> Tour:
    """A 1/2-tour is a delta-tour for every larger delta; only the bookkeeping changes."""
    delta = Fraction(delta)
    _check_range(delta, HALF, LIFT_END, False, False, "lift_half_to_delta")
    if not is_delta_tour(t_half, HALF):
        raise ValueError("input is not a 1/2-tour")
    return t_half


# -- delta in [33/40, 3/2) -------------------------------------------------


def one_tour(g: Graph) -> Tour:
    """Vertex-cover tour normalized by make_nice; always a 1-tour."""
    return make_nice(vertex_cover_tour(g))


def augment_below_one(t_one: Tour, g: Graph, delta) -> Tour:
    """Add one peek per unstopped vertex so the 1-tour becomes a delta-tour."""
    delta = Fraction(delta)
    _check_range(delta, LIFT_END, 1, True, False, "augment_below_one")
    stopped = t_one.vertex_stops()
    if not is_vertex_cover(g, stopped):
        raise ValueError("vertex stops of the input tour do not form a vertex cover")
    t = t_one
    for v in range(g.n):
        if v in stopped:
            continue
        w = min(y for y in g.adj[v] if y in stopped)
        depth = 1 - delta if g.degree(v) == 1 else 2 * (1 - delta)
        t = insert_peek(t, w, make_point(g, w, v, depth))
    return t


def degree_count_bound(g: Graph, delta) -> Fraction:
    """``2(1-delta)|V1| + 4(1-delta)(n - |V1|)`` as originally stated.

    Not sound on its own: a nice tour with a single vertex stop and only peeks
    (the star at delta=33/40) is shorter.  Use :func:`stop_aware_degree_bound`.
    """
    delta = Fraction(delta)
    leaves = len(g.leaves())
    return 2 * (1 - delta) * leaves + 4 * (1 - delta) * (g.n - leaves)


def stop_aware_degree_bound(g: Graph, delta) -> Fraction:
    """Lower bound for delta-tours with at least three stops, delta in [33/40, 1).

    Every vertex contributes its degree term except possibly one: with two or
    more vertex stops each stopped vertex is entered by a full edge, and with a
    single vertex stop that vertex may contribute nothing.
    """
    delta = Fraction(delta)
    terms = [(2 if g.degree(v) == 1 else 4) * (1 - delta) for v in range(g.n)]
    return sum(terms, Fraction(0)) - max(terms, default=Fraction(0))


def downshift_to_one_tour(t_delta: Tour, delta) -> Tour:
    """Turn a discretized delta-tour (1 < delta < 3/2) into a 1-tour at most ``1/(3-2 delta)`` as long.

    Peeks of depth ``3/2 - delta`` shrink to midpoints; peeks of depth
    ``3 - 2 delta`` or ``2 - delta`` become full traversals.
    """
    delta = Fraction(delta)
    _check_range(delta, 1, THREE_HALVES, False, False, "downshift_to_one_tour")
    g = t_delta.graph
    cyc = list(t_delta.cycle)
    z = len(cyc)
    out = []
    for i, p in enumerate(cyc):
        if p.is_vertex:
            out.append(p)
            continue
        base, after = cyc[i - 1], cyc[(i + 1) % z]
        if not (base.is_vertex and base == after):
            raise ValueError(f"stop {p} is not a single peek from a vertex")
        other = p.v if base.u == p.u else p.u
        depth = p.position_on(base.u, other)
        if depth == THREE_HALVES - delta:
            out.append(make_point(g, base.u, other, HALF))
        elif depth in (3 - 2 * delta, 2 - delta):
            out.append(Point.vertex(other))
        else:
            raise ValueError(f"peek depth {depth} is outside the discretized form")
    return Tour.from_cycle(g, out)


# -- dispatcher --------------------------------------------------------------


def regime_of(delta) -> str:
    delta = Fraction(delta)
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if delta == 0:
        return "zero"
    if delta <= SIXTH:
        return "(0,1/6]"
    if delta < HALF:
        return "(1/6,1/2)"
    if delta == HALF:
        return "1/2"
    if delta < LIFT_END:
        return "(1/2,33/40)"
    if delta < 1:
        return "[33/40,1)"
    if delta < THREE_HALVES:
        return "[1,3/2)"
    return "[3/2,inf)"


def shipped_ratio(delta) -> Fraction | str:
    """Ratio shipped for the regime of ``delta`` (Christofides factor 3/2 in place of 1.4)."""
    delta = Fraction(delta)
    r = regime_of(delta)
    if r == "zero":
        return Fraction(1)
    if r == "(0,1/6]":
        return 1 / (1 - 2 * delta)
    if r in ("(1/6,1/2)", "1/2"):
        return SHIPPED_TSP
    if r == "(1/2,33/40)":
        return SHIPPED_TSP / (2 - 2 * delta)
    if r == "[33/40,1)":
        return Fraction(4)
    if r == "[1,3/2)":
        return 3 / (3 - 2 * delta)
    return MEASURED


def _half_lower_bound(g: Graph) -> tuple[str, Fraction]:
    """Lower bound on the shortest 1/2-tour: TSP through the non-leaf vertices plus one per leaf."""
    inner, wg = _inner_tsp(g)
    leaves = len(g.leaves())
    if wg.n <= EXACT_TSP_LIMIT:
        _, opt = held_karp_tsp(wg)
        return "inner-tsp-exact", opt + leaves
    _, approx = christofides_tsp(wg)
    return "inner-tsp-christofides", approx / SHIPPED_TSP + leaves


def _lp_bound(g: Graph, report_extras: dict) -> Fraction | None:
    if g.m > LP_EDGE_LIMIT:
        report_extras["opt_lp"] = None
        return None
    res = solve_tour_lp(g)
    report_extras["opt_lp"] = res.value
    report_extras["constraints_generated"] = res.constraints_generated
    return res.value


def solve(g: Graph, delta, mode: str = "fixed") -> SolveReport:
    """Pick the algorithm for ``delta``, build a tour, attach lower bounds and validate."""
    delta = Fraction(delta)
    if delta < 0:
        raise ValueError("delta must be non-negative")
    if mode not in ("fixed", "input-delta"):
        raise ValueError(f"unknown mode {mode!r}")
    extras: dict = {"s_delta": min_gap(stop_position_set(delta))}
    bounds: list[tuple[str, Fraction]] = []
    regime = regime_of(delta)
    theo = shipped_ratio(delta)
    basis = "shipped bound"

    if g.n <= 2:
        res = exact_shortest_tour(g, delta)
        report = SolveReport(delta, "exact", res.tour, res.length, [("exact", res.length)], Fraction(1), "exact", extras)
        return _finish(report, g)

    short, short_len = None, None
    if regime not in ("zero", "(0,1/6]"):
        short, short_len = _best_short_tour(g, delta, candidate_points(g, delta))

    if regime == "zero":
        t = chinese_postman_tour(g)
        bounds.append(("postman-exact", tour_length(t)))
    elif regime == "(0,1/6]":
        t = approx_small_delta(g, delta)
        bounds.append(("postman-scaled", tour_length(t) * (1 - 2 * delta)))
    elif regime == "(1/6,1/2)":
        t = approx_mid_delta(g, delta)
        aux = build_aux_tsp(g, delta)
        if aux.wg.n <= EXACT_TSP_LIMIT:
            bounds.append(("aux-tsp-exact", held_karp_tsp(aux.wg)[1]))
        else:
            bounds.append(("aux-tsp-christofides", tour_length(t) / SHIPPED_TSP))
    elif regime == "1/2":
        t = approx_half(g)
        bounds.append(_half_lower_bound(g))
    elif regime == "(1/2,33/40)":
        t = lift_half_to_delta(approx_half(g), delta)
        label, half_lb = _half_lower_bound(g)
        bounds.append((label + "-lifted", half_lb * (2 - 2 * delta)))
    elif regime == "[33/40,1)":
        t = augment_below_one(one_tour(g), g, delta)
        basis = "conditional on a 3-approximate 1-tour"
        lp = _lp_bound(g, extras)
        if lp is not None:
            bounds.append(("cut-lp", lp))
        deg = stop_aware_degree_bound(g, delta)
        bounds.append(("degree-count-or-short", deg if short_len is None else min(deg, short_len)))
    elif regime == "[1,3/2)":
        t = one_tour(g)
        basis = "conditional on a 3-approximate 1-tour"
        lp = _lp_bound(g, extras)
        if lp is not None:
            scaled = lp * (3 - 2 * delta)
            bounds.append(("cut-lp-scaled-or-short", scaled if short_len is None else min(scaled, short_len)))
    else:
        from .large_delta import fixed_delta_tour_report, input_delta_tour_report

        t, more = fixed_delta_tour_report(g, delta) if mode == "fixed" else input_delta_tour_report(g, delta)
        extras.update(more)
        basis = "measured"

    if short is not None and short_len < tour_length(t):
        t = short
    t = make_nice(t)
    report = SolveReport(delta, regime, t, tour_length(t), bounds, theo, basis, extras)
    return _finish(report, g)


def _finish(report: SolveReport, g: Graph) -> SolveReport:
    t = report.tour
    if t is None or not is_delta_tour(t, report.delta):
        raise ValidationFailure(f"regime {report.regime} produced an invalid tour {t} at delta={report.delta}")
    for label, value in report.lower_bounds:
        if value > report.length:
            raise ValidationFailure(f"lower bound {label}={value} exceeds tour length {report.length}")
    return report


__all__ = [
    "AuxTsp",
    "SolveReport",
    "ValidationFailure",
    "approx_half",
    "approx_mid_delta",
    "approx_small_delta",
    "augment_below_one",
    "build_aux_tsp",
    "degree_count_bound",
    "stop_aware_degree_bound",
    "downshift_to_one_tour",
    "lift_half_to_delta",
    "one_tour",
    "regime_of",
    "shipped_ratio",
    "solve",
]
