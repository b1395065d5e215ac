"""Cut LP lower bound for 1-tours and a vertex-cover based 1-tour.

The LP minimises ``sum z_e`` over ``z >= 0`` such that every cut ``C(F)`` with
an edge on both sides carries weight at least 2.  It is solved exactly by a
cutting-plane loop: the restricted problem is solved through its packing dual
with a rational simplex, and violated cuts come from minimum s-t cuts between
pairs of vertex-disjoint anchor edges (all distinct violated cuts of a round are
added at once).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .graph import Graph, Point
from .kernels import WeightedGraph, christofides_tsp, connect_points_tour, held_karp_tsp, tour_through_points
from .tours import Tour, tour_length

HELD_KARP_LIMIT = 12


# -- exact simplex -----------------------------------------------------------


def maximize_packing(columns: list[list[int]], m: int, weight: Fraction = Fraction(2)):
    """Solve ``max weight * sum(y)`` s.t. ``sum_j y_j [i in columns[j]] <= 1``, ``y >= 0``.

    ``columns[j]`` lists the rows (0..m-1) with a 1 in column ``j``.  Returns
    ``(value, y, duals)`` where ``duals[i]`` is the optimal multiplier of row
    ``i``.  Bland's rule guarantees termination; everything is exact.
    """
    k = len(columns)
    width = k + m
    rows = []
    for i in range(m):
        row = [Fraction(0)] * (width + 1)
        for j, col in enumerate(columns):
            if i in col:
                row[j] = Fraction(1)
        row[k + i] = Fraction(1)
        row[width] = Fraction(1)
        rows.append(row)
    basis = [k + i for i in range(m)]
    # reduced profits c_j - c_B B^-1 A_j
    obj = [weight] * k + [Fraction(0)] * m + [Fraction(0)]
    while True:
        enter = next((j for j in range(width) if obj[j] > 0), None)
        if enter is None:
            break
        leave, best = None, None
        for i, row in enumerate(rows):
            a = row[enter]
            if a > 0:
                ratio = row[width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    leave, best = i, ratio
        if leave is None:
            raise ArithmeticError("packing LP is unbounded")
        pivot = rows[leave][enter]
        prow = [x / pivot for x in rows[leave]]
        rows[leave] = prow
        support = [j for j, y in enumerate(prow) if y]
        for i, row in enumerate(rows):
            f = row[enter]
            if i != leave and f:
                for j in support:
                    row[j] -= f * prow[j]
        f = obj[enter]
        for j in support:
            obj[j] -= f * prow[j]
        basis[leave] = enter
    y = [Fraction(0)] * k
    for i, b in enumerate(basis):
        if b < k:
            y[b] = rows[i][width]
    value = -obj[width]
    duals = [-obj[k + i] for i in range(m)]
    return value, y, duals


# -- cut family and separation ---------------------------------------------


def cut_edges(g: Graph, side) -> frozenset:
    side = set(side)
    return frozenset(e for e in g.edges if (e[0] in side) != (e[1] in side))


def in_family(g: Graph, side) -> bool:
    side = set(side)
    inside = any(a in side and b in side for a, b in g.edges)
    outside = any(a not in side and b not in side for a, b in g.edges)
    return inside and outside


def family_members(g: Graph) -> list[frozenset]:
    """Every ``F`` with an edge inside and an edge outside, one per complementary pair."""
    out = []
    for mask in range(1, 1 << g.n):
        if mask & 1:
            continue  # complement of a set containing vertex 0 gives the same cut
        side = frozenset(v for v in range(g.n) if mask >> v & 1)
        if in_family(g, side):
            out.append(side)
    return out


def _min_cut(n: int, cap: dict, source: set, sink: set) -> tuple[Fraction, frozenset]:
    """Edmonds-Karp on an undirected capacity map with contracted terminals."""
    s, t = n, n + 1

    def node(x):
        return s if x in source else t if x in sink else x

    residual: dict = {}
    for (a, b), c in cap.items():
        u, v = node(a), node(b)
        if u == v or c == 0:
            continue
        residual.setdefault(u, {}).setdefault(v, Fraction(0))
        residual.setdefault(v, {}).setdefault(u, Fraction(0))
        residual[u][v] += c
        residual[v][u] += c
    flow = Fraction(0)
    while True:
        prev = {s: None}
        queue = deque([s])
        while queue and t not in prev:
            x = queue.popleft()
            for y, c in sorted(residual.get(x, {}).items()):
                if c > 0 and y not in prev:
                    prev[y] = x
                    queue.append(y)
        if t not in prev:
            break
        path = []
        y = t
        while prev[y] is not None:
            path.append((prev[y], y))
            y = prev[y]
        push = min(residual[a][b] for a, b in path)
        for a, b in path:
            residual[a][b] -= push
            residual[b][a] += push
        flow += push
    reach = set(prev)
    side = frozenset(x for x in range(n) if node(x) in reach or x in source)
    return flow, side


def violated_cuts(g: Graph, z: dict) -> list[tuple[Fraction, frozenset]]:
    """Every distinct violated cut found by the anchor-pair min cuts, most violated first."""
    for e, val in z.items():
        if not 0 <= val <= 2:
            raise ValueError(f"z[{e}] = {val} outside [0, 2]")
    cap = {e: Fraction(z.get(e, 0)) for e in g.edges}
    found: dict = {}
    for e1, e2 in combinations(g.edges, 2):
        if set(e1) & set(e2):
            continue
        val, side = _min_cut(g.n, cap, set(e1), set(e2))
        if val < 2:
            key = cut_edges(g, side)
            if key not in found or val < found[key][0]:
                found[key] = (val, side)
    return sorted(found.values(), key=lambda vs: (vs[0], sorted(vs[1])))


def separation_oracle(g: Graph, z: dict) -> frozenset | None:
    """Most violated cut constraint under ``z``, or None if all hold."""
    cuts = violated_cuts(g, z)
    return cuts[0][1] if cuts else None


@dataclass
class LpResult:
    value: Fraction
    z: dict
    cuts: list = field(default_factory=list)
    y: list = field(default_factory=list)

    @property
    def constraints_generated(self) -> int:
        return len(self.cuts)


def solve_tour_lp(g: Graph) -> LpResult:
    """Exact optimum of the cut LP by lazy constraint generation."""
    zero = {e: Fraction(0) for e in g.edges}
    cuts: list[frozenset] = []
    seen: set = set()
    z = dict(zero)
    value, y = Fraction(0), []
    while True:
        batch = violated_cuts(g, z)
        if not batch:
            break
        for _, side in batch:
            ce = cut_edges(g, side)
            if ce in seen:
                raise AssertionError("separation returned a cut that is already enforced")
            seen.add(ce)
            cuts.append(side)
        columns = [[g.edge_index[e] for e in cut_edges(g, F)] for F in cuts]
        value, y, duals = maximize_packing(columns, g.m)
        z = {e: duals[g.edge_index[e]] for e in g.edges}
    res = LpResult(value, z, cuts, y)
    certify_lp(g, res)
    return res


def certify_lp(g: Graph, res: LpResult) -> None:
    """Check primal feasibility on the generated cuts and zero duality gap."""
    if any(v < 0 for v in res.z.values()):
        raise AssertionError("negative LP value")
    for F in res.cuts:
        if sum(res.z[e] for e in cut_edges(g, F)) < 2:
            raise AssertionError("LP solution violates a generated cut")
    if sum(res.z.values(), Fraction(0)) != res.value or 2 * sum(res.y, Fraction(0)) != res.value:
        raise AssertionError("primal and dual objective differ")


def one_tour_lower_bound(g: Graph) -> Fraction:
    return solve_tour_lp(g).value


# -- vertex cover tour -------------------------------------------------------


def vertex_cover(g: Graph) -> list[int]:
    """Endpoints of a greedy maximal matching, minus vertices made redundant."""
    matched: set = set()
    for a, b in g.edges:
        if a not in matched and b not in matched:
            matched |= {a, b}
    cover = set(matched)
    for v in sorted(cover, key=lambda x: (g.degree(x), x)):
        if all(y in cover for y in g.adj[v]) and len(cover) > 1:
            cover.discard(v)
    return sorted(cover)


def vertex_cover_tour(g: Graph) -> Tour:
    """Integral tour whose vertex stops form a vertex cover of ``g``."""
    if g.m == 0:
        return Tour(g, [Point.vertex(0)])
    cover = vertex_cover(g)
    pts = [Point.vertex(v) for v in cover]
    best = connect_points_tour(pts, g)
    if len(pts) >= 3:
        wg = WeightedGraph.metric_closure(pts, g)
        order, _ = held_karp_tsp(wg) if len(pts) <= HELD_KARP_LIMIT else christofides_tsp(wg)
        alt = tour_through_points([pts[i] for i in order], g)
        if tour_length(alt) < tour_length(best):
            best = alt
    return best


def is_vertex_cover(g: Graph, vertices) -> bool:
    vs = set(vertices)
    return all(a in vs or b in vs for a, b in g.edges)
