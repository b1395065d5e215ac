"""Acceptance criteria, one test each, with a PASS/FAIL line per criterion.

The lines are printed as each test runs and repeated in the pytest terminal
summary under "acceptance criteria".
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction as F
from functools import lru_cache
from itertools import combinations

import pytest

from acceptance_log import record
from deltatour.coverage import coverage_radius, covers_edge, is_delta_tour, max_edge_distance
from deltatour.discrete import exact_shortest_tour, min_gap, stop_position_set
from deltatour.generators import (
    all_connected_up_to,
    spoked_ring_graph,
    spoked_ring_tour,
    tailed_triangle_graph,
)
from deltatour.kernels import WeightedGraph, christofides_tsp, chinese_postman_tour, held_karp_tsp
from deltatour.kernels import matching_blossom, matching_dp, spanning_double_tour
from deltatour.large_delta import build_gamma, domination_equivalence_check, fixed_delta
from deltatour.lp import cut_edges, family_members, solve_tour_lp
from deltatour.regimes import (
    augment_below_one,
    degree_count_bound,
    one_tour,
    shipped_ratio,
    solve,
    stop_aware_degree_bound,
)
from deltatour.tours import make_nice, tour_length
from helpers import random_candidate_tour, random_connected_graph, random_tour

RATIO_GRID = [F(1, 10), F(1, 6), F(1, 4), F(2, 5), F(1, 2), F(3, 5), F(33, 40), F(9, 10), F(1), F(5, 4)]
BELOW_ONE = [F(33, 40), F(7, 8), F(9, 10), F(19, 20)]


@lru_cache(maxsize=None)
def small_corpus():
    return [g for g in all_connected_up_to(5) if g.m > 0]


@lru_cache(maxsize=None)
def exact_length(g, delta) -> F:
    return exact_shortest_tour(g, delta).length


@lru_cache(maxsize=None)
def solved(g, delta):
    return solve(g, delta)


def random_metric(rng: random.Random, n: int) -> WeightedGraph:
    w = [[F(0)] * n for _ in range(n)]
    for i, j in combinations(range(n), 2):
        w[i][j] = w[j][i] = F(rng.randrange(1, 50), rng.choice([1, 2, 3, 5]))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                if w[i][k] + w[k][j] < w[i][j]:
                    w[i][j] = w[i][k] + w[k][j]
    return WeightedGraph.from_matrix(w)


def test_criterion_01_spoked_ring_fixture():
    start = time.perf_counter()
    g = spoked_ring_graph()
    t = spoked_ring_tour(g)
    lp = solve_tour_lp(g).value
    rep = solve(g, 1)
    elapsed = time.perf_counter() - start
    ok = (
        is_delta_tour(t, 1)
        and tour_length(t) == 18
        and lp == 18
        and is_delta_tour(rep.tour, 1)
        and rep.length <= 3 * 18
        and elapsed < 10
    )
    record("criterion 1", ok, f"fixture is a 1-tour of length {tour_length(t)}, LP bound {lp} certifies it shortest; "
           f"solve at delta=1 gives {rep.length} <= 54; {elapsed:.2f}s < 10s")
    assert ok


def test_criterion_02_tailed_triangle_exact():
    start = time.perf_counter()
    res = exact_shortest_tour(tailed_triangle_graph(), F(5, 3))
    elapsed = time.perf_counter() - start
    ok = res.length == F(1, 3) and is_delta_tour(res.tour, F(5, 3)) and elapsed < 60
    record("criterion 2", ok, f"exact length at delta=5/3 is {res.length} (expected 1/3); {elapsed:.2f}s < 60s")
    assert ok


def test_criterion_03_zero_tours():
    start = time.perf_counter()
    bad = []
    graphs = all_connected_up_to(5)
    for g in graphs:
        a = solve(g, 0).length
        b = tour_length(chinese_postman_tour(g))
        c = exact_length(g, F(0))
        if not a == b == c:
            bad.append((g, a, b, c))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 300
    record("criterion 3", ok, f"solve = postman = exact at delta=0 on {len(graphs)} graphs, {len(bad)} mismatches; {elapsed:.2f}s")
    assert ok, bad[:3]


def test_criterion_04_ratio_ceilings():
    start = time.perf_counter()
    bad, worst, checked = [], {}, 0
    for g in small_corpus():
        for d in RATIO_GRID:
            rep = solved(g, d)
            opt = exact_length(g, d)
            if opt == 0:
                if rep.length != 0:
                    bad.append((g, d, rep.length, opt))
                continue
            ratio = rep.length / opt
            checked += 1
            worst[d] = max(worst.get(d, F(0)), ratio)
            bound = shipped_ratio(d) if g.n > 2 else F(1)
            if ratio > bound:
                bad.append((g, d, rep.length, opt))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 1800
    summary = ", ".join(f"{d}:{worst[d]}<={shipped_ratio(d)}" for d in RATIO_GRID if d in worst)
    record("criterion 4", ok, f"{checked} ratios checked, {len(bad)} above the shipped bound; worst {summary}; {elapsed:.2f}s")
    assert ok, bad[:3]


def test_criterion_05_lp_soundness():
    start = time.perf_counter()
    bad, graphs = [], small_corpus()
    for g in graphs:
        res = solve_tour_lp(g)
        if res.value > exact_length(g, F(1)):
            bad.append(("bound", g))
        for side in family_members(g):
            if sum(res.z[e] for e in cut_edges(g, side)) < 2:
                bad.append(("infeasible", g, side))
                break
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 300
    record("criterion 5", ok, f"OPT_LP <= exact 1-tour and z* feasible for every cut on {len(graphs)} graphs; "
           f"{len(bad)} failures; {elapsed:.2f}s")
    assert ok, bad[:3]


def test_criterion_06_characterization_agreement():
    start = time.perf_counter()
    rng = random.Random(606)
    bad, edges = [], 0
    for _ in range(1000):
        g = random_connected_graph(rng, rng.randrange(2, 8))
        t = make_nice(random_tour(rng, g, steps=rng.randrange(0, 12)))
        delta = rng.choice([F(rng.randrange(0, 37), 12), coverage_radius(t)])
        for e in g.edges:
            edges += 1
            if covers_edge(e, t, delta) != (max_edge_distance(e, t).max_distance <= delta):
                bad.append((g, t, delta, e))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 120
    record("criterion 6", ok, f"1000 nice-tour triples, {edges} edge verdicts, {len(bad)} disagreements; {elapsed:.2f}s")
    assert ok, bad[:3]


def test_criterion_07_gamma_equivalence():
    start = time.perf_counter()
    rng = random.Random(707)
    bad, positives = [], 0
    for _ in range(500):
        g = random_connected_graph(rng, rng.randrange(2, 6))
        delta = rng.choice([F(9, 8), F(5, 4), F(4, 3), F(3, 2), F(5, 3), F(2), F(5, 2)])
        t = random_candidate_tour(rng, g, delta, rng.randrange(1, 4))
        gamma = build_gamma(g, delta)
        dom = domination_equivalence_check(t, gamma, delta)
        cov = is_delta_tour(t, delta)
        positives += cov
        if dom != cov:
            bad.append((g, t, delta))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 300
    record("criterion 7", ok, f"500 triples ({positives} delta-tours), {len(bad)} mismatches; {elapsed:.2f}s")
    assert ok, bad[:3]


def test_criterion_08_normalization():
    start = time.perf_counter()
    rng = random.Random(808)
    bad = []
    for _ in range(1000):
        g = random_connected_graph(rng, rng.randrange(1, 8))
        t = random_tour(rng, g, steps=rng.randrange(0, 14))
        nice = make_nice(t)
        if tour_length(nice) > tour_length(t) or nice.z > t.z:
            bad.append(("grew", t))
        if make_nice(nice) != nice:
            bad.append(("not idempotent", t))
        if not is_delta_tour(nice, coverage_radius(t)):
            bad.append(("lost coverage", t))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 120
    record("criterion 8", ok, f"1000 random tours, {len(bad)} violations of length/stop monotonicity, "
           f"idempotence or coverage; {elapsed:.2f}s")
    assert ok, bad[:3]


def test_criterion_09_kernel_oracles():
    start = time.perf_counter()
    rng = random.Random(909)
    bad = []
    for _ in range(500):
        n = 2 * rng.randrange(1, 6)
        w = [[F(0)] * n for _ in range(n)]
        for i, j in combinations(range(n), 2):
            w[i][j] = w[j][i] = F(rng.randrange(0, 40), rng.choice([1, 2, 3, 7]))
        if matching_blossom(w)[1] != matching_dp(w)[1]:
            bad.append(("matching", w))
    for _ in range(200):
        wg = random_metric(rng, rng.randrange(1, 11))
        if christofides_tsp(wg)[1] > F(3, 2) * held_karp_tsp(wg)[1]:
            bad.append(("christofides", wg.w))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 300
    record("criterion 9", ok, f"500 matchings blossom = DP, 200 Christofides <= 1.5 Held-Karp; {len(bad)} failures; {elapsed:.2f}s")
    assert ok, bad[:3]


def test_criterion_10_structural_bounds():
    start = time.perf_counter()
    bad = []
    graphs = small_corpus()
    for g in all_connected_up_to(6):
        t = spanning_double_tour(g)
        if tour_length(t) > 2 * g.n - 2 or not is_delta_tour(t, F(1, 2)):
            bad.append(("double tour", g))
    emitted = 0
    for g in graphs:
        for d in RATIO_GRID + [F(3, 2), F(2)]:
            t = solved(g, d).tour
            emitted += 1
            if t.z > math.ceil(tour_length(t) / min_gap(stop_position_set(d))):
                bad.append(("stop count", g, d))
        for d in (F(3, 2), F(2), F(5, 2)):
            r = fixed_delta(g, d)
            if tour_length(r.tour) > 4 * d * r.domset_size:
                bad.append(("fixed delta", g, d))
    augmented = 0
    for g in graphs:
        if g.n < 3:
            continue
        for d in BELOW_ONE:
            t = augment_below_one(one_tour(g), g, d)
            augmented += 1
            if tour_length(t) < stop_aware_degree_bound(g, d) or not is_delta_tour(t, d):
                bad.append(("stop-aware degree bound", g, d))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 300
    record("criterion 10", ok, f"double tour <= 2n-2 and valid at 1/2; stop count <= ceil(l/s) on {emitted} solve tours; "
           f"fixed-delta <= 4 delta |Y|; {augmented} augmented tours meet the stop-aware degree bound; "
           f"{len(bad)} failures; {elapsed:.2f}s")
    assert ok, bad[:3]


@pytest.mark.xfail(strict=True, reason="the degree-count bound as originally stated is violated by the star at 33/40")
def test_criterion_10_literal_degree_count_bound():
    bad = []
    for g in small_corpus():
        if g.n < 3:
            continue
        for d in BELOW_ONE:
            t = augment_below_one(one_tour(g), g, d)
            if tour_length(t) < degree_count_bound(g, d):
                bad.append((g.edges, d, tour_length(t), degree_count_bound(g, d)))
    record("criterion 10 (literal degree-count bound)", not bad,
           f"{len(bad)} augmented tours fall below the bound as stated, e.g. star at 33/40 has length 21/20 "
           f"below 7/4; left red (see corrected bound in criterion 10)")
    assert not bad
