from __future__ import annotations

from fractions import Fraction as F

import pytest

from deltatour.coverage import is_delta_tour
from deltatour.discrete import exact_shortest_tour
from deltatour.generators import all_connected_up_to, cycle_graph, path_graph, star_graph
from deltatour.graph import Graph
from deltatour.lp import (
    certify_lp,
    cut_edges,
    family_members,
    is_vertex_cover,
    maximize_packing,
    one_tour_lower_bound,
    separation_oracle,
    solve_tour_lp,
    vertex_cover_tour,
)
from deltatour.tours import make_nice, tour_length


def full_lp_value(g: Graph) -> F:
    """The same LP with every cut of the family written down explicitly."""
    fam = family_members(g)
    if not fam:
        return F(0)
    columns = [[g.edge_index[e] for e in cut_edges(g, side)] for side in fam]
    return maximize_packing(columns, g.m)[0]


def test_separation_examples():
    p4 = path_graph(4)
    assert separation_oracle(p4, {e: F(2) for e in p4.edges}) is None
    side = separation_oracle(p4, {e: F(0) for e in p4.edges})
    assert set(side) in ({0, 1}, {2, 3})


def test_separation_rejects_out_of_range_values():
    p4 = path_graph(4)
    with pytest.raises(ValueError):
        separation_oracle(p4, {e: F(3) for e in p4.edges})


def test_lp_examples():
    assert solve_tour_lp(path_graph(4)).value == 2
    assert solve_tour_lp(star_graph(4)).value == 0
    c4 = cycle_graph(4)
    assert solve_tour_lp(c4).value == full_lp_value(c4)


def test_packing_simplex_small_instance():
    # rows 0..2, columns {0,1}, {1,2}: best is y = (1, 0) or (0, 1) value 2, or both halves
    value, y, duals = maximize_packing([[0, 1], [1, 2]], 3)
    assert value == 2
    assert sum(duals) == value


def test_lp_matches_full_enumeration_and_is_feasible():
    for g in all_connected_up_to(6) if False else all_connected_up_to(5):
        res = solve_tour_lp(g)
        assert res.value == full_lp_value(g)
        for side in family_members(g):
            assert sum(res.z[e] for e in cut_edges(g, side)) >= 2
        certify_lp(g, res)


def test_lp_feasible_on_larger_graphs():
    for g in (cycle_graph(7), path_graph(7), Graph(7, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5), (5, 6), (6, 4)])):
        res = solve_tour_lp(g)
        for side in family_members(g):
            assert sum(res.z[e] for e in cut_edges(g, side)) >= 2
        assert separation_oracle(g, res.z) is None


def test_lp_is_a_lower_bound_on_one_tours():
    for g in all_connected_up_to(5):
        assert one_tour_lower_bound(g) <= exact_shortest_tour(g, 1).length
    c6 = cycle_graph(6)
    assert one_tour_lower_bound(c6) <= exact_shortest_tour(c6, 1).length


def test_vertex_cover_tour_examples():
    star = star_graph(4)
    t = vertex_cover_tour(star)
    assert t.z == 0 and tour_length(t) == 0
    edge = path_graph(2)
    t = vertex_cover_tour(edge)
    assert t.z == 0 and is_vertex_cover(edge, t.vertex_stops())
    p4 = path_graph(4)
    t = vertex_cover_tour(p4)
    assert {1, 2} <= t.vertex_stops() and tour_length(t) == 2


def test_vertex_cover_tours_are_one_tours():
    for g in all_connected_up_to(5):
        t = vertex_cover_tour(g)
        assert is_vertex_cover(g, t.vertex_stops())
        assert is_delta_tour(make_nice(t), 1)
