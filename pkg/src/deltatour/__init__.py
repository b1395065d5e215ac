"""Shortest delta-tours on graphs whose edges are unit-length continua."""

from __future__ import annotations

from .coverage import covers_edge, coverage_radius, edge_verdicts, is_delta_tour, max_edge_distance
from .discrete import brute_force_shortest_tour, candidate_points, exact_shortest_tour, stop_position_set
from .graph import Graph, GraphError, ParseError, Point, format_graph, make_point, parse_graph, point_distance, read_graph
from .kernels import chinese_postman_tour, christofides_tsp, held_karp_tsp, min_weight_perfect_matching
from .large_delta import build_gamma, domination_equivalence_check, fixed_delta_tour, input_delta_tour
from .lp import solve_tour_lp, vertex_cover_tour
from .regimes import SolveReport, solve
from .tours import Tour, is_nice, make_nice, tour_length

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "GraphError",
    "ParseError",
    "Point",
    "SolveReport",
    "Tour",
    "brute_force_shortest_tour",
    "build_gamma",
    "candidate_points",
    "chinese_postman_tour",
    "christofides_tsp",
    "coverage_radius",
    "covers_edge",
    "domination_equivalence_check",
    "edge_verdicts",
    "exact_shortest_tour",
    "fixed_delta_tour",
    "format_graph",
    "held_karp_tsp",
    "input_delta_tour",
    "is_delta_tour",
    "is_nice",
    "make_nice",
    "make_point",
    "max_edge_distance",
    "min_weight_perfect_matching",
    "parse_graph",
    "point_distance",
    "read_graph",
    "solve",
    "solve_tour_lp",
    "stop_position_set",
    "tour_length",
    "vertex_cover_tour",
]
