"""Solve one graph across the whole delta range and compare with the exact optimum."""

from __future__ import annotations

from fractions import Fraction as F

from deltatour import exact_shortest_tour, is_delta_tour, solve
from deltatour.generators import tailed_triangle_graph

g = tailed_triangle_graph()
print(f"graph: n={g.n} edges={[(a + 1, b + 1) for a, b in g.edges]}")
print(f"{'delta':>6} {'regime':>12} {'length':>8} {'exact':>8} {'ratio':>7} {'bound':>8}  lower bounds")
for d in [F(0), F(1, 10), F(1, 4), F(1, 2), F(3, 5), F(9, 10), F(1), F(5, 4), F(5, 3), F(3)]:
    rep = solve(g, d)
    assert is_delta_tour(rep.tour, d)
    opt = exact_shortest_tour(g, d).length
    ratio = "-" if opt == 0 else f"{float(rep.length / opt):.3f}"
    bounds = ", ".join(f"{s}={v}" for s, v in rep.lower_bounds) or "-"
    print(f"{str(d):>6} {rep.regime:>12} {str(rep.length):>8} {str(opt):>8} {ratio:>7} {str(rep.theoretical_ratio):>8}  {bounds}")
