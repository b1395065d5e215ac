"""Write the two hand-built fixture graphs (and the ring's 1-tour) as files under demos/data/."""

from __future__ import annotations

import json
from pathlib import Path

from deltatour.generators import spoked_ring_graph, spoked_ring_tour, tailed_triangle_graph
from deltatour.graph import format_graph
from deltatour.tours import tour_to_records

out = Path(__file__).parent / "data"
out.mkdir(exist_ok=True)
(out / "spoked_ring.g").write_text(format_graph(spoked_ring_graph(), "15-cycle with a triangle hub and three spokes"))
(out / "spoked_ring_tour.json").write_text(json.dumps(tour_to_records(spoked_ring_tour()), indent=1))
(out / "tailed_triangle.g").write_text(format_graph(tailed_triangle_graph(), "triangle x y z with a two-edge tail u v x"))
print(f"wrote fixtures to {out}")
