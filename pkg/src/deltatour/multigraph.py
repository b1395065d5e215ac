from __future__ import annotations

from collections import defaultdict
from typing import Hashable, Sequence


class EulerError(ValueError):
    pass


def euler_tour(edges: Sequence[tuple[Hashable, Hashable]], start=None) -> list:
    """Closed walk using every edge of the multigraph exactly once (Hierholzer).

    ``edges`` may repeat pairs.  The result starts and ends at ``start`` (or at
    the first endpoint of the first edge).  An empty edge list gives ``[start]``.
    """
    if not edges:
        return [] if start is None else [start]
    incident: dict = defaultdict(list)
    for idx, (a, b) in enumerate(edges):
        if a == b:
            raise EulerError("loops are not supported")
        incident[a].append(idx)
        incident[b].append(idx)
    for x, ids in incident.items():
        if len(ids) % 2:
            raise EulerError(f"vertex {x} has odd degree")
    if start is None:
        start = edges[0][0]
    if start not in incident:
        raise EulerError("start vertex has no edges")
    used = [False] * len(edges)
    pointer = {x: 0 for x in incident}
    stack = [start]
    walk = []
    while stack:
        x = stack[-1]
        ids = incident[x]
        i = pointer[x]
        while i < len(ids) and used[ids[i]]:
            i += 1
        pointer[x] = i
        if i == len(ids):
            walk.append(stack.pop())
        else:
            e = ids[i]
            used[e] = True
            a, b = edges[e]
            stack.append(b if a == x else a)
    if not all(used):
        raise EulerError("multigraph is not connected")
    walk.reverse()
    return walk
