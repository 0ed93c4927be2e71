"""Boolean square and Cartesian skeleton."""

from __future__ import annotations

from .errors import NotABooleanSquareEdge
from .graph import Graph, build_graph


def boolean_square(g: Graph) -> Graph:
    """``u ~ v`` iff ``u != v`` and the two share a neighbour."""
    a = g.matrix.astype(int)
    common = (a @ a) > 0
    edges = [(u, v) for u in range(g.order) for v in range(u + 1, g.order) if common[u, v]]
    return build_graph(g.order, edges)


def _dispensable(g: Graph, u: int, v: int) -> bool:
    nu, nv = g.neighbors(u), g.neighbors(v)
    nuv = nu & nv
    for w in range(g.order):
        nw = g.neighbors(w)
        left = nuv < (nu & nw) or nu < nw < nv
        right = nuv < (nv & nw) or nv < nw < nu
        if left and right:
            return True
    return False


def dispensable(g: Graph, u: int, v: int) -> bool:
    """Whether the edge ``uv`` of the Boolean square is dispensable in ``g``."""
    if u == v or not (g.neighbors(u) & g.neighbors(v)):
        raise NotABooleanSquareEdge(f"({u}, {v}) is not an edge of the Boolean square")
    return _dispensable(g, u, v)


def cartesian_skeleton(g: Graph) -> Graph:
    b = boolean_square(g)
    keep = [(u, v) for u, v in b.edges() if not _dispensable(g, u, v)]
    return build_graph(g.order, keep)
