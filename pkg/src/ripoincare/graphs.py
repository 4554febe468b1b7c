"""Neighbor graphs over metric measure spaces and discrete upper gradients.

On a finite graph every rectifiable curve is an edge path, so the
max-slope-over-neighbors gradient

    g(x) = max_{y ~ x} |f(x) - f(y)| / d(x, y)

satisfies the path inequality |f(a) - f(b)| <= sum over path edges of
max(g at endpoints) * length, which is the verified discrete analogue of
the upper-gradient property.
"""
from __future__ import annotations

import numpy as np
from scipy.sparse.csgraph import minimum_spanning_tree, shortest_path

from .space import MetricMeasureSpace

__all__ = ["GraphStructure", "neighbor_graph", "discrete_upper_gradient"]


class GraphStructure:
    """Undirected graph induced by a connectivity radius; edge lengths are
    the metric distances.  Must be connected."""

    __slots__ = ("space", "radius", "adjacency")

    def __init__(self, space: MetricMeasureSpace, radius: float) -> None:
        if radius <= 0:
            raise ValueError("connectivity radius must be positive")
        adj = (space.dist > 0) & (space.dist <= radius)
        if space.n > 1:
            comp = shortest_path(adj.astype(float), directed=False, unweighted=True)
            if np.any(np.isinf(comp)):
                raise ValueError("graph is disconnected at this connectivity radius")
        adj.setflags(write=False)
        self.space = space
        self.radius = float(radius)
        self.adjacency = adj

    @property
    def n(self) -> int:
        return self.space.n

    def edges(self) -> list[tuple[int, int, float]]:
        out = []
        for i in range(self.n):
            for j in np.flatnonzero(self.adjacency[i]):
                if j > i:
                    out.append((i, int(j), float(self.space.dist[i, j])))
        return out

    def path_metric(self) -> np.ndarray:
        """All-pairs shortest-path distances along edges."""
        w = np.where(self.adjacency, self.space.dist, 0.0)
        return shortest_path(w, directed=False)


def neighbor_graph(space: MetricMeasureSpace, connect_radius: float | None = None) -> GraphStructure:
    """Graph over the space; the default radius is the largest edge of a
    minimum spanning tree (the smallest radius keeping the graph connected)."""
    if connect_radius is None:
        if space.n == 1:
            return GraphStructure(space, 1.0)
        mst = minimum_spanning_tree(space.dist).toarray()
        connect_radius = float(mst.max()) * (1.0 + 1e-9)
    return GraphStructure(space, connect_radius)


def discrete_upper_gradient(graph: GraphStructure, f) -> np.ndarray:
    """Max slope toward any neighbor, per point (0 where f is constant)."""
    f = np.asarray(f, dtype=float)
    if f.shape != (graph.n,):
        raise ValueError("function vector must assign a value to every point")
    out = np.zeros(graph.n)
    d = graph.space.dist
    for i in range(graph.n):
        nbrs = np.flatnonzero(graph.adjacency[i])
        if nbrs.size:
            out[i] = float(np.max(np.abs(f[i] - f[nbrs]) / d[i, nbrs]))
    return out
