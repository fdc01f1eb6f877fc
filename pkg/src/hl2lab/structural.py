"""Closed-walk and triangle statistics of a graph."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from hl2lab.graph import Graph

CLUSTERING_CONVENTION = "vertices with degree < 2 contribute 0"


def _square(g: Graph):
    a = g.adjacency(dtype=np.int64)
    return (a @ a).tocsr()


def trace_a4(g: Graph) -> int:
    """Closed 4-walks, ``Tr(A^4) = ||A^2||_F^2``, accumulated exactly."""
    data = _square(g).data
    if data.size == 0:
        return 0
    # float estimate decides whether int64 accumulation is safe
    if float(np.dot(data.astype(np.float64), data)) < 2.0**62:
        return int(np.dot(data, data))
    return sum(int(x) * int(x) for x in data.tolist())


def triangles_per_vertex_counts(g: Graph) -> np.ndarray:
    """Triangles through each vertex: ``diag(A^3) / 2``."""
    a = g.adjacency(dtype=np.int64)
    a2 = _square(g)
    return np.asarray(a2.multiply(a).sum(axis=1)).ravel() // 2


def triangle_count(g: Graph) -> int:
    """Sum over edges of common-neighbour counts, divided by 3."""
    total = 0
    indptr, indices = g.indptr, g.indices
    for u, v in g.edges.tolist():
        nu = indices[indptr[u]:indptr[u + 1]]
        nv = indices[indptr[v]:indptr[v + 1]]
        total += np.intersect1d(nu, nv, assume_unique=True).size
    return total // 3


def average_clustering(g: Graph) -> float:
    if g.n == 0:
        return 0.0
    tri = triangles_per_vertex_counts(g).astype(np.float64)
    deg = g.degree.astype(np.float64)
    pairs = deg * (deg - 1) / 2
    local = np.divide(tri, pairs, out=np.zeros_like(tri), where=pairs > 0)
    return float(local.mean())


@dataclass
class StructuralReport:
    n: int
    m: int
    trace_a4: int
    trace_a4_per_vertex: float
    avg_clustering: float
    triangle_count: int
    triangles_per_vertex: float
    clustering_convention: str = CLUSTERING_CONVENTION

    def to_dict(self) -> dict:
        return asdict(self)


def structural_report(g: Graph) -> StructuralReport:
    t4 = trace_a4(g)
    tri = triangle_count(g)
    return StructuralReport(
        n=g.n, m=g.m, trace_a4=t4,
        trace_a4_per_vertex=t4 / g.n if g.n else 0.0,
        avg_clustering=average_clustering(g),
        triangle_count=tri,
        triangles_per_vertex=tri / g.n if g.n else 0.0,
    )
