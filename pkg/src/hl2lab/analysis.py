"""Connectivity, bipartiteness and randomized BFS sampling."""

from __future__ import annotations

from collections import deque

import numpy as np
from scipy.sparse.csgraph import connected_components as _cc

from hl2lab.errors import InvalidParams
from hl2lab.graph import Graph


def connected_components(g: Graph) -> tuple[int, np.ndarray]:
    """Component count and labels; component ids are numbered 0, 1, ... in
    order of each component's smallest vertex."""
    if g.n == 0:
        return 0, np.zeros(0, dtype=np.int64)
    count, raw = _cc(g.adjacency(), directed=False)
    _, first = np.unique(raw, return_index=True)
    remap = np.empty(count, dtype=np.int64)
    remap[raw[np.sort(first)]] = np.arange(count)
    return int(count), remap[raw]


def is_bipartite(g: Graph) -> tuple[bool, np.ndarray | list[int]]:
    """BFS 2-colouring.

    Returns ``(True, colouring)`` with a 0/1 array, or ``(False, cycle)``
    where ``cycle`` is a list of vertices forming an odd cycle.
    """
    color = np.full(g.n, -1, dtype=np.int64)
    parent = np.full(g.n, -1, dtype=np.int64)
    depth = np.zeros(g.n, dtype=np.int64)
    indptr, indices = g.indptr, g.indices
    for root in range(g.n):
        if color[root] >= 0:
            continue
        color[root] = 0
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for w in indices[indptr[u]:indptr[u + 1]]:
                if color[w] < 0:
                    color[w] = 1 - color[u]
                    parent[w] = u
                    depth[w] = depth[u] + 1
                    queue.append(int(w))
                elif color[w] == color[u]:
                    return False, _odd_cycle(u, int(w), parent, depth)
    return True, color


def _odd_cycle(u: int, w: int, parent: np.ndarray, depth: np.ndarray) -> list[int]:
    left, right = [u], [w]
    a, b = u, w
    while depth[a] > depth[b]:
        a = int(parent[a])
        left.append(a)
    while depth[b] > depth[a]:
        b = int(parent[b])
        right.append(b)
    while a != b:
        a, b = int(parent[a]), int(parent[b])
        left.append(a)
        right.append(b)
    return left + right[-2::-1]


def induced_subgraph(g: Graph, vertices: np.ndarray, label: str = "") -> Graph:
    vertices = np.asarray(vertices, dtype=np.int64)
    pos = np.full(g.n, -1, dtype=np.int64)
    pos[vertices] = np.arange(vertices.size)
    e = g.edges
    keep = (pos[e[:, 0]] >= 0) & (pos[e[:, 1]] >= 0)
    return Graph.from_edges(vertices.size, pos[e[keep]], label=label)


def bfs_sample(g: Graph, n_max: int, seed: int) -> tuple[Graph, np.ndarray]:
    """Connected induced subgraph of at most ``n_max`` vertices.

    The start vertex is drawn uniformly and each vertex's neighbours are
    visited in a seeded random order. Returns the subgraph and the array
    mapping subgraph vertex ``i`` to its original id (index 0 is the start).
    """
    from hl2lab.generators import STREAM_BFS, make_rng

    if n_max < 1:
        raise InvalidParams("n_max must be at least 1")
    if g.n == 0:
        raise InvalidParams("cannot sample from an empty graph")
    rng = make_rng(seed, STREAM_BFS)
    start = int(rng.integers(g.n))
    seen = {start}
    order = [start]
    queue = deque([start])
    while queue and len(order) < n_max:
        u = queue.popleft()
        nbrs = g.neighbors(u)
        if nbrs.size == 0:
            continue
        for w in rng.permutation(nbrs):
            w = int(w)
            if w in seen:
                continue
            seen.add(w)
            order.append(w)
            queue.append(w)
            if len(order) >= n_max:
                break
    vmap = np.array(order, dtype=np.int64)
    sub = induced_subgraph(g, vmap, label=f"bfs({g.label},{n_max},{seed})")
    return sub, vmap
