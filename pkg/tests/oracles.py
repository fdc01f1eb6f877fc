"""Brute-force reference computations used by the tests.

Nothing here imports the package's algorithms; inputs are plain edge lists
or dense matrices so the checks stay independent of the code under test.
"""

from __future__ import annotations

import itertools
from collections import deque

import numpy as np
import scipy.linalg


def dense(n, edges):
    a = np.zeros((n, n))
    for u, v in edges:
        a[u, v] = a[v, u] = 1.0
    return a


def neighbours(n, edges):
    nb = [set() for _ in range(n)]
    for u, v in edges:
        nb[u].add(v)
        nb[v].add(u)
    return nb


def girth(n, edges):
    """Shortest cycle length by BFS from every vertex (inf if acyclic)."""
    nb = neighbours(n, edges)
    best = float("inf")
    for s in range(n):
        dist = {s: 0}
        parent = {s: -1}
        q = deque([s])
        while q:
            u = q.popleft()
            for w in nb[u]:
                if w not in dist:
                    dist[w] = dist[u] + 1
                    parent[w] = u
                    q.append(w)
                elif parent[u] != w:
                    best = min(best, dist[u] + dist[w] + 1)
    return best


def isomorphic(n1, e1, n2, e2):
    """Backtracking isomorphism test for small graphs."""
    if n1 != n2 or len(e1) != len(e2):
        return False
    a = neighbours(n1, e1)
    b = neighbours(n2, e2)
    if sorted(map(len, a)) != sorted(map(len, b)):
        return False
    mapping = {}
    used = set()

    def extend(u):
        if u == n1:
            return True
        for v in range(n2):
            if v in used or len(a[u]) != len(b[v]):
                continue
            if all((mapping[w] in b[v]) == (w in a[u]) for w in mapping):
                mapping[u] = v
                used.add(v)
                if extend(u + 1):
                    return True
                del mapping[u]
                used.discard(v)
        return False

    return extend(0)


def closed_walks(n, edges, length):
    """Number of closed walks of the given length, by explicit enumeration."""
    nb = [sorted(s) for s in neighbours(n, edges)]
    count = 0
    for start in range(n):
        frontier = {start: 1}
        for _ in range(length):
            nxt = {}
            for u, c in frontier.items():
                for w in nb[u]:
                    nxt[w] = nxt.get(w, 0) + c
            frontier = nxt
        count += frontier.get(start, 0)
    return count


def closed_4_walks_enumerated(n, edges):
    """Closed 4-walks by enumerating every vertex sequence (n <= ~15)."""
    nb = neighbours(n, edges)
    total = 0
    for v0, v1, v2, v3 in itertools.product(range(n), repeat=4):
        if v1 in nb[v0] and v2 in nb[v1] and v3 in nb[v2] and v0 in nb[v3]:
            total += 1
    return total


def triangles(n, edges):
    nb = neighbours(n, edges)
    return sum(1 for a, b, c in itertools.combinations(range(n), 3)
               if b in nb[a] and c in nb[a] and c in nb[b])


def clustering(n, edges):
    nb = neighbours(n, edges)
    vals = []
    for v in range(n):
        d = len(nb[v])
        if d < 2:
            vals.append(0.0)
            continue
        links = sum(1 for x, y in itertools.combinations(sorted(nb[v]), 2) if y in nb[x])
        vals.append(links / (d * (d - 1) / 2))
    return sum(vals) / n if n else 0.0


def components(n, edges):
    nb = neighbours(n, edges)
    seen = set()
    count = 0
    for s in range(n):
        if s in seen:
            continue
        count += 1
        stack = [s]
        seen.add(s)
        while stack:
            u = stack.pop()
            for w in nb[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
    return count


def line_graph_edges(n, edges):
    """Line graph by pairwise comparison of edges (edges in given order)."""
    out = []
    for i, j in itertools.combinations(range(len(edges)), 2):
        if set(edges[i]) & set(edges[j]):
            out.append((i, j))
    return len(edges), out


def expm_apply(a, psi, t):
    return scipy.linalg.expm(-1j * t * a) @ psi


def all_simple_graphs(n):
    """Every labelled simple graph on n vertices (use for n <= 5)."""
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield [p for i, p in enumerate(pairs) if mask >> i & 1]
