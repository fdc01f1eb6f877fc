"""Bipartite double cover, line graph, the symmetric HL'2 lift and lift towers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np
import scipy.sparse as sp

from hl2lab.analysis import connected_components
from hl2lab.errors import BudgetExceeded, EmptyGraph
from hl2lab.graph import Graph

DEFAULT_BUDGET = 100_000

LEFT, RIGHT = 0, 1


@dataclass(frozen=True)
class BipartiteCover:
    """Double cover on ``2n`` vertices: left copy ``u -> u``, right copy ``v -> n + v``.

    ``arcs[i] = (u, v)`` records that cover edge ``i`` (in ``graph.edges``
    order) joins ``u'`` to ``v''`` and came from base edge ``{u, v}``.
    """

    graph: Graph
    side: np.ndarray
    arcs: np.ndarray
    base_n: int

    def base_edge(self, i: int) -> tuple[int, int]:
        u, v = self.arcs[i]
        return (min(u, v), max(u, v))


def bipartite_double_cover(g: Graph) -> BipartiteCover:
    n = g.n
    e = g.edges
    arcs = np.concatenate([e, e[:, ::-1]])
    arcs = arcs[np.lexsort((arcs[:, 1], arcs[:, 0]))]
    cover_edges = np.column_stack([arcs[:, 0], arcs[:, 1] + n])
    cover = Graph.from_edges(2 * n, cover_edges, label=f"cover({g.label})")
    side = np.repeat(np.array([LEFT, RIGHT], dtype=np.int8), n)
    arcs.setflags(write=False)
    side.setflags(write=False)
    return BipartiteCover(graph=cover, side=side, arcs=arcs, base_n=n)


def incidence_matrix(g: Graph) -> sp.csc_matrix:
    """Vertex-by-edge 0/1 incidence matrix, columns in ``g.edges`` order."""
    e = g.edges
    m = e.shape[0]
    rows = e.reshape(-1)
    cols = np.repeat(np.arange(m), 2)
    return sp.csc_matrix((np.ones(2 * m, dtype=np.int64), (rows, cols)), shape=(g.n, m))


def line_graph(b: Graph, label: str | None = None) -> Graph:
    """Line graph with vertex ``i`` standing for ``b.edges[i]``.

    Computed as the off-diagonal part of ``N^T N`` for the incidence matrix
    ``N``; for a simple graph two distinct edges share at most one endpoint,
    so every off-diagonal entry is 0 or 1.
    """
    inc = incidence_matrix(b)
    gram = (inc.T @ inc).tocsr()
    gram.setdiag(0)
    gram.eliminate_zeros()
    return Graph.from_sparse(gram, label=label if label is not None else f"L({b.label})")


def hl2_lift(g: Graph) -> Graph:
    if g.m == 0:
        raise EmptyGraph("the HL'2 lift needs at least one edge")
    cover = bipartite_double_cover(g)
    return line_graph(cover.graph, label=f"hl2({g.label})")


def lift_provenance(g: Graph) -> np.ndarray:
    """Row ``i`` is the arc ``(u, v)`` behind vertex ``i`` of ``hl2_lift(g)``:
    the cover edge ``u' -- v''`` coming from base edge ``{u, v}``."""
    return bipartite_double_cover(g).arcs


# -- towers -------------------------------------------------------------------


@dataclass
class TowerLevel:
    level: int
    n: int
    m: int
    degree_min: int
    degree_max: int
    components: int | None = None
    predicted: bool = False
    distinct_eigenvalues: list[float] | None = None
    coherence: Any = None
    structural: Any = None

    @property
    def regular(self) -> bool:
        return self.degree_min == self.degree_max

    @property
    def degree(self) -> int | None:
        return self.degree_min if self.regular else None


@dataclass
class TowerSummary:
    base_label: str
    levels: list[TowerLevel] = field(default_factory=list)

    def check_recurrence(self) -> list[bool]:
        """Per consecutive pair: ``V_{r+1} == 2 E_r`` and, for regular levels,
        ``d_{r+1} == 2 d_r - 2`` and ``E_{r+1} == V_{r+1} d_{r+1} / 2``."""
        ok = []
        for a, b in zip(self.levels, self.levels[1:]):
            good = b.n == 2 * a.m
            if a.regular and b.regular and a.degree_min >= 1:
                good = good and b.degree_min == 2 * a.degree_min - 2
                good = good and 2 * b.m == b.n * b.degree_min
            ok.append(good)
        return ok

    def rows(self) -> list[dict[str, Any]]:
        checks = [True] + self.check_recurrence()
        out = []
        for lvl, chk in zip(self.levels, checks):
            out.append({
                "level": lvl.level,
                "vertices": lvl.n,
                "edges": lvl.m,
                "degree": lvl.degree if lvl.regular else f"{lvl.degree_min}-{lvl.degree_max}",
                "components": "" if lvl.components is None else lvl.components,
                "predicted": lvl.predicted,
                "recurrence_ok": chk,
            })
        return out


def _level_row(level: int, g: Graph) -> TowerLevel:
    deg = g.degree
    ncomp, _ = connected_components(g)
    return TowerLevel(level=level, n=g.n, m=g.m,
                      degree_min=int(deg.min()) if g.n else 0,
                      degree_max=int(deg.max()) if g.n else 0,
                      components=ncomp)


def predict_tower_sizes(g: Graph, start_level: int, levels: int) -> list[TowerLevel]:
    """Sizes of lift levels ``start_level+1 .. levels`` from level ``start_level``
    graph ``g`` without building them.

    Regular graphs follow ``V' = 2E``, ``d' = 2d - 2``, ``E' = V' d' / 2``
    indefinitely. For irregular graphs only the next level is determined
    (``E' = sum_v d_v (d_v - 1)``); later levels are omitted.
    """
    out: list[TowerLevel] = []
    d = g.regular_degree()
    if d is not None:
        n, m = g.n, g.m
        for r in range(start_level + 1, levels + 1):
            n, d = 2 * m, 2 * d - 2
            m = n * d // 2
            out.append(TowerLevel(level=r, n=n, m=m, degree_min=d, degree_max=d, predicted=True))
        return out
    if levels > start_level:
        deg = g.degree.astype(np.int64)
        # lift vertex for arc (u, v) has degree deg(u) + deg(v) - 2
        e = g.edges
        ld = deg[e[:, 0]] + deg[e[:, 1]] - 2
        out.append(TowerLevel(level=start_level + 1, n=2 * g.m, m=int(np.sum(deg * (deg - 1))),
                              degree_min=int(ld.min()), degree_max=int(ld.max()), predicted=True))
    return out


def hl2_tower(g: Graph, levels: int, budget: int = DEFAULT_BUDGET) -> tuple[list[Graph], TowerSummary]:
    """Build ``[G_0, ..., G_levels]`` with ``G_{r+1} = HL'2(G_r)``.

    Raises ``BudgetExceeded`` before building a level whose vertex count
    (``2 E_r``) would exceed ``budget``; the exception carries the graphs and
    summary built so far plus predicted sizes for the remaining levels.
    """
    if levels < 0:
        raise ValueError("levels must be non-negative")
    graphs = [g]
    summary = TowerSummary(base_label=g.label, levels=[_level_row(0, g)])
    for r in range(1, levels + 1):
        prev = graphs[-1]
        if 2 * prev.m > budget:
            predicted = predict_tower_sizes(prev, r - 1, levels)
            raise BudgetExceeded(
                f"level {r} would have {2 * prev.m} vertices (budget {budget})",
                built=(graphs, summary), predicted=predicted)
        nxt = hl2_lift(prev)
        if nxt.n != 2 * prev.m:
            raise AssertionError(f"tower recurrence broken at level {r}")
        graphs.append(nxt)
        summary.levels.append(_level_row(r, nxt))
    return graphs, summary
