"""Immutable simple undirected graph stored in compressed sparse row form."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable

import numpy as np
import scipy.sparse as sp

from hl2lab.errors import InvalidParams


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Graph:
    """Simple undirected graph on vertices ``0..n-1``.

    Neighbour lists are sorted and stored symmetrically: vertex ``u`` sees
    ``indices[indptr[u]:indptr[u+1]]``. Instances are never mutated after
    construction; use the ``from_*`` constructors rather than the raw
    initializer.
    """

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    label: str = field(default="")

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]] | np.ndarray,
                   label: str = "") -> "Graph":
        """Build a graph from an edge list, rejecting loops and duplicates."""
        if n < 0:
            raise InvalidParams(f"vertex count must be non-negative, got {n}")
        e = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                       dtype=np.int64).reshape(-1, 2)
        if e.size and (e.min() < 0 or e.max() >= n):
            raise InvalidParams("edge endpoint out of range")
        if np.any(e[:, 0] == e[:, 1]):
            raise InvalidParams("self-loops are not allowed")
        lo = np.minimum(e[:, 0], e[:, 1])
        hi = np.maximum(e[:, 0], e[:, 1])
        key = lo * max(n, 1) + hi
        if np.unique(key).size != key.size:
            raise InvalidParams("parallel edges are not allowed")
        return cls._from_canonical(n, lo, hi, label)

    @classmethod
    def from_sparse(cls, a: sp.spmatrix | sp.sparray, label: str = "") -> "Graph":
        """Build from a symmetric 0/1 sparse matrix; the diagonal is ignored."""
        coo = sp.triu(sp.coo_matrix(a), k=1).tocoo()
        keep = coo.data != 0
        return cls._from_canonical(a.shape[0], coo.row[keep].astype(np.int64),
                                   coo.col[keep].astype(np.int64), label)

    @classmethod
    def _from_canonical(cls, n: int, lo: np.ndarray, hi: np.ndarray, label: str) -> "Graph":
        rows = np.concatenate([lo, hi])
        cols = np.concatenate([hi, lo])
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        return cls(n=n, indptr=_frozen(indptr), indices=_frozen(cols.astype(np.int64)),
                   label=label)

    # -- basic accessors ----------------------------------------------------

    @property
    def m(self) -> int:
        return int(self.indices.size // 2)

    @cached_property
    def degree(self) -> np.ndarray:
        return _frozen(np.diff(self.indptr))

    def neighbors(self, u: int) -> np.ndarray:
        return self.indices[self.indptr[u]:self.indptr[u + 1]]

    @cached_property
    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of edges ``u < v`` in lexicographic order."""
        rows = np.repeat(np.arange(self.n, dtype=np.int64), self.degree)
        mask = rows < self.indices
        return _frozen(np.column_stack([rows[mask], self.indices[mask]]))

    def adjacency(self, dtype=np.float64) -> sp.csr_matrix:
        data = np.ones(self.indices.size, dtype=dtype)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    def dense_adjacency(self, dtype=np.float64) -> np.ndarray:
        return self.adjacency(dtype).toarray()

    def is_regular(self) -> bool:
        return self.n == 0 or bool(np.all(self.degree == self.degree[0]))

    def regular_degree(self) -> int | None:
        if self.n and self.is_regular():
            return int(self.degree[0])
        return None

    def with_label(self, label: str) -> "Graph":
        return Graph(self.n, self.indptr, self.indices, label)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n == other.n and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __hash__(self) -> int:
        return hash((self.n, self.indices.tobytes()))

    def __repr__(self) -> str:
        tag = f" {self.label!r}" if self.label else ""
        return f"Graph(n={self.n}, m={self.m}{tag})"
