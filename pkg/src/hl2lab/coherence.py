"""Coherence measures over the top-k adjacency eigenstates of a graph."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from hl2lab.ctqw import WalkStats, default_grid, return_series, series_stats
from hl2lab.errors import InvalidParams, NotHermitian, NotPSD
from hl2lab.graph import Graph
from hl2lab.spectral import (
    DENSE_CUTOFF,
    EigenSystem,
    _classes,
    _cluster_tol,
    full_spectrum,
    magnitude_order,
    select_top_k,
    top_k_eigenpairs,
)

TRACE_MODES = ("paper", "unit")
LC_DIVISORS = ("used", "requested")
ENTROPY_FLOOR = 1e-12


def ipr(psi: np.ndarray) -> float:
    return float(np.sum(np.abs(psi) ** 4))


@dataclass(frozen=True)
class DensityMatrix:
    """``rho = weight * sum_i |psi_i><psi_i|`` over ``vectors[:, i]``.

    In ``"paper"`` mode the weight is ``1 / k_requested`` even when fewer
    than ``k`` eigenvectors exist, giving trace ``k_used / k_requested``;
    ``"unit"`` mode uses ``1 / k_used``.
    """

    vectors: np.ndarray
    k_requested: int
    trace_mode: str = "paper"

    @property
    def k_used(self) -> int:
        return int(self.vectors.shape[1])

    @property
    def weight(self) -> float:
        return 1.0 / (self.k_requested if self.trace_mode == "paper" else self.k_used)

    @cached_property
    def rho(self) -> np.ndarray:
        return self.weight * (self.vectors @ self.vectors.conj().T)

    def diagonal(self) -> np.ndarray:
        return self.weight * np.sum(np.abs(self.vectors) ** 2, axis=1)

    def eigenvalues(self) -> np.ndarray:
        """Nonzero spectrum from the small Gram matrix ``weight * V^H V``."""
        gram = self.vectors.conj().T @ self.vectors
        return self.weight * np.linalg.eigvalsh(0.5 * (gram + gram.conj().T))

    def trace(self) -> float:
        return float(np.sum(self.diagonal()))


def _eigs(g: Graph, k: int, tie_break: str, dense_cutoff: int) -> EigenSystem:
    return top_k_eigenpairs(g, k, tie_break=tie_break, dense_cutoff=dense_cutoff)


def avg_ipr(g: Graph, k: int = 5, tie_break: str = "positive",
            dense_cutoff: int = DENSE_CUTOFF) -> float:
    es = _eigs(g, k, tie_break, dense_cutoff)
    return float(np.mean(np.sum(es.vectors ** 4, axis=0)))


def density_from_eigensystem(es: EigenSystem, k: int, trace_mode: str = "paper") -> DensityMatrix:
    if trace_mode not in TRACE_MODES:
        raise InvalidParams(f"trace_mode must be one of {TRACE_MODES}")
    return DensityMatrix(vectors=es.vectors[:, :k], k_requested=k, trace_mode=trace_mode)


def mixed_density(g: Graph, k: int = 5, tie_break: str = "positive", trace_mode: str = "paper",
                  dense_cutoff: int = DENSE_CUTOFF) -> DensityMatrix:
    return density_from_eigensystem(_eigs(g, k, tie_break, dense_cutoff), k, trace_mode)


def purity(rho) -> float:
    if isinstance(rho, DensityMatrix):
        mu = rho.eigenvalues()
        return float(np.sum(mu ** 2))
    r = np.asarray(rho)
    return float(np.real(np.sum(r * r.conj().T)))


def von_neumann_entropy(mu: np.ndarray) -> float:
    """``-sum mu log2 mu`` over eigenvalues above 1e-12."""
    mu = np.asarray(mu, dtype=np.float64)
    mu = mu[mu > ENTROPY_FLOOR]
    return float(-np.sum(mu * np.log2(mu)))


def relative_entropy_coherence(rho) -> float:
    """``S(diag rho) - S(rho)`` in bits, with off-diagonals zeroed in the vertex basis.

    Trace-deficient matrices are not renormalized. Raw arrays are checked
    for Hermiticity and positivity first.
    """
    if isinstance(rho, DensityMatrix):
        mu = rho.eigenvalues()
        diag = rho.diagonal()
    else:
        r = np.asarray(rho)
        if r.ndim != 2 or r.shape[0] != r.shape[1]:
            raise NotHermitian("density matrix must be square")
        if not np.allclose(r, r.conj().T, atol=1e-10, rtol=0):
            raise NotHermitian("density matrix is not Hermitian")
        mu = np.linalg.eigvalsh(0.5 * (r + r.conj().T))
        if mu.size and mu.min() < -1e-10:
            raise NotPSD(f"density matrix has eigenvalue {mu.min():.3e}")
        diag = np.real(np.diag(r))
    return von_neumann_entropy(diag) - von_neumann_entropy(mu)


def support_sizes(vectors: np.ndarray, threshold: float = 1e-6) -> np.ndarray:
    return np.sum(np.abs(vectors) > threshold, axis=0)


def log_coherence_from_vectors(vectors: np.ndarray, k: int, threshold: float = 1e-6,
                               divisor: str = "used") -> float:
    if divisor not in LC_DIVISORS:
        raise InvalidParams(f"divisor must be one of {LC_DIVISORS}")
    sizes = support_sizes(vectors, threshold)
    total = float(np.sum(np.log2(np.maximum(sizes, 1))))
    return total / (vectors.shape[1] if divisor == "used" else k)


def log_coherence(g: Graph, k: int = 5, threshold: float = 1e-6, tie_break: str = "positive",
                  divisor: str = "used", dense_cutoff: int = DENSE_CUTOFF) -> float:
    """Mean of ``log2 |support|`` over the top-k eigenvectors, where the
    support holds entries above ``threshold`` in magnitude."""
    es = _eigs(g, k, tie_break, dense_cutoff)
    return log_coherence_from_vectors(es.vectors, k, threshold, divisor)


def basis_sensitive(values: np.ndarray, picked: np.ndarray) -> bool:
    """True when an eigenvalue at one of the ``picked`` positions of
    ``values`` is degenerate, so per-vector metrics depend on which basis the
    solver chose for that eigenspace."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        return False
    cls = _classes(values, _cluster_tol(values))
    return bool(np.any(np.bincount(cls)[cls[picked]] > 1))


@dataclass
class CoherenceReport:
    graph: str
    n: int
    level: int
    k: int
    avg_ipr: float
    purity: float
    rel_entropy: float
    log_coherence: float
    walk: WalkStats | None
    basis_sensitive: bool
    trace_mode: str = "paper"
    tie_break: str = "positive"

    def to_dict(self) -> dict:
        w = self.walk
        return {
            "graph": self.graph,
            "n": self.n,
            "level": self.level,
            "k": self.k,
            "avg_ipr": self.avg_ipr,
            "purity": self.purity,
            "rel_entropy_bits": self.rel_entropy,
            "log_coherence_bits": self.log_coherence,
            "mean_return": w.mean if w else None,
            "peak": w.peak if w else None,
            "revival_peak": w.revival_peak if w else None,
            "std": w.std if w else None,
            "basis_sensitive": self.basis_sensitive,
            "trace_mode": self.trace_mode,
            "tie_break": self.tie_break,
        }


def coherence_report(g: Graph, k: int = 5, level: int = 0, *, walk: bool = True,
                     T: float | None = None, steps: int | None = None, start: int = 0,
                     t_min: float = 1.0, threshold: float = 1e-6, tie_break: str = "positive",
                     trace_mode: str = "paper", lc_divisor: str = "used",
                     dense_cutoff: int = DENSE_CUTOFF) -> CoherenceReport:
    """One table row: eigenstate metrics plus return-walk statistics.

    ``T``/``steps`` default to :func:`default_grid` for ``level``.
    """
    if g.n <= dense_cutoff:
        full = full_spectrum(g, dense_cutoff=dense_cutoff)
        picked = magnitude_order(full.values, tie_break)[:k]
        es = select_top_k(full, k, tie_break)
        sensitive = basis_sensitive(full.values, picked)
    else:
        # only the top-k values are known; a split eigenspace at the cut goes unseen
        es = top_k_eigenpairs(g, k, tie_break=tie_break, dense_cutoff=dense_cutoff)
        sensitive = basis_sensitive(es.values, np.arange(es.k))
    rho = density_from_eigensystem(es, k, trace_mode)
    stats = None
    if walk:
        d_T, d_steps = default_grid(level)
        s = return_series(g, start, T if T is not None else d_T, steps if steps is not None else d_steps)
        stats = series_stats(s, t_min=t_min)
    return CoherenceReport(
        graph=g.label, n=g.n, level=level, k=k,
        avg_ipr=float(np.mean(np.sum(np.abs(es.vectors) ** 4, axis=0))),
        purity=purity(rho),
        rel_entropy=relative_entropy_coherence(rho),
        log_coherence=log_coherence_from_vectors(es.vectors, k, threshold, lc_divisor),
        walk=stats,
        basis_sensitive=sensitive,
        trace_mode=trace_mode, tie_break=tie_break,
    )
