"""Adjacency spectra: dense and block-Lanczos eigensolvers, distinct spectra,
and the lift-spectrum prediction rule for regular graphs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from hl2lab.errors import ConvergenceFailure, EmptyGraph, InvalidParams, NotRegular, TooLarge
from hl2lab.graph import Graph

DENSE_CUTOFF = 4096
TIE_BREAKS = ("positive", "negative")


@dataclass(frozen=True)
class EigenSystem:
    """Eigenpairs with ``vectors[:, i]`` belonging to ``values[i]``.

    ``mode`` is ``"full"`` (values descending) or ``"top-k"`` (values in
    magnitude order, see :func:`magnitude_order`).
    """

    values: np.ndarray
    vectors: np.ndarray
    mode: str

    @property
    def k(self) -> int:
        return int(self.values.size)


def _classes(x: np.ndarray, tol: float) -> np.ndarray:
    """Group values whose sorted gaps are all <= tol; ids grow with x."""
    if x.size == 0:
        return np.zeros(0, dtype=np.int64)
    order = np.argsort(x, kind="stable")
    jumps = np.concatenate([[0], (np.diff(x[order]) > tol).astype(np.int64)])
    ids = np.empty(x.size, dtype=np.int64)
    ids[order] = np.cumsum(jumps)
    return ids


def _cluster_tol(values: np.ndarray) -> float:
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    return 1e-8 * max(1.0, scale)


def canonical_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip each column so that its first largest-magnitude entry is positive."""
    out = np.array(vectors, dtype=np.float64, copy=True)
    if out.size == 0:
        return out
    mag = np.abs(out)
    peak = mag.max(axis=0)
    first = np.argmax(mag >= peak - 1e-10, axis=0)
    signs = np.sign(out[first, np.arange(out.shape[1])])
    signs[signs == 0] = 1.0
    return out * signs


def magnitude_order(values: np.ndarray, tie_break: str = "positive") -> np.ndarray:
    """Indices sorting eigenvalues by |value| descending.

    Equal magnitudes (within 1e-8 relative) go to the algebraically larger
    value first (``tie_break="positive"``) or the smaller one
    (``"negative"``); remaining ties keep their position in ``values``.
    """
    if tie_break not in TIE_BREAKS:
        raise InvalidParams(f"tie_break must be one of {TIE_BREAKS}, got {tie_break!r}")
    values = np.asarray(values, dtype=np.float64)
    tol = _cluster_tol(values)
    mag = _classes(np.abs(values), tol)
    alg = _classes(values, tol)
    alg_key = -alg if tie_break == "positive" else alg
    idx = np.arange(values.size)
    return np.lexsort((idx, alg_key, -mag))


def full_spectrum(g: Graph, dense_cutoff: int = DENSE_CUTOFF) -> EigenSystem:
    """All eigenpairs via LAPACK ``eigh``, values descending.

    Within a degenerate eigenvalue the solver's own vector order is kept, and
    every vector gets the sign convention of :func:`canonical_signs`.
    """
    if g.n > dense_cutoff:
        raise TooLarge(f"{g.n} vertices exceeds dense cutoff {dense_cutoff}; use top_k_eigenpairs")
    if g.n == 0:
        return EigenSystem(np.zeros(0), np.zeros((0, 0)), "full")
    w, v = np.linalg.eigh(g.dense_adjacency())
    cls = _classes(w, _cluster_tol(w))
    order = np.lexsort((np.arange(w.size), -cls))
    return EigenSystem(w[order], canonical_signs(v[:, order]), "full")


def select_top_k(es: EigenSystem, k: int, tie_break: str = "positive") -> EigenSystem:
    order = magnitude_order(es.values, tie_break)[:k]
    return EigenSystem(es.values[order], es.vectors[:, order], "top-k")


def top_k_eigenpairs(g: Graph, k: int, tie_break: str = "positive",
                     dense_cutoff: int = DENSE_CUTOFF, tol: float = 1e-8,
                     seed: int = 0) -> EigenSystem:
    """The ``min(k, n)`` eigenpairs of largest magnitude.

    Graphs up to ``dense_cutoff`` vertices are truncated from
    :func:`full_spectrum`; larger ones go through :func:`block_lanczos`.
    """
    if k < 1:
        raise InvalidParams("k must be at least 1")
    if g.n <= dense_cutoff:
        return select_top_k(full_spectrum(g, dense_cutoff=max(dense_cutoff, g.n)), k, tie_break)
    return block_lanczos(g.adjacency(), min(k, g.n), tie_break=tie_break, tol=tol, seed=seed)


def block_lanczos(a, k: int, tie_break: str = "positive", tol: float = 1e-8, seed: int = 0,
                  block: int | None = None, max_dim: int | None = None,
                  max_restarts: int = 30) -> EigenSystem:
    """Largest-magnitude eigenpairs of a symmetric operator.

    Block Krylov iteration with full (twice-applied) reorthogonalization and
    Rayleigh-Ritz extraction. The block size bounds the multiplicity that can
    be resolved, so it defaults to ``k + 4``. When the basis reaches
    ``max_dim`` it is restarted from the current best Ritz vectors. Converged
    when every wanted pair has ``||A y - theta y|| <= tol * ||A||``.
    """
    from hl2lab.generators import make_rng

    n = a.shape[0]
    k = min(k, n)
    p = min(n, block or k + 4)
    max_dim = min(n, max_dim or max(12 * p, 160))
    rng = make_rng(seed, stream=4)
    q, _ = np.linalg.qr(rng.standard_normal((n, p)))
    norm_est = 0.0

    for _ in range(max_restarts + 1):
        basis = [q]
        images = [np.asarray(a @ q)]
        while True:
            v = np.hstack(basis)
            av = np.hstack(images)
            t = v.T @ av
            t = 0.5 * (t + t.T)
            theta, y = np.linalg.eigh(t)
            norm_est = max(norm_est, float(np.max(np.abs(theta))))
            pick = magnitude_order(theta, tie_break)[:k]
            ritz = v @ y[:, pick]
            resid = np.linalg.norm(av @ y[:, pick] - ritz * theta[pick], axis=0)
            if v.shape[1] >= k and np.all(resid <= tol * max(norm_est, 1.0)):
                vals = theta[pick]
                vecs = canonical_signs(ritz)
                order = magnitude_order(vals, tie_break)
                return EigenSystem(vals[order], vecs[:, order], "top-k")
            if v.shape[1] >= max_dim:
                keep = magnitude_order(theta, tie_break)[:p]
                q, _ = np.linalg.qr(v @ y[:, keep])
                break
            w = images[-1].copy()
            for _ in range(2):
                w -= v @ (v.T @ w)
            qn, r = np.linalg.qr(w)
            good = np.abs(np.diag(r)) > 1e-10 * max(norm_est, 1.0)
            qn = qn[:, good]
            room = n - v.shape[1]
            if qn.shape[1] == 0 and room > 0:
                # invariant subspace reached; continue with fresh directions
                fresh = rng.standard_normal((n, min(p, room)))
                for _ in range(2):
                    fresh -= v @ (v.T @ fresh)
                qn, _ = np.linalg.qr(fresh)
            elif room <= 0:
                raise ConvergenceFailure("Krylov basis exhausted without convergence")
            qn = qn[:, :min(qn.shape[1], max_dim - v.shape[1])]
            basis.append(qn)
            images.append(np.asarray(a @ qn))
    raise ConvergenceFailure(f"block Lanczos did not converge after {max_restarts} restarts")


def distinct_eigenvalues(values, tol: float = 1e-6) -> list[float]:
    """Distinct values (descending) after merging clusters within ``tol``.

    Each cluster is represented by the nearest integer when its mean lies
    within ``tol`` of one, else by the mean. Accepts a Graph or any array.
    """
    if isinstance(values, Graph):
        values = full_spectrum(values).values
    x = np.sort(np.asarray(values, dtype=np.float64))[::-1]
    if x.size == 0:
        return []
    breaks = np.flatnonzero(-np.diff(x) > tol) + 1
    out = []
    for chunk in np.split(x, breaks):
        mean = float(chunk.mean())
        r = round(mean)
        out.append(float(r) if abs(mean - r) <= tol else mean)
    return out


def predict_lift_spectrum(spec, d: int, n: int, m: int, variant: str = "corrected") -> np.ndarray:
    """Predicted adjacency spectrum (descending) of the HL'2 lift of a
    ``d``-regular graph with eigenvalues ``spec``.

    The lift is ``N^T N - 2I`` for the incidence matrix ``N`` of the double
    cover, and ``N N^T = d I + A_cover`` has eigenvalues ``d +- lambda``. So
    the lift has ``d - 2 +- lambda`` for every base eigenvalue plus ``-2``
    with multiplicity ``2m - 2n``. When ``2m < 2n`` (``d <= 1``) the surplus
    zero eigenvalues of ``N N^T`` are dropped instead.

    ``variant="displayed"`` returns the alternative set ``{2d - 2 +- lambda}``
    (2n values, no ``-2`` block), kept only for side-by-side reporting.
    """
    spec = np.asarray(spec, dtype=np.float64)
    if spec.size != n or n * d != 2 * m:
        raise NotRegular(f"spectrum of size {spec.size} with n={n}, d={d}, m={m} is not d-regular")
    if m == 0:
        raise EmptyGraph("the HL'2 lift needs at least one edge")
    if variant == "displayed":
        return np.sort(np.concatenate([2 * d - 2 + spec, 2 * d - 2 - spec]))[::-1]
    if variant != "corrected":
        raise InvalidParams(f"unknown variant {variant!r}")
    gram = np.concatenate([d + spec, d - spec])
    surplus = 2 * n - 2 * m
    if surplus > 0:
        gram = gram[np.argsort(np.abs(gram), kind="stable")[surplus:]]
        extra = np.zeros(0)
    else:
        extra = np.full(-surplus, -2.0)
    return np.sort(np.concatenate([gram - 2.0, extra]))[::-1]


def predict_lift_spectrum_for(g: Graph, variant: str = "corrected") -> np.ndarray:
    d = g.regular_degree()
    if d is None:
        raise NotRegular(f"{g!r} is not regular")
    return predict_lift_spectrum(full_spectrum(g).values, d, g.n, g.m, variant)


def predict_tower_spectrum(spec, d: int, n: int, m: int, levels: int) -> list[np.ndarray]:
    """Spectra of lift levels ``1..levels`` of a regular graph, by repeated
    application of the prediction rule (no construction)."""
    out = []
    cur = np.asarray(spec, dtype=np.float64)
    for _ in range(levels):
        cur = predict_lift_spectrum(cur, d, n, m)
        n, d = 2 * m, 2 * d - 2
        m = n * d // 2
        out.append(cur)
    return out
