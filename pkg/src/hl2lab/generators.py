"""Deterministic graph generators.

All randomness comes from numpy's PCG64 bit generator seeded through a
``SeedSequence`` built from ``(seed, stream_id, attempt)``. PCG64 and
SeedSequence are specified bit-for-bit by numpy and produce identical streams
on every platform, so a given ``(params, seed)`` always yields the same graph.
"""

from __future__ import annotations

import numpy as np

from hl2lab.errors import GenerationFailed, InvalidParams
from hl2lab.graph import Graph

MAX_RESTARTS = 1000

# stream ids keep generators from sharing a random stream for the same seed
_STREAM_RR = 1
_STREAM_ER = 2
STREAM_BFS = 3


def make_rng(seed: int, stream: int = 0, attempt: int = 0) -> np.random.Generator:
    if not 0 <= int(seed) < 2**64:
        raise InvalidParams(f"seed must be a 64-bit unsigned integer, got {seed}")
    ss = np.random.SeedSequence([int(seed), int(stream), int(attempt)])
    return np.random.Generator(np.random.PCG64(ss))


def make_complete(n: int) -> Graph:
    if n < 1:
        raise InvalidParams(f"complete graph needs n >= 1, got {n}")
    iu = np.triu_indices(n, k=1)
    return Graph.from_edges(n, np.column_stack(iu), label=f"complete:{n}")


def make_cycle(n: int) -> Graph:
    if n < 3:
        raise InvalidParams(f"cycle needs n >= 3, got {n}")
    u = np.arange(n)
    return Graph.from_edges(n, np.column_stack([u, (u + 1) % n]), label=f"cycle:{n}")


def make_petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    spokes = [(i, 5 + i) for i in range(5)]
    return Graph.from_edges(10, outer + inner + spokes, label="petersen")


def make_random_regular(n: int, d: int, seed: int, max_restarts: int = MAX_RESTARTS) -> Graph:
    """Uniform simple d-regular graph from the pairing (configuration) model.

    Each attempt shuffles the ``n*d`` stubs with a fresh generator for
    ``(seed, attempt)`` and pairs consecutive stubs; any loop or repeated
    pair rejects the whole attempt.
    """
    if n < 1 or d < 0 or d >= n or (n * d) % 2:
        raise InvalidParams(f"no simple {d}-regular graph on {n} vertices")
    label = f"rr:{d},{n},{seed}"
    if d == 0:
        return Graph.from_edges(n, [], label=label)
    stubs = np.repeat(np.arange(n, dtype=np.int64), d)
    for attempt in range(max_restarts):
        rng = make_rng(seed, _STREAM_RR, attempt)
        pairs = rng.permutation(stubs).reshape(-1, 2)
        lo = pairs.min(axis=1)
        hi = pairs.max(axis=1)
        if np.any(lo == hi):
            continue
        if np.unique(lo * n + hi).size != lo.size:
            continue
        return Graph.from_edges(n, np.column_stack([lo, hi]), label=label)
    raise GenerationFailed(f"pairing model failed {max_restarts} times for n={n}, d={d}")


def make_erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p): pair ``(u, v)`` with ``u < v`` in lexicographic order is kept
    when the corresponding uniform draw is below ``p``."""
    if n < 1 or not 0.0 <= p <= 1.0:
        raise InvalidParams(f"invalid G(n, p) parameters n={n}, p={p}")
    rng = make_rng(seed, _STREAM_ER)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(iu.size) < p
    return Graph.from_edges(n, np.column_stack([iu[keep], ju[keep]]), label=f"er:{n},{p},{seed}")
