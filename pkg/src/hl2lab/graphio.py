"""Plain-text edge-list format.

::

    # comments start with '#', blank lines are ignored
    n m
    u v        (m lines, 0 <= u, v < n)

Serialization writes the header and the edges sorted lexicographically with
``u < v``, LF line endings.
"""

from __future__ import annotations

from pathlib import Path

from hl2lab.errors import ParseError
from hl2lab.graph import Graph


def _ints(tokens: list[str], lineno: int) -> list[int]:
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise ParseError(f"expected integers, got {' '.join(tokens)!r}", lineno) from None


def parse_graph(text: str, label: str = "") -> Graph:
    header = None
    edges: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError(f"expected two fields, got {len(tokens)}", lineno)
        a, b = _ints(tokens, lineno)
        if header is None:
            if a < 0 or b < 0:
                raise ParseError("negative header value", lineno)
            header = (a, b)
            continue
        n = header[0]
        if not (0 <= a < n and 0 <= b < n):
            raise ParseError(f"vertex id out of range 0..{n - 1}", lineno)
        if a == b:
            raise ParseError(f"self-loop at vertex {a}", lineno)
        key = (min(a, b), max(a, b))
        if key in seen:
            raise ParseError(f"duplicate edge {key} (first on line {seen[key]})", lineno)
        seen[key] = lineno
        edges.append(key)
    if header is None:
        raise ParseError("missing 'n m' header")
    if len(edges) != header[1]:
        raise ParseError(f"header declares {header[1]} edges, found {len(edges)}")
    return Graph.from_edges(header[0], edges, label=label)


def serialize_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges.tolist())
    return "\n".join(lines) + "\n"


def read_graph(path: str | Path) -> Graph:
    p = Path(path)
    return parse_graph(p.read_text(encoding="utf-8"), label=f"file:{p.name}")


def write_graph(g: Graph, path: str | Path) -> None:
    Path(path).write_bytes(serialize_graph(g).encode("utf-8"))
