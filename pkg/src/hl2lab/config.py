"""Run configuration: flat ``key = value`` files, CLI overrides and base-graph specs."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any

from hl2lab.errors import InvalidParams
from hl2lab.generators import make_complete, make_cycle, make_erdos_renyi, make_petersen, make_random_regular
from hl2lab.graph import Graph
from hl2lab.graphio import read_graph
from hl2lab.lift import DEFAULT_BUDGET
from hl2lab.spectral import DENSE_CUTOFF, TIE_BREAKS
from hl2lab.coherence import LC_DIVISORS, TRACE_MODES


@dataclass(frozen=True)
class RunConfig:
    base: str = "complete:4"
    levels: int = 3
    level: int | None = None
    T: float | None = None
    steps: int | None = None
    start: int = 0
    t_min: float = 1.0
    k: int = 5
    threshold: float = 1e-6
    tie_break: str = "positive"
    trace_mode: str = "paper"
    lc_divisor: str = "used"
    seed: int = 0
    budget: int = DEFAULT_BUDGET
    walk_budget: int = 10_000
    dense_cutoff: int = DENSE_CUTOFF
    sample: int | None = None
    verify_rule: bool = False
    predict_only: bool = False
    verbose: bool = False
    out: str = "out"

    def validate(self) -> "RunConfig":
        if self.levels < 0:
            raise InvalidParams("levels must be >= 0")
        if self.level is not None and self.level < 0:
            raise InvalidParams("level must be >= 0")
        if self.k < 1:
            raise InvalidParams("k must be >= 1")
        if self.steps is not None and self.steps < 2:
            raise InvalidParams("steps must be >= 2")
        if self.T is not None and self.T <= 0:
            raise InvalidParams("T must be positive")
        if self.sample is not None and self.sample < 1:
            raise InvalidParams("sample must be >= 1")
        if self.tie_break not in TIE_BREAKS:
            raise InvalidParams(f"tie_break must be one of {TIE_BREAKS}")
        if self.trace_mode not in TRACE_MODES:
            raise InvalidParams(f"trace_mode must be one of {TRACE_MODES}")
        if self.lc_divisor not in LC_DIVISORS:
            raise InvalidParams(f"lc_divisor must be one of {LC_DIVISORS}")
        if min(self.budget, self.walk_budget, self.dense_cutoff) < 1:
            raise InvalidParams("budgets must be positive")
        if not 0 <= self.seed < 2**64:
            raise InvalidParams("seed must be a 64-bit unsigned integer")
        parse_base_spec(self.base, self.seed, check_only=True)
        return self

    def canonical(self) -> str:
        """Sorted ``key = value`` text of every field except ``out``."""
        lines = []
        for f in sorted(fields(self), key=lambda f: f.name):
            if f.name == "out":
                continue
            lines.append(f"{f.name} = {_fmt(getattr(self, f.name))}")
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.canonical().encode("utf-8")).hexdigest()[:16]


def _fmt(v: Any) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    return repr(v) if isinstance(v, float) else str(v)


_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(key: str, raw: str) -> Any:
    if key not in _TYPES:
        raise InvalidParams(f"unknown config key {key!r}")
    typ = str(_TYPES[key])
    raw = raw.strip()
    if "None" in typ and raw.lower() in ("none", ""):
        return None
    try:
        if typ.startswith("bool"):
            if raw.lower() in ("1", "true", "yes", "on"):
                return True
            if raw.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(raw)
        if typ.startswith("int"):
            return int(raw)
        if typ.startswith("float"):
            return float(raw)
    except ValueError:
        raise InvalidParams(f"bad value for {key}: {raw!r}") from None
    return raw


def load_config_text(text: str) -> dict[str, Any]:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values: dict[str, Any] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidParams(f"config line {lineno}: expected 'key = value'")
        key, raw = line.split("=", 1)
        key = key.strip().replace("-", "_")
        values[key] = _coerce(key, raw)
    return values


def build_config(path: str | Path | None = None, overrides: dict[str, Any] | None = None) -> RunConfig:
    values: dict[str, Any] = {}
    if path is not None:
        try:
            values.update(load_config_text(Path(path).read_text(encoding="utf-8")))
        except OSError as exc:
            raise InvalidParams(f"cannot read config {path}: {exc}") from None
    for key, v in (overrides or {}).items():
        if v is not None:
            values[key] = v
    return replace(RunConfig(), **values).validate()


def parse_base_spec(spec: str, seed: int = 0, check_only: bool = False) -> Graph | None:
    """``complete:n | petersen | cycle:n | rr:d,n[,seed] | er:n,p[,seed] | file:path``.

    A missing seed falls back to ``seed``.
    """
    family, _, args = spec.partition(":")
    parts = [a.strip() for a in args.split(",")] if args else []
    try:
        if family == "complete" and len(parts) == 1:
            n = int(parts[0])
            maker = lambda: make_complete(n)  # noqa: E731
        elif family == "petersen" and not parts:
            maker = make_petersen
        elif family == "cycle" and len(parts) == 1:
            n = int(parts[0])
            maker = lambda: make_cycle(n)  # noqa: E731
        elif family == "rr" and len(parts) in (2, 3):
            d, n = int(parts[0]), int(parts[1])
            s = int(parts[2]) if len(parts) == 3 else seed
            maker = lambda: make_random_regular(n, d, s)  # noqa: E731
        elif family == "er" and len(parts) in (2, 3):
            n, p = int(parts[0]), float(parts[1])
            s = int(parts[2]) if len(parts) == 3 else seed
            maker = lambda: make_erdos_renyi(n, p, s)  # noqa: E731
        elif family == "file" and args:
            if check_only:
                if not Path(args).is_file():
                    raise InvalidParams(f"graph file not found: {args}")
                return None
            maker = lambda: read_graph(args)  # noqa: E731
        else:
            raise InvalidParams(f"unrecognised base graph spec {spec!r}")
    except ValueError as exc:
        if isinstance(exc, InvalidParams):
            raise
        raise InvalidParams(f"bad parameters in base graph spec {spec!r}") from None
    if check_only:
        return None
    return maker()
